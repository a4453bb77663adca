#include <boost/multiprecision/cpp_bin_float.hpp>

#include "doctest.h"
#include "helpers.hpp"
#include "hns/gevrey.hpp"

using namespace hns;
using namespace testutil;
using big = boost::multiprecision::cpp_bin_float_50;

TEST_CASE("weight examples") {
    CHECK(log_weight(0, 9.0 / 8, 6, 0.7) == doctest::Approx(std::log(0.7)).epsilon(1e-15));
    CHECK(log_weight(3, 1.0, 0.0, 1.0) == doctest::Approx(std::log(1.0 / 6)).epsilon(1e-15));
    const big ex = 6 * log(big(51)) + 51 * log(big(0.5)) -
                   big(9) / 8 * boost::multiprecision::lgamma(big(51));
    const double v = log_weight(50, 9.0 / 8, 6, 0.5);
    CHECK(std::isfinite(v));
    CHECK(std::abs(v - static_cast<double>(ex)) < 1e-10 * std::abs(static_cast<double>(ex)));
    GevreyParams p;
    auto t = weight_table(p, 0.6);
    REQUIRE(t.logM.size() == static_cast<std::size_t>(p.Jmax + 1));
    CHECK(t.logM[0] == doctest::Approx(std::log(0.6)));
    for (double x : t.logM) CHECK(std::isfinite(x));
}

TEST_CASE("tau schedule") {
    GevreyParams p;
    p.tau0 = 1.0;
    p.beta = 1.0;
    p.tau1 = 0.4;
    CHECK(tau_schedule(0.0, p).tau == 1.0);
    CHECK(tau_schedule(std::log(2.0), p).tau == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_FALSE(tau_schedule(std::log(2.0), p).below_floor);
    CHECK(tau_schedule(1.0, p).below_floor);
    p.beta = 16;
    const double t = 0.03, h = 1e-5;
    const double fd = (tau_schedule(t + h, p).tau - tau_schedule(t - h, p).tau) / (2 * h);
    CHECK(std::abs(fd + p.beta * tau_schedule(t, p).tau) < 1e-8 * p.beta * tau_schedule(t, p).tau);
}

TEST_CASE("parameter validation") {
    GevreyParams p;
    CHECK_NOTHROW(p.validate());
    p.tau1 = 2.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.Jmax = 4;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.gamma = 0.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("norm oracles") {
    GevreyParams p;
    Grid g(16, 65);
    CHECK(gevrey_norm(SpectralField(g), p, 0.8).norm == 0.0);
    std::vector<double> gy(g.Ny);
    double n2 = 0;
    for (int i = 0; i < g.Ny; ++i) {
        gy[i] = std::cos(pi * g.y(i)) + 0.3;
        n2 += g.weights()[i] * gy[i] * gy[i];
    }
    for (auto& v : gy) v /= std::sqrt(n2);
    ScalarX a(g.cut);
    a[1] = cplx(0, -0.5);  // sin x
    auto f = outer(g, a, gy);
    big s = 0;
    for (int j = 0; j <= p.Jmax; ++j) {
        const big lm = p.r * log(big(j + 1)) + (j + 1) * log(big(0.8)) -
                       big(p.gamma) * boost::multiprecision::lgamma(big(j + 1));
        s += exp(2 * lm);
    }
    const double ex = static_cast<double>(sqrt(s / 2));
    CHECK(std::abs(gevrey_norm(f, p, 0.8).norm - ex) < 1e-12 * ex);

    // |k| = 4, r = 0, 200 terms
    GevreyParams q;
    q.r = 0;
    q.Jmax = 199;
    std::vector<double> modes(5, 0.0);
    modes[4] = 1.0;
    big s4 = 0;
    for (int j = 0; j < 200; ++j)
        s4 += pow(big(0.25), 2 * j + 2) * pow(big(4), 2 * j) /
              pow(boost::multiprecision::tgamma(big(j + 1)), big(9) / 4);
    const double ex4 = static_cast<double>(sqrt(s4));
    CHECK(std::abs(gevrey_norm_from_modes(modes, q, 0.25).norm - ex4) < 1e-8 * ex4);
}

TEST_CASE("ScalarX norm equals the field norm of an x-only field") {
    GevreyParams p;
    Grid g(32, 9);
    ScalarX a(g.cut);
    a[2] = cplx(0.2, 0.1);
    a[5] = cplx(-0.05, 0.3);
    std::vector<double> one(g.Ny, 1.0);
    CHECK(gevrey_norm(a, p, 0.7).norm ==
          doctest::Approx(gevrey_norm(outer(g, a, one), p, 0.7).norm).epsilon(1e-13));
}

TEST_CASE("monotonicity, scaling and derivative shift") {
    GevreyParams p;
    Grid g(32, 33);
    for (unsigned seed = 0; seed < 100; ++seed) {
        auto f = random_field(g, seed, 0.3);
        GevreyParams a = p, b = p;
        a.r = 2.0 + seed % 7;
        b.r = a.r + 0.5 + seed % 3;
        CHECK(gevrey_norm(f, b, 0.6).norm >= gevrey_norm(f, a, 0.6).norm);
        CHECK(gevrey_norm(f, a, 0.9).norm >= gevrey_norm(f, a, 0.6).norm);
    }
    auto f = random_field(g, 1);
    const double n1 = gevrey_norm(f, p, 0.7).norm;
    CHECK(gevrey_norm(-3.0 * f, p, 0.7).norm == doctest::Approx(3 * n1).epsilon(1e-13));

    // single mode k = 3: ||d_x^j (d_x f)|| = 3 ||d_x^{j+1} f|| shell by shell
    SpectralField m(g);
    for (int iy = 0; iy < g.Ny; ++iy) m(3, iy) = cplx(1.0 + g.y(iy), 0.5);
    const double e0 = mean_square(m);
    std::vector<double> qf(g.nk(), 0.0), qd(g.nk(), 0.0);
    qf[3] = e0;
    qd[3] = mean_square(ddx(m, 1));
    CHECK(qd[3] == doctest::Approx(9 * e0).epsilon(1e-14));
    CHECK(gevrey_norm(ddx(m, 1), p, 0.5).norm ==
          doctest::Approx(gevrey_norm_from_modes(qd, p, 0.5).norm).epsilon(1e-13));
    CHECK(gevrey_norm(ddx(m, 1), p, 0.5).norm ==
          doctest::Approx(3 * gevrey_norm_from_modes(qf, p, 0.5).norm).epsilon(1e-13));
}

TEST_CASE("truncation warning") {
    GevreyParams p;
    p.Jmax = 8;
    std::vector<double> q(11, 0.0);
    q[10] = 1.0;
    auto r = gevrey_norm_from_modes(q, p, 1.0);
    CHECK(r.truncation_warning);
    CHECK(r.tail_ratio > 1e-6);
    q.assign(11, 0.0);
    q[1] = 1.0;
    p.Jmax = 32;
    CHECK_FALSE(gevrey_norm_from_modes(q, p, 0.5).truncation_warning);
}
