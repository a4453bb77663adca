#include "doctest.h"
#include "helpers.hpp"
#include "hns/instability.hpp"

using namespace hns;
using testutil::pi;

namespace {

int brute_winding(const ShearProfile& p, const SearchBox& b, int per_edge) {
    const cplx z[5] = {{b.re0, b.im0}, {b.re1, b.im0}, {b.re1, b.im1}, {b.re0, b.im1}, {b.re0, b.im0}};
    double total = 0.0;
    for (int e = 0; e < 4; ++e) {
        cplx prev = renardy_integral(p, z[e]);
        for (int s = 1; s <= per_edge; ++s) {
            const cplx cur = renardy_integral(p, z[e] + (z[e + 1] - z[e]) * (double(s) / per_edge));
            total += std::arg(cur / prev);
            prev = cur;
        }
    }
    return static_cast<int>(std::lround(total / (2 * pi)));
}

double norm2(const std::vector<cplx>& w, double h) {
    double s = 0;
    for (std::size_t i = 0; i < w.size(); ++i)
        s += (i == 0 || i + 1 == w.size() ? 0.5 : 1.0) * h * std::norm(w[i]);
    return std::sqrt(s);
}

// Decay rate of a given initial vorticity under U = 0, eta = 1.
double decay_rate(const std::function<double(double)>& w0, double T) {
    const auto p = preset_profile("zero", 513);
    std::vector<cplx> w(p.n());
    for (int i = 0; i < p.n(); ++i) w[i] = w0(p.y[i]);
    const double dt = 1e-4;
    LinearizedMode m(p, 1, 1.0, dt);
    const double n0 = norm2(w, p.dy());
    const int steps = static_cast<int>(std::lround(T / dt));
    for (int n = 0; n < steps; ++n) m.step(w);
    return -std::log(norm2(w, p.dy()) / n0) / T;
}

}  // namespace

TEST_CASE("presets") {
    for (const auto& n : preset_names()) {
        auto p = preset_profile(n, 65);
        CHECK(p.n() == 65);
        CHECK(p.dy() == doctest::Approx(1.0 / 64));
    }
    CHECK(preset_profile("tanh", 65).has_inflection);
    CHECK_FALSE(preset_profile("convex_quadratic", 65).has_inflection);
    CHECK_THROWS(preset_profile("nope", 65));
}

TEST_CASE("integral examples") {
    auto lin = preset_profile("linear", 257);
    CHECK(std::abs(renardy_integral(lin, 2.0) - 0.5) < 1e-12);
    CHECK(std::abs(renardy_integral(lin, cplx(0.5, 1.0)) - 1.0 / (cplx(0.5, -1.0) * cplx(-0.5, -1.0))) < 1e-12);
    auto c = preset_profile("constant", 129, 0.3);
    const cplx z(0.1, 0.7);
    CHECK(std::abs(renardy_integral(c, z) - 1.0 / ((0.3 - z) * (0.3 - z))) < 1e-13);
    // derivative against a centered difference
    auto t = preset_profile("tanh", 257);
    const cplx c0(0.2, 0.6), hh(1e-5, 0);
    const cplx fd = (renardy_integral(t, c0 + hh) - renardy_integral(t, c0 - hh)) / (2.0 * hh);
    CHECK(std::abs(renardy_integral_derivative(t, c0) - fd) < 1e-6 * std::abs(fd));
}

TEST_CASE("conjugate symmetry") {
    auto t = preset_profile("tanh", 257);
    for (cplx c : {cplx(0.3, 0.4), cplx(-1.0, 0.2), cplx(0.0, 1.5)}) {
        CHECK(std::abs(renardy_integral(t, std::conj(c)) - std::conj(renardy_integral(t, c))) < 1e-13);
    }
}

TEST_CASE("pole proximity") {
    auto lin = preset_profile("linear", 257);
    CHECK_THROWS_AS(renardy_integral(lin, 0.5), PoleProximityError);
    CHECK_THROWS_AS(renardy_integral(lin, cplx(0.5, 1e-4)), PoleProximityError);
    CHECK_THROWS_AS(renardy_winding(lin, SearchBox{-1, 2, 0.0, 1.0}), PoleProximityError);
    CHECK_NOTHROW(renardy_integral(lin, cplx(0.5, 0.1)));
}

TEST_CASE("monotone profiles have no roots") {
    const SearchBox box{-1.5, 2.5, 0.05, 2.0};
    for (const char* n : {"linear", "convex_quadratic"}) {
        auto p = preset_profile(n, 257);
        CHECK(renardy_winding(p, box) == 0);
        CHECK(renardy_roots(p, box).empty());
    }
    CHECK(renardy_roots(preset_profile("constant", 129, 0.3), SearchBox{-1, 1, 0.05, 1}).empty());
}

TEST_CASE("winding agrees with brute force") {
    const SearchBox box{-1.5, 1.5, 0.05, 2.0};
    for (const char* n : {"inflection_sine", "tanh"}) {
        auto p = preset_profile(n, 257);
        const int w = renardy_winding(p, box);
        CHECK(w == brute_winding(p, box, 3000));
        CHECK(static_cast<int>(renardy_roots(p, box).size()) == w);
    }
    auto roots = renardy_roots(preset_profile("tanh", 257), box);
    REQUIRE(roots.size() == 1);
    CHECK(std::abs(roots[0].c.real()) < 1e-8);
    CHECK(roots[0].c.imag() == doctest::Approx(0.534).epsilon(2e-3));
    CHECK(roots[0].residual < 1e-8);
}

TEST_CASE("heat limit decay rates") {
    // omega = cos 2 pi y, from u = sin(2 pi y) / (2 pi)
    CHECK(decay_rate([](double y) { return std::cos(2 * pi * y); }, 0.02) ==
          doctest::Approx(4 * pi * pi).epsilon(1e-3));
    // odd mode: sin(mu (y - 1/2)) with tan(mu/2) = mu/2
    double mu = 8.9868;
    for (int it = 0; it < 50; ++it) {
        const double f = std::tan(mu / 2) - mu / 2;
        const double df = 0.5 / (std::cos(mu / 2) * std::cos(mu / 2)) - 0.5;
        mu -= f / df;
    }
    CHECK(mu == doctest::Approx(8.98682).epsilon(1e-5));
    CHECK(decay_rate([mu](double y) { return std::sin(mu * (y - 0.5)); }, 0.02) ==
          doctest::Approx(mu * mu).epsilon(1e-3));
}

TEST_CASE("linearity and the zero perturbation") {
    auto p = preset_profile("tanh", 129);
    std::vector<cplx> z(p.n());
    CHECK(linearized_step(z, p, 4, 0.01, 1e-3) == z);
    auto a = random_perturbation(p, 1), b = random_perturbation(p, 2);
    CHECK(a != b);
    CHECK(random_perturbation(p, 1) == a);
    const cplx al(0.3, -1.2);
    std::vector<cplx> c(p.n());
    for (int i = 0; i < p.n(); ++i) c[i] = al * a[i] + b[i];
    for (double eta : {0.0, 0.01}) {
        auto sa = linearized_step(a, p, 4, eta, 1e-3), sb = linearized_step(b, p, 4, eta, 1e-3),
             sc = linearized_step(c, p, 4, eta, 1e-3);
        double err = 0;
        for (int i = 0; i < p.n(); ++i) err = std::max(err, std::abs(sc[i] - al * sa[i] - sb[i]));
        CHECK(err < 1e-13);
    }
}

TEST_CASE("growth scans") {
    ScanOptions opt;
    opt.horizon = 10;
    SUBCASE("no shear") {
        auto r = growth_scan(preset_profile("zero", 129), {4, 8, 16}, 0.0, opt);
        for (const auto& g : r) CHECK(std::abs(g.delta) < 1e-10);
        CHECK(growth_exponent(r) == 0.0);
    }
    SUBCASE("inflected tanh") {
        opt.horizon = 20;
        auto r = growth_scan(preset_profile("tanh", 257), {8, 16, 32}, 0.0, opt);
        for (const auto& g : r) {
            CHECK(g.delta == doctest::Approx(0.534).epsilon(0.02));
            CHECK(g.fit_r2 > 0.99);
        }
        CHECK(relative_spread(r) < 0.05);
        CHECK(growth_exponent(r) == doctest::Approx(1.0).epsilon(0.05));
    }
    SUBCASE("convex profile") {
        auto r = growth_scan(preset_profile("convex_quadratic", 257), {8, 16, 32}, 0.0, opt);
        for (const auto& g : r) CHECK_FALSE(g.blew_up);
        CHECK(growth_exponent(r) < 0.5);
    }
}

TEST_CASE("exponent and spread helpers") {
    std::vector<GrowthReport> r(3);
    const int ks[3] = {2, 4, 8};
    for (int i = 0; i < 3; ++i) {
        r[i].k = ks[i];
        r[i].slope = 0.5 * ks[i] * ks[i];
        r[i].delta = r[i].slope / ks[i];
    }
    CHECK(growth_exponent(r) == doctest::Approx(2.0));
    CHECK(relative_spread(r) == doctest::Approx((4.0 - 1.0) / (7.0 / 3)));
    r[0].slope = r[1].slope = 0.0;
    CHECK(growth_exponent(r) == 0.0);
}
