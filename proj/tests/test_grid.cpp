#include "doctest.h"
#include "helpers.hpp"

using namespace hns;
using namespace testutil;

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(Grid(12, 33), std::invalid_argument);
    CHECK_THROWS_AS(Grid(4, 33), std::invalid_argument);
    CHECK_THROWS_AS(Grid(16, 32), std::invalid_argument);
    CHECK_THROWS_AS(Grid(16, 7), std::invalid_argument);
    Grid g(16, 33);
    CHECK(g.cut == 5);
    CHECK(g.dy == doctest::Approx(1.0 / 32));
}

TEST_CASE("to_spectral basis cases") {
    Grid g(16, 9);
    auto one = field(g, [](double, double) { return 1.0; });
    for (int iy = 0; iy < g.Ny; ++iy) {
        CHECK(std::abs(one(0, iy) - 1.0) < 1e-15);
        for (int k = 1; k <= g.cut; ++k) CHECK(std::abs(one(k, iy)) < 1e-15);
    }
    auto s = field(g, [](double x, double) { return std::sin(x); });
    CHECK(std::abs(s(1, 3) - cplx(0, -0.5)) < 1e-15);
    CHECK(std::abs(s.at(-1, 3) - cplx(0, 0.5)) < 1e-15);
    CHECK(std::abs(s(2, 3)) < 1e-15);
}

TEST_CASE("round trip of band-limited fields") {
    Grid g(32, 65);
    auto f = random_field(g, 3);
    auto back = to_spectral(g, from_spectral(f));
    double err = 0.0;
    for (std::size_t i = 0; i < f.data().size(); ++i) err = std::max(err, std::abs(f.data()[i] - back.data()[i]));
    CHECK(err < 1e-12);
    // modes beyond the cut are dropped
    auto hi = field(g, [](double x, double) { return std::cos(15 * x); });
    CHECK(hi.max_abs() < 1e-14);
}

TEST_CASE("ddx") {
    Grid g(16, 9);
    auto c = field(g, [](double, double y) { return 1.0 + y; });
    CHECK(ddx(c, 1).max_abs() < 1e-15);
    auto s = field(g, [](double x, double) { return std::sin(x); });
    auto cs = field(g, [](double x, double) { return std::cos(x); });
    CHECK(max_diff(from_spectral(ddx(s, 1)), from_spectral(cs)) < 1e-14);
    SpectralField e(g);
    e(2, 4) = cplx(0.3, -0.2);
    auto de = ddx(e, 1);
    CHECK(std::abs(de(2, 4) - cplx(0, 2) * cplx(0.3, -0.2)) < 1e-15);
}

TEST_CASE("y calculus examples") {
    Grid g(8, 65);
    auto one = field(g, [](double, double) { return 1.0; });
    auto ci = std::get<SpectralField>(y_calculus(one, "cumint_from_0"));
    for (int iy = 0; iy < g.Ny; ++iy) CHECK(std::abs(ci(0, iy) - g.y(iy)) < 1e-14);
    auto sq = field(g, [](double, double y) { return y * y; });
    auto d = std::get<SpectralField>(y_calculus(sq, "d1"));
    for (int iy = 0; iy < g.Ny; ++iy) CHECK(std::abs(d(0, iy) - 2 * g.y(iy)) < 1e-10);
    auto dd = std::get<SpectralField>(y_calculus(sq, "d2"));
    for (int iy = 0; iy < g.Ny; ++iy) CHECK(std::abs(dd(0, iy) - 2.0) < 1e-9);
    auto anti = field(g, [](double, double y) { return y * (1 - y) * (1 - 2 * y); });
    auto I = std::get<ScalarX>(y_calculus(anti, "int_0_to_1"));
    CHECK(std::abs(I[0]) < 1e-15);
    auto tr = std::get<ScalarX>(y_calculus(sq, "trace(0.5)"));
    CHECK(std::abs(tr[0] - 0.25) < 1e-15);
    CHECK_THROWS_AS(y_calculus(sq, "trace(0.3)"), std::invalid_argument);
    CHECK_THROWS_AS(y_calculus(sq, "d3"), std::invalid_argument);
}

TEST_CASE("Parseval") {
    Grid g(32, 33);
    auto f = random_field(g, 11);
    const auto p = from_spectral(f);
    double phys = 0.0;
    for (int iy = 0; iy < g.Ny; ++iy) {
        double row = 0.0;
        for (int ix = 0; ix < g.Nx; ++ix) row += p[iy * g.Nx + ix] * p[iy * g.Nx + ix];
        phys += g.weights()[iy] * row / g.Nx;
    }
    CHECK(std::abs(mean_square(f) - phys) < 1e-12 * phys);
    CHECK(std::abs(inner(f, f) - phys) < 1e-12 * phys);
}

TEST_CASE("ddx commutes with d1; cumint then d1 recovers f") {
    Grid g(32, 257);
    auto f = random_field(g, 5);
    auto a = ddx(d1(f), 1), b = d1(ddx(f, 1));
    double err = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) err = std::max(err, std::abs(a.data()[i] - b.data()[i]));
    CHECK(err < 1e-11);
    // second order: the centered difference of the trapezoid sum
    auto e2 = [](int Ny) {
        Grid gg(32, Ny);
        auto ff = random_field(gg, 5);
        auto r = d1(cumint(ff));
        double e = 0.0;
        for (int iy = 1; iy < gg.Ny - 1; ++iy)
            for (int k = 0; k <= gg.cut; ++k) e = std::max(e, std::abs(r(k, iy) - ff(k, iy)));
        return e;
    };
    const double c1 = e2(129), c2 = e2(257);
    CHECK(c2 < 1e-3);
    CHECK(c1 / c2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("dealiased product matches the truncated exact product") {
    Grid g(32, 9);
    auto a = field(g, [](double x, double y) { return std::cos(3 * x) * y + 1.0; });
    auto b = field(g, [](double x, double) { return std::sin(4 * x); });
    auto p = multiply(a, b);
    // cos3x sin4x = (sin7x + sin x)/2, both within the cut (10)
    auto ex = field(g, [](double x, double y) {
        return 0.5 * (std::sin(7 * x) + std::sin(x)) * y + std::sin(4 * x);
    });
    CHECK(max_diff(from_spectral(p), from_spectral(ex)) < 1e-14);
    // conjugate symmetry of real samples: k = 0 stays real
    for (int iy = 0; iy < g.Ny; ++iy) CHECK(std::abs(p(0, iy).imag()) < 1e-15);
}

TEST_CASE("outer and padded synthesis") {
    Grid g(16, 9);
    ScalarX a(g.cut);
    a[1] = cplx(0.5, 0.0);  // cos x
    std::vector<double> prof(g.Ny);
    for (int i = 0; i < g.Ny; ++i) prof[i] = g.y(i);
    auto f = outer(g, a, prof);
    auto ex = field(g, [](double x, double y) { return std::cos(x) * y; });
    CHECK(max_diff(from_spectral(f), from_spectral(ex)) < 1e-15);
    auto fine = from_spectral_padded(f, 64);
    CHECK(std::abs(fine[8 * 64 + 16] - std::cos(2 * pi * 16 / 64)) < 1e-14);
}
