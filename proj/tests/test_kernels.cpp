#include <random>

#include "doctest.h"
#include "hns/kernels.hpp"

using namespace hns::kernels;

namespace {

std::vector<double> rnd(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

double rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0, m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d = std::max(d, std::abs(a[i] - b[i]));
        m = std::max(m, std::abs(a[i]));
    }
    return m > 0 ? d / m : d;
}

}  // namespace

TEST_CASE("tridiagonal solve against a dense residual") {
    const int n = 40;
    auto sub = rnd(n, 1), sup = rnd(n, 2), diag = rnd(n, 3);
    for (auto& d : diag) d = 4.0 + d;
    auto t = factor_tridiag(sub, diag, sup);
    auto b = rnd(n, 4);
    auto x = b;
    scalar_table().thomas(t, x.data(), 1, 1);
    for (int i = 0; i < n; ++i) {
        double r = diag[i] * x[i];
        if (i > 0) r += sub[i] * x[i - 1];
        if (i + 1 < n) r += sup[i] * x[i + 1];
        CHECK(std::abs(r - b[i]) < 1e-13);
    }
}

TEST_CASE("kernel tables report their names") {
    CHECK(std::string(scalar_table().name) == "scalar");
    if (avx2_available()) CHECK(std::string(avx2_table().name) == "avx2");
}

TEST_CASE("AVX2 kernels agree with the scalar reference") {
    if (!avx2_available()) {
        MESSAGE("AVX2 not available on this host; equivalence not exercised");
        return;
    }
    const Table& s = scalar_table();
    const Table& v = avx2_table();
    for (std::size_t ncols : {1u, 2u, 3u, 4u, 5u, 8u, 13u, 22u}) {
        const std::size_t n = 37, ld = ncols + 3;
        auto in = rnd(n * ld, 10 + ncols);
        const double dy = 1.0 / (n - 1);
        for (auto op : {&Table::cumtrapz, &Table::d1, &Table::d2}) {
            std::vector<double> a(n * ld, 0.0), b(n * ld, 0.0);
            (s.*op)(in.data(), a.data(), n, ncols, ld, dy);
            (v.*op)(in.data(), b.data(), n, ncols, ld, dy);
            CHECK(rel_diff(a, b) < 1e-14);
        }
        std::vector<double> sub(n, -0.7), diag(n, 2.6), sup(n, -0.9);
        auto t = factor_tridiag(sub, diag, sup);
        auto a = in, b = in;
        s.thomas(t, a.data(), ncols, ld);
        v.thomas(t, b.data(), ncols, ld);
        CHECK(rel_diff(a, b) < 1e-14);
    }
    for (std::size_t n : {1u, 3u, 4u, 7u, 64u, 101u}) {
        auto x = rnd(n, 20 + n), y = rnd(n, 30 + n), w = rnd(n, 40 + n);
        std::vector<double> a(n), b(n);
        s.mul(x.data(), y.data(), a.data(), n);
        v.mul(x.data(), y.data(), b.data(), n);
        CHECK(rel_diff(a, b) == 0.0);
        auto ya = y, yb = y;
        s.axpy(0.37, x.data(), ya.data(), n);
        v.axpy(0.37, x.data(), yb.data(), n);
        CHECK(rel_diff(ya, yb) < 1e-15);
        const double ws = s.wsumsq(w.data(), x.data(), n), wv = v.wsumsq(w.data(), x.data(), n);
        CHECK(std::abs(ws - wv) <= 1e-14 * std::max(1.0, std::abs(ws)));
    }
}
