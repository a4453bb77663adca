#include "hns/kernels.hpp"

#include <cstdlib>
#include <stdexcept>

namespace hns::kernels {

Tridiag factor_tridiag(const std::vector<double>& sub, const std::vector<double>& diag,
                       const std::vector<double>& sup) {
    const int n = static_cast<int>(diag.size());
    if (n < 1 || sub.size() != diag.size() || sup.size() != diag.size())
        throw std::invalid_argument("factor_tridiag: size mismatch");
    Tridiag t;
    t.n = n;
    t.sub = sub;
    t.inv.resize(n);
    t.upper.resize(n);
    double prev_upper = 0.0;
    for (int i = 0; i < n; ++i) {
        const double piv = diag[i] - (i > 0 ? sub[i] * prev_upper : 0.0);
        if (piv == 0.0) throw std::runtime_error("factor_tridiag: zero pivot");
        t.inv[i] = 1.0 / piv;
        t.upper[i] = (i + 1 < n) ? sup[i] / piv : 0.0;
        prev_upper = t.upper[i];
    }
    return t;
}

namespace {

void thomas_scalar(const Tridiag& t, double* x, std::size_t nc, std::size_t ld) {
    const int n = t.n;
    for (std::size_t c = 0; c < nc; ++c) x[c] *= t.inv[0];
    for (int i = 1; i < n; ++i) {
        double* xi = x + i * ld;
        const double* xp = xi - ld;
        const double a = t.sub[i], s = t.inv[i];
        for (std::size_t c = 0; c < nc; ++c) xi[c] = (xi[c] - a * xp[c]) * s;
    }
    for (int i = n - 2; i >= 0; --i) {
        double* xi = x + i * ld;
        const double* xn = xi + ld;
        const double u = t.upper[i];
        for (std::size_t c = 0; c < nc; ++c) xi[c] -= u * xn[c];
    }
}

void cumtrapz_scalar(const double* in, double* out, std::size_t n, std::size_t nc,
                     std::size_t ld, double dy) {
    const double h = 0.5 * dy;
    for (std::size_t c = 0; c < nc; ++c) out[c] = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double* a = in + (i - 1) * ld;
        const double* b = in + i * ld;
        const double* op = out + (i - 1) * ld;
        double* o = out + i * ld;
        for (std::size_t c = 0; c < nc; ++c) o[c] = op[c] + h * (a[c] + b[c]);
    }
}

void d1_scalar(const double* in, double* out, std::size_t n, std::size_t nc,
               std::size_t ld, double dy) {
    const double s = 0.5 / dy;
    for (std::size_t c = 0; c < nc; ++c) {
        out[c] = s * (-3.0 * in[c] + 4.0 * in[ld + c] - in[2 * ld + c]);
        const std::size_t l = (n - 1) * ld;
        out[l + c] = s * (3.0 * in[l + c] - 4.0 * in[l - ld + c] + in[l - 2 * ld + c]);
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double* m = in + (i - 1) * ld;
        const double* p = in + (i + 1) * ld;
        double* o = out + i * ld;
        for (std::size_t c = 0; c < nc; ++c) o[c] = s * (p[c] - m[c]);
    }
}

void d2_scalar(const double* in, double* out, std::size_t n, std::size_t nc,
               std::size_t ld, double dy) {
    const double s = 1.0 / (dy * dy);
    const std::size_t l = (n - 1) * ld;
    for (std::size_t c = 0; c < nc; ++c) {
        out[c] = s * (2.0 * in[c] - 5.0 * in[ld + c] + 4.0 * in[2 * ld + c] - in[3 * ld + c]);
        out[l + c] = s * (2.0 * in[l + c] - 5.0 * in[l - ld + c] + 4.0 * in[l - 2 * ld + c] -
                          in[l - 3 * ld + c]);
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double* m = in + (i - 1) * ld;
        const double* z = in + i * ld;
        const double* p = in + (i + 1) * ld;
        double* o = out + i * ld;
        for (std::size_t c = 0; c < nc; ++c) o[c] = s * (p[c] - 2.0 * z[c] + m[c]);
    }
}

void mul_scalar(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double wsumsq_scalar(const double* w, const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * x[i] * x[i];
    return s;
}

const Table kScalar{thomas_scalar, cumtrapz_scalar, d1_scalar, d2_scalar,
                    mul_scalar,    axpy_scalar,     wsumsq_scalar, "scalar"};

const Table& pick() {
    const char* env = std::getenv("HNS_FORCE_SCALAR");
    if (env && *env && *env != '0') return kScalar;
    if (avx2_available()) return avx2_table();
    return kScalar;
}

}  // namespace

const Table& scalar_table() { return kScalar; }

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Table& active() {
    static const Table& t = pick();
    return t;
}

}  // namespace hns::kernels
