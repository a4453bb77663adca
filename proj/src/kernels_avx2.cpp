// AVX2/FMA variants. This translation unit is the only one built with
// -mavx2 -mfma; nothing here may run before avx2_available() says so.
#include "hns/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>

namespace hns::kernels {
namespace {

void thomas_avx2(const Tridiag& t, double* x, std::size_t nc, std::size_t ld) {
    const int n = t.n;
    const std::size_t nv = nc & ~std::size_t(3);
    {
        const __m256d s = _mm256_set1_pd(t.inv[0]);
        std::size_t c = 0;
        for (; c < nv; c += 4) _mm256_storeu_pd(x + c, _mm256_mul_pd(_mm256_loadu_pd(x + c), s));
        for (; c < nc; ++c) x[c] *= t.inv[0];
    }
    for (int i = 1; i < n; ++i) {
        double* xi = x + i * ld;
        const double* xp = xi - ld;
        const __m256d na = _mm256_set1_pd(-t.sub[i]);
        const __m256d s = _mm256_set1_pd(t.inv[i]);
        std::size_t c = 0;
        for (; c < nv; c += 4) {
            __m256d v = _mm256_fmadd_pd(na, _mm256_loadu_pd(xp + c), _mm256_loadu_pd(xi + c));
            _mm256_storeu_pd(xi + c, _mm256_mul_pd(v, s));
        }
        for (; c < nc; ++c) xi[c] = (xi[c] - t.sub[i] * xp[c]) * t.inv[i];
    }
    for (int i = n - 2; i >= 0; --i) {
        double* xi = x + i * ld;
        const double* xn = xi + ld;
        const __m256d nu = _mm256_set1_pd(-t.upper[i]);
        std::size_t c = 0;
        for (; c < nv; c += 4)
            _mm256_storeu_pd(xi + c, _mm256_fmadd_pd(nu, _mm256_loadu_pd(xn + c), _mm256_loadu_pd(xi + c)));
        for (; c < nc; ++c) xi[c] -= t.upper[i] * xn[c];
    }
}

void cumtrapz_avx2(const double* in, double* out, std::size_t n, std::size_t nc,
                   std::size_t ld, double dy) {
    const double h = 0.5 * dy;
    const __m256d vh = _mm256_set1_pd(h);
    const std::size_t nv = nc & ~std::size_t(3);
    for (std::size_t c = 0; c < nc; ++c) out[c] = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double* a = in + (i - 1) * ld;
        const double* b = in + i * ld;
        const double* op = out + (i - 1) * ld;
        double* o = out + i * ld;
        std::size_t c = 0;
        for (; c < nv; c += 4) {
            __m256d s = _mm256_add_pd(_mm256_loadu_pd(a + c), _mm256_loadu_pd(b + c));
            _mm256_storeu_pd(o + c, _mm256_fmadd_pd(vh, s, _mm256_loadu_pd(op + c)));
        }
        for (; c < nc; ++c) o[c] = op[c] + h * (a[c] + b[c]);
    }
}

void d1_avx2(const double* in, double* out, std::size_t n, std::size_t nc,
             std::size_t ld, double dy) {
    const double s = 0.5 / dy;
    const __m256d vs = _mm256_set1_pd(s);
    const std::size_t nv = nc & ~std::size_t(3);
    const std::size_t l = (n - 1) * ld;
    for (std::size_t c = 0; c < nc; ++c) {
        out[c] = s * (-3.0 * in[c] + 4.0 * in[ld + c] - in[2 * ld + c]);
        out[l + c] = s * (3.0 * in[l + c] - 4.0 * in[l - ld + c] + in[l - 2 * ld + c]);
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double* m = in + (i - 1) * ld;
        const double* p = in + (i + 1) * ld;
        double* o = out + i * ld;
        std::size_t c = 0;
        for (; c < nv; c += 4)
            _mm256_storeu_pd(o + c, _mm256_mul_pd(vs, _mm256_sub_pd(_mm256_loadu_pd(p + c), _mm256_loadu_pd(m + c))));
        for (; c < nc; ++c) o[c] = s * (p[c] - m[c]);
    }
}

void d2_avx2(const double* in, double* out, std::size_t n, std::size_t nc,
             std::size_t ld, double dy) {
    const double s = 1.0 / (dy * dy);
    const __m256d vs = _mm256_set1_pd(s);
    const __m256d m2 = _mm256_set1_pd(-2.0);
    const std::size_t nv = nc & ~std::size_t(3);
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
        std::size_t c = 0;
        for (; c < nv; c += 4) {
            __m256d v = _mm256_add_pd(_mm256_loadu_pd(p + c), _mm256_loadu_pd(m + c));
            v = _mm256_fmadd_pd(m2, _mm256_loadu_pd(z + c), v);
            _mm256_storeu_pd(o + c, _mm256_mul_pd(vs, v));
        }
        for (; c < nc; ++c) o[c] = s * (p[c] - 2.0 * z[c] + m[c]);
    }
}

void mul_avx2(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) out[i] = a[i] * b[i];
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) y[i] += alpha * x[i];
}

double wsumsq_avx2(const double* w, const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xv = _mm256_loadu_pd(x + i);
        acc = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i), xv), xv, acc);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < n; ++i) s += w[i] * x[i] * x[i];
    return s;
}

const Table kAvx2{thomas_avx2, cumtrapz_avx2, d1_avx2, d2_avx2,
                  mul_avx2,    axpy_avx2,     wsumsq_avx2, "avx2"};

}  // namespace

const Table& avx2_table() { return kAvx2; }

}  // namespace hns::kernels

#else

namespace hns::kernels {
const Table& avx2_table() { return scalar_table(); }
}  // namespace hns::kernels

#endif
