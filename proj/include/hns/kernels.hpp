#pragma once
// Column-batched inner loops used by the y-calculus and the implicit solves.
// Every array is row-major [row][col] with leading dimension ld (doubles).
// A scalar reference and an AVX2/FMA variant exist for each kernel; the
// variant is chosen once at startup from CPUID.

#include <cstddef>
#include <string>
#include <vector>

namespace hns::kernels {

// LU factors of a fixed tridiagonal matrix, reused for many right-hand sides.
// Row i of the matrix is (sub[i], diag[i], sup[i]).
struct Tridiag {
    std::vector<double> sub;   // a_i, unused at i=0
    std::vector<double> inv;   // 1 / pivot_i
    std::vector<double> upper; // c_i / pivot_i
    int n = 0;
};

Tridiag factor_tridiag(const std::vector<double>& sub, const std::vector<double>& diag,
                       const std::vector<double>& sup);

struct Table {
    // x <- A^{-1} x for the n x ncols block starting at x.
    void (*thomas)(const Tridiag&, double* x, std::size_t ncols, std::size_t ld);
    // out[i] = int_0^{y_i} in, composite trapezoid.
    void (*cumtrapz)(const double* in, double* out, std::size_t n, std::size_t ncols,
                     std::size_t ld, double dy);
    // Second-order first derivative, one-sided at both ends.
    void (*d1)(const double* in, double* out, std::size_t n, std::size_t ncols,
               std::size_t ld, double dy);
    // Second-order second derivative, one-sided (4-point) at both ends.
    void (*d2)(const double* in, double* out, std::size_t n, std::size_t ncols,
               std::size_t ld, double dy);
    void (*mul)(const double* a, const double* b, double* out, std::size_t n);
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    // sum_i w[i] * x[i]^2
    double (*wsumsq)(const double* w, const double* x, std::size_t n);
    const char* name;
};

const Table& scalar_table();
const Table& avx2_table();
bool avx2_available();

// Active table. HNS_FORCE_SCALAR=1 in the environment pins the scalar path.
const Table& active();

}  // namespace hns::kernels
