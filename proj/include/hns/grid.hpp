#pragma once
// Fourier in x on the 2pi-torus, uniform finite differences in y on [0,1].
//
// Only wavenumbers k = 0..cut are stored; the -k coefficients are implied by
// conjugate symmetry. Spectral storage is [iy][k] so that a y-operation acts
// on contiguous rows of 2*(cut+1) doubles, one column per (k, re/im) pair.
// Physical samples are row-major [iy][ix].

#include <complex>
#include <string_view>
#include <variant>
#include <vector>

namespace hns {

using cplx = std::complex<double>;

class Grid {
public:
    Grid() = default;
    Grid(int Nx, int Ny);

    int Nx = 0;
    int Ny = 0;
    double Lx = 0.0;
    int cut = 0;  // floor(Nx/3)
    double dy = 0.0;

    int nk() const { return cut + 1; }
    double y(int iy) const { return iy * dy; }
    double x(int ix) const { return ix * Lx / Nx; }
    // Trapezoid weights on [0,1].
    const std::vector<double>& weights() const { return w_; }
    bool operator==(const Grid& o) const { return Nx == o.Nx && Ny == o.Ny; }

private:
    std::vector<double> w_;
};

// Function of x only, coefficients k = 0..cut.
class ScalarX {
public:
    ScalarX() = default;
    explicit ScalarX(int cut) : c_(cut + 1, cplx{}) {}
    int cut() const { return static_cast<int>(c_.size()) - 1; }
    cplx& operator[](int k) { return c_[k]; }
    const cplx& operator[](int k) const { return c_[k]; }
    // Coefficient for any signed k, zero beyond the cut.
    cplx at(int k) const;
    std::vector<cplx>& data() { return c_; }
    const std::vector<cplx>& data() const { return c_; }
    std::vector<double> physical(int Nx) const;
    double max_abs_nonzero_k() const;

private:
    std::vector<cplx> c_;
};

class SpectralField {
public:
    SpectralField() = default;
    explicit SpectralField(const Grid& g);

    const Grid& grid() const { return g_; }
    cplx& operator()(int k, int iy) { return c_[static_cast<std::size_t>(iy) * g_.nk() + k]; }
    const cplx& operator()(int k, int iy) const {
        return c_[static_cast<std::size_t>(iy) * g_.nk() + k];
    }
    cplx at(int k, int iy) const;
    std::vector<cplx>& data() { return c_; }
    const std::vector<cplx>& data() const { return c_; }
    double* raw() { return reinterpret_cast<double*>(c_.data()); }
    const double* raw() const { return reinterpret_cast<const double*>(c_.data()); }
    std::size_t ld() const { return 2 * static_cast<std::size_t>(g_.nk()); }

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double s);
    SpectralField& operator*=(cplx s);
    double max_abs() const;

private:
    Grid g_;
    std::vector<cplx> c_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

// Physical <-> spectral. to_spectral drops |k| > cut.
SpectralField to_spectral(const Grid& g, const std::vector<double>& samples);
std::vector<double> from_spectral(const SpectralField& f);
// Physical samples on a finer x-grid (Nx_fine >= Nx, power of two), zero padded.
std::vector<double> from_spectral_padded(const SpectralField& f, int Nx_fine);

// Dealiased pointwise product: the result keeps |k| <= cut and is free of
// aliasing because both factors are already truncated there.
SpectralField multiply(const SpectralField& a, const SpectralField& b);
ScalarX multiply(const ScalarX& a, const ScalarX& b, int Nx);

SpectralField ddx(const SpectralField& f, int order);
ScalarX ddx(const ScalarX& f, int order);

// y-calculus
SpectralField d1(const SpectralField& f);
SpectralField d2(const SpectralField& f);
SpectralField cumint(const SpectralField& f);
ScalarX int01(const SpectralField& f);
ScalarX trace(const SpectralField& f, int iy);

using YResult = std::variant<SpectralField, ScalarX>;
// Tag dispatch: "d1", "d2", "cumint_from_0", "int_0_to_1", "trace(y)" where
// y must be a node of the grid. Unknown tags throw std::invalid_argument.
YResult y_calculus(const SpectralField& f, std::string_view op);

// Normalized-measure inner products.
double mean_square(const SpectralField& f);
double mean_square(const ScalarX& f);
// Mean over x of the trapezoid integral over y of f*g for real fields.
double inner(const SpectralField& f, const SpectralField& g);

// Field from a separable product a(x) b(y) where a is given by ScalarX.
SpectralField outer(const Grid& g, const ScalarX& a, const std::vector<double>& b);

}  // namespace hns
