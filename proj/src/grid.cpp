#include "hns/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hns/kernels.hpp"

namespace hns {

Grid::Grid(int nx, int ny) : Nx(nx), Ny(ny), Lx(2.0 * std::numbers::pi) {
    if (nx < 8 || (nx & (nx - 1)) != 0)
        throw std::invalid_argument("Grid: Nx must be a power of two and >= 8");
    if (ny < 9 || ny % 2 == 0) throw std::invalid_argument("Grid: Ny must be odd and >= 9");
    cut = nx / 3;
    dy = 1.0 / (ny - 1);
    w_.assign(ny, dy);
    w_.front() = w_.back() = 0.5 * dy;
}

// ---------------------------------------------------------------- FFT plans

namespace {

struct FftBuf {
    double* r = nullptr;
    fftw_complex* c = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    int n = 0, howmany = 0;
    ~FftBuf() {
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        fftw_free(r);
        fftw_free(c);
    }
};

std::mutex g_plan_mutex;
std::map<std::pair<int, int>, std::unique_ptr<FftBuf>> g_plans;

// Plans and scratch are cached per (n, howmany). Callers hold the lock for
// the whole transform so the shared scratch is never raced.
FftBuf& plan_for(int n, int howmany) {
    auto& slot = g_plans[{n, howmany}];
    if (!slot) {
        auto b = std::make_unique<FftBuf>();
        b->n = n;
        b->howmany = howmany;
        const int nc = n / 2 + 1;
        b->r = fftw_alloc_real(static_cast<std::size_t>(n) * howmany);
        b->c = fftw_alloc_complex(static_cast<std::size_t>(nc) * howmany);
        int dims[1] = {n};
        b->fwd = fftw_plan_many_dft_r2c(1, dims, howmany, b->r, nullptr, 1, n, b->c, nullptr, 1,
                                        nc, FFTW_ESTIMATE);
        b->bwd = fftw_plan_many_dft_c2r(1, dims, howmany, b->c, nullptr, 1, nc, b->r, nullptr, 1,
                                        n, FFTW_ESTIMATE);
        slot = std::move(b);
    }
    return *slot;
}

// rows x nk coefficients -> rows x n samples
void synth(const cplx* coef, int nk, int rows, int n, double* out) {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    FftBuf& b = plan_for(n, rows);
    const int nc = n / 2 + 1;
    const int kk = std::min(nk, nc);
    for (int r = 0; r < rows; ++r) {
        fftw_complex* row = b.c + static_cast<std::size_t>(r) * nc;
        for (int k = 0; k < nc; ++k) {
            if (k < kk) {
                row[k][0] = coef[static_cast<std::size_t>(r) * nk + k].real();
                row[k][1] = coef[static_cast<std::size_t>(r) * nk + k].imag();
            } else {
                row[k][0] = row[k][1] = 0.0;
            }
        }
        row[0][1] = 0.0;
    }
    fftw_execute(b.bwd);
    std::copy(b.r, b.r + static_cast<std::size_t>(n) * rows, out);
}

void analyze(const double* in, int rows, int n, cplx* coef, int nk) {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    FftBuf& b = plan_for(n, rows);
    const int nc = n / 2 + 1;
    std::copy(in, in + static_cast<std::size_t>(n) * rows, b.r);
    fftw_execute(b.fwd);
    const double s = 1.0 / n;
    for (int r = 0; r < rows; ++r) {
        const fftw_complex* row = b.c + static_cast<std::size_t>(r) * nc;
        for (int k = 0; k < nk; ++k)
            coef[static_cast<std::size_t>(r) * nk + k] = cplx(row[k][0] * s, row[k][1] * s);
        coef[static_cast<std::size_t>(r) * nk].imag(0.0);
    }
}

}  // namespace

// ---------------------------------------------------------------- ScalarX

cplx ScalarX::at(int k) const {
    const int a = std::abs(k);
    if (a > cut()) return {};
    return k >= 0 ? c_[a] : std::conj(c_[a]);
}

std::vector<double> ScalarX::physical(int Nx) const {
    std::vector<double> out(Nx);
    synth(c_.data(), static_cast<int>(c_.size()), 1, Nx, out.data());
    return out;
}

double ScalarX::max_abs_nonzero_k() const {
    double m = 0.0;
    for (std::size_t k = 1; k < c_.size(); ++k) m = std::max(m, std::abs(c_[k]));
    return m;
}

// ---------------------------------------------------------------- SpectralField

SpectralField::SpectralField(const Grid& g)
    : g_(g), c_(static_cast<std::size_t>(g.Ny) * g.nk(), cplx{}) {}

cplx SpectralField::at(int k, int iy) const {
    const int a = std::abs(k);
    if (a > g_.cut) return {};
    return k >= 0 ? (*this)(a, iy) : std::conj((*this)(a, iy));
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    kernels::active().axpy(1.0, o.raw(), raw(), 2 * c_.size());
    return *this;
}
SpectralField& SpectralField::operator-=(const SpectralField& o) {
    kernels::active().axpy(-1.0, o.raw(), raw(), 2 * c_.size());
    return *this;
}
SpectralField& SpectralField::operator*=(double s) {
    for (auto& z : c_) z *= s;
    return *this;
}
SpectralField& SpectralField::operator*=(cplx s) {
    for (auto& z : c_) z *= s;
    return *this;
}
double SpectralField::max_abs() const {
    double m = 0.0;
    for (const auto& z : c_) m = std::max(m, std::abs(z));
    return m;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

SpectralField to_spectral(const Grid& g, const std::vector<double>& samples) {
    if (samples.size() != static_cast<std::size_t>(g.Nx) * g.Ny)
        throw std::invalid_argument("to_spectral: sample count does not match grid");
    SpectralField f(g);
    analyze(samples.data(), g.Ny, g.Nx, f.data().data(), g.nk());
    return f;
}

std::vector<double> from_spectral(const SpectralField& f) {
    const Grid& g = f.grid();
    std::vector<double> out(static_cast<std::size_t>(g.Nx) * g.Ny);
    synth(f.data().data(), g.nk(), g.Ny, g.Nx, out.data());
    return out;
}

std::vector<double> from_spectral_padded(const SpectralField& f, int Nx_fine) {
    const Grid& g = f.grid();
    if (Nx_fine < g.Nx || (Nx_fine & (Nx_fine - 1)) != 0)
        throw std::invalid_argument("from_spectral_padded: bad fine size");
    std::vector<double> out(static_cast<std::size_t>(Nx_fine) * g.Ny);
    synth(f.data().data(), g.nk(), g.Ny, Nx_fine, out.data());
    return out;
}

SpectralField multiply(const SpectralField& a, const SpectralField& b) {
    if (!(a.grid() == b.grid())) throw std::invalid_argument("multiply: grid mismatch");
    auto pa = from_spectral(a);
    auto pb = from_spectral(b);
    kernels::active().mul(pa.data(), pb.data(), pa.data(), pa.size());
    return to_spectral(a.grid(), pa);
}

ScalarX multiply(const ScalarX& a, const ScalarX& b, int Nx) {
    auto pa = a.physical(Nx);
    auto pb = b.physical(Nx);
    for (int i = 0; i < Nx; ++i) pa[i] *= pb[i];
    ScalarX out(a.cut());
    analyze(pa.data(), 1, Nx, out.data().data(), a.cut() + 1);
    return out;
}

namespace {
cplx ik_pow(int k, int order) {
    cplx m(1.0, 0.0);
    const cplx ik(0.0, static_cast<double>(k));
    for (int i = 0; i < order; ++i) m *= ik;
    return m;
}
}  // namespace

SpectralField ddx(const SpectralField& f, int order) {
    if (order < 0) throw std::invalid_argument("ddx: negative order");
    SpectralField out = f;
    const Grid& g = f.grid();
    for (int k = 0; k <= g.cut; ++k) {
        const cplx m = ik_pow(k, order);
        for (int iy = 0; iy < g.Ny; ++iy) out(k, iy) *= m;
    }
    return out;
}

ScalarX ddx(const ScalarX& f, int order) {
    if (order < 0) throw std::invalid_argument("ddx: negative order");
    ScalarX out = f;
    for (int k = 0; k <= f.cut(); ++k) out[k] *= ik_pow(k, order);
    return out;
}

SpectralField d1(const SpectralField& f) {
    SpectralField out(f.grid());
    const Grid& g = f.grid();
    kernels::active().d1(f.raw(), out.raw(), g.Ny, f.ld(), f.ld(), g.dy);
    return out;
}

SpectralField d2(const SpectralField& f) {
    SpectralField out(f.grid());
    const Grid& g = f.grid();
    kernels::active().d2(f.raw(), out.raw(), g.Ny, f.ld(), f.ld(), g.dy);
    return out;
}

SpectralField cumint(const SpectralField& f) {
    SpectralField out(f.grid());
    const Grid& g = f.grid();
    kernels::active().cumtrapz(f.raw(), out.raw(), g.Ny, f.ld(), f.ld(), g.dy);
    return out;
}

ScalarX int01(const SpectralField& f) {
    const Grid& g = f.grid();
    ScalarX out(g.cut);
    const auto& w = g.weights();
    for (int iy = 0; iy < g.Ny; ++iy)
        for (int k = 0; k <= g.cut; ++k) out[k] += w[iy] * f(k, iy);
    return out;
}

ScalarX trace(const SpectralField& f, int iy) {
    const Grid& g = f.grid();
    if (iy < 0 || iy >= g.Ny) throw std::out_of_range("trace: y index");
    ScalarX out(g.cut);
    for (int k = 0; k <= g.cut; ++k) out[k] = f(k, iy);
    return out;
}

YResult y_calculus(const SpectralField& f, std::string_view op) {
    if (op == "d1") return d1(f);
    if (op == "d2") return d2(f);
    if (op == "cumint_from_0") return cumint(f);
    if (op == "int_0_to_1") return int01(f);
    if (op.starts_with("trace(") && op.ends_with(")")) {
        const std::string arg(op.substr(6, op.size() - 7));
        std::size_t pos = 0;
        double ys = 0.0;
        try {
            ys = std::stod(arg, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("y_calculus: bad trace argument");
        }
        if (pos != arg.size()) throw std::invalid_argument("y_calculus: bad trace argument");
        const double s = ys / f.grid().dy;
        const long iy = std::lround(s);
        if (std::abs(s - iy) > 1e-9 || iy < 0 || iy >= f.grid().Ny)
            throw std::invalid_argument("y_calculus: trace height is not a grid node");
        return trace(f, static_cast<int>(iy));
    }
    throw std::invalid_argument("y_calculus: unknown op '" + std::string(op) + "'");
}

double mean_square(const SpectralField& f) {
    const Grid& g = f.grid();
    const auto& w = g.weights();
    double s = 0.0;
    for (int iy = 0; iy < g.Ny; ++iy) {
        double row = std::norm(f(0, iy));
        for (int k = 1; k <= g.cut; ++k) row += 2.0 * std::norm(f(k, iy));
        s += w[iy] * row;
    }
    return s;
}

double mean_square(const ScalarX& f) {
    double s = std::norm(f[0]);
    for (int k = 1; k <= f.cut(); ++k) s += 2.0 * std::norm(f[k]);
    return s;
}

double inner(const SpectralField& f, const SpectralField& h) {
    const Grid& g = f.grid();
    const auto& w = g.weights();
    double s = 0.0;
    for (int iy = 0; iy < g.Ny; ++iy) {
        double row = (f(0, iy) * std::conj(h(0, iy))).real();
        for (int k = 1; k <= g.cut; ++k) row += 2.0 * (f(k, iy) * std::conj(h(k, iy))).real();
        s += w[iy] * row;
    }
    return s;
}

SpectralField outer(const Grid& g, const ScalarX& a, const std::vector<double>& b) {
    if (static_cast<int>(b.size()) != g.Ny) throw std::invalid_argument("outer: profile size");
    SpectralField f(g);
    const int kk = std::min(g.cut, a.cut());
    for (int iy = 0; iy < g.Ny; ++iy)
        for (int k = 0; k <= kk; ++k) f(k, iy) = a[k] * b[iy];
    return f;
}

}  // namespace hns
