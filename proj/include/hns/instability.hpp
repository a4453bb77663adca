#pragma once
// Linear analysis around shear flows U(y): the integral root criterion
// int_0^1 (U - c)^{-2} dy = 0, and single-wavenumber evolutions of the
// linearized vorticity equation.

#include <complex>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace hns {

using cplx = std::complex<double>;

class PoleProximityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ShearProfile {
    std::string name;
    std::vector<double> y, Us, dUs, d2Us;
    bool has_inflection = false;
    double dy() const { return y[1] - y[0]; }
    int n() const { return static_cast<int>(y.size()); }
};

ShearProfile make_profile(const std::string& name, std::function<double(double)> U,
                          std::function<double(double)> dU, std::function<double(double)> d2U,
                          int Ny);
ShearProfile profile_from_samples(const std::string& name, const std::vector<double>& Us);
// Named presets: zero, constant, linear, convex_quadratic, inflection_sine,
// tanh (parameter = steepness a in tanh(a (y - 1/2))).
ShearProfile preset_profile(const std::string& name, int Ny, double param = 6.0);
std::vector<std::string> preset_names();

cplx renardy_integral(const ShearProfile& p, cplx c);
cplx renardy_integral_derivative(const ShearProfile& p, cplx c);  // d/dc

struct SearchBox {
    double re0, re1, im0, im1;
};

struct RenardyRoot {
    cplx c;
    double residual;
};

// Winding number of the integral along the box boundary.
int renardy_winding(const ShearProfile& p, const SearchBox& b);
std::vector<RenardyRoot> renardy_roots(const ShearProfile& p, const SearchBox& b);

// ---------------------------------------------------------------- linearized dynamics

// Single-mode linearized operator with IMEX ARS(4,4,3) stepping: advection
// and the shear-curvature term explicit, viscous part (with its nonlocal
// Neumann datum) implicit.
class LinearizedMode {
public:
    LinearizedMode(const ShearProfile& p, int k, double eta, double dt);
    void step(std::vector<cplx>& w) const;
    // Removes components in the kernel of the viscous operator (steady modes
    // not generated by any admissible velocity).
    void project_admissible(std::vector<cplx>& w) const;
    double dt() const { return dt_; }
    std::vector<cplx> apply_explicit(const std::vector<cplx>& w) const;
    std::vector<cplx> apply_implicit(const std::vector<cplx>& w) const;

private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
    double dt_;
};

// One IMEX step of the mode-k perturbation.
std::vector<cplx> linearized_step(const std::vector<cplx>& w, const ShearProfile& p, int k,
                                  double eta, double dt);

struct GrowthReport {
    int k = 0;
    double eta = 0.0;
    double slope = 0.0;  // d log||w|| / dt
    double delta = 0.0;  // slope / k
    double fit_t0 = 0.0, fit_t1 = 0.0;
    double fit_r2 = 0.0;
    bool blew_up = false;
    unsigned long seed = 0;
};

struct ScanOptions {
    double horizon = 20.0;      // run length in units of k t
    double cfl = 0.1;           // dt = cfl / (k max|U|), capped
    double dt_max = 1e-3;
    unsigned long seed = 12345;
};

std::vector<GrowthReport> growth_scan(const ShearProfile& p, const std::vector<int>& k_list,
                                      double eta, const ScanOptions& opt = {});

// (max - min) / mean of the deltas.
double relative_spread(const std::vector<GrowthReport>& r);

// Exponent a in slope ~ k^a, from slopes above floor; 0 when fewer than two
// slopes exceed the floor (no growth to fit).
double growth_exponent(const std::vector<GrowthReport>& r, double floor = 1e-6);

std::vector<cplx> random_perturbation(const ShearProfile& p, unsigned long seed);

}  // namespace hns
