#pragma once
// Half-line Robin heat problem
//     (d_t + lambda - d_y^2) w = 0 on y > 0,  (d_y + 2) w |_{y=0} = f(t),
//     w(t=0) = 0, w -> 0 as y -> infinity,
// solved either by marching in time or through its exact transfer function
// in temporal frequency, plus the velocity lifts and the two-wall
// decomposition of the vorticity.

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hns/gevrey.hpp"
#include "hns/grid.hpp"
#include "hns/kernels.hpp"
#include "hns/physics.hpp"

namespace hns {

class TruncationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ResolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct HalfLineGrid {
    double Ymax = 4.0;
    int Nyh = 1025;

    HalfLineGrid() = default;
    HalfLineGrid(double ymax, int nyh);
    double dy() const { return Ymax / (Nyh - 1); }
    double y(int i) const { return i * dy(); }
    // Same spacing as g, so that y and 1-y are nodes of both grids.
    static HalfLineGrid matching(const Grid& g, double ymax = 4.0);
};

// 1 / (2 - sqrt(beta (j+1) + i zeta)) * exp(-y sqrt(beta (j+1) + i zeta)).
cplx transfer_function(int j, double beta, double zeta, double y);

enum class FlatScheme { implicit_euler, crank_nicolson };

// One x-mode, samples at t_n = n dt for n = 0..nt-1, [n][iy].
struct FlatProfile {
    double dt = 0.0;
    int nt = 0;
    HalfLineGrid grid;
    std::vector<cplx> data;
    double causality_residual = 0.0;
    int pad_factor = 0;

    cplx& at(int n, int iy) { return data[static_cast<std::size_t>(n) * grid.Nyh + iy]; }
    const cplx& at(int n, int iy) const {
        return data[static_cast<std::size_t>(n) * grid.Nyh + iy];
    }
};

// Frequency-domain solution through transfer_function. datum[n] = f(n dt).
FlatProfile solve_flat_freq(std::span<const cplx> datum, double dt, double beta, int j,
                            const HalfLineGrid& grid, int pad_factor = 2);

// Time march of the damped problem with lambda = beta (j+1).
FlatProfile solve_flat_time(std::span<const cplx> datum, double dt, double beta, int j,
                            const HalfLineGrid& grid,
                            FlatScheme scheme = FlatScheme::implicit_euler);

// Implicit march for a fixed lambda on real column blocks [iy][col]; the last
// node carries the homogeneous Dirichlet value.
class RobinHeatMarch {
public:
    RobinHeatMarch(const HalfLineGrid& g, double lambda, double dt, FlatScheme scheme);
    // block: Nyh rows, ncols columns with leading dimension ld. f_new/f_old are
    // per-column Robin data at the new and old time levels.
    void step(double* block, std::size_t ncols, std::size_t ld, const double* f_new,
              const double* f_old) const;
    double dt() const { return dt_; }

private:
    HalfLineGrid g_;
    double lambda_, dt_;
    FlatScheme scheme_;
    kernels::Tridiag lu_;
};

// Per-x-mode profiles on the half-line grid, storage [iy][k].
struct HalfLineField {
    HalfLineGrid grid;
    int cut = 0;
    std::vector<cplx> c;

    HalfLineField() = default;
    HalfLineField(const HalfLineGrid& g, int cut_);
    cplx& operator()(int k, int iy) { return c[static_cast<std::size_t>(iy) * (cut + 1) + k]; }
    const cplx& operator()(int k, int iy) const {
        return c[static_cast<std::size_t>(iy) * (cut + 1) + k];
    }
    double max_abs() const;
};

struct FlatVelocities {
    HalfLineField u, v;
};

// u = -int_y^Ymax w, v = int_y^Ymax d_x u. Throws TruncationError when the
// profile has not decayed near Ymax (relative tolerance decay_tol).
FlatVelocities lift_velocities(const HalfLineField& w, double decay_tol = 1e-8);

// The lift carried along a simulation: solves
//     (d_t - d_y^2 - eps d_x^2) w = 0,  (d_y + 2) w|_0 = d_x h,  w(0) = 0
// for every x-mode with an integrating factor for eps k^2.
class LiftIntegrator {
public:
    LiftIntegrator(const HalfLineGrid& g, int cut, double epsilon, double dt, FlatScheme scheme);
    void reset();
    // Advance from t to t + dt using h at both levels.
    void step(const ScalarX& h_old, const ScalarX& h_new, double t_old);
    HalfLineField physical(double t) const;
    double dt() const { return march_.dt(); }
    void set_dt(double dt);

private:
    HalfLineGrid g_;
    int cut_;
    double eps_;
    FlatScheme scheme_;
    RobinHeatMarch march_;
    HalfLineField z_;
};

struct Decomposition {
    SpectralField omega_bl, u_bl, v_bl;
    SpectralField omega_in, u_in, v_in;
    // Traces of the single-wall lift at y = 1, used by the interior wall datum.
    ScalarX flat_at_1, dy_flat_at_1;
};

Decomposition assemble_and_decompose(const FlowState& s, const HalfLineField& lift);
Decomposition zero_lift_decomposition(const FlowState& s);

// Restrictions of half-line quantities to y in [0,1] on the matching grid.
SpectralField restrict_to_unit(const HalfLineField& w, const Grid& g);

// ---------------------------------------------------------------- scaling

enum class LemmaTag {
    omega,         // int ||w||^2,        r+gamma-3/4,  p = 3/2
    y_omega,       // int ||y w||^2,      r+gamma-5/4,  p = 5/2
    dy_omega,      // int ||d_y w||^2,    r+gamma-1/4,  p = 1/2
    y_dy_omega,    // int ||y d_y w||^2,  r+gamma-3/4,  p = 3/2
    omega_y1,      // int |w(1)|^2,       r+gamma-10,   p = 20
    dy_omega_y1,   // int |d_y w(1)|^2,   r+gamma-10,   p = 20
    u,             // int ||u||^2,        r+gamma-5/4,  p = 5/2
    y_u,           // int ||y u||^2,      r+gamma-7/4,  p = 7/2
    u_y12,         // int |u(1/2)|^2,     r+gamma-10,   p = 20
    v,             // int ||v||^2,        r+2gamma-7/4, p = 7/2
    v_y0,          // int |v(0)|^2,       r+2gamma-3/2, p = 3
    v_y1,          // int |v(1)|^2,       r+gamma-10,   p = 20
    sup_omega,     // sup ||w||^2,        r+gamma-1/4,  p = 1/2
};

const std::vector<LemmaTag>& all_lemma_tags();
const char* to_string(LemmaTag t);
LemmaTag parse_lemma_tag(const std::string& s);
double paper_exponent(LemmaTag t);

// h history: analytic in time, given per x-mode through a callback.
using HHistory = std::function<ScalarX(double t)>;

struct ScalingRow {
    double beta;
    LemmaTag tag;
    double lhs, rhs, ratio;
};

// Time-integrated squared traces of the weighted lift at y = 0 and y = 1.
struct WallTraces {
    double beta, near, far;
};

struct ScalingReport {
    std::vector<ScalingRow> rows;
    std::vector<WallTraces> traces;
    // Fitted slope of log(ratio) against log(beta), and of log(ratio beta^p).
    std::vector<std::pair<LemmaTag, double>> slope;
    std::vector<std::pair<LemmaTag, double>> compensated_slope;
    double slope_for(LemmaTag t) const;
};

struct ScalingOptions {
    double t_end = 0.5;
    int Jbl = 12;
    int steps = 4000;          // per beta, over the effective window
    double dy = 1.0 / 256.0;
    double Ymax = 4.0;
    int cut = 4;               // x-modes retained in h
};

ScalingReport verify_smoothing_lemma(const HHistory& h, const GevreyParams& params,
                                     const std::vector<double>& beta_list,
                                     const std::vector<LemmaTag>& tags,
                                     const ScalingOptions& opt = {});

}  // namespace hns
