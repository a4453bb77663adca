#pragma once
// IMEX time integration of the hydrostatic system, in primitive variables
// (with optional tangential viscosity eps d_x^2) or in vorticity form with
// the nonlocal Neumann datum.

#include <optional>
#include <string>
#include <vector>

#include "hns/boundary_layer.hpp"
#include "hns/gevrey.hpp"
#include "hns/kernels.hpp"
#include "hns/physics.hpp"

namespace hns {

enum class Scheme { implicit_euler, crank_nicolson };
enum class Form { primitive, vorticity };

Scheme parse_scheme(const std::string& s);
Form parse_form(const std::string& s);
const char* to_string(Scheme s);
const char* to_string(Form f);

struct SolverConfig {
    double epsilon = 1e-3;
    double dt = 1e-4;
    double T_end = 0.1;
    Scheme scheme = Scheme::crank_nicolson;
    int Nx = 32;
    int Ny = 257;
    Form form = Form::primitive;
    PressureClosure closure = PressureClosure::periodic;
    int cadence = 10;             // steps between snapshots
    double cfl = 0.5;
    double blowup = 1e8;          // max |omega| threshold
    int max_halvings = 20;

    void validate() const;
};

struct StepRecord {
    double t = 0.0;
    double dt = 0.0;
    double mean_residual = 0.0;   // max_{k != 0} |int_0^1 u_k dy|
    double wall_u = 0.0;          // max |u| on both walls
    double wall_v = 0.0;
    double max_omega = 0.0;
};

struct MonitorRecord {
    double t = 0.0;
    double tau = 0.0;
    bool tau_below_floor = false;
    double norm_omega = 0.0;       // ||omega||_{gamma,r,tau}
    double norm_dy_omega = 0.0;    // ||d_y omega||_{gamma,r,tau}
    double min_dy_omega = 0.0;
    double max_dy_omega = 0.0;
    double omega_dot_l2 = 0.0;
    double h_l2 = 0.0;
    bool truncation_warning = false;
};

struct Monitors {
    bool norms = true;
    bool lift = false;            // carry the boundary-layer lift along
    bool keep_every_step = false; // snapshot every accepted step
};

struct Trajectory {
    std::vector<FlowState> snapshots;
    std::vector<HalfLineField> lifts;        // aligned with snapshots when lift is on
    std::vector<StepRecord> steps;
    std::vector<MonitorRecord> monitors;     // one per snapshot
    std::vector<std::pair<double, ScalarX>> h_history;  // one per accepted step and t=0
    bool blew_up = false;
    std::string message;
};

// Multistep integrator; keeps the explicit history for AB2 and the implicit
// factorizations for the current dt.
class Stepper {
public:
    Stepper(const Grid& g, const SolverConfig& cfg);
    // One accepted step; may shrink dt to satisfy the advective CFL bound.
    FlowState step(const FlowState& s);
    double dt() const { return dt_; }
    void reset_history() { have_history_ = false; }

private:
    void refactor();
    FlowState step_primitive_impl(const FlowState& s);
    FlowState step_vorticity_impl(const FlowState& s);
    SpectralField explicit_primitive(const FlowState& s) const;
    SpectralField explicit_vorticity(const FlowState& s) const;
    void check_cfl(const FlowState& s);

    Grid g_;
    SolverConfig cfg_;
    double dt_;
    kernels::Tridiag dirichlet_;   // interior nodes 1..Ny-2
    kernels::Tridiag neumann_;     // all nodes, ghost-point walls
    std::vector<double> proj_g_;   // implicit response to a unit forcing, int = 1
    bool have_history_ = false;
    SpectralField F_prev_;
    ScalarX g_prev_;
};

// Single steps without history (CN uses an explicit Euler predictor for the
// explicit terms).
FlowState step_primitive(const FlowState& s, const SolverConfig& cfg);
FlowState step_vorticity(const FlowState& s, const SolverConfig& cfg);

// Vorticity-form reconstruction: u with u(0) = 0, u(1) = 0 and zero y-mean
// for k != 0; omega corrected consistently. Exposed for tests.
void reconstruct_velocity(SpectralField& omega, SpectralField& u);

Trajectory run(const SpectralField& u0, const SolverConfig& cfg, const GevreyParams& gp,
               const Monitors& mon = {});

}  // namespace hns
