#pragma once
// Quantities evaluated along trajectories: the weighted hydrostatic energy
// of the interior vorticity and its balance, omega_dot, assumption and
// convexity monitors.

#include <array>
#include <span>
#include <stdexcept>
#include <vector>

#include "hns/boundary_layer.hpp"
#include "hns/gevrey.hpp"
#include "hns/physics.hpp"
#include "hns/timestepper.hpp"

namespace hns {

class ConvexityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AssumptionBounds {
    double M = 10.0;
    double delta0 = 0.25;
    void validate() const;
};

// 1/2 mean_x int_0^1 (omega_j^in)^2 / d_y omega, omega_j^in = M_j d_x^j omega^in.
double hydrostatic_energy(const Decomposition& d, const FlowState& s, const GevreyParams& p,
                          int j);

struct EnergyBudget {
    int j = 0;
    double t = 0.0;
    double lhs_rate = 0.0;
    double damping = 0.0;
    double dissipation = 0.0;
    std::array<double, 9> T{};
    double residual = 0.0;
    double max_term = 0.0;
    double relative() const { return max_term > 0.0 ? std::abs(residual) / max_term : 0.0; }
};

// window and decomps hold three consecutive snapshots (n-1, n, n+1) at equal
// spacing; the budget is evaluated at the middle one.
EnergyBudget energy_budget(std::span<const FlowState> window, std::span<const Decomposition> decomps,
                           const GevreyParams& p, int j,
                           PressureClosure c = PressureClosure::periodic);

struct TrickResult {
    double integral = 0.0;   // mean_x int v_j^in omega_j^in, compatible quadrature
    double remainder = 0.0;  // -mean_x (int_0^1 d_x u_j^bl) u_j^bl(x,1)
};
TrickResult hydrostatic_trick(const Decomposition& d, const GevreyParams& p, double tau, int j);

SpectralField omega_dot(const FlowState& s);

struct AssumptionReport {
    double gevrey_sum = 0.0;      // ||omega||_{3r/4} + ||d_y omega||_{r/2}
    double norm_omega_3r4 = 0.0;
    double norm_dy_omega_r2 = 0.0;
    double min_dy_omega = 0.0;
    double max_dy_omega = 0.0;
    double mixed_norm = 0.0;      // max_x ||d_y^2 omega||_{L^2_y}
    bool a1 = false, a2 = false, a3 = false;
    double margin1 = 0.0, margin2_low = 0.0, margin2_high = 0.0, margin3 = 0.0;
    bool all() const { return a1 && a2 && a3; }
};

AssumptionReport assumption_monitor(const FlowState& s, const Decomposition& d,
                                    const GevreyParams& p, const AssumptionBounds& b);

struct ConvexityPoint {
    double t = 0.0;
    double min_dy_omega = 0.0;
    double max_dy_omega = 0.0;
    double wall_residual = 0.0;   // |d_y omega at the walls - prescribed datum|
};

std::vector<ConvexityPoint> convexity_monitor(const Trajectory& tr,
                                              PressureClosure c = PressureClosure::periodic);

}  // namespace hns
