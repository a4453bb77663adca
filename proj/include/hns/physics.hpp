#pragma once
// Algebraic relations of the hydrostatic system: v from incompressibility,
// the closed pressure-gradient formula (which is also the Neumann datum for
// the vorticity), the lift datum h, and checks on initial data.

#include <stdexcept>
#include <string>

#include "hns/grid.hpp"

namespace hns {

// How the x-mean of the pressure gradient is fixed.
//  periodic:   the pressure is periodic, d_x p has zero x-mean (wall traces
//              of omega enter with their x-mean removed). This is the model
//              the rest of the library is specified against.
//  fixed_flux: the x-mean of d_x p is whatever keeps the channel flux
//              constant; wall traces enter without removing their mean.
//              Only this closure admits strictly convex compatible data,
//              see README.
enum class PressureClosure { periodic, fixed_flux };

PressureClosure parse_closure(const std::string& s);
const char* to_string(PressureClosure c);

class ConstraintError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FlowState {
    SpectralField u, v, omega;
    ScalarX px;
    double t = 0.0;
    double tau = 1.0;
};

// -d_x int_0^1 u^2 dy, dealiased.
ScalarX quadratic_term(const SpectralField& u);

SpectralField recover_v(const SpectralField& u, double tol = 1e-6);
ScalarX pressure_gradient(const FlowState& s, PressureClosure c = PressureClosure::periodic);
ScalarX vorticity_bc(const FlowState& s, PressureClosure c = PressureClosure::periodic);
ScalarX h_datum(const SpectralField& u);

// omega = d1 u, v = recover_v(u), px from the closure.
FlowState make_state(const SpectralField& u, double t, double tau,
                     PressureClosure c = PressureClosure::periodic);

struct CompatibilityReport {
    double mean_constraint_residual = 0.0;
    double dirichlet_residual = 0.0;
    double third_condition_residual = 0.0;
    double convexity_min = 0.0;
    double convexity_max = 0.0;
    bool compatible(double delta0, double tol = 1e-6) const {
        return mean_constraint_residual < tol && dirichlet_residual < tol &&
               third_condition_residual < tol && convexity_min >= delta0;
    }
};

CompatibilityReport check_compatibility(const SpectralField& u0,
                                        PressureClosure c = PressureClosure::periodic);

class InfeasibleData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct BuilderOptions {
    double delta0 = 0.5;     // floor for d_y^2 u0
    double ceiling = 0.0;    // <= 0 means 1/delta0
    double amplitude = 0.0;
    int k0 = 1;
    PressureClosure closure = PressureClosure::fixed_flux;
};

// u0 = G/2 (y^2 - y) + amplitude p(y) cos(k0 x) + corrections, with every
// constraint imposed through the discrete operators of the grid. Throws
// InfeasibleData when no such data exists for the requested parameters.
SpectralField build_convex_compatible_data(const Grid& g, const BuilderOptions& opt);

}  // namespace hns
