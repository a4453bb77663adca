#pragma once
// Weighted Gevrey norms: M_j = (j+1)^r tau^{j+1} / (j!)^gamma, the radius
// schedule tau(t) = tau0 exp(-beta t), and sum_j M_j^2 ||d_x^j f||^2.
// All weights are handled as logarithms.

#include <vector>

#include "hns/grid.hpp"

namespace hns {

struct GevreyParams {
    double gamma = 9.0 / 8.0;
    double r = 6.0;
    double tau0 = 1.0;
    double tau1 = 0.5;
    double beta = 16.0;
    int Jmax = 32;

    void validate() const;  // throws std::invalid_argument
};

double log_weight(int j, double gamma, double r, double tau);
inline double weight_Mj(int j, const GevreyParams& p, double tau) {
    return log_weight(j, p.gamma, p.r, tau);
}

struct WeightTable {
    std::vector<double> logM;  // j = 0..Jmax
};
WeightTable weight_table(const GevreyParams& p, double tau);

struct TauValue {
    double tau;
    bool below_floor;  // tau < tau1; reported, never clamped
};
TauValue tau_schedule(double t, const GevreyParams& p);

struct NormResult {
    double norm = 0.0;
    double tail_ratio = 0.0;  // last j-shell over total (squared quantities)
    bool truncation_warning = false;
};

// Norm of a field (trapezoid L2 in y, normalized mean in x) or an x-function.
NormResult gevrey_norm(const SpectralField& f, const GevreyParams& p, double tau);
NormResult gevrey_norm(const ScalarX& f, const GevreyParams& p, double tau);

// Same sum from precomputed per-mode energies q_k = mean-square contribution
// of wavenumber |k| (both signs already folded in for k > 0).
NormResult gevrey_norm_from_modes(const std::vector<double>& q, const GevreyParams& p,
                                  double tau);

}  // namespace hns
