#include "hns/gevrey.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hns {

void GevreyParams::validate() const {
    if (!(gamma >= 1.0)) throw std::invalid_argument("gevrey: gamma must be >= 1");
    if (!(tau0 > tau1 && tau1 > 0.0)) throw std::invalid_argument("gevrey: need tau0 > tau1 > 0");
    if (!(beta >= 1.0)) throw std::invalid_argument("gevrey: beta must be >= 1");
    if (Jmax < 8) throw std::invalid_argument("gevrey: Jmax must be >= 8");
}

double log_weight(int j, double gamma, double r, double tau) {
    if (j < 0) throw std::invalid_argument("log_weight: j < 0");
    if (!(tau > 0.0)) throw std::invalid_argument("log_weight: tau must be positive");
    return r * std::log(j + 1.0) + (j + 1.0) * std::log(tau) - gamma * std::lgamma(j + 1.0);
}

WeightTable weight_table(const GevreyParams& p, double tau) {
    WeightTable t;
    t.logM.resize(p.Jmax + 1);
    for (int j = 0; j <= p.Jmax; ++j) t.logM[j] = log_weight(j, p.gamma, p.r, tau);
    return t;
}

TauValue tau_schedule(double t, const GevreyParams& p) {
    if (t < 0.0) throw std::invalid_argument("tau_schedule: t < 0");
    const double tau = p.tau0 * std::exp(-p.beta * t);
    return {tau, tau < p.tau1};
}

NormResult gevrey_norm_from_modes(const std::vector<double>& q, const GevreyParams& p,
                                  double tau) {
    const auto wt = weight_table(p, tau);
    const int nk = static_cast<int>(q.size());
    // shell_j = 2 logM_j + log sum_k k^{2j} q_k ; all in log space.
    std::vector<double> shell(p.Jmax + 1, -std::numeric_limits<double>::infinity());
    std::vector<double> terms;
    terms.reserve(nk);
    for (int j = 0; j <= p.Jmax; ++j) {
        terms.clear();
        for (int k = 0; k < nk; ++k) {
            if (q[k] <= 0.0) continue;
            if (k == 0) {
                if (j == 0) terms.push_back(std::log(q[0]));
                continue;
            }
            terms.push_back(2.0 * j * std::log(static_cast<double>(k)) + std::log(q[k]));
        }
        if (terms.empty()) continue;
        const double m = *std::max_element(terms.begin(), terms.end());
        double s = 0.0;
        for (double t : terms) s += std::exp(t - m);
        shell[j] = 2.0 * wt.logM[j] + m + std::log(s);
    }
    const double m = *std::max_element(shell.begin(), shell.end());
    NormResult r;
    if (!std::isfinite(m)) return r;
    double s = 0.0;
    for (double v : shell) s += std::exp(v - m);
    const double log_total = m + std::log(s);
    r.norm = std::exp(0.5 * log_total);
    r.tail_ratio = std::exp(shell.back() - log_total);
    r.truncation_warning = r.tail_ratio > 1e-6;
    return r;
}

NormResult gevrey_norm(const SpectralField& f, const GevreyParams& p, double tau) {
    const Grid& g = f.grid();
    const auto& w = g.weights();
    std::vector<double> q(g.nk(), 0.0);
    for (int iy = 0; iy < g.Ny; ++iy)
        for (int k = 0; k <= g.cut; ++k) q[k] += w[iy] * std::norm(f(k, iy));
    for (int k = 1; k <= g.cut; ++k) q[k] *= 2.0;
    return gevrey_norm_from_modes(q, p, tau);
}

NormResult gevrey_norm(const ScalarX& f, const GevreyParams& p, double tau) {
    std::vector<double> q(f.cut() + 1);
    for (int k = 0; k <= f.cut(); ++k) q[k] = (k == 0 ? 1.0 : 2.0) * std::norm(f[k]);
    return gevrey_norm_from_modes(q, p, tau);
}

}  // namespace hns
