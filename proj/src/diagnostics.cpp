#include "hns/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace hns {

void AssumptionBounds::validate() const {
    if (!(M >= 1.0)) throw std::invalid_argument("bounds: M must be >= 1");
    if (!(delta0 > 0.0 && delta0 <= 1.0)) throw std::invalid_argument("bounds: delta0 must lie in (0, 1]");
}

namespace {


SpectralField weighted(const SpectralField& f, const GevreyParams& p, double tau, int j) {
    SpectralField out = ddx(f, j);
    out *= std::exp(log_weight(j, p.gamma, p.r, tau));
    return out;
}

ScalarX weighted(const ScalarX& f, const GevreyParams& p, double tau, int j) {
    ScalarX out = ddx(f, j);
    const double m = std::exp(log_weight(j, p.gamma, p.r, tau));
    for (auto& z : out.data()) z *= m;
    return out;
}

// Mean over x, trapezoid in y, of a physical [iy][ix] array.
double quad(const Grid& g, const std::vector<double>& f) {
    const auto& w = g.weights();
    double s = 0.0;
    for (int iy = 0; iy < g.Ny; ++iy) {
        double row = 0.0;
        const double* r = f.data() + static_cast<std::size_t>(iy) * g.Nx;
        for (int ix = 0; ix < g.Nx; ++ix) row += r[ix];
        s += w[iy] * row;
    }
    return s / g.Nx;
}

std::vector<double> checked_weight(const FlowState& s) {
    auto W = from_spectral(d1(s.omega));
    const double mn = *std::min_element(W.begin(), W.end());
    if (!(mn > 0.0))
        throw ConvexityError("d_y omega is not positive (min " + std::to_string(mn) +
                             "); the weight 1/d_y omega is unusable");
    return W;
}

double binom(int n, int k) { return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)); }

}  // namespace

double hydrostatic_energy(const Decomposition& d, const FlowState& s, const GevreyParams& p, int j) {
    const Grid& g = s.u.grid();
    const auto W = checked_weight(s);
    auto A = from_spectral(weighted(d.omega_in, p, s.tau, j));
    for (std::size_t i = 0; i < A.size(); ++i) A[i] = A[i] * A[i] / W[i];
    return 0.5 * quad(g, A);
}

EnergyBudget energy_budget(std::span<const FlowState> win, std::span<const Decomposition> dec,
                           const GevreyParams& p, int j, PressureClosure c) {
    if (win.size() != 3 || dec.size() != 3)
        throw std::invalid_argument("energy_budget: need three consecutive snapshots");
    const FlowState& s = win[1];
    const Decomposition& d = dec[1];
    const Grid& g = s.u.grid();
    const double tau = s.tau;
    const double dtc = win[2].t - win[0].t;
    if (!(dtc > 0.0)) throw std::invalid_argument("energy_budget: snapshots not increasing");
    const int N = g.Ny;
    const std::size_t n = static_cast<std::size_t>(g.Nx) * N;

    EnergyBudget b;
    b.j = j;
    b.t = s.t;
    b.lhs_rate = (hydrostatic_energy(dec[2], win[2], p, j) - hydrostatic_energy(dec[0], win[0], p, j)) / dtc;

    const auto W = checked_weight(s);
    const auto Wy = from_spectral(d2(s.omega));
    const auto Wx = from_spectral(ddx(d1(s.omega), 1));
    const auto Wp = from_spectral(d1(win[2].omega));
    const auto Wm = from_spectral(d1(win[0].omega));
    const auto U = from_spectral(s.u);
    const auto V = from_spectral(s.v);

    const SpectralField Aj = weighted(d.omega_in, p, tau, j);
    const auto A = from_spectral(Aj);
    const auto Ay = from_spectral(d1(Aj));
    const SpectralField Bj = weighted(d.omega_bl, p, tau, j);
    const auto Bx = from_spectral(ddx(Bj, 1));
    const auto By = from_spectral(d1(Bj));
    const auto Vbl = from_spectral(weighted(d.v_bl, p, tau, j));

    double E2 = 0.0, diss = 0.0, T3 = 0.0, T4 = 0.0, T5 = 0.0, T6 = 0.0, T7 = 0.0;
    {
        std::vector<double> f0(n), f1(n), f3(n), f4(n), f5(n), f6(n), f7(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double iw = 1.0 / W[i];
            const double Wt = (Wp[i] - Wm[i]) / dtc;
            f0[i] = A[i] * A[i] * iw;
            f1[i] = Ay[i] * Ay[i] * iw;
            f3[i] = Ay[i] * A[i] * Wy[i] * iw * iw;
            f4[i] = 0.5 * A[i] * A[i] * (Wt + U[i] * Wx[i] + V[i] * Wy[i]) * iw * iw;
            f5[i] = U[i] * Bx[i] * A[i] * iw;
            f6[i] = V[i] * By[i] * A[i] * iw;
            f7[i] = Vbl[i] * A[i];
        }
        E2 = quad(g, f0);
        diss = quad(g, f1);
        T3 = quad(g, f3);
        T4 = quad(g, f4);
        T5 = quad(g, f5);
        T6 = quad(g, f6);
        T7 = quad(g, f7);
    }
    b.damping = p.beta * (j + 1.0) * E2;
    b.dissipation = diss;

    // T1: wall datum of the interior problem.
    double T1 = 0.0;
    {
        ScalarX D(g.cut);
        for (int k = 0; k <= g.cut; ++k)
            D[k] = d.omega_in(k, N - 1) - d.omega_in(k, 0) + 2.0 * d.flat_at_1[k] - d.dy_flat_at_1[k];
        if (c == PressureClosure::periodic) D[0] = 0.0;
        D = weighted(D, p, tau, j);
        const auto Dp = D.physical(g.Nx);
        const std::size_t top = static_cast<std::size_t>(N - 1) * g.Nx;
        double s1 = 0.0;
        for (int ix = 0; ix < g.Nx; ++ix)
            s1 += Dp[ix] * (A[top + ix] / W[top + ix] - A[ix] / W[ix]);
        T1 = s1 / g.Nx;
    }
    // T2: boundary remainder of the hydrostatic trick.
    const double T2 = -hydrostatic_trick(d, p, tau, j).remainder;

    // T8, T9: Leibniz commutators on the full fields.
    double T8 = 0.0, T9 = 0.0;
    const double lMj = log_weight(j, p.gamma, p.r, tau);
    for (int k = 1; k <= j; ++k) {
        const double coef = binom(j, k) * std::exp(lMj - log_weight(k, p.gamma, p.r, tau) -
                                                   log_weight(j - k + 1, p.gamma, p.r, tau));
        const auto uk = from_spectral(weighted(s.u, p, tau, k));
        const auto wk = from_spectral(weighted(s.omega, p, tau, j - k + 1));
        std::vector<double> f(n);
        for (std::size_t i = 0; i < n; ++i) f[i] = uk[i] * wk[i] * A[i] / W[i];
        T8 += coef * quad(g, f);
    }
    for (int k = 1; k <= j - 1; ++k) {
        const double coef = binom(j, k) * std::exp(lMj - log_weight(k, p.gamma, p.r, tau) -
                                                   log_weight(j - k, p.gamma, p.r, tau));
        const auto vk = from_spectral(weighted(s.v, p, tau, k));
        const auto wk = from_spectral(d1(weighted(s.omega, p, tau, j - k)));
        std::vector<double> f(n);
        for (std::size_t i = 0; i < n; ++i) f[i] = vk[i] * wk[i] * A[i] / W[i];
        T9 += coef * quad(g, f);
    }
    b.T = {T1, T2, T3, T4, T5, T6, T7, T8, T9};
    const double rhs = T1 + T2 + T3 - T4 - T5 - T6 - T7 - T8 - T9;
    b.residual = b.lhs_rate + b.damping + b.dissipation - rhs;
    b.max_term = std::max({std::abs(b.lhs_rate), b.damping, b.dissipation});
    for (double t : b.T) b.max_term = std::max(b.max_term, std::abs(t));
    return b;
}

TrickResult hydrostatic_trick(const Decomposition& d, const GevreyParams& p, double tau, int j) {
    const Grid& g = d.u_in.grid();
    const int N = g.Ny;
    const double h = g.dy;
    const SpectralField uin = weighted(d.u_in, p, tau, j);
    // v = -int_0^y d_x u (trapezoid), paired with omega = d_y u at cell
    // midpoints; with v(0) = 0 and u(1) = 0 this pairing is summation-by-parts
    // exact, so the cancellation holds to round-off.
    const SpectralField V = [&] {
        SpectralField v = cumint(ddx(uin, 1));
        v *= -1.0;
        return v;
    }();
    TrickResult r;
    double s = 0.0;
    for (int k = 0; k <= g.cut; ++k) {
        cplx acc{};
        for (int i = 0; i + 1 < N; ++i) {
            const cplx vm = 0.5 * (V(k, i) + V(k, i + 1));
            const cplx om = (uin(k, i + 1) - uin(k, i)) / h;
            acc += h * vm * std::conj(om);
        }
        s += (k == 0 ? 1.0 : 2.0) * acc.real();
    }
    r.integral = s;
    const SpectralField ubl = weighted(d.u_bl, p, tau, j);
    const ScalarX m = int01(ddx(ubl, 1));
    const ScalarX top = trace(ubl, N - 1);
    double rem = (m[0] * std::conj(top[0])).real();
    for (int k = 1; k <= g.cut; ++k) rem += 2.0 * (m[k] * std::conj(top[k])).real();
    r.remainder = -rem;
    return r;
}

SpectralField omega_dot(const FlowState& s) {
    SpectralField r = d2(s.omega);
    r -= multiply(s.u, ddx(s.omega, 1));
    r -= multiply(s.v, d1(s.omega));
    return r;
}

AssumptionReport assumption_monitor(const FlowState& s, const Decomposition& d,
                                    const GevreyParams& p, const AssumptionBounds& b) {
    (void)d;
    const Grid& g = s.u.grid();
    AssumptionReport r;
    GevreyParams p34 = p, p12 = p;
    p34.r = 0.75 * p.r;
    p12.r = 0.5 * p.r;
    const SpectralField W = d1(s.omega);
    r.norm_omega_3r4 = gevrey_norm(s.omega, p34, s.tau).norm;
    r.norm_dy_omega_r2 = gevrey_norm(W, p12, s.tau).norm;
    r.gevrey_sum = r.norm_omega_3r4 + r.norm_dy_omega_r2;
    r.a1 = r.gevrey_sum <= b.M;
    r.margin1 = b.M - r.gevrey_sum;
    const auto Wp = from_spectral(W);
    const auto [mn, mx] = std::minmax_element(Wp.begin(), Wp.end());
    r.min_dy_omega = *mn;
    r.max_dy_omega = *mx;
    r.margin2_low = r.min_dy_omega - b.delta0;
    r.margin2_high = 1.0 / b.delta0 - r.max_dy_omega;
    r.a2 = r.margin2_low >= 0.0 && r.margin2_high >= 0.0;
    const auto Wyy = from_spectral(d2(W));
    const auto& w = g.weights();
    double worst = 0.0;
    for (int ix = 0; ix < g.Nx; ++ix) {
        double acc = 0.0;
        for (int iy = 0; iy < g.Ny; ++iy) {
            const double v = Wyy[static_cast<std::size_t>(iy) * g.Nx + ix];
            acc += w[iy] * v * v;
        }
        worst = std::max(worst, std::sqrt(acc));
    }
    r.mixed_norm = worst;
    r.a3 = worst <= b.M;
    r.margin3 = b.M - worst;
    return r;
}

std::vector<ConvexityPoint> convexity_monitor(const Trajectory& tr, PressureClosure c) {
    std::vector<ConvexityPoint> out;
    for (const auto& s : tr.snapshots) {
        const Grid& g = s.u.grid();
        const SpectralField W = d1(s.omega);
        const auto Wp = from_spectral(W);
        const auto [mn, mx] = std::minmax_element(Wp.begin(), Wp.end());
        ConvexityPoint pt;
        pt.t = s.t;
        pt.min_dy_omega = *mn;
        pt.max_dy_omega = *mx;
        const auto datum = vorticity_bc(s, c).physical(g.Nx);
        for (int iy : {0, g.Ny - 1})
            for (int ix = 0; ix < g.Nx; ++ix)
                pt.wall_residual = std::max(
                    pt.wall_residual,
                    std::abs(Wp[static_cast<std::size_t>(iy) * g.Nx + ix] - datum[ix]));
        out.push_back(pt);
    }
    return out;
}

}  // namespace hns
