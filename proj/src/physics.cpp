#include "hns/physics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace hns {

PressureClosure parse_closure(const std::string& s) {
    if (s == "periodic") return PressureClosure::periodic;
    if (s == "fixed_flux") return PressureClosure::fixed_flux;
    throw std::invalid_argument("unknown pressure closure '" + s + "'");
}

const char* to_string(PressureClosure c) {
    return c == PressureClosure::periodic ? "periodic" : "fixed_flux";
}

ScalarX quadratic_term(const SpectralField& u) {
    ScalarX q = int01(multiply(u, u));
    q = ddx(q, 1);
    for (auto& z : q.data()) z = -z;
    return q;
}

SpectralField recover_v(const SpectralField& u, double tol) {
    const Grid& g = u.grid();
    const ScalarX m = int01(u);
    if (m.max_abs_nonzero_k() > tol)
        throw ConstraintError("recover_v: d_x of the y-mean of u is not zero (residual " +
                              std::to_string(m.max_abs_nonzero_k()) + ")");
    SpectralField v = cumint(ddx(u, 1));
    v *= -1.0;
    for (int k = 0; k <= g.cut; ++k) v(k, 0) = 0.0;
    return v;
}

namespace {
ScalarX wall_jump(const SpectralField& omega, PressureClosure c) {
    const Grid& g = omega.grid();
    ScalarX j(g.cut);
    for (int k = 0; k <= g.cut; ++k) j[k] = omega(k, g.Ny - 1) - omega(k, 0);
    if (c == PressureClosure::periodic) j[0] = 0.0;
    return j;
}
}  // namespace

ScalarX pressure_gradient(const FlowState& s, PressureClosure c) {
    ScalarX p = wall_jump(s.omega, c);
    const ScalarX q = quadratic_term(s.u);
    for (int k = 0; k <= p.cut(); ++k) p[k] += q[k];
    if (c == PressureClosure::periodic) p[0] = 0.0;
    return p;
}

ScalarX vorticity_bc(const FlowState& s, PressureClosure c) { return pressure_gradient(s, c); }

ScalarX h_datum(const SpectralField& u) {
    ScalarX h = int01(multiply(u, u));
    for (auto& z : h.data()) z = -z;
    h[0] = 0.0;
    return h;
}

FlowState make_state(const SpectralField& u, double t, double tau, PressureClosure c) {
    FlowState s;
    s.u = u;
    s.omega = d1(u);
    s.v = recover_v(u);
    s.t = t;
    s.tau = tau;
    s.px = pressure_gradient(s, c);
    return s;
}

namespace {
double max_abs_physical(const ScalarX& f, int Nx) {
    double m = 0.0;
    for (double v : f.physical(Nx)) m = std::max(m, std::abs(v));
    return m;
}
}  // namespace

CompatibilityReport check_compatibility(const SpectralField& u0, PressureClosure c) {
    const Grid& g = u0.grid();
    CompatibilityReport r;
    r.mean_constraint_residual = int01(u0).max_abs_nonzero_k();
    r.dirichlet_residual = std::max(max_abs_physical(trace(u0, 0), g.Nx),
                                    max_abs_physical(trace(u0, g.Ny - 1), g.Nx));
    const SpectralField uyy = d2(u0);
    // Right side: int_0^1 (-d_x u0^2 + d_y^2 u0) dy, minus its x-mean when the
    // pressure is periodic.
    ScalarX rhs = quadratic_term(u0);
    const ScalarX iyy = int01(uyy);
    for (int k = 0; k <= g.cut; ++k) rhs[k] += iyy[k];
    if (c == PressureClosure::periodic) rhs[0] = 0.0;
    for (int iy : {0, g.Ny - 1}) {
        ScalarX d = trace(uyy, iy);
        for (int k = 0; k <= g.cut; ++k) d[k] -= rhs[k];
        r.third_condition_residual = std::max(r.third_condition_residual, max_abs_physical(d, g.Nx));
    }
    const auto p = from_spectral(uyy);
    const auto [mn, mx] = std::minmax_element(p.begin(), p.end());
    r.convexity_min = *mn;
    r.convexity_max = *mx;
    return r;
}

namespace {

// Profile sum_{m=1..5} a_m y^m subject to five linear conditions written with
// the grid's own operators, so discrete residuals vanish to round-off.
std::vector<double> constrained_profile(const Grid& g, double wall_excess) {
    const int n = g.Ny;
    const int M = 5;
    const auto& w = g.weights();
    const double h2 = 1.0 / (g.dy * g.dy);
    auto d2_at = [&](const std::vector<double>& f, int i) {
        if (i == 0) return h2 * (2 * f[0] - 5 * f[1] + 4 * f[2] - f[3]);
        return h2 * (2 * f[n - 1] - 5 * f[n - 2] + 4 * f[n - 3] - f[n - 4]);
    };
    auto int_d2 = [&](const std::vector<double>& f) {
        double s = w[0] * d2_at(f, 0) + w[n - 1] * d2_at(f, n - 1);
        for (int i = 1; i + 1 < n; ++i) s += w[i] * h2 * (f[i + 1] - 2 * f[i] + f[i - 1]);
        return s;
    };
    std::vector<std::vector<double>> basis(M, std::vector<double>(n));
    for (int m = 0; m < M; ++m)
        for (int i = 0; i < n; ++i) basis[m][i] = std::pow(g.y(i), m + 1);
    Eigen::MatrixXd A(5, M);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(5);
    for (int m = 0; m < M; ++m) {
        const auto& b = basis[m];
        double integ = 0.0;
        for (int i = 0; i < n; ++i) integ += w[i] * b[i];
        const double idd = int_d2(b);
        A(0, m) = b[n - 1];
        A(1, m) = integ;
        A(2, m) = d2_at(b, 0) - idd;
        A(3, m) = d2_at(b, n - 1) - idd;
        A(4, m) = (b[1] - b[0]) / g.dy;  // normalization row for the shape mode
    }
    if (wall_excess != 0.0) {
        rhs(2) = rhs(3) = wall_excess;
        A.row(4).setZero();
        // Fix the free direction by making the profile even about y = 1/2.
        for (int m = 0; m < M; ++m) A(4, m) = basis[m][n - 2] - basis[m][1];
    } else {
        rhs(4) = 1.0;
    }
    const Eigen::VectorXd a = A.fullPivLu().solve(rhs);
    if (!(A * a).isApprox(rhs, 1e-10)) throw InfeasibleData("builder: singular profile system");
    std::vector<double> f(n, 0.0);
    for (int m = 0; m < M; ++m)
        for (int i = 0; i < n; ++i) f[i] += a(m) * basis[m][i];
    f[0] = 0.0;
    return f;
}

}  // namespace

SpectralField build_convex_compatible_data(const Grid& g, const BuilderOptions& opt) {
    if (!(opt.delta0 > 0.0)) throw std::invalid_argument("builder: delta0 must be positive");
    if (opt.amplitude < 0.0) throw std::invalid_argument("builder: amplitude must be >= 0");
    if (opt.k0 < 1 || opt.k0 > g.cut) throw std::invalid_argument("builder: k0 outside the retained band");
    const double ceiling = opt.ceiling > 0.0 ? opt.ceiling : 1.0 / opt.delta0;
    if (ceiling < opt.delta0)
        throw InfeasibleData("builder: convexity window [delta0, ceiling] is empty");
    if (opt.closure == PressureClosure::periodic)
        throw InfeasibleData(
            "builder: with a periodic pressure the wall curvature of compatible data has zero "
            "x-mean, so it cannot stay above a positive floor");

    const int n = g.Ny;
    // Shape mode: vanishes at both walls, zero mean, wall curvature equal to
    // the y-integral of its curvature. Scaled to unit peak curvature.
    std::vector<double> p = constrained_profile(g, 0.0);
    {
        SpectralField tmp = outer(g, [&] { ScalarX a(g.cut); a[0] = 1.0; return a; }(), p);
        const double peak = d2(tmp).max_abs();
        for (double& v : p) v /= peak;
    }
    // Correction mode: unit excess of wall curvature over its integral.
    const std::vector<double> q = constrained_profile(g, 1.0);

    const double G = opt.delta0 + 2.0 * opt.amplitude;
    std::vector<double> base(n);
    for (int i = 0; i < n; ++i) base[i] = 0.5 * G * (g.y(i) * g.y(i) - g.y(i));

    ScalarX shape(g.cut);
    shape[0] = 1.0;
    SpectralField u0 = outer(g, shape, base);
    ScalarX ck(g.cut);
    ck[opt.k0] = 0.5 * opt.amplitude;  // amplitude * cos(k0 x)
    const SpectralField pert = outer(g, ck, p);
    u0 += pert;

    ScalarX s(g.cut);
    const SpectralField base_and_pert = u0;
    for (int it = 0; it < 200; ++it) {
        // Q_k = [-d_x int u0^2]_k must be absorbed by the correction mode.
        const ScalarX Q = quadratic_term(u0);
        double change = 0.0;
        ScalarX s_new(g.cut);
        for (int k = 1; k <= g.cut; ++k) {
            s_new[k] = Q[k];
            change = std::max(change, std::abs(s_new[k] - s[k]));
        }
        s = s_new;
        u0 = base_and_pert;
        u0 += outer(g, s, q);
        if (!std::isfinite(change) || change > 1e6)
            throw InfeasibleData("builder: correction iteration diverged (amplitude too large)");
        if (change < 1e-15 * std::max(1.0, G)) break;
        if (it == 199) throw InfeasibleData("builder: correction iteration did not converge");
    }
    const auto rep = check_compatibility(u0, opt.closure);
    if (rep.convexity_min < opt.delta0 || rep.convexity_max > ceiling)
        throw InfeasibleData("builder: convexity window violated (min " +
                             std::to_string(rep.convexity_min) + ", max " +
                             std::to_string(rep.convexity_max) + ")");
    return u0;
}

}  // namespace hns
