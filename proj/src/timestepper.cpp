#include "hns/timestepper.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hns/diagnostics.hpp"

namespace hns {

Scheme parse_scheme(const std::string& s) {
    if (s == "implicit_euler") return Scheme::implicit_euler;
    if (s == "crank_nicolson") return Scheme::crank_nicolson;
    throw std::invalid_argument("unknown scheme '" + s + "'");
}
Form parse_form(const std::string& s) {
    if (s == "primitive") return Form::primitive;
    if (s == "vorticity") return Form::vorticity;
    throw std::invalid_argument("unknown form '" + s + "'");
}
const char* to_string(Scheme s) {
    return s == Scheme::implicit_euler ? "implicit_euler" : "crank_nicolson";
}
const char* to_string(Form f) { return f == Form::primitive ? "primitive" : "vorticity"; }

void SolverConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("solver: dt must be positive");
    if (!(epsilon >= 0.0)) throw std::invalid_argument("solver: epsilon must be >= 0");
    if (!(T_end >= 0.0)) throw std::invalid_argument("solver: T_end must be >= 0");
    if (cadence < 1) throw std::invalid_argument("solver: cadence must be >= 1");
    if (!(cfl > 0.0)) throw std::invalid_argument("solver: cfl must be positive");
    Grid check(Nx, Ny);
    (void)check;
}

namespace {

void apply_if(SpectralField& f, double eps, double dt) {
    if (eps == 0.0) return;
    const Grid& g = f.grid();
    std::vector<double> fac(g.nk());
    for (int k = 0; k <= g.cut; ++k) fac[k] = std::exp(-eps * k * k * dt);
    for (int iy = 0; iy < g.Ny; ++iy)
        for (int k = 0; k <= g.cut; ++k) f(k, iy) *= fac[k];
}

double theta(Scheme s) { return s == Scheme::implicit_euler ? 1.0 : 0.5; }

double max_physical_abs(const SpectralField& f) {
    double m = 0.0;
    for (double v : from_spectral(f)) {
        if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
        m = std::max(m, std::abs(v));
    }
    return m;
}

}  // namespace

Stepper::Stepper(const Grid& g, const SolverConfig& cfg) : g_(g), cfg_(cfg), dt_(cfg.dt) {
    cfg_.validate();
    refactor();
}

void Stepper::refactor() {
    const int N = g_.Ny;
    const double a = theta(cfg_.scheme) * dt_ / (g_.dy * g_.dy);
    {
        const int n = N - 2;
        std::vector<double> sub(n, -a), diag(n, 1.0 + 2.0 * a), sup(n, -a);
        dirichlet_ = kernels::factor_tridiag(sub, diag, sup);
        // g = A^{-1} 1 on the interior, zero at the walls, scaled to unit integral.
        std::vector<double> col(n, 1.0);
        kernels::active().thomas(dirichlet_, col.data(), 1, 1);
        proj_g_.assign(N, 0.0);
        double integ = 0.0;
        for (int i = 0; i < n; ++i) {
            proj_g_[i + 1] = col[i];
            integ += g_.weights()[i + 1] * col[i];
        }
        for (double& v : proj_g_) v /= integ;
    }
    {
        std::vector<double> sub(N, -a), diag(N, 1.0 + 2.0 * a), sup(N, -a);
        sup[0] = -2.0 * a;
        sub[N - 1] = -2.0 * a;
        neumann_ = kernels::factor_tridiag(sub, diag, sup);
    }
    have_history_ = false;
}

void Stepper::check_cfl(const FlowState& s) {
    const double umax = max_physical_abs(s.u);
    int halvings = 0;
    while (dt_ * umax * g_.Nx / (2.0 * std::numbers::pi) > cfg_.cfl) {
        if (++halvings > cfg_.max_halvings)
            throw std::runtime_error("stepper: CFL cannot be met by halving dt");
        dt_ *= 0.5;
    }
    if (halvings > 0) refactor();
}

SpectralField Stepper::explicit_primitive(const FlowState& s) const {
    // -(u u_x + v u_y) - d_x p
    SpectralField F = multiply(s.u, ddx(s.u, 1));
    F += multiply(s.v, d1(s.u));
    F *= -1.0;
    const ScalarX px = pressure_gradient(s, cfg_.closure);
    for (int iy = 0; iy < g_.Ny; ++iy)
        for (int k = 0; k <= g_.cut; ++k) F(k, iy) -= px[k];
    return F;
}

SpectralField Stepper::explicit_vorticity(const FlowState& s) const {
    SpectralField F = multiply(s.u, ddx(s.omega, 1));
    F += multiply(s.v, d1(s.omega));
    F *= -1.0;
    return F;
}

FlowState Stepper::step(const FlowState& s) {
    check_cfl(s);
    return cfg_.form == Form::primitive ? step_primitive_impl(s) : step_vorticity_impl(s);
}

FlowState Stepper::step_primitive_impl(const FlowState& s) {
    const int N = g_.Ny;
    const double dt = dt_;
    const SpectralField F = explicit_primitive(s);
    SpectralField rhs = s.u;
    if (cfg_.scheme == Scheme::crank_nicolson) {
        SpectralField lap = d2(s.u);
        lap *= 0.5 * dt;
        rhs += lap;
    }
    SpectralField Fn = F;
    if (cfg_.scheme == Scheme::crank_nicolson && have_history_) {
        Fn *= 1.5 * dt;
        rhs += Fn;
        apply_if(rhs, cfg_.epsilon, dt);
        SpectralField Fo = F_prev_;
        Fo *= -0.5 * dt;
        apply_if(Fo, cfg_.epsilon, 2.0 * dt);
        rhs += Fo;
    } else {
        Fn *= dt;
        rhs += Fn;
        apply_if(rhs, cfg_.epsilon, dt);
    }
    kernels::active().thomas(dirichlet_, rhs.raw() + rhs.ld(), rhs.ld(), rhs.ld());
    for (int k = 0; k <= g_.cut; ++k) rhs(k, 0) = rhs(k, N - 1) = 0.0;
    // Remove the y-mean of every k != 0 mode along the implicit response profile.
    const ScalarX m = int01(rhs);
    for (int iy = 1; iy < N - 1; ++iy)
        for (int k = 1; k <= g_.cut; ++k) rhs(k, iy) -= m[k] * proj_g_[iy];
    F_prev_ = F;
    have_history_ = true;
    return make_state(rhs, s.t + dt, s.tau, cfg_.closure);
}

void reconstruct_velocity(SpectralField& omega, SpectralField& u) {
    const Grid& g = omega.grid();
    const int N = g.Ny;
    u = cumint(omega);
    const auto& w = g.weights();
    std::vector<double> q(N), dq(N);
    double qi = 0.0;
    for (int i = 0; i < N; ++i) {
        const double y = g.y(i);
        q[i] = 6.0 * y * (1.0 - y);
        dq[i] = 6.0 * (1.0 - 2.0 * y);
        qi += w[i] * q[i];
    }
    for (int i = 0; i < N; ++i) {
        q[i] /= qi;
        dq[i] /= qi;
    }
    const ScalarX integ = int01(u);
    for (int k = 0; k <= g.cut; ++k) {
        const cplx a = u(k, N - 1);
        const cplx b = (k == 0) ? cplx{} : integ[k] - 0.5 * a;
        for (int i = 0; i < N; ++i) {
            u(k, i) -= a * g.y(i) + b * q[i];
            omega(k, i) -= a + b * dq[i];
        }
        u(k, 0) = 0.0;
        u(k, N - 1) = 0.0;
    }
}

FlowState Stepper::step_vorticity_impl(const FlowState& s) {
    const int N = g_.Ny;
    const double dt = dt_;
    const double h = g_.dy;
    const SpectralField F = explicit_vorticity(s);
    const ScalarX gb = vorticity_bc(s, cfg_.closure);
    SpectralField rhs = s.omega;
    const bool cn = cfg_.scheme == Scheme::crank_nicolson;
    if (cn) {
        // + dt/2 D2_N omega with the ghost-point walls (datum handled below).
        SpectralField lap = d2(s.omega);
        for (int k = 0; k <= g_.cut; ++k) {
            lap(k, 0) = (2.0 * s.omega(k, 1) - 2.0 * s.omega(k, 0)) / (h * h);
            lap(k, N - 1) = (2.0 * s.omega(k, N - 2) - 2.0 * s.omega(k, N - 1)) / (h * h);
        }
        lap *= 0.5 * dt;
        rhs += lap;
    }
    ScalarX gdat = gb;
    SpectralField Fn = F;
    if (cn && have_history_) {
        Fn *= 1.5 * dt;
        rhs += Fn;
        apply_if(rhs, cfg_.epsilon, dt);
        SpectralField Fo = F_prev_;
        Fo *= -0.5 * dt;
        apply_if(Fo, cfg_.epsilon, 2.0 * dt);
        rhs += Fo;
        for (int k = 0; k <= g_.cut; ++k) gdat[k] = 1.5 * gb[k] - 0.5 * g_prev_[k];
    } else {
        Fn *= dt;
        rhs += Fn;
        apply_if(rhs, cfg_.epsilon, dt);
    }
    // Ghost-point datum: -2g/h at y=0, +2g/h at y=1, weighted by dt (both
    // CN halves use the same extrapolated value).
    for (int k = 0; k <= g_.cut; ++k) {
        rhs(k, 0) -= dt * 2.0 * gdat[k] / h;
        rhs(k, N - 1) += dt * 2.0 * gdat[k] / h;
    }
    kernels::active().thomas(neumann_, rhs.raw(), rhs.ld(), rhs.ld());
    F_prev_ = F;
    g_prev_ = gb;
    have_history_ = true;

    FlowState out;
    out.omega = rhs;
    reconstruct_velocity(out.omega, out.u);
    out.v = recover_v(out.u);
    out.t = s.t + dt;
    out.tau = s.tau;
    out.px = pressure_gradient(out, cfg_.closure);
    return out;
}

FlowState step_primitive(const FlowState& s, const SolverConfig& cfg) {
    SolverConfig c = cfg;
    c.form = Form::primitive;
    Stepper st(s.u.grid(), c);
    return st.step(s);
}

FlowState step_vorticity(const FlowState& s, const SolverConfig& cfg) {
    SolverConfig c = cfg;
    c.form = Form::vorticity;
    Stepper st(s.u.grid(), c);
    return st.step(s);
}

namespace {

StepRecord step_record(const FlowState& s, double dt) {
    const Grid& g = s.u.grid();
    StepRecord r;
    r.t = s.t;
    r.dt = dt;
    r.mean_residual = int01(s.u).max_abs_nonzero_k();
    for (int iy : {0, g.Ny - 1}) {
        for (double v : trace(s.u, iy).physical(g.Nx)) r.wall_u = std::max(r.wall_u, std::abs(v));
        for (double v : trace(s.v, iy).physical(g.Nx)) r.wall_v = std::max(r.wall_v, std::abs(v));
    }
    r.max_omega = max_physical_abs(s.omega);
    return r;
}

MonitorRecord monitor_record(const FlowState& s, const GevreyParams& gp, bool norms) {
    MonitorRecord m;
    m.t = s.t;
    m.tau = s.tau;
    m.tau_below_floor = s.tau < gp.tau1;
    const SpectralField W = d1(s.omega);
    const auto p = from_spectral(W);
    const auto [mn, mx] = std::minmax_element(p.begin(), p.end());
    m.min_dy_omega = *mn;
    m.max_dy_omega = *mx;
    if (norms) {
        const auto a = gevrey_norm(s.omega, gp, s.tau);
        const auto b = gevrey_norm(W, gp, s.tau);
        m.norm_omega = a.norm;
        m.norm_dy_omega = b.norm;
        m.truncation_warning = a.truncation_warning || b.truncation_warning;
        m.omega_dot_l2 = std::sqrt(mean_square(omega_dot(s)));
        m.h_l2 = std::sqrt(mean_square(h_datum(s.u)));
    }
    return m;
}

}  // namespace

Trajectory run(const SpectralField& u0, const SolverConfig& cfg, const GevreyParams& gp,
               const Monitors& mon) {
    cfg.validate();
    const Grid& g = u0.grid();
    if (g.Nx != cfg.Nx || g.Ny != cfg.Ny)
        throw std::invalid_argument("run: initial data grid does not match the solver config");
    Trajectory tr;
    FlowState s = make_state(u0, 0.0, tau_schedule(0.0, gp).tau, cfg.closure);
    Stepper st(g, cfg);
    std::optional<LiftIntegrator> lift;
    const FlatScheme fs = FlatScheme::implicit_euler;
    if (mon.lift) {
        lift.emplace(HalfLineGrid::matching(g), g.cut, cfg.epsilon, cfg.dt, fs);
    }
    auto snapshot = [&](const FlowState& x) {
        tr.snapshots.push_back(x);
        tr.monitors.push_back(monitor_record(x, gp, mon.norms));
        if (lift) tr.lifts.push_back(lift->physical(x.t));
    };
    ScalarX h_prev = h_datum(s.u);
    tr.h_history.push_back({0.0, h_prev});
    snapshot(s);
    tr.steps.push_back(step_record(s, 0.0));
    long n = 0;
    const double t_eps = 1e-12 * std::max(1.0, cfg.T_end);
    while (s.t < cfg.T_end - t_eps) {
        FlowState next;
        try {
            next = st.step(s);
        } catch (const ConstraintError& e) {
            tr.blew_up = true;
            tr.message = std::string("constraint failure: ") + e.what();
            break;
        } catch (const std::runtime_error& e) {
            tr.blew_up = true;
            tr.message = e.what();
            break;
        }
        const double dt_used = next.t - s.t;
        next.tau = tau_schedule(next.t, gp).tau;
        const StepRecord rec = step_record(next, dt_used);
        if (!std::isfinite(rec.max_omega) || rec.max_omega > cfg.blowup) {
            tr.blew_up = true;
            tr.message = "blow-up: max|omega| = " + std::to_string(rec.max_omega) + " at t = " +
                         std::to_string(next.t);
            tr.steps.push_back(rec);
            break;
        }
        const ScalarX h_next = h_datum(next.u);
        if (lift) {
            if (std::abs(lift->dt() - dt_used) > 1e-15) lift->set_dt(dt_used);
            lift->step(h_prev, h_next, s.t);
        }
        h_prev = h_next;
        tr.h_history.push_back({next.t, h_next});
        tr.steps.push_back(rec);
        s = std::move(next);
        ++n;
        const bool last = s.t >= cfg.T_end - t_eps;
        if (mon.keep_every_step || n % cfg.cadence == 0 || last) snapshot(s);
    }
    return tr;
}

}  // namespace hns
