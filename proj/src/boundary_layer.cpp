#include "hns/boundary_layer.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

namespace hns {

HalfLineGrid::HalfLineGrid(double ymax, int nyh) : Ymax(ymax), Nyh(nyh) {
    if (ymax < 2.0) throw std::invalid_argument("HalfLineGrid: Ymax must be >= 2");
    if (nyh < 5) throw std::invalid_argument("HalfLineGrid: too few points");
}

HalfLineGrid HalfLineGrid::matching(const Grid& g, double ymax) {
    const long cells = std::lround(ymax / g.dy);
    return HalfLineGrid(cells * g.dy, static_cast<int>(cells) + 1);
}

cplx transfer_function(int j, double beta, double zeta, double y) {
    if (!(beta > 4.0)) throw std::invalid_argument("transfer_function: beta must exceed 4");
    if (j < 0) throw std::invalid_argument("transfer_function: j < 0");
    const cplx s = std::sqrt(cplx(beta * (j + 1.0), zeta));  // principal branch, Re s >= 0
    return std::exp(-y * s) / (2.0 - s);
}

// ---------------------------------------------------------------- frequency solver

namespace {
std::mutex g_fft_mutex;
}

FlatProfile solve_flat_freq(std::span<const cplx> datum, double dt, double beta, int j,
                            const HalfLineGrid& grid, int pad_factor) {
    if (!(beta > 4.0)) throw std::invalid_argument("solve_flat_freq: beta must exceed 4");
    if (datum.empty() || !(dt > 0.0)) throw std::invalid_argument("solve_flat_freq: empty datum");
    const int nt = static_cast<int>(datum.size());
    for (int pad = std::max(2, pad_factor); pad <= 64; pad *= 2) {
        const int P = pad * nt;
        std::vector<cplx> F(P), col(P);
        fftw_plan fwd, bwd;
        {
            std::lock_guard<std::mutex> lock(g_fft_mutex);
            fwd = fftw_plan_dft_1d(P, reinterpret_cast<fftw_complex*>(F.data()),
                                   reinterpret_cast<fftw_complex*>(F.data()), FFTW_FORWARD,
                                   FFTW_ESTIMATE);
            bwd = fftw_plan_dft_1d(P, reinterpret_cast<fftw_complex*>(col.data()),
                                   reinterpret_cast<fftw_complex*>(col.data()), FFTW_BACKWARD,
                                   FFTW_ESTIMATE);
        }
        std::fill(F.begin(), F.end(), cplx{});
        std::copy(datum.begin(), datum.end(), F.begin());
        fftw_execute(fwd);
        // Temporal frequencies of the DFT bins, negative half folded.
        std::vector<double> zeta(P);
        for (int m = 0; m < P; ++m) {
            const int mm = (m <= P / 2) ? m : m - P;
            zeta[m] = 2.0 * M_PI * mm / (P * dt);
        }
        // Denominator and decay rate per bin; the y-dependence is exp(-y s).
        std::vector<cplx> inv_den(P), s(P);
        for (int m = 0; m < P; ++m) {
            s[m] = std::sqrt(cplx(beta * (j + 1.0), zeta[m]));
            inv_den[m] = 1.0 / (2.0 - s[m]);
        }
        FlatProfile out;
        out.dt = dt;
        out.nt = nt;
        out.grid = grid;
        out.pad_factor = pad;
        out.data.assign(static_cast<std::size_t>(nt) * grid.Nyh, cplx{});
        double e_in = 0.0, e_out = 0.0;
        const int tail0 = nt + (P - nt) / 2;
        for (int iy = 0; iy < grid.Nyh; ++iy) {
            const double y = grid.y(iy);
            for (int m = 0; m < P; ++m) col[m] = F[m] * inv_den[m] * std::exp(-y * s[m]) / double(P);
            fftw_execute(bwd);
            for (int n = 0; n < nt; ++n) {
                out.at(n, iy) = col[n];
                e_in += std::norm(col[n]);
            }
            for (int n = tail0; n < P; ++n) e_out += std::norm(col[n]);
        }
        {
            std::lock_guard<std::mutex> lock(g_fft_mutex);
            fftw_destroy_plan(fwd);
            fftw_destroy_plan(bwd);
        }
        out.causality_residual = e_in > 0.0 ? e_out / e_in : 0.0;
        if (out.causality_residual <= 1e-6) return out;
    }
    throw ResolutionError("solve_flat_freq: wrap-around energy stays above 1e-6 at padding 64");
}

// ---------------------------------------------------------------- time solver

RobinHeatMarch::RobinHeatMarch(const HalfLineGrid& g, double lambda, double dt, FlatScheme scheme)
    : g_(g), lambda_(lambda), dt_(dt), scheme_(scheme) {
    if (!(dt > 0.0)) throw std::invalid_argument("RobinHeatMarch: dt must be positive");
    const int n = g.Nyh - 1;  // unknowns 0..Nyh-2
    const double h = g.dy();
    const double th = scheme == FlatScheme::implicit_euler ? 1.0 : 0.5;
    const double a = th * dt / (h * h);
    std::vector<double> sub(n, -a), diag(n, 1.0 + th * dt * lambda + 2.0 * a), sup(n, -a);
    // Ghost node w_{-1} = w_1 - 2h (f - 2 w_0).
    sup[0] = -2.0 * a;
    diag[0] = 1.0 + th * dt * lambda + 2.0 * a - 4.0 * a * h;
    lu_ = kernels::factor_tridiag(sub, diag, sup);
}

void RobinHeatMarch::step(double* b, std::size_t nc, std::size_t ld, const double* f_new,
                          const double* f_old) const {
    const int n = g_.Nyh - 1;
    const double h = g_.dy();
    if (scheme_ == FlatScheme::implicit_euler) {
        for (std::size_t c = 0; c < nc; ++c) b[c] -= 2.0 * dt_ / h * f_new[c];
    } else {
        // Explicit half: w + dt/2 (D2 w - lambda w) with the old datum.
        const double a = 0.5 * dt_ / (h * h);
        std::vector<double> prev(nc), cur(nc);
        for (std::size_t c = 0; c < nc; ++c) prev[c] = b[c];
        for (int i = 0; i < n; ++i) {
            double* row = b + static_cast<std::size_t>(i) * ld;
            const double* next = row + ld;  // node Nyh-1 is zero
            for (std::size_t c = 0; c < nc; ++c) {
                cur[c] = row[c];
                double lap;
                if (i == 0) {
                    lap = 2.0 * next[c] - 2.0 * cur[c] + 4.0 * h * cur[c];
                } else {
                    lap = next[c] - 2.0 * cur[c] + prev[c];
                }
                row[c] = cur[c] + a * lap - 0.5 * dt_ * lambda_ * cur[c];
                if (i == 0) row[c] -= dt_ / h * (f_new[c] + f_old[c]);
            }
            std::swap(prev, cur);
        }
    }
    kernels::active().thomas(lu_, b, nc, ld);
    double* top = b + static_cast<std::size_t>(n) * ld;
    for (std::size_t c = 0; c < nc; ++c) top[c] = 0.0;
}

FlatProfile solve_flat_time(std::span<const cplx> datum, double dt, double beta, int j,
                            const HalfLineGrid& grid, FlatScheme scheme) {
    if (datum.empty()) throw std::invalid_argument("solve_flat_time: empty datum");
    const int nt = static_cast<int>(datum.size());
    RobinHeatMarch m(grid, beta * (j + 1.0), dt, scheme);
    FlatProfile out;
    out.dt = dt;
    out.nt = nt;
    out.grid = grid;
    out.data.assign(static_cast<std::size_t>(nt) * grid.Nyh, cplx{});
    std::vector<double> w(2 * static_cast<std::size_t>(grid.Nyh), 0.0);
    for (int n = 1; n < nt; ++n) {
        const double fn[2] = {datum[n].real(), datum[n].imag()};
        const double fo[2] = {datum[n - 1].real(), datum[n - 1].imag()};
        m.step(w.data(), 2, 2, fn, fo);
        for (int iy = 0; iy < grid.Nyh; ++iy) out.at(n, iy) = cplx(w[2 * iy], w[2 * iy + 1]);
    }
    return out;
}

// ---------------------------------------------------------------- fields and lifts

HalfLineField::HalfLineField(const HalfLineGrid& g, int cut_)
    : grid(g), cut(cut_), c(static_cast<std::size_t>(g.Nyh) * (cut_ + 1), cplx{}) {}

double HalfLineField::max_abs() const {
    double m = 0.0;
    for (const auto& z : c) m = std::max(m, std::abs(z));
    return m;
}

FlatVelocities lift_velocities(const HalfLineField& w, double decay_tol) {
    const auto& g = w.grid;
    const int n = g.Nyh;
    const double h = g.dy();
    const double wmax = w.max_abs();
    if (wmax > 0.0) {
        double top = 0.0;
        for (int iy = n - 1 - std::max(1, n / 10); iy < n; ++iy)
            for (int k = 0; k <= w.cut; ++k) top = std::max(top, std::abs(w(k, iy)));
        if (top > decay_tol * wmax)
            throw TruncationError("lift_velocities: profile has not decayed near Ymax (ratio " +
                                  std::to_string(top / wmax) + ")");
    }
    FlatVelocities out{HalfLineField(g, w.cut), HalfLineField(g, w.cut)};
    for (int k = 0; k <= w.cut; ++k) {
        const cplx ik(0.0, k);
        for (int iy = n - 2; iy >= 0; --iy) {
            out.u(k, iy) = out.u(k, iy + 1) - 0.5 * h * (w(k, iy) + w(k, iy + 1));
            out.v(k, iy) = out.v(k, iy + 1) + 0.5 * h * ik * (out.u(k, iy) + out.u(k, iy + 1));
        }
    }
    return out;
}

LiftIntegrator::LiftIntegrator(const HalfLineGrid& g, int cut, double epsilon, double dt,
                               FlatScheme scheme)
    : g_(g), cut_(cut), eps_(epsilon), scheme_(scheme), march_(g, 0.0, dt, scheme), z_(g, cut) {}

void LiftIntegrator::reset() { std::fill(z_.c.begin(), z_.c.end(), cplx{}); }

void LiftIntegrator::set_dt(double dt) { march_ = RobinHeatMarch(g_, 0.0, dt, scheme_); }

void LiftIntegrator::step(const ScalarX& h_old, const ScalarX& h_new, double t_old) {
    const double t_new = t_old + march_.dt();
    const int nk = cut_ + 1;
    std::vector<double> fn(2 * nk), fo(2 * nk);
    for (int k = 0; k < nk; ++k) {
        // Robin datum d_x h, scaled by the integrating factor exp(eps k^2 t).
        const cplx ik(0.0, k);
        const cplx a = (k == 0) ? cplx{} : ik * h_new.at(k) * std::exp(eps_ * k * k * t_new);
        const cplx b = (k == 0) ? cplx{} : ik * h_old.at(k) * std::exp(eps_ * k * k * t_old);
        fn[2 * k] = a.real();
        fn[2 * k + 1] = a.imag();
        fo[2 * k] = b.real();
        fo[2 * k + 1] = b.imag();
    }
    march_.step(reinterpret_cast<double*>(z_.c.data()), 2 * nk, 2 * nk, fn.data(), fo.data());
}

HalfLineField LiftIntegrator::physical(double t) const {
    HalfLineField w = z_;
    for (int iy = 0; iy < g_.Nyh; ++iy)
        for (int k = 0; k <= cut_; ++k) w(k, iy) *= std::exp(-eps_ * k * k * t);
    return w;
}

// ---------------------------------------------------------------- decomposition

namespace {
void check_matching(const HalfLineGrid& hg, const Grid& g) {
    if (std::abs(hg.dy() - g.dy) > 1e-12 * g.dy || hg.Nyh < g.Ny)
        throw std::invalid_argument("decomposition: half-line grid does not match the [0,1] grid");
}
}  // namespace

SpectralField restrict_to_unit(const HalfLineField& w, const Grid& g) {
    check_matching(w.grid, g);
    SpectralField f(g);
    const int kk = std::min(g.cut, w.cut);
    for (int iy = 0; iy < g.Ny; ++iy)
        for (int k = 0; k <= kk; ++k) f(k, iy) = w(k, iy);
    return f;
}

Decomposition zero_lift_decomposition(const FlowState& s) {
    const Grid& g = s.u.grid();
    Decomposition d{SpectralField(g), SpectralField(g), SpectralField(g), s.omega, s.u, s.v,
                    ScalarX(g.cut), ScalarX(g.cut)};
    return d;
}

Decomposition assemble_and_decompose(const FlowState& s, const HalfLineField& lift) {
    const Grid& g = s.u.grid();
    check_matching(lift.grid, g);
    if (lift.cut < g.cut) throw std::invalid_argument("decomposition: lift has fewer x-modes than the state");
    const auto vel = lift_velocities(lift, 1.0);
    Decomposition d;
    d.omega_bl = SpectralField(g);
    d.u_bl = SpectralField(g);
    const int N = g.Ny - 1;
    for (int iy = 0; iy <= N; ++iy)
        for (int k = 1; k <= g.cut; ++k) {
            d.omega_bl(k, iy) = lift(k, iy) - lift(k, N - iy);
            d.u_bl(k, iy) = vel.u(k, iy) + vel.u(k, N - iy);
        }
    d.v_bl = cumint(ddx(d.u_bl, 1));
    d.v_bl *= -1.0;
    d.flat_at_1 = ScalarX(g.cut);
    d.dy_flat_at_1 = ScalarX(g.cut);
    const double h = g.dy;
    for (int k = 1; k <= g.cut; ++k) {
        d.flat_at_1[k] = lift(k, N);
        d.dy_flat_at_1[k] = (lift(k, N + 1) - lift(k, N - 1)) / (2.0 * h);
    }
    d.omega_in = s.omega - d.omega_bl;
    d.u_in = s.u - d.u_bl;
    d.v_in = s.v - d.v_bl;
    return d;
}

// ---------------------------------------------------------------- scaling

const std::vector<LemmaTag>& all_lemma_tags() {
    static const std::vector<LemmaTag> t{
        LemmaTag::omega, LemmaTag::y_omega, LemmaTag::dy_omega, LemmaTag::y_dy_omega,
        LemmaTag::omega_y1, LemmaTag::dy_omega_y1, LemmaTag::u, LemmaTag::y_u,
        LemmaTag::u_y12, LemmaTag::v, LemmaTag::v_y0, LemmaTag::v_y1, LemmaTag::sup_omega};
    return t;
}

namespace {
struct TagInfo {
    const char* name;
    double p;
    double r_shift;      // RHS exponent r + gamma_mult * gamma + r_shift
    double gamma_mult;
};
TagInfo info(LemmaTag t) {
    switch (t) {
        case LemmaTag::omega: return {"omega", 1.5, -0.75, 1};
        case LemmaTag::y_omega: return {"y_omega", 2.5, -1.25, 1};
        case LemmaTag::dy_omega: return {"dy_omega", 0.5, -0.25, 1};
        case LemmaTag::y_dy_omega: return {"y_dy_omega", 1.5, -0.75, 1};
        case LemmaTag::omega_y1: return {"omega_y1", 20, -10, 1};
        case LemmaTag::dy_omega_y1: return {"dy_omega_y1", 20, -10, 1};
        case LemmaTag::u: return {"u", 2.5, -1.25, 1};
        case LemmaTag::y_u: return {"y_u", 3.5, -1.75, 1};
        case LemmaTag::u_y12: return {"u_y12", 20, -10, 1};
        case LemmaTag::v: return {"v", 3.5, -1.75, 2};
        case LemmaTag::v_y0: return {"v_y0", 3, -1.5, 2};
        case LemmaTag::v_y1: return {"v_y1", 20, -10, 1};
        case LemmaTag::sup_omega: return {"sup_omega", 0.5, -0.25, 1};
    }
    return {"?", 0, 0, 0};
}
}  // namespace

const char* to_string(LemmaTag t) { return info(t).name; }
double paper_exponent(LemmaTag t) { return info(t).p; }

LemmaTag parse_lemma_tag(const std::string& s) {
    for (auto t : all_lemma_tags())
        if (s == info(t).name) return t;
    throw std::invalid_argument("unknown inequality tag '" + s + "'");
}

double ScalingReport::slope_for(LemmaTag t) const {
    for (const auto& [tag, s] : slope)
        if (tag == t) return s;
    throw std::out_of_range("ScalingReport: tag not computed");
}

namespace {

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Instantaneous y-quantity of one weighted profile for one tag, restricted to
// y in [0,1] (index range 0..n1-1), times the x-mean factor.
struct Profiles {
    std::vector<cplx> w, wy, u, v;
};

double tag_value(LemmaTag t, const Profiles& p, int n1, double h) {
    auto l2 = [&](const std::vector<cplx>& f, bool yw) {
        double s = 0.0;
        for (int i = 0; i < n1; ++i) {
            const double wt = (i == 0 || i == n1 - 1) ? 0.5 * h : h;
            const double y = i * h;
            s += wt * std::norm(f[i]) * (yw ? y * y : 1.0);
        }
        return s;
    };
    const int i1 = n1 - 1, ih = (n1 - 1) / 2;
    switch (t) {
        case LemmaTag::omega:
        case LemmaTag::sup_omega: return l2(p.w, false);
        case LemmaTag::y_omega: return l2(p.w, true);
        case LemmaTag::dy_omega: return l2(p.wy, false);
        case LemmaTag::y_dy_omega: return l2(p.wy, true);
        case LemmaTag::omega_y1: return std::norm(p.w[i1]);
        case LemmaTag::dy_omega_y1: return std::norm(p.wy[i1]);
        case LemmaTag::u: return l2(p.u, false);
        case LemmaTag::y_u: return l2(p.u, true);
        case LemmaTag::u_y12: return std::norm(p.u[ih]);
        case LemmaTag::v: return l2(p.v, false);
        case LemmaTag::v_y0: return std::norm(p.v[0]);
        case LemmaTag::v_y1: return std::norm(p.v[i1]);
    }
    return 0.0;
}

}  // namespace

ScalingReport verify_smoothing_lemma(const HHistory& h, const GevreyParams& params,
                                     const std::vector<double>& beta_list,
                                     const std::vector<LemmaTag>& tags,
                                     const ScalingOptions& opt) {
    for (double b : beta_list)
        if (!(b > 4.0)) throw std::invalid_argument("verify_smoothing_lemma: beta must exceed 4");
    const long cells = std::lround(opt.Ymax / opt.dy);
    const HalfLineGrid hg(cells * opt.dy, static_cast<int>(cells) + 1);
    const double dyh = hg.dy();
    const int n1 = static_cast<int>(std::lround(1.0 / dyh)) + 1;
    const int nyh = hg.Nyh;
    ScalingReport rep;

    for (double beta : beta_list) {
        GevreyParams P = params;
        P.beta = beta;
        const double t_eff = std::min(opt.t_end, 15.0 / beta);
        const int N = opt.steps;
        const double dt = t_eff / N;
        // Time integrand samples, accumulated with trapezoid weights.
        std::vector<std::vector<double>> lhs_t(tags.size(), std::vector<double>(N + 1, 0.0));

        std::vector<double> near_t(N + 1, 0.0), far_t(N + 1, 0.0);
        std::vector<ScalarX> hs(N + 1);
        for (int n = 0; n <= N; ++n) hs[n] = h(n * dt);

        for (int j = 0; j <= opt.Jbl; ++j) {
            RobinHeatMarch m(hg, beta * (j + 1.0), dt, FlatScheme::implicit_euler);
            for (int k = 1; k <= opt.cut; ++k) {
                auto datum = [&](int n) {
                    const double tau = P.tau0 * std::exp(-beta * n * dt);
                    cplx ikp(1.0, 0.0);
                    for (int q = 0; q <= j; ++q) ikp *= cplx(0.0, k);
                    return std::exp(log_weight(j, P.gamma, P.r, tau)) * ikp * hs[n].at(k);
                };
                bool any = false;
                for (int n = 0; n <= N && !any; ++n) any = hs[n].at(k) != cplx{};
                if (!any) continue;
                std::vector<double> w(2 * static_cast<std::size_t>(nyh), 0.0);
                Profiles pr;
                pr.w.resize(nyh);
                pr.wy.resize(nyh);
                pr.u.resize(nyh);
                pr.v.resize(nyh);
                const cplx ik(0.0, k);
                for (int n = 1; n <= N; ++n) {
                    const cplx fnew = datum(n), fold = datum(n - 1);
                    const double fn[2] = {fnew.real(), fnew.imag()};
                    const double fo[2] = {fold.real(), fold.imag()};
                    m.step(w.data(), 2, 2, fn, fo);
                    for (int i = 0; i < nyh; ++i) pr.w[i] = cplx(w[2 * i], w[2 * i + 1]);
                    for (int i = 1; i + 1 < nyh; ++i) pr.wy[i] = (pr.w[i + 1] - pr.w[i - 1]) / (2 * dyh);
                    pr.wy[0] = (-3.0 * pr.w[0] + 4.0 * pr.w[1] - pr.w[2]) / (2 * dyh);
                    pr.wy[nyh - 1] = 0.0;
                    pr.u[nyh - 1] = 0.0;
                    pr.v[nyh - 1] = 0.0;
                    for (int i = nyh - 2; i >= 0; --i) {
                        pr.u[i] = pr.u[i + 1] - 0.5 * dyh * (pr.w[i] + pr.w[i + 1]);
                        pr.v[i] = pr.v[i + 1] + 0.5 * dyh * ik * (pr.u[i] + pr.u[i + 1]);
                    }
                    for (std::size_t q = 0; q < tags.size(); ++q)
                        lhs_t[q][n] += 2.0 * tag_value(tags[q], pr, n1, dyh);  // +-k pair
                    near_t[n] += 2.0 * std::norm(pr.w[0]);
                    far_t[n] += 2.0 * std::norm(pr.w[n1 - 1]);
                }
            }
        }
        {
            WallTraces wt{beta, 0.0, 0.0};
            for (int n = 0; n <= N; ++n) {
                const double c = (n == 0 || n == N) ? 0.5 * dt : dt;
                wt.near += c * near_t[n];
                wt.far += c * far_t[n];
            }
            rep.traces.push_back(wt);
        }
        for (std::size_t q = 0; q < tags.size(); ++q) {
            const TagInfo ti = info(tags[q]);
            GevreyParams R = P;
            R.r = P.r + ti.gamma_mult * P.gamma + ti.r_shift;
            std::vector<double> rhs_t(N + 1);
            for (int n = 0; n <= N; ++n) {
                const double tau = P.tau0 * std::exp(-beta * n * dt);
                const double nv = gevrey_norm(hs[n], R, tau).norm;
                rhs_t[n] = nv * nv;
            }
            double L = 0.0, Rv = 0.0;
            for (int n = 0; n <= N; ++n) {
                const double wt = (n == 0 || n == N) ? 0.5 * dt : dt;
                Rv += wt * rhs_t[n];
                if (tags[q] == LemmaTag::sup_omega)
                    L = std::max(L, lhs_t[q][n]);
                else
                    L += wt * lhs_t[q][n];
            }
            rep.rows.push_back({beta, tags[q], L, Rv, Rv > 0.0 ? L / Rv : 0.0});
        }
    }
    for (std::size_t q = 0; q < tags.size(); ++q) {
        std::vector<double> lx, ly;
        for (const auto& r : rep.rows)
            if (r.tag == tags[q] && r.ratio > 0.0) {
                lx.push_back(std::log(r.beta));
                ly.push_back(std::log(r.ratio));
            }
        const double s = lx.size() >= 2 ? fit_slope(lx, ly) : 0.0;
        rep.slope.push_back({tags[q], s});
        rep.compensated_slope.push_back({tags[q], s + paper_exponent(tags[q])});
    }
    return rep;
}

}  // namespace hns
