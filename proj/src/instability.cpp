#include "hns/instability.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace hns {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> trap_weights(int n, double h) {
    std::vector<double> w(n, h);
    w.front() = w.back() = 0.5 * h;
    return w;
}

template <class T>
std::vector<T> fd1(const std::vector<T>& f, double h) {
    const int n = static_cast<int>(f.size());
    std::vector<T> d(n);
    for (int i = 1; i < n - 1; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    return d;
}

template <class T>
std::vector<T> fd2(const std::vector<T>& f, double h) {
    const int n = static_cast<int>(f.size());
    std::vector<T> d(n);
    const double h2 = h * h;
    for (int i = 1; i < n - 1; ++i) d[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2;
    d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
    d[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
    return d;
}

bool sign_change(const std::vector<double>& d2) {
    double scale = 0.0;
    for (double v : d2) scale = std::max(scale, std::abs(v));
    const double tol = 1e-10 * scale;
    int sgn = 0;
    for (double v : d2) {
        if (std::abs(v) <= tol) continue;
        const int s = v > 0 ? 1 : -1;
        if (sgn != 0 && s != sgn) return true;
        sgn = s;
    }
    return false;
}

std::vector<double> grid01(int Ny) {
    if (Ny < 5) throw std::invalid_argument("profile: Ny must be >= 5");
    std::vector<double> y(Ny);
    for (int i = 0; i < Ny; ++i) y[i] = static_cast<double>(i) / (Ny - 1);
    return y;
}

// Gauss-Kronrod 7-15 nodes on [-1, 1].
constexpr double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                           0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                           0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                           0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                           0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                           0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                           0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
cplx gk15(F&& f, double a, double b, double& err) {
    const double c = 0.5 * (a + b), hl = 0.5 * (b - a);
    const cplx fc = f(c);
    cplx rk = fc * wgk[7], rg = fc * wg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = hl * xgk[j];
        const cplx s = f(c - dx) + f(c + dx);
        rk += wgk[j] * s;
        if (j % 2 == 1) rg += wg[j / 2] * s;
    }
    err = std::abs((rk - rg) * hl);
    return rk * hl;
}

template <class F>
cplx adapt(F&& f, double a, double b, double tol, int depth) {
    double err = 0.0;
    const cplx r = gk15(f, a, b, err);
    if (err <= tol || depth >= 30) return r;
    const double m = 0.5 * (a + b);
    return adapt(f, a, m, 0.5 * tol, depth + 1) + adapt(f, m, b, 0.5 * tol, depth + 1);
}

double pole_margin(const ShearProfile& p) {
    double m = 0.0;
    for (double v : p.dUs) m = std::max(m, std::abs(v));
    return m * p.dy();
}

void check_pole(const ShearProfile& p, cplx c) {
    const auto [lo, hi] = std::minmax_element(p.Us.begin(), p.Us.end());
    const double re = std::clamp(c.real(), *lo, *hi);
    const double dist = std::abs(c - cplx(re, 0.0));
    const double margin = pole_margin(p);
    if (dist <= margin || dist == 0.0)
        throw PoleProximityError("renardy integral: c = (" + std::to_string(c.real()) + ", " +
                                 std::to_string(c.imag()) +
                                 ") lies within one grid spacing of the range of U");
}

// int_0^1 (U - c)^{-power} with U the piecewise cubic Hermite interpolant.
cplx power_integral(const ShearProfile& p, cplx c, int power) {
    check_pole(p, c);
    const int n = p.n();
    const double h = p.dy();
    cplx total = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
        const double u0 = p.Us[i], u1 = p.Us[i + 1];
        const double m0 = p.dUs[i] * h, m1 = p.dUs[i + 1] * h;
        auto f = [&](double s) -> cplx {
            const double s2 = s * s, s3 = s2 * s;
            const double U = (2 * s3 - 3 * s2 + 1) * u0 + (s3 - 2 * s2 + s) * m0 +
                             (-2 * s3 + 3 * s2) * u1 + (s3 - s2) * m1;
            const cplx d = U - c;
            cplx r = 1.0 / d;
            cplx out = r;
            for (int q = 1; q < power; ++q) out *= r;
            return out;
        };
        double err = 0.0;
        const cplx coarse = gk15(f, 0.0, 1.0, err);
        const double tol = 1e-15 * std::max(1.0, std::abs(coarse));
        total += h * (err <= tol ? coarse : adapt(f, 0.0, 1.0, tol, 0));
    }
    return total;
}

}  // namespace

ShearProfile make_profile(const std::string& name, std::function<double(double)> U,
                          std::function<double(double)> dU, std::function<double(double)> d2U,
                          int Ny) {
    ShearProfile p;
    p.name = name;
    p.y = grid01(Ny);
    for (double y : p.y) {
        p.Us.push_back(U(y));
        p.dUs.push_back(dU(y));
        p.d2Us.push_back(d2U(y));
    }
    p.has_inflection = sign_change(p.d2Us);
    return p;
}

ShearProfile profile_from_samples(const std::string& name, const std::vector<double>& Us) {
    ShearProfile p;
    p.name = name;
    p.y = grid01(static_cast<int>(Us.size()));
    p.Us = Us;
    p.dUs = fd1(Us, p.dy());
    p.d2Us = fd2(Us, p.dy());
    p.has_inflection = sign_change(p.d2Us);
    return p;
}

std::vector<std::string> preset_names() {
    return {"zero", "constant", "linear", "convex_quadratic", "inflection_sine", "tanh"};
}

ShearProfile preset_profile(const std::string& name, int Ny, double a) {
    if (name == "zero")
        return make_profile(name, [](double) { return 0.0; }, [](double) { return 0.0; },
                            [](double) { return 0.0; }, Ny);
    if (name == "constant")
        return make_profile(name, [a](double) { return a; }, [](double) { return 0.0; },
                            [](double) { return 0.0; }, Ny);
    if (name == "linear")
        return make_profile(name, [](double y) { return y; }, [](double) { return 1.0; },
                            [](double) { return 0.0; }, Ny);
    if (name == "convex_quadratic")
        return make_profile(name, [](double y) { return y * y; }, [](double y) { return 2 * y; },
                            [](double) { return 2.0; }, Ny);
    if (name == "inflection_sine")
        return make_profile(
            name, [](double y) { return std::sin(2 * kPi * y) / (2 * kPi) + 0.5 * y; },
            [](double y) { return std::cos(2 * kPi * y) + 0.5; },
            [](double y) { return -2 * kPi * std::sin(2 * kPi * y); }, Ny);
    if (name == "tanh")
        return make_profile(
            name, [a](double y) { return std::tanh(a * (y - 0.5)); },
            [a](double y) {
                const double t = std::tanh(a * (y - 0.5));
                return a * (1 - t * t);
            },
            [a](double y) {
                const double t = std::tanh(a * (y - 0.5));
                return -2 * a * a * t * (1 - t * t);
            },
            Ny);
    throw std::invalid_argument("unknown profile '" + name + "'");
}

cplx renardy_integral(const ShearProfile& p, cplx c) { return power_integral(p, c, 2); }
cplx renardy_integral_derivative(const ShearProfile& p, cplx c) {
    return 2.0 * power_integral(p, c, 3);
}

namespace {

void check_box(const ShearProfile& p, const SearchBox& b) {
    if (!(b.re1 > b.re0) || !(b.im1 > b.im0))
        throw std::invalid_argument("search box: empty rectangle");
    const auto [lo, hi] = std::minmax_element(p.Us.begin(), p.Us.end());
    const double m = pole_margin(p);
    const bool re_overlap = b.re0 <= *hi + m && b.re1 >= *lo - m;
    const bool im_overlap = b.im0 <= m && b.im1 >= -m;
    if (re_overlap && im_overlap)
        throw PoleProximityError(
            "search box intersects the range of U (shift the box off the real axis by more than " +
            std::to_string(m) + ")");
}

double arg_step(cplx a, cplx b) { return std::arg(b / a); }

double edge_winding(const ShearProfile& p, cplx z0, cplx z1, cplx f0, cplx f1, int depth) {
    const double d = arg_step(f0, f1);
    if (std::abs(d) < 0.3 || depth > 24) {
        if (depth > 24 && std::abs(d) > 1.0)
            throw PoleProximityError("contour passes too close to a root; adjust the box");
        return d;
    }
    const cplx zm = 0.5 * (z0 + z1);
    const cplx fm = renardy_integral(p, zm);
    if (std::abs(fm) < 1e-14)
        throw PoleProximityError("contour passes through a root; adjust the box");
    return edge_winding(p, z0, zm, f0, fm, depth + 1) + edge_winding(p, zm, z1, fm, f1, depth + 1);
}

int winding_unchecked(const ShearProfile& p, const SearchBox& b, int per_edge) {
    const cplx corners[5] = {{b.re0, b.im0}, {b.re1, b.im0}, {b.re1, b.im1}, {b.re0, b.im1},
                             {b.re0, b.im0}};
    double total = 0.0;
    for (int e = 0; e < 4; ++e) {
        cplx zp = corners[e];
        cplx fp = renardy_integral(p, zp);
        for (int s = 1; s <= per_edge; ++s) {
            const cplx z = corners[e] + (corners[e + 1] - corners[e]) * (double(s) / per_edge);
            const cplx f = renardy_integral(p, z);
            if (std::abs(f) < 1e-14)
                throw PoleProximityError("contour passes through a root; adjust the box");
            total += edge_winding(p, zp, z, fp, f, 0);
            zp = z;
            fp = f;
        }
    }
    return static_cast<int>(std::lround(total / (2 * kPi)));
}

void subdivide(const ShearProfile& p, const SearchBox& b, int count, int depth,
               std::vector<RenardyRoot>& out) {
    if (count <= 0) return;
    if (count == 1 || depth > 40) {
        cplx c(0.5 * (b.re0 + b.re1), 0.5 * (b.im0 + b.im1));
        bool ok = false;
        for (int it = 0; it < 60; ++it) {
            const cplx f = renardy_integral(p, c);
            if (std::abs(f) < 1e-13) {
                ok = true;
                break;
            }
            cplx step = f / renardy_integral_derivative(p, c);
            c -= step;
            const double slack = 1e-9 + 0.5 * std::max(b.re1 - b.re0, b.im1 - b.im0);
            if (c.real() < b.re0 - slack || c.real() > b.re1 + slack || c.imag() < b.im0 - slack ||
                c.imag() > b.im1 + slack)
                break;
            if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(c))) {
                ok = std::abs(renardy_integral(p, c)) < 1e-8;
                break;
            }
        }
        const bool inside = c.real() >= b.re0 - 1e-9 && c.real() <= b.re1 + 1e-9 &&
                            c.imag() >= b.im0 - 1e-9 && c.imag() <= b.im1 + 1e-9;
        if (ok && inside) {
            for (int m = 0; m < count; ++m) out.push_back({c, std::abs(renardy_integral(p, c))});
            return;
        }
        if (depth > 40) return;
    }
    // Off-center splits, so that roots on symmetry lines of the box do not
    // land on a cut; retried with another ratio if a cut still hits a root.
    for (double ratio : {0.4817, 0.5331, 0.4511, 0.5672}) {
        const double rm = b.re0 + ratio * (b.re1 - b.re0), im = b.im0 + ratio * (b.im1 - b.im0);
        const SearchBox q[4] = {{b.re0, rm, b.im0, im}, {rm, b.re1, b.im0, im},
                                {b.re0, rm, im, b.im1}, {rm, b.re1, im, b.im1}};
        int n[4];
        try {
            for (int i = 0; i < 4; ++i) n[i] = winding_unchecked(p, q[i], 16);
        } catch (const PoleProximityError&) {
            continue;
        }
        for (int i = 0; i < 4; ++i) subdivide(p, q[i], n[i], depth + 1, out);
        return;
    }
    throw PoleProximityError("renardy_roots: could not split the box away from its roots");
}

}  // namespace

int renardy_winding(const ShearProfile& p, const SearchBox& b) {
    check_box(p, b);
    return winding_unchecked(p, b, 64);
}

std::vector<RenardyRoot> renardy_roots(const ShearProfile& p, const SearchBox& b) {
    const int n = renardy_winding(p, b);
    std::vector<RenardyRoot> out;
    subdivide(p, b, n, 0, out);
    std::sort(out.begin(), out.end(), [](const RenardyRoot& a, const RenardyRoot& c) {
        return a.c.real() != c.c.real() ? a.c.real() < c.c.real() : a.c.imag() < c.c.imag();
    });
    std::vector<RenardyRoot> uniq;
    for (const auto& r : out)
        if (uniq.empty() || std::abs(uniq.back().c - r.c) > 1e-8) uniq.push_back(r);
    for (const auto& r : uniq)
        if (!(r.residual < 1e-8)) throw std::runtime_error("renardy_roots: unconverged root");
    return uniq;
}

// ---------------------------------------------------------------- linearized dynamics

struct LinearizedMode::Impl {
    ShearProfile p;
    int k;
    double eta;
    double h;
    std::vector<double> w;
    Eigen::MatrixXcd AI;  // viscous operator including the Neumann datum
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu;
    Eigen::MatrixXcd proj;  // admissible projector (empty when not needed)

    std::vector<cplx> velocity(const std::vector<cplx>& om) const {
        const int n = p.n();
        std::vector<cplx> u(n);
        u[0] = 0.0;
        for (int i = 1; i < n; ++i) u[i] = u[i - 1] + 0.5 * h * (om[i] + om[i - 1]);
        cplx mean = 0.0;
        for (int i = 0; i < n; ++i) mean += w[i] * u[i];
        for (auto& v : u) v -= mean;
        return u;
    }
};

LinearizedMode::LinearizedMode(const ShearProfile& p, int k, double eta, double dt)
    : impl_(std::make_shared<Impl>()), dt_(dt) {
    if (k == 0) throw std::invalid_argument("linearized mode: k must be nonzero");
    if (!(dt > 0.0)) throw std::invalid_argument("linearized mode: dt must be positive");
    if (eta < 0.0) throw std::invalid_argument("linearized mode: eta must be >= 0");
    auto& m = *impl_;
    m.p = p;
    m.k = k;
    m.eta = eta;
    m.h = p.dy();
    const int n = p.n();
    m.w = trap_weights(n, m.h);
    if (eta == 0.0) return;
    // Columns of the viscous operator by applying it to unit vectors.
    const double h = m.h, h2 = h * h;
    Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n - 1; ++i) {
        D(i, i - 1) = 1.0 / h2;
        D(i, i) = -2.0 / h2;
        D(i, i + 1) = 1.0 / h2;
    }
    D(0, 0) = -2.0 / h2;
    D(0, 1) = 2.0 / h2;
    D(n - 1, n - 1) = -2.0 / h2;
    D(n - 1, n - 2) = 2.0 / h2;
    // Datum row: g(w) = w(1) - w(0) - 2 i k int U u(w).
    Eigen::RowVectorXcd G = Eigen::RowVectorXcd::Zero(n);
    G(n - 1) += 1.0;
    G(0) -= 1.0;
    for (int j = 0; j < n; ++j) {
        std::vector<cplx> e(n, 0.0);
        e[j] = 1.0;
        const auto u = m.velocity(e);
        cplx s = 0.0;
        for (int i = 0; i < n; ++i) s += m.w[i] * p.Us[i] * u[i];
        G(j) -= 2.0 * cplx(0.0, k) * s;
    }
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(n);
    b(0) = -2.0 / h;
    b(n - 1) = 2.0 / h;
    m.AI = eta * (D + b * G);
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(n, n) - 0.5 * dt * m.AI;
    m.lu.compute(M);

    Eigen::FullPivLU<Eigen::MatrixXcd> rlu(m.AI);
    rlu.setThreshold(1e-10);
    Eigen::MatrixXcd right = rlu.kernel();
    Eigen::MatrixXcd at = m.AI.transpose();
    Eigen::FullPivLU<Eigen::MatrixXcd> llu(at);
    llu.setThreshold(1e-10);
    Eigen::MatrixXcd left = llu.kernel();
    if (rlu.dimensionOfKernel() > 0 && right.cols() == left.cols()) {
        Eigen::MatrixXcd lr = left.transpose() * right;
        m.proj = Eigen::MatrixXcd::Identity(n, n) - right * lr.lu().solve(left.transpose());
    }
}

std::vector<cplx> LinearizedMode::apply_explicit(const std::vector<cplx>& om) const {
    const auto& m = *impl_;
    const int n = m.p.n();
    const auto u = m.velocity(om);
    // C u: int_0^y u
    std::vector<cplx> cu(n);
    cu[0] = 0.0;
    for (int i = 1; i < n; ++i) cu[i] = cu[i - 1] + 0.5 * m.h * (u[i] + u[i - 1]);
    const cplx mik(0.0, -static_cast<double>(m.k));
    std::vector<cplx> r(n);
    for (int i = 0; i < n; ++i) r[i] = mik * (m.p.Us[i] * om[i] - m.p.d2Us[i] * cu[i]);
    return r;
}

std::vector<cplx> LinearizedMode::apply_implicit(const std::vector<cplx>& om) const {
    const auto& m = *impl_;
    const int n = m.p.n();
    std::vector<cplx> r(n, 0.0);
    if (m.eta == 0.0) return r;
    Eigen::Map<const Eigen::VectorXcd> x(om.data(), n);
    Eigen::Map<Eigen::VectorXcd> y(r.data(), n);
    y = m.AI * x;
    return r;
}

void LinearizedMode::project_admissible(std::vector<cplx>& om) const {
    const auto& m = *impl_;
    if (m.proj.size() == 0) return;
    const int n = m.p.n();
    Eigen::Map<Eigen::VectorXcd> x(om.data(), n);
    Eigen::VectorXcd t = m.proj * x;
    x = t;
}

void LinearizedMode::step(std::vector<cplx>& y) const {
    // ARS(4,4,3)
    static constexpr double Ae[5][4] = {{0, 0, 0, 0},
                                        {0.5, 0, 0, 0},
                                        {11.0 / 18, 1.0 / 18, 0, 0},
                                        {5.0 / 6, -5.0 / 6, 0.5, 0},
                                        {0.25, 1.75, 0.75, -1.75}};
    static constexpr double Ai[5][5] = {{0, 0, 0, 0, 0},
                                        {0, 0.5, 0, 0, 0},
                                        {0, 1.0 / 6, 0.5, 0, 0},
                                        {0, -0.5, 0.5, 0.5, 0},
                                        {0, 1.5, -1.5, 0.5, 0.5}};
    const auto& m = *impl_;
    const int n = m.p.n();
    const double dt = dt_;
    const bool imp = m.eta != 0.0;
    std::vector<std::vector<cplx>> E(5), I(5);
    std::vector<cplx> Y = y;
    E[0] = apply_explicit(Y);
    for (int s = 1; s <= 4; ++s) {
        std::vector<cplx> rhs = y;
        for (int j = 0; j < s; ++j) {
            if (Ae[s][j] != 0.0)
                for (int i = 0; i < n; ++i) rhs[i] += dt * Ae[s][j] * E[j][i];
            if (imp && j >= 1 && Ai[s][j] != 0.0)
                for (int i = 0; i < n; ++i) rhs[i] += dt * Ai[s][j] * I[j][i];
        }
        if (imp) {
            Eigen::Map<const Eigen::VectorXcd> r(rhs.data(), n);
            Eigen::VectorXcd sol = m.lu.solve(r);
            Y.assign(sol.data(), sol.data() + n);
            I[s].resize(n);
            for (int i = 0; i < n; ++i) I[s][i] = (Y[i] - rhs[i]) / (0.5 * dt);
        } else {
            Y = rhs;
        }
        if (s < 4) E[s] = apply_explicit(Y);
    }
    y = Y;
}

std::vector<cplx> linearized_step(const std::vector<cplx>& w, const ShearProfile& p, int k,
                                  double eta, double dt) {
    LinearizedMode m(p, k, eta, dt);
    auto out = w;
    m.step(out);
    return out;
}

std::vector<cplx> random_perturbation(const ShearProfile& p, unsigned long seed) {
    const int n = p.n();
    const double h = p.dy();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<cplx> u(n, 0.0);
    for (int m = 1; m <= 8; ++m) {
        const cplx a(nd(rng) / m, nd(rng) / m);
        for (int i = 0; i < n; ++i) u[i] += a * std::sin(m * kPi * p.y[i]);
    }
    const auto w = trap_weights(n, h);
    cplx mean = 0.0, qint = 0.0;
    for (int i = 0; i < n; ++i) {
        mean += w[i] * u[i];
        qint += w[i] * p.y[i] * (1 - p.y[i]);
    }
    for (int i = 0; i < n; ++i) u[i] -= mean / qint * p.y[i] * (1 - p.y[i]);
    auto om = fd1(u, h);
    double nrm = 0.0;
    for (int i = 0; i < n; ++i) nrm += w[i] * std::norm(om[i]);
    nrm = std::sqrt(nrm);
    for (auto& v : om) v /= nrm;
    return om;
}

std::vector<GrowthReport> growth_scan(const ShearProfile& p, const std::vector<int>& k_list,
                                      double eta, const ScanOptions& opt) {
    if (!(opt.horizon > 0.0)) throw std::invalid_argument("growth_scan: horizon must be positive");
    double umax = 0.0;
    for (double v : p.Us) umax = std::max(umax, std::abs(v));
    const auto w = trap_weights(p.n(), p.dy());
    std::vector<GrowthReport> out;
    for (int k : k_list) {
        if (k <= 0) throw std::invalid_argument("growth_scan: wavenumbers must be positive");
        const double T = opt.horizon / k;
        double dt = opt.dt_max;
        if (umax > 0.0) dt = std::min(dt, opt.cfl / (k * umax));
        const int steps = std::max(10, static_cast<int>(std::ceil(T / dt)));
        dt = T / steps;
        LinearizedMode mode(p, k, eta, dt);
        auto om = random_perturbation(p, opt.seed);
        mode.project_admissible(om);
        double n0 = 0.0;
        for (int i = 0; i < p.n(); ++i) n0 += w[i] * std::norm(om[i]);
        n0 = std::sqrt(n0);
        for (auto& v : om) v /= n0;

        GrowthReport rep;
        rep.k = k;
        rep.eta = eta;
        rep.seed = opt.seed;
        std::vector<double> ts{0.0}, ls{0.0};
        double tstop = T;
        for (int s = 1; s <= steps; ++s) {
            mode.step(om);
            double nr = 0.0, mx = 0.0;
            bool finite = true;
            for (int i = 0; i < p.n(); ++i) {
                nr += w[i] * std::norm(om[i]);
                const double a = std::abs(om[i]);
                if (!std::isfinite(a)) finite = false;
                mx = std::max(mx, a);
            }
            const double t = s * dt;
            if (!finite || mx > 1e6) {
                rep.blew_up = true;
                tstop = t;
                if (finite) {
                    ts.push_back(t);
                    ls.push_back(0.5 * std::log(nr));
                }
                break;
            }
            if (nr < 1e-26) {  // round-off floor: stop fitting decayed modes
                tstop = t;
                ts.push_back(t);
                ls.push_back(0.5 * std::log(nr));
                break;
            }
            ts.push_back(t);
            ls.push_back(0.5 * std::log(nr));
        }
        double t0 = 0.1 * T;
        if (tstop <= t0) t0 = 0.0;  // truncated window
        double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
        int cnt = 0;
        for (size_t i = 0; i < ts.size(); ++i) {
            if (ts[i] < t0 - 1e-15 || ts[i] > tstop + 1e-15) continue;
            sx += ts[i];
            sy += ls[i];
            sxx += ts[i] * ts[i];
            sxy += ts[i] * ls[i];
            syy += ls[i] * ls[i];
            ++cnt;
        }
        if (cnt >= 2) {
            const double vx = sxx - sx * sx / cnt, vy = syy - sy * sy / cnt;
            const double cxy = sxy - sx * sy / cnt;
            rep.slope = vx > 0 ? cxy / vx : 0.0;
            rep.fit_r2 = (vx > 0 && vy > 0) ? cxy * cxy / (vx * vy) : 1.0;
        }
        rep.delta = rep.slope / k;
        rep.fit_t0 = t0;
        rep.fit_t1 = tstop;
        out.push_back(rep);
    }
    return out;
}

double relative_spread(const std::vector<GrowthReport>& r) {
    if (r.empty()) return 0.0;
    double lo = r[0].delta, hi = r[0].delta, mean = 0.0;
    for (const auto& x : r) {
        lo = std::min(lo, x.delta);
        hi = std::max(hi, x.delta);
        mean += x.delta;
    }
    mean /= static_cast<double>(r.size());
    if (mean == 0.0) return hi == lo ? 0.0 : std::numeric_limits<double>::infinity();
    return (hi - lo) / std::abs(mean);
}

double growth_exponent(const std::vector<GrowthReport>& r, double floor) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (const auto& x : r) {
        if (x.slope <= floor) continue;
        const double lk = std::log(double(x.k)), ls = std::log(x.slope);
        sx += lk;
        sy += ls;
        sxx += lk * lk;
        sxy += lk * ls;
        ++cnt;
    }
    if (cnt < 2) return 0.0;
    const double vx = sxx - sx * sx / cnt;
    return vx > 0 ? (sxy - sx * sy / cnt) / vx : 0.0;
}

}  // namespace hns
