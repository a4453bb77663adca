#include "hns/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <numbers>
#include <random>

#include "hns/diagnostics.hpp"
#include "hns/instability.hpp"
#include "hns/io.hpp"
#include "json.hpp"

#ifndef HNS_VERSION
#define HNS_VERSION "unknown"
#endif

namespace hns {

namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

std::string b2s(bool b) { return b ? "1" : "0"; }

// Context for one run: output directory and the list of files produced.
struct Out {
    fs::path dir;
    std::vector<std::string> files;

    fs::path add(const std::string& name) {
        files.push_back(name);
        return dir / name;
    }
};

SpectralField field_from(const Grid& g, const std::function<double(double, double)>& f) {
    std::vector<double> s(static_cast<std::size_t>(g.Nx) * g.Ny);
    for (int iy = 0; iy < g.Ny; ++iy)
        for (int ix = 0; ix < g.Nx; ++ix) s[static_cast<std::size_t>(iy) * g.Nx + ix] = f(g.x(ix), g.y(iy));
    return to_spectral(g, s);
}

void write_monitors(Out& o, const Trajectory& tr) {
    CsvWriter w(o.add("monitors.csv"),
                {"t", "tau", "tau_below_floor", "norm_omega", "norm_dy_omega", "min_dy_omega",
                 "max_dy_omega", "omega_dot_l2", "h_l2", "truncation_warning"});
    for (const auto& m : tr.monitors)
        w.row({fmt17(m.t), fmt17(m.tau), b2s(m.tau_below_floor), fmt17(m.norm_omega),
               fmt17(m.norm_dy_omega), fmt17(m.min_dy_omega), fmt17(m.max_dy_omega),
               fmt17(m.omega_dot_l2), fmt17(m.h_l2), b2s(m.truncation_warning)});
    w.close();
    CsvWriter s(o.add("steps.csv"), {"t", "dt", "mean_residual", "wall_u", "wall_v", "max_omega"});
    for (const auto& r : tr.steps)
        s.row({fmt17(r.t), fmt17(r.dt), fmt17(r.mean_residual), fmt17(r.wall_u), fmt17(r.wall_v),
               fmt17(r.max_omega)});
    s.close();
}

void write_dumps(Out& o, const Trajectory& tr) {
    for (std::size_t i = 0; i < tr.snapshots.size(); ++i) {
        char name[64];
        const auto& s = tr.snapshots[i];
        std::snprintf(name, sizeof name, "u_%06zu.bin", i);
        write_field_dump(o.add(name), s.u, s.t, s.tau);
        std::snprintf(name, sizeof name, "omega_%06zu.bin", i);
        write_field_dump(o.add(name), s.omega, s.t, s.tau);
    }
}

std::string run_simulate(const ExperimentConfig& c, Out& o, bool& blew, std::string& msg) {
    const auto u0 = initial_data(c);
    auto tr = run(u0, c.solver, c.gevrey);
    write_monitors(o, tr);
    if (c.output.dumps) write_dumps(o, tr);
    blew = tr.blew_up;
    msg = tr.message;
    return "snapshots " + std::to_string(tr.snapshots.size()) + ", t_final " +
           fmt17(tr.snapshots.back().t);
}

std::string run_budget(const ExperimentConfig& c, Out& o, bool& blew, std::string& msg) {
    const auto u0 = initial_data(c);
    Monitors mon;
    mon.lift = true;
    mon.keep_every_step = true;
    auto tr = run(u0, c.solver, c.gevrey, mon);
    blew = tr.blew_up;
    msg = tr.message;
    write_monitors(o, tr);
    std::vector<Decomposition> dec;
    dec.reserve(tr.snapshots.size());
    for (std::size_t i = 0; i < tr.snapshots.size(); ++i)
        dec.push_back(assemble_and_decompose(tr.snapshots[i], tr.lifts[i]));
    std::vector<std::string> cols{"t", "j", "lhs_rate", "damping", "dissipation"};
    for (int q = 1; q <= 9; ++q) cols.push_back("T" + std::to_string(q));
    for (const char* s : {"residual", "max_term", "relative"}) cols.push_back(s);
    CsvWriter w(o.add("budget.csv"), cols);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < tr.snapshots.size(); ++i) {
        if (i % static_cast<std::size_t>(c.solver.cadence) != 0 && i + 2 != tr.snapshots.size())
            continue;
        for (int j : c.budget.j_list) {
            const auto b = energy_budget(std::span(tr.snapshots).subspan(i - 1, 3),
                                         std::span(dec).subspan(i - 1, 3), c.gevrey, j,
                                         c.solver.closure);
            std::vector<std::string> row{fmt17(b.t), std::to_string(j), fmt17(b.lhs_rate),
                                         fmt17(b.damping), fmt17(b.dissipation)};
            for (double x : b.T) row.push_back(fmt17(x));
            row.push_back(fmt17(b.residual));
            row.push_back(fmt17(b.max_term));
            row.push_back(fmt17(b.relative()));
            w.row(row);
            worst = std::max(worst, b.relative());
        }
    }
    w.close();
    return "worst relative residual " + fmt17(worst);
}

std::string run_convexity(const ExperimentConfig& c, Out& o, bool& blew, std::string& msg) {
    const auto u0 = initial_data(c);
    auto tr = run(u0, c.solver, c.gevrey);
    blew = tr.blew_up;
    msg = tr.message;
    write_monitors(o, tr);
    CsvWriter w(o.add("convexity.csv"), {"t", "min_dy_omega", "max_dy_omega", "wall_residual"});
    double mn = std::numeric_limits<double>::infinity();
    for (const auto& p : convexity_monitor(tr, c.solver.closure)) {
        w.row({fmt17(p.t), fmt17(p.min_dy_omega), fmt17(p.max_dy_omega), fmt17(p.wall_residual)});
        mn = std::min(mn, p.min_dy_omega);
    }
    w.close();
    const double floor = 2.0 * c.bounds.delta0;
    return "min d_y omega " + fmt17(mn) + (mn >= floor ? " >= " : " < ") + "2 delta0 = " +
           fmt17(floor);
}

std::string run_compat(const ExperimentConfig& c, Out& o) {
    const auto u0 = initial_data(c);
    const auto r = check_compatibility(u0, c.solver.closure);
    const bool ok = r.compatible(c.bounds.delta0);
    CsvWriter w(o.add("compat.csv"),
                {"mean_constraint_residual", "dirichlet_residual", "third_condition_residual",
                 "convexity_min", "convexity_max", "delta0", "compatible"});
    w.row({fmt17(r.mean_constraint_residual), fmt17(r.dirichlet_residual),
           fmt17(r.third_condition_residual), fmt17(r.convexity_min), fmt17(r.convexity_max),
           fmt17(c.bounds.delta0), b2s(ok)});
    w.close();
    return ok ? "compatible" : "not compatible";
}

// Analytic h history used by the scaling experiment, coefficients from the seed.
HHistory scaling_history(unsigned long seed, int cut) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ud(0.0, 2 * kPi);
    std::vector<double> ph(2 * static_cast<std::size_t>(cut) + 2);
    for (auto& p : ph) p = ud(rng);
    return [ph, cut](double t) {
        ScalarX s(cut);
        for (int k = 1; k <= cut; ++k)
            s[k] = cplx(std::cos(2 * t + ph[2 * k]), std::sin(3 * t + ph[2 * k + 1])) *
                   std::exp(-0.7 * k) * (1.0 + 0.5 * t);
        return s;
    };
}

std::string run_scaling(const ExperimentConfig& c, Out& o) {
    ScalingOptions opt;
    opt.t_end = c.scaling.t_end;
    opt.steps = c.scaling.steps;
    opt.Jbl = c.scaling.Jbl;
    opt.dy = c.scaling.dy;
    opt.Ymax = c.scaling.Ymax;
    const auto tags = c.scaling.tags.empty() ? all_lemma_tags() : c.scaling.tags;
    const auto rep = verify_smoothing_lemma(scaling_history(c.seed, opt.cut), c.gevrey,
                                            c.scaling.betas, tags, opt);
    CsvWriter w(o.add("scaling.csv"), {"beta", "tag", "lhs", "rhs", "ratio", "fitted_slope",
                                       "reference_exponent"});
    for (const auto& r : rep.rows)
        w.row({fmt17(r.beta), to_string(r.tag), fmt17(r.lhs), fmt17(r.rhs), fmt17(r.ratio),
               fmt17(rep.slope_for(r.tag)), fmt17(-paper_exponent(r.tag))});
    w.close();
    CsvWriter t(o.add("wall_traces.csv"), {"beta", "near", "far"});
    for (const auto& x : rep.traces) t.row({fmt17(x.beta), fmt17(x.near), fmt17(x.far)});
    t.close();
    std::string s;
    for (const auto& [tag, sl] : rep.slope) s += std::string(to_string(tag)) + " " + fmt17(sl) + "; ";
    return s;
}

ShearProfile config_profile(const ExperimentConfig& c) {
    return preset_profile(c.profile.name, c.profile.Ny, c.profile.param);
}

std::string run_scan(const ExperimentConfig& c, Out& o, bool& blew) {
    const auto p = config_profile(c);
    ScanOptions opt;
    opt.horizon = c.scan.horizon;
    opt.cfl = c.scan.cfl;
    opt.seed = c.seed;
    const auto rep = growth_scan(p, c.scan.k_list, c.scan.eta, opt);
    CsvWriter w(o.add("growth.csv"),
                {"k", "eta", "slope", "delta", "fit_t0", "fit_t1", "fit_r2", "blew_up", "seed"});
    for (const auto& r : rep) {
        w.row({std::to_string(r.k), fmt17(r.eta), fmt17(r.slope), fmt17(r.delta),
               fmt17(r.fit_t0), fmt17(r.fit_t1), fmt17(r.fit_r2), b2s(r.blew_up),
               std::to_string(r.seed)});
        blew = blew || r.blew_up;
    }
    w.close();
    const double spread = relative_spread(rep), expo = growth_exponent(rep);
    CsvWriter s(o.add("growth_summary.csv"), {"profile", "has_inflection", "relative_spread", "slope_exponent"});
    s.row({p.name, b2s(p.has_inflection), fmt17(spread), fmt17(expo)});
    s.close();
    return "relative spread " + fmt17(spread) + ", slope exponent " + fmt17(expo);
}

std::string run_renardy(const ExperimentConfig& c, Out& o) {
    const auto p = config_profile(c);
    const auto& b = c.renardy.box;
    const SearchBox box{b[0], b[1], b[2], b[3]};
    const int count = renardy_winding(p, box);
    const auto roots = renardy_roots(p, box);
    CsvWriter w(o.add("roots.csv"), {"re", "im", "residual"});
    for (const auto& r : roots) w.row({fmt17(r.c.real()), fmt17(r.c.imag()), fmt17(r.residual)});
    w.close();
    return "winding " + std::to_string(count) + ", roots " + std::to_string(roots.size());
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

const char* code_version() { return HNS_VERSION; }

fs::path output_root() {
    if (const char* e = std::getenv("HNS_OUTPUT_ROOT"); e && *e) return fs::path(e);
    return fs::current_path();
}

std::vector<std::pair<std::string, std::string>> experiment_registry() {
    return {
        {"simulate", "time integration with monitors, optional field dumps"},
        {"bl_scaling", "beta scaling of the weighted boundary-layer lift"},
        {"energy_budget", "term-by-term balance of the weighted interior energy"},
        {"convexity", "running minimum of d_y omega"},
        {"instability_scan", "growth rates of linearized shear-flow perturbations"},
        {"renardy", "complex roots of int (U - c)^-2 dy in a box"},
        {"compat_check", "compatibility report for the initial data"},
    };
}

SpectralField initial_data(const ExperimentConfig& c) {
    const Grid g(c.solver.Nx, c.solver.Ny);
    const auto& d = c.data;
    if (d.kind == "builder") {
        BuilderOptions b;
        b.delta0 = d.floor;
        b.ceiling = d.ceiling;
        b.amplitude = d.amplitude;
        b.k0 = d.k0;
        b.closure = c.solver.closure;
        return build_convex_compatible_data(g, b);
    }
    if (d.kind == "sine")
        return field_from(g, [&](double x, double y) {
            return std::sin(kPi * y) + d.amplitude * std::cos(d.k0 * x) * std::sin(2 * kPi * y);
        });
    if (d.kind == "shear")
        return field_from(g, [&](double x, double y) {
            return d.shear * (y * y - y) + d.amplitude * std::cos(d.k0 * x) * std::sin(2 * kPi * y);
        });
    if (d.kind == "file") {
        fs::path p(d.file);
        if (p.is_relative()) p = fs::path(c.base_dir) / p;
        const auto dump = read_field_dump(p);
        if (dump.Nx != g.Nx || dump.Ny != g.Ny)
            throw std::invalid_argument("data file grid " + std::to_string(dump.Nx) + "x" +
                                        std::to_string(dump.Ny) + " does not match the solver grid");
        return to_spectral(g, dump.samples);
    }
    throw std::invalid_argument("unknown data kind '" + d.kind + "'");
}

RunResult run_experiment(const ExperimentConfig& c, const fs::path& root) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string started = utc_now();
    Out o;
    o.dir = fs::path(c.output_dir).is_absolute() ? fs::path(c.output_dir) : root / c.output_dir;
    fs::create_directories(o.dir);
    bool blew = false;
    std::string msg, summary, error;
    try {
        switch (c.experiment) {
            case Experiment::simulate: summary = run_simulate(c, o, blew, msg); break;
            case Experiment::energy_budget: summary = run_budget(c, o, blew, msg); break;
            case Experiment::convexity: summary = run_convexity(c, o, blew, msg); break;
            case Experiment::compat_check: summary = run_compat(c, o); break;
            case Experiment::bl_scaling: summary = run_scaling(c, o); break;
            case Experiment::instability_scan: summary = run_scan(c, o, blew); break;
            case Experiment::renardy: summary = run_renardy(c, o); break;
        }
    } catch (const std::exception& e) {
        error = std::string(to_string(c.experiment)) + ": " + e.what();
    }
    const bool blowup_expected =
        c.output.expect_blowup || c.experiment == Experiment::instability_scan;
    RunResult res;
    res.dir = o.dir;
    res.files = o.files;
    res.exit_code = !error.empty() ? 1 : (blew && !blowup_expected ? 2 : 0);
    res.summary = !error.empty() ? error : summary;
    if (blew && !msg.empty()) res.summary += " [" + msg + "]";

    nlohmann::ordered_json m;
    m["experiment"] = to_string(c.experiment);
    m["code_version"] = code_version();
    m["seed"] = c.seed;
    m["started_utc"] = started;
    m["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    m["exit_code"] = res.exit_code;
    m["blow_up_flagged"] = blew;
    m["summary"] = res.summary;
    m["config"] = c.source_text;
    auto& files = m["files"] = nlohmann::ordered_json::array();
    for (const auto& f : o.files) {
        const auto p = o.dir / f;
        if (!fs::exists(p)) continue;
        files.push_back({{"path", f}, {"bytes", fs::file_size(p)}, {"sha256", sha256_file(p)}});
    }
    std::ofstream mf(o.dir / "manifest.json", std::ios::binary);
    mf << m.dump(2) << "\n";
    if (!mf) throw std::runtime_error("cannot write manifest in '" + o.dir.string() + "'");
    return res;
}

}  // namespace hns
