#include "hns/config.hpp"

#include "hns/instability.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

namespace hns {

namespace {

std::string join_issues(const std::vector<ConfigIssue>& v) {
    std::string s;
    for (const auto& i : v) {
        if (!s.empty()) s += "\n";
        s += i.line > 0 ? "line " + std::to_string(i.line) + ": " + i.message : i.message;
    }
    return s;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

struct Bad {
    std::string what;
};

double to_double(const std::string& v) {
    double x = 0.0;
    const auto* end = v.data() + v.size();
    auto [p, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc() || p != end || !std::isfinite(x)) throw Bad{"expected a number, got '" + v + "'"};
    return x;
}

long to_long(const std::string& v) {
    long x = 0;
    const auto* end = v.data() + v.size();
    auto [p, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc() || p != end) throw Bad{"expected an integer, got '" + v + "'"};
    return x;
}

int to_int(const std::string& v) {
    const long x = to_long(v);
    if (x < -1000000000L || x > 1000000000L) throw Bad{"integer out of range: " + v};
    return static_cast<int>(x);
}

bool to_bool(const std::string& v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw Bad{"expected true or false, got '" + v + "'"};
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw Bad{"empty item in list '" + v + "'"};
        out.push_back(item);
    }
    if (out.empty()) throw Bad{"empty list"};
    return out;
}

template <class T, class F>
std::vector<T> list_of(const std::string& v, F conv) {
    std::vector<T> out;
    for (const auto& s : split_list(v)) out.push_back(conv(s));
    return out;
}

template <class F>
auto wrap_invalid(F f) {
    try {
        return f();
    } catch (const std::invalid_argument& e) {
        throw Bad{e.what()};
    }
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> m = {
        {"experiment.name",
         [](auto& c, auto& v) { c.experiment = wrap_invalid([&] { return parse_experiment(v); }); }},
        {"experiment.output_dir", [](auto& c, auto& v) { c.output_dir = v; }},
        {"experiment.seed",
         [](auto& c, auto& v) {
             const long s = to_long(v);
             if (s < 0) throw Bad{"seed must be non-negative"};
             c.seed = static_cast<unsigned long>(s);
         }},
        {"solver.epsilon", [](auto& c, auto& v) { c.solver.epsilon = to_double(v); }},
        {"solver.dt", [](auto& c, auto& v) { c.solver.dt = to_double(v); }},
        {"solver.T_end", [](auto& c, auto& v) { c.solver.T_end = to_double(v); }},
        {"solver.scheme",
         [](auto& c, auto& v) { c.solver.scheme = wrap_invalid([&] { return parse_scheme(v); }); }},
        {"solver.form",
         [](auto& c, auto& v) { c.solver.form = wrap_invalid([&] { return parse_form(v); }); }},
        {"solver.closure",
         [](auto& c, auto& v) { c.solver.closure = wrap_invalid([&] { return parse_closure(v); }); }},
        {"solver.Nx", [](auto& c, auto& v) { c.solver.Nx = to_int(v); }},
        {"solver.Ny", [](auto& c, auto& v) { c.solver.Ny = to_int(v); }},
        {"solver.cadence", [](auto& c, auto& v) { c.solver.cadence = to_int(v); }},
        {"solver.cfl", [](auto& c, auto& v) { c.solver.cfl = to_double(v); }},
        {"solver.blowup", [](auto& c, auto& v) { c.solver.blowup = to_double(v); }},
        {"solver.max_halvings", [](auto& c, auto& v) { c.solver.max_halvings = to_int(v); }},
        {"gevrey.gamma", [](auto& c, auto& v) { c.gevrey.gamma = to_double(v); }},
        {"gevrey.r", [](auto& c, auto& v) { c.gevrey.r = to_double(v); }},
        {"gevrey.tau0", [](auto& c, auto& v) { c.gevrey.tau0 = to_double(v); }},
        {"gevrey.tau1", [](auto& c, auto& v) { c.gevrey.tau1 = to_double(v); }},
        {"gevrey.beta", [](auto& c, auto& v) { c.gevrey.beta = to_double(v); }},
        {"gevrey.Jmax", [](auto& c, auto& v) { c.gevrey.Jmax = to_int(v); }},
        {"bounds.M", [](auto& c, auto& v) { c.bounds.M = to_double(v); }},
        {"bounds.delta0", [](auto& c, auto& v) { c.bounds.delta0 = to_double(v); }},
        {"data.kind", [](auto& c, auto& v) { c.data.kind = v; }},
        {"data.amplitude", [](auto& c, auto& v) { c.data.amplitude = to_double(v); }},
        {"data.k0", [](auto& c, auto& v) { c.data.k0 = to_int(v); }},
        {"data.floor", [](auto& c, auto& v) { c.data.floor = to_double(v); }},
        {"data.ceiling", [](auto& c, auto& v) { c.data.ceiling = to_double(v); }},
        {"data.shear", [](auto& c, auto& v) { c.data.shear = to_double(v); }},
        {"data.file", [](auto& c, auto& v) { c.data.file = v; }},
        {"profile.name", [](auto& c, auto& v) { c.profile.name = v; }},
        {"profile.param", [](auto& c, auto& v) { c.profile.param = to_double(v); }},
        {"profile.Ny", [](auto& c, auto& v) { c.profile.Ny = to_int(v); }},
        {"scan.k_list", [](auto& c, auto& v) { c.scan.k_list = list_of<int>(v, to_int); }},
        {"scan.eta", [](auto& c, auto& v) { c.scan.eta = to_double(v); }},
        {"scan.horizon", [](auto& c, auto& v) { c.scan.horizon = to_double(v); }},
        {"scan.cfl", [](auto& c, auto& v) { c.scan.cfl = to_double(v); }},
        {"renardy.box",
         [](auto& c, auto& v) {
             const auto b = list_of<double>(v, to_double);
             if (b.size() != 4) throw Bad{"box needs four numbers: re0, re1, im0, im1"};
             std::copy(b.begin(), b.end(), c.renardy.box.begin());
         }},
        {"scaling.betas", [](auto& c, auto& v) { c.scaling.betas = list_of<double>(v, to_double); }},
        {"scaling.tags",
         [](auto& c, auto& v) {
             c.scaling.tags = list_of<LemmaTag>(
                 v, [](const std::string& s) { return wrap_invalid([&] { return parse_lemma_tag(s); }); });
         }},
        {"scaling.t_end", [](auto& c, auto& v) { c.scaling.t_end = to_double(v); }},
        {"scaling.steps", [](auto& c, auto& v) { c.scaling.steps = to_int(v); }},
        {"scaling.Jbl", [](auto& c, auto& v) { c.scaling.Jbl = to_int(v); }},
        {"scaling.dy", [](auto& c, auto& v) { c.scaling.dy = to_double(v); }},
        {"scaling.Ymax", [](auto& c, auto& v) { c.scaling.Ymax = to_double(v); }},
        {"budget.j_list", [](auto& c, auto& v) { c.budget.j_list = list_of<int>(v, to_int); }},
        {"output.dumps", [](auto& c, auto& v) { c.output.dumps = to_bool(v); }},
        {"output.expect_blowup", [](auto& c, auto& v) { c.output.expect_blowup = to_bool(v); }},
    };
    return m;
}

bool known_section(const std::string& s) {
    for (const auto& [k, _] : setters())
        if (k.compare(0, s.size() + 1, s + ".") == 0) return true;
    return false;
}

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> n{"simulate",         "bl_scaling", "energy_budget",
                                            "convexity",        "instability_scan",
                                            "renardy",          "compat_check"};
    return n;
}

Experiment parse_experiment(const std::string& s) {
    const auto& n = experiment_names();
    const auto it = std::find(n.begin(), n.end(), s);
    if (it == n.end()) throw std::invalid_argument("unknown experiment '" + s + "'");
    return static_cast<Experiment>(it - n.begin());
}

const char* to_string(Experiment e) { return experiment_names()[static_cast<int>(e)].c_str(); }

ExperimentConfig parse_config(const std::string& text, const std::string& base_dir) {
    ExperimentConfig cfg;
    cfg.source_text = text;
    cfg.base_dir = base_dir;
    std::vector<ConfigIssue> issues;
    std::map<std::string, int> seen;  // full key -> line
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                issues.push_back({lineno, "malformed section header '" + line + "'"});
                continue;
            }
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            if (!known_section(section)) {
                issues.push_back({lineno, "unknown section [" + section + "]"});
                section = "\x01";
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            issues.push_back({lineno, "expected 'key = value', got '" + line + "'"});
            continue;
        }
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (section == "\x01") continue;  // already reported
        if (section.empty()) {
            issues.push_back({lineno, "key '" + key + "' appears before any section"});
            continue;
        }
        const std::string full = section + "." + key;
        const auto it = setters().find(full);
        if (it == setters().end()) {
            issues.push_back({lineno, "unknown key '" + key + "' in section [" + section + "]"});
            continue;
        }
        if (auto prev = seen.find(full); prev != seen.end()) {
            issues.push_back({lineno, "duplicate key '" + full + "' (first set on line " +
                                          std::to_string(prev->second) + ", again on line " +
                                          std::to_string(lineno) + ")"});
            continue;
        }
        seen[full] = lineno;
        if (value.empty()) {
            issues.push_back({lineno, "empty value for '" + full + "'"});
            continue;
        }
        try {
            it->second(cfg, value);
        } catch (const Bad& b) {
            issues.push_back({lineno, full + ": " + b.what});
        }
    }
    if (!seen.count("experiment.name")) issues.push_back({0, "missing required key experiment.name"});

    auto line_of = [&](const std::string& k) {
        const auto it = seen.find(k);
        return it == seen.end() ? 0 : it->second;
    };
    auto check = [&](bool ok, const std::string& key, const std::string& msg) {
        if (!ok) issues.push_back({line_of(key), msg});
    };
    auto guarded = [&](const std::string& key, const std::function<void()>& f) {
        try {
            f();
        } catch (const std::invalid_argument& e) {
            issues.push_back({line_of(key), e.what()});
        }
    };

    if (issues.empty()) {
        const Experiment ex = cfg.experiment;
        if (cfg.output_dir.empty()) cfg.output_dir = to_string(ex);
        guarded("gevrey.beta", [&] { cfg.gevrey.validate(); });
        guarded("bounds.delta0", [&] { cfg.bounds.validate(); });
        const bool flow = ex == Experiment::simulate || ex == Experiment::energy_budget ||
                          ex == Experiment::convexity || ex == Experiment::compat_check;
        if (flow) {
            check(cfg.solver.Nx >= 8 && is_pow2(cfg.solver.Nx), "solver.Nx",
                  "solver.Nx must be a power of two >= 8");
            check(cfg.solver.Ny >= 9 && cfg.solver.Ny % 2 == 1, "solver.Ny", "solver.Ny must be odd and >= 9");
            guarded("solver.dt", [&] { cfg.solver.validate(); });
            const auto& k = cfg.data.kind;
            check(k == "builder" || k == "sine" || k == "shear" || k == "file", "data.kind",
                  "data.kind must be builder, sine, shear or file");
            if (k == "builder") {
                check(cfg.data.floor > 0.0, "data.floor", "data.floor must be positive");
                check(cfg.data.ceiling >= cfg.data.floor, "data.ceiling",
                      "data.ceiling must be >= data.floor");
            }
            check(cfg.data.k0 >= 1 && cfg.data.k0 <= cfg.solver.Nx / 3, "data.k0",
                  "data.k0 must lie in 1..Nx/3");
            if (k == "file") {
                namespace fs = std::filesystem;
                fs::path p(cfg.data.file);
                if (p.is_relative()) p = fs::path(base_dir) / p;
                check(!cfg.data.file.empty() && fs::exists(p), "data.file",
                      "data file '" + cfg.data.file + "' does not exist");
            }
        }
        if (ex == Experiment::energy_budget)
            for (int j : cfg.budget.j_list)
                check(j >= 0 && j <= cfg.gevrey.Jmax, "budget.j_list",
                      "budget.j_list entries must lie in 0..Jmax");
        if (ex == Experiment::bl_scaling) {
            check(cfg.gevrey.beta > 4.0, "gevrey.beta",
                  "beta must exceed 4 for bl_scaling (the half-line transfer function "
                  "1/(2 - sqrt(beta (j+1) + i zeta)) needs beta > 4)");
            for (double b : cfg.scaling.betas)
                check(b > 4.0, "scaling.betas",
                      "scaling.betas entries must exceed 4 (the half-line transfer function "
                      "needs beta > 4)");
            check(cfg.scaling.betas.size() >= 2, "scaling.betas", "scaling.betas needs two values");
            check(cfg.scaling.t_end > 0.0, "scaling.t_end", "scaling.t_end must be positive");
            check(cfg.scaling.steps >= 10, "scaling.steps", "scaling.steps must be >= 10");
            check(cfg.scaling.Jbl >= 0, "scaling.Jbl", "scaling.Jbl must be >= 0");
            check(cfg.scaling.dy > 0.0 && cfg.scaling.dy <= 0.1, "scaling.dy",
                  "scaling.dy must lie in (0, 0.1]");
            check(cfg.scaling.Ymax >= 2.0, "scaling.Ymax", "scaling.Ymax must be >= 2");
        }
        if (ex == Experiment::instability_scan || ex == Experiment::renardy) {
            const auto names = preset_names();
            check(std::find(names.begin(), names.end(), cfg.profile.name) != names.end(),
                  "profile.name", "unknown profile '" + cfg.profile.name + "'");
            check(cfg.profile.Ny >= 17, "profile.Ny", "profile.Ny must be >= 17");
        }
        if (ex == Experiment::instability_scan) {
            const int cut = cfg.solver.Nx / 3;
            for (int k : cfg.scan.k_list)
                check(k >= 1 && k <= cut, "scan.k_list",
                      "scan.k_list entry " + std::to_string(k) +
                          " outside the dealiased range 1.." + std::to_string(cut) +
                          " of solver.Nx");
            check(cfg.scan.eta >= 0.0, "scan.eta", "scan.eta must be >= 0");
            check(cfg.scan.horizon > 0.0, "scan.horizon", "scan.horizon must be positive");
            check(cfg.scan.cfl > 0.0, "scan.cfl", "scan.cfl must be positive");
        }
        if (ex == Experiment::renardy) {
            const auto& b = cfg.renardy.box;
            check(b[1] > b[0] && b[3] > b[2], "renardy.box", "renardy.box must be a nonempty rectangle");
        }
    }
    if (!issues.empty()) {
        std::stable_sort(issues.begin(), issues.end(),
                         [](const ConfigIssue& a, const ConfigIssue& b) { return a.line < b.line; });
        throw ConfigError(std::move(issues));
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    auto dir = std::filesystem::path(path).parent_path().string();
    if (dir.empty()) dir = ".";
    return parse_config(ss.str(), dir);
}

}  // namespace hns
