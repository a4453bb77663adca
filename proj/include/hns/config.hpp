#pragma once
// Experiment configuration: a sectioned key = value format parsed strictly.
// The grammar is in README.md.

#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "hns/boundary_layer.hpp"
#include "hns/diagnostics.hpp"
#include "hns/gevrey.hpp"
#include "hns/timestepper.hpp"

namespace hns {

struct ConfigIssue {
    int line = 0;  // 0 when not tied to a line
    std::string message;
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<ConfigIssue> issues);
    const std::vector<ConfigIssue>& issues() const { return issues_; }

private:
    std::vector<ConfigIssue> issues_;
};

enum class Experiment {
    simulate,
    bl_scaling,
    energy_budget,
    convexity,
    instability_scan,
    renardy,
    compat_check
};

const std::vector<std::string>& experiment_names();
Experiment parse_experiment(const std::string& s);
const char* to_string(Experiment e);

// Initial data for the flow experiments.
struct DataConfig {
    std::string kind = "builder";  // builder | sine | shear | file
    double amplitude = 0.2;
    int k0 = 1;
    double floor = 1.0;     // builder: lower bound for d_y^2 u0
    double ceiling = 4.0;   // builder: upper bound
    double shear = 1.5;     // shear: u0 = shear (y^2 - y) + amplitude cos(k0 x) sin(2 pi y)
    std::string file;       // file: binary field dump of u0
};

struct ProfileConfig {
    std::string name = "tanh";
    double param = 6.0;
    int Ny = 257;
};

struct ScanConfig {
    std::vector<int> k_list{8, 16, 32, 64};
    double eta = 0.0;
    double horizon = 20.0;
    double cfl = 0.1;
};

struct RenardyConfig {
    std::array<double, 4> box{-1.5, 1.5, 0.05, 2.0};  // re0 re1 im0 im1
};

struct ScalingConfig {
    std::vector<double> betas{8, 16, 32, 64, 128};
    std::vector<LemmaTag> tags;  // empty: all
    double t_end = 0.5;
    int steps = 4000;
    int Jbl = 12;
    double dy = 1.0 / 256.0;
    double Ymax = 4.0;
};

struct BudgetConfig {
    std::vector<int> j_list{0, 1, 2};
};

struct OutputConfig {
    bool dumps = false;        // binary field dumps at every snapshot
    bool expect_blowup = false;
};

struct ExperimentConfig {
    Experiment experiment = Experiment::simulate;
    std::string output_dir;    // relative to the output root
    unsigned long seed = 12345;
    SolverConfig solver;
    GevreyParams gevrey;
    AssumptionBounds bounds;
    DataConfig data;
    ProfileConfig profile;
    ScanConfig scan;
    RenardyConfig renardy;
    ScalingConfig scaling;
    BudgetConfig budget;
    OutputConfig output;
    std::string source_text;   // verbatim input, echoed into the manifest
    std::string base_dir;      // directory that relative data files resolve against
};

// Throws ConfigError listing every problem found.
ExperimentConfig parse_config(const std::string& text, const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);

}  // namespace hns
