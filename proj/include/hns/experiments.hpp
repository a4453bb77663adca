#pragma once
// Experiment registry and driver: builds inputs from a config, runs one
// experiment, writes CSV outputs, optional dumps and a manifest.

#include <filesystem>
#include <string>
#include <vector>

#include "hns/config.hpp"

namespace hns {

struct RunResult {
    int exit_code = 0;                 // 0 ok, 2 unexpected blow-up
    std::filesystem::path dir;
    std::vector<std::string> files;    // relative to dir, manifest excluded
    std::string summary;
};

// $HNS_OUTPUT_ROOT when set, else the current directory.
std::filesystem::path output_root();

SpectralField initial_data(const ExperimentConfig& cfg);

// One-line description per registered experiment.
std::vector<std::pair<std::string, std::string>> experiment_registry();

RunResult run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& root);

const char* code_version();

}  // namespace hns
