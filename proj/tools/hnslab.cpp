// hnslab: batch driver for the experiments.

#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "hns/config.hpp"
#include "hns/experiments.hpp"
#include "hns/kernels.hpp"

int main(int argc, char** argv) {
    CLI::App app{"hydrostatic Navier-Stokes numerical lab"};
    app.require_subcommand(1);
    app.set_version_flag("--version", hns::code_version());

    std::string run_path, validate_path, out_root;
    auto* run = app.add_subcommand("run", "run the experiment described by a config file");
    run->add_option("config", run_path, "config file")->required()->check(CLI::ExistingFile);
    run->add_option("--output-root", out_root,
                    "directory that output_dir is relative to (default $HNS_OUTPUT_ROOT or .)");
    auto* val = app.add_subcommand("validate", "parse and validate a config file");
    val->add_option("config", validate_path, "config file")->required()->check(CLI::ExistingFile);
    auto* list = app.add_subcommand("list-experiments", "list the registered experiments");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*list) {
            for (const auto& [name, what] : hns::experiment_registry())
                std::printf("%-18s %s\n", name.c_str(), what.c_str());
            return 0;
        }
        if (*val) {
            const auto cfg = hns::load_config(validate_path);
            std::printf("ok: experiment %s, output_dir %s\n", hns::to_string(cfg.experiment),
                        cfg.output_dir.c_str());
            return 0;
        }
        if (*run) {
            const auto cfg = hns::load_config(run_path);
            const auto root = out_root.empty() ? hns::output_root() : std::filesystem::path(out_root);
            const auto res = hns::run_experiment(cfg, root);
            std::printf("%s: %s\n", hns::to_string(cfg.experiment), res.summary.c_str());
            std::printf("output: %s (kernels %s)\n", res.dir.string().c_str(),
                        hns::kernels::active().name);
            return res.exit_code;
        }
    } catch (const hns::ConfigError& e) {
        std::cerr << "invalid config:\n" << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
