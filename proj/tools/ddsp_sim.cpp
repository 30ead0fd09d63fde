#include "ddsp/config.hpp"
#include "ddsp/harness.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeError = 3;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"OFDM delay-Doppler superimposed-pilot link-level simulator"};

    std::string config_path;
    std::string preset_name;
    std::string out_path = "results.csv";
    int trials = -1;
    std::int64_t seed = -1;
    int threads = -1;

    app.add_option("--config", config_path, "JSON experiment config file");
    app.add_option("--preset", preset_name,
                   "Experiment preset: papr | pdr-sweep | snr-sweep | speed-sweep");
    app.add_option("--out", out_path, "Output CSV path");
    app.add_option("--trials", trials, "Monte Carlo trials per sweep point");
    app.add_option("--seed", seed, "Base RNG seed");
    app.add_option("--threads", threads, "Worker threads for trials");

    CLI11_PARSE(app, argc, argv);

    ddsp::ExperimentConfig cfg;
    try {
        if (!config_path.empty() && !preset_name.empty()) {
            std::cerr << "error: --config and --preset are mutually exclusive\n";
            return kExitConfigError;
        }
        if (!preset_name.empty())
            cfg = ddsp::preset(preset_name);
        else if (!config_path.empty())
            cfg = ddsp::parse_config(config_path);

        // Flags override file/preset values.
        if (trials >= 0) cfg.trials = trials;
        if (seed >= 0) cfg.base_seed = static_cast<std::uint64_t>(seed);
        if (threads >= 0) cfg.threads = threads;
        cfg.validate();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }

    try {
        const auto records = ddsp::run_sweep(cfg);
        ddsp::emit_csv(records, out_path);
        ddsp::write_manifest(cfg, out_path);
        std::cout << "wrote " << records.size() << " rows to " << out_path << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntimeError;
    }
    return 0;
}
