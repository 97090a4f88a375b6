// zdsim: run scenarios, presets, gain design and certificate checks.
//
// Exit codes: 0 ok, 2 configuration error, 3 divergence-cap truncation,
// 4 monitor violation / failed certificate.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zdsim/csv.hpp"
#include "zdsim/presets.hpp"
#include "zdsim/scenario_file.hpp"
#include "zdsim/sim_engine.hpp"

namespace fs = std::filesystem;
using namespace zdsim;

namespace {

constexpr int kOk = 0, kConfig = 2, kDiverged = 3, kMonitor = 4;

fs::path default_out() {
    const char* env = std::getenv("ZDSIM_OUTPUT_DIR");
    return env && *env ? fs::path(env) : fs::path("zdsim_out");
}

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<double> dt;
    std::optional<double> horizon;

    bool any() const { return seed || dt || horizon; }
    void apply(SimConfig& c) const {
        if (seed) c.seed = *seed;
        if (dt) c.dt = *dt;
        if (horizon) c.horizon = *horizon;
    }
};

int finish_run(SimConfig cfg, const fs::path& out) {
    cfg.validate();
    const SimTrace tr = run(cfg);
    csv::write_run_outputs(tr, cfg.thresholds, out);
    const std::string summary = io::emit_summary(cfg, tr);
    {
        std::ofstream os(out / "summary.yaml");
        os << summary;
    }
    std::cout << summary;
    std::cout << "wrote " << out.string() << "\n";
    if (!tr.monitors.valid()) {
        std::cerr << "monitor violation: see summary.yaml\n";
        return kMonitor;
    }
    if (tr.status == SimStatus::diverged) {
        std::cerr << tr.message << "\n";
        return kDiverged;
    }
    return kOk;
}

void warn_ignored(const std::vector<std::string>& keys, const Overrides& ov) {
    for (const auto& k : keys) std::cerr << "warning: preset run ignores override " << k << " (use --force)\n";
    if (ov.seed) std::cerr << "warning: preset run ignores --seed (use --force)\n";
    if (ov.dt) std::cerr << "warning: preset run ignores --dt (use --force)\n";
    if (ov.horizon) std::cerr << "warning: preset run ignores --horizon (use --force)\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Zero-dynamics attack detection simulator"};
    app.require_subcommand(1);

    std::string out_dir;
    Overrides ov;
    bool force = false;
    const auto add_run_flags = [&](CLI::App* sub) {
        sub->add_option("--out", out_dir, "output directory (default $ZDSIM_OUTPUT_DIR or ./zdsim_out)");
        sub->add_option("--seed", ov.seed, "noise seed");
        sub->add_option("--dt", ov.dt, "integration step [s]");
        sub->add_option("--horizon", ov.horizon, "simulated time [s]");
        sub->add_flag("--force", force, "let overrides change a preset");
    };

    std::string scenario_file;
    auto* run_cmd = app.add_subcommand("run", "simulate a scenario file");
    run_cmd->add_option("file", scenario_file, "scenario YAML")->required();
    add_run_flags(run_cmd);

    std::string preset_name;
    auto* preset_cmd = app.add_subcommand("preset", "simulate a built-in case study");
    preset_cmd->add_option("name", preset_name, "preset name")
        ->required()
        ->check(CLI::IsMember(presets::names()));
    add_run_flags(preset_cmd);

    std::string plant_file;
    std::optional<double> lambda0;
    auto* design_cmd = app.add_subcommand("design", "design K, L, L2 and the auxiliary system for a plant");
    design_cmd->add_option("file", plant_file, "plant YAML")->required();
    design_cmd->add_option("--lambda0", lambda0, "auxiliary pole (negative)");
    design_cmd->add_option("--out", out_dir, "output directory");

    std::string bundle_file;
    auto* verify_cmd = app.add_subcommand("verify", "Hurwitz, LMI and inter-event bound checks for a bundle");
    verify_cmd->add_option("file", bundle_file, "bundle YAML")->required();
    verify_cmd->add_option("--out", out_dir, "output directory");

    std::vector<std::string> batch_files;
    auto* batch_cmd = app.add_subcommand("batch", "simulate several scenario files concurrently");
    batch_cmd->add_option("files", batch_files, "scenario YAML files")->required();
    batch_cmd->add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    const fs::path out = out_dir.empty() ? default_out() : fs::path(out_dir);
    try {
        if (*run_cmd) {
            auto scn = io::load_scenario(scenario_file, force);
            if (scn.from_preset && !force) {
                warn_ignored(scn.ignored_overrides, ov);
            } else {
                ov.apply(scn.config);
            }
            if (scn.calibrate_gamma_x) {
                scn.config.thresholds.gamma_x = calibrate_gamma_x(scn.config);
                std::cout << "calibrated gamma_x = " << scn.config.thresholds.gamma_x << "\n";
            }
            return finish_run(scn.config, out);
        }
        if (*preset_cmd) {
            SimConfig cfg = presets::by_name(preset_name);
            if (force) ov.apply(cfg);
            else warn_ignored({}, ov);
            return finish_run(cfg, out / preset_name);
        }
        if (*design_cmd) {
            const auto pf = io::parse_plant_file(io::read_file(plant_file), plant_file);
            const DesignBundle b = design_gains(pf.plant, lambda0.value_or(pf.lambda0), pf.options);
            const std::string text = io::emit_bundle(pf.plant, b, presets::constants());
            std::cout << text;
            if (!out_dir.empty()) {
                csv::ensure_dir(out);
                std::ofstream(out / "bundle.yaml") << text;
                std::cout << "wrote " << (out / "bundle.yaml").string() << "\n";
            }
            return kOk;
        }
        if (*verify_cmd) {
            const auto bf = io::parse_bundle_file(io::read_file(bundle_file), bundle_file);
            const auto v = io::verify_bundle(bf);
            const std::string report = io::emit_verification(bf, v);
            std::cout << report;
            if (!out_dir.empty()) {
                csv::ensure_dir(out);
                std::ofstream(out / "verification.yaml") << report;
                std::ofstream t1(out / "theorem1_candidates.csv");
                io::write_lmi_candidates(t1, v.theorem1);
                std::ofstream l3(out / "lemma3_candidates.csv");
                io::write_lmi_candidates(l3, v.lemma3);
                std::cout << "wrote " << out.string() << "\n";
            }
            return v.ok() ? kOk : kMonitor;
        }
        if (*batch_cmd) {
            std::vector<SimConfig> configs;
            for (const auto& f : batch_files) {
                auto scn = io::load_scenario(f);
                if (scn.calibrate_gamma_x) scn.config.thresholds.gamma_x = calibrate_gamma_x(scn.config);
                configs.push_back(std::move(scn.config));
            }
            const auto results = batch(configs);
            int code = kOk;
            for (std::size_t i = 0; i < results.size(); ++i) {
                const auto& r = results[i];
                const fs::path dir = out / fs::path(batch_files[i]).stem();
                if (!r.ok()) {
                    std::cerr << batch_files[i] << ": " << r.error << "\n";
                    code = std::max(code, kConfig);
                    continue;
                }
                csv::write_run_outputs(*r.trace, configs[i].thresholds, dir);
                std::ofstream(dir / "summary.yaml") << io::emit_summary(configs[i], *r.trace);
                std::cout << batch_files[i] << ": " << to_string(r.trace->summary.verdict()) << " -> " << dir.string()
                          << "\n";
                if (!r.trace->monitors.valid()) code = std::max(code, kMonitor);
                else if (r.trace->status == SimStatus::diverged) code = std::max(code, kDiverged);
            }
            return code;
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfig;
    } catch (const UnsupportedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfig;
    } catch (const DesignError& e) {
        std::cerr << "design error: " << e.what() << "\n";
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfig;
    }
    return kOk;
}
