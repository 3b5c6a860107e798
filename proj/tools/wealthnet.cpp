// Command line front end: run, twin, sweep-kt, robustness and report.

#include "wealthnet/config.hpp"
#include "wealthnet/errors.hpp"
#include "wealthnet/experiment.hpp"
#include "wealthnet/output.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace wealthnet;

namespace {

struct Settings {
    std::string preset;
    std::string config_file;
    std::string manifest;
    std::map<std::string, std::string> overrides;
};

void add_config_options(CLI::App& cmd, Settings& s) {
    cmd.add_option("--preset", s.preset, "Scale preset: desk or paper");
    cmd.add_option("--config", s.config_file, "INI configuration file");
    cmd.add_option("--manifest", s.manifest, "summary.json whose configuration is reused");
    for (const auto& key : config_keys()) {
        auto* opt = cmd.add_option_function<std::string>(
            "--" + key.name, [&s, name = key.name](const std::string& v) { s.overrides[name] = v; },
            key.description);
        opt->group("Model keys [" + key.section + "]");
    }
}

// Defaults, then preset, then file or manifest, then individual flags.
ScenarioConfig resolve(const Settings& s) {
    ScenarioConfig config = default_config();
    if (!s.preset.empty()) apply_preset(config, s.preset);
    if (!s.manifest.empty()) config = parse_summary(read_file(s.manifest)).config;
    if (!s.config_file.empty()) config = parse_config(read_file(s.config_file), config);
    const std::vector<std::pair<std::string, std::string>> overrides(s.overrides.begin(), s.overrides.end());
    apply_settings(config, overrides);
    config.validate();
    return config;
}

template <typename Writer>
void write_to(const fs::path& path, Writer&& writer) {
    fs::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError(path.string(), "cannot open for writing");
    writer(os);
    if (!os) throw IoError(path.string(), "write failed");
}

std::string quoted(std::string_view text) {
    std::string out = "\"";
    for (char c : text) {
        if (c == '"' || c == '\\') out += '\\';
        out += c == '\n' ? ' ' : c;
    }
    return out + '"';
}

std::vector<std::uint64_t> default_sweep() {
    std::vector<std::uint64_t> out;
    for (std::uint64_t k = 1; k <= 451; k += 50) out.push_back(k);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Artificial market with herding and taxation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    Settings settings;
    std::string out_dir = "out";
    std::string bundle_dir;
    std::vector<std::uint64_t> trigger_steps = default_sweep();
    double fraction = kMaxRewireFraction;

    auto* run = app.add_subcommand("run", "Monte Carlo run of one scenario");
    auto* twin = app.add_subcommand("twin", "Seed-matched reference and focal runs");
    auto* sweep = app.add_subcommand("sweep-kt", "Leader classes as a function of the trigger step");
    auto* robust = app.add_subcommand("robustness", "Community wealth with and without cross-community rewiring");
    auto* rep = app.add_subcommand("report", "Rebuild aggregate tables from replicate CSVs");

    for (auto* cmd : {run, twin, sweep, robust}) {
        add_config_options(*cmd, settings);
        cmd->add_option("--out", out_dir, "Output directory")->capture_default_str();
    }
    sweep->add_option("--kt-values", trigger_steps, "Trigger steps to evaluate")->delimiter(',');
    robust->add_option("--fraction", fraction, "Fraction of edges rewired")->capture_default_str();
    rep->add_option("--bundle", bundle_dir, "Directory written by run")->required();
    rep->add_option("--out", out_dir, "Output directory (defaults to the bundle)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (rep->parsed()) {
            const fs::path out = rep->count("--out") ? fs::path(out_dir) : fs::path(bundle_dir);
            report(bundle_dir, out);
            std::cout << "report written to " << out.string() << '\n';
            return 0;
        }

        const ScenarioConfig config = resolve(settings);
        const fs::path out(out_dir);

        if (run->parsed()) {
            const auto result = monte_carlo(config);
            emit_outputs(config, result, out);
            const auto& a = result.aggregate;
            std::cout << to_string(config.scenario) << ' ' << to_string(config.tax.scheme) << ": "
                      << a.replicates << " replicates, steady gini " << format_shortest(a.steady_gini.mean)
                      << ", steady volume " << format_shortest(a.steady_volume.mean) << '\n';
        } else if (twin->parsed()) {
            const auto twins = monte_carlo_twins(config);
            ScenarioConfig reference = config;
            reference.scenario = Scenario::Reference;
            ScenarioConfig focal = config;
            focal.scenario = Scenario::Focal;
            emit_outputs(reference, twins.reference, out / "reference");
            emit_outputs(focal, twins.focal, out / "focal");
            write_to(out / "twin.csv", [&](std::ostream& os) { write_twin_csv(os, config, twins); });
            std::cout << "twin bundles written to " << out.string() << '\n';
        } else if (sweep->parsed()) {
            const auto rows = sweep_kt(config, trigger_steps);
            write_to(out / "sweep_kt.csv", [&](std::ostream& os) { write_sweep_csv(os, rows); });
            std::cout << "sweep written to " << (out / "sweep_kt.csv").string() << '\n';
        } else if (robust->parsed()) {
            const auto result = robustness_rewire(config, fraction);
            write_to(out / "robustness.csv", [&](std::ostream& os) { write_robustness_csv(os, result); });
            bool all = true;
            for (bool o : result.overlap) all = all && o;
            std::cout << "rewired " << format_shortest(fraction) << ": confidence intervals "
                      << (all ? "overlap" : "differ") << " for " << (all ? "every" : "some") << " community\n";
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "error: kind=config key=" << e.key() << " message=" << quoted(e.what()) << '\n';
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: kind=io path=" << quoted(e.path()) << " message=" << quoted(e.what()) << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: kind=runtime message=" << quoted(e.what()) << '\n';
        return 1;
    }
}
