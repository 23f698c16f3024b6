// fibrevt: generate / validate / inspect a virtual-test dataset.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 runtime failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "fibrevt/analysis.hpp"
#include "fibrevt/config.hpp"
#include "fibrevt/dataset.hpp"
#include "fibrevt/errors.hpp"
#include "fibrevt/io.hpp"

namespace fs = std::filesystem;
using namespace fibrevt;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct Args {
    std::string config;
    std::string out;
    int workers = 0;  // 0: keep the config value
    std::optional<std::uint64_t> seed;
    bool resume = false;
    int inspect_id = -1;
};

PipelineConfig resolve_config(const Args& a) {
    PipelineConfig cfg = a.config.empty() ? PipelineConfig{} : load_config(a.config);
    if (a.workers > 0) cfg.workers = a.workers;
    if (a.seed) cfg.master_seed = *a.seed;
    cfg.validate();
    return cfg;
}

int cmd_generate(const Args& a) {
    const PipelineConfig cfg = resolve_config(a);
    GenerateOptions opts;
    opts.workers = cfg.workers;
    opts.resume = a.resume;
    const GenerationSummary s = generate_dataset(cfg, a.out, opts);
    std::cout << "generated " << s.records.size() << " records in " << a.out << " (" << s.computed
              << " computed, " << s.wall_seconds << " s)\n";
    for (const auto& [status, n] : s.counts) std::cout << "  " << to_string(status) << ": " << n << "\n";
    return kExitOk;
}

// Materials for the bound envelope: --config if given, otherwise the config
// recorded in the dataset manifest, otherwise the defaults.
PhaseMaterials validation_materials(const Args& a) {
    if (!a.config.empty()) return resolve_config(a).materials;
    const fs::path manifest = fs::path(a.out) / "manifest.json";
    if (!fs::exists(manifest)) return PhaseMaterials::defaults();
    const auto j = nlohmann::json::parse(read_text(manifest));
    return parse_config(j.at("config").get<std::string>()).materials;
}

int cmd_validate(const Args& a) {
    const PhaseMaterials materials = validation_materials(a);
    const auto records = read_labels_csv(fs::path(a.out) / "labels.csv");
    const TrendReport report = trend_report(records, materials);
    write_text_atomic(fs::path(a.out) / "trend_summary.csv", trend_summary_csv(report));
    write_text_atomic(fs::path(a.out) / "trend_by_vf.csv", trend_by_vf_csv(report));
    std::cout << trend_summary_csv(report);
    std::cout << "bound_violations," << report.bound_violations << "\n";
    std::cout << "yield_level_inversions," << report.yield_level_inversions << "\n";
    const auto failures = trend_failures(report);
    for (const auto& f : failures) std::cerr << "validate: " << f << "\n";
    return failures.empty() ? kExitOk : kExitRuntime;
}

int cmd_inspect(const Args& a) {
    const fs::path curve = fs::path(a.out) / "curves" / (sample_stem(a.inspect_id) + ".csv");
    if (!fs::exists(curve)) throw std::runtime_error("no curve for sample " + std::to_string(a.inspect_id) + " at " + curve.string());
    std::cout << read_text(curve);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fibrevt: virtual transverse-tension tests on random fibre microstructures"};
    app.set_version_flag("--version", std::string(FIBREVT_VERSION));
    app.require_subcommand(1);

    Args args;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", args.config, "Configuration file");
        sub->add_option("--out", args.out, "Dataset directory")->required();
    };

    auto* gen = app.add_subcommand("generate", "Generate the dataset");
    add_common(gen);
    gen->add_option("--workers", args.workers, "Concurrent samples (overrides the config)")->check(CLI::PositiveNumber);
    gen->add_option("--seed", args.seed, "Master seed (overrides the config)");
    gen->add_flag("--resume", args.resume, "Skip samples that already have a record");

    auto* val = app.add_subcommand("validate", "Trend and bound analysis of labels.csv");
    add_common(val);

    auto* ins = app.add_subcommand("inspect", "Print one sample's stress-strain curve CSV");
    ins->add_option("id", args.inspect_id, "Sample id")->required()->check(CLI::NonNegativeNumber);
    ins->add_option("--out", args.out, "Dataset directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return kExitConfig;
    }

    try {
        if (gen->parsed()) return cmd_generate(args);
        if (val->parsed()) return cmd_validate(args);
        return cmd_inspect(args);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
