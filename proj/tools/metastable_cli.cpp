// Command-line driver: config-driven experiment runs plus plot-data export.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "metastable/config.hpp"
#include "metastable/io.hpp"
#include "metastable/runner.hpp"
#include "metastable/version.hpp"

namespace fs = std::filesystem;
using namespace metastable;

namespace {

struct GlobalOpts {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
};

ExperimentConfig load_config(const GlobalOpts& g) {
    if (g.config_path.empty()) throw ValidationError("--config PATH is required");
    auto res = parse_config(read_text_file(g.config_path));
    if (!res.ok()) {
        std::string msg = "config validation failed:";
        for (const auto& e : res.errors) msg += "\n  " + e;
        throw ValidationError(msg);
    }
    ExperimentConfig cfg = *res.config;
    if (!g.out_dir.empty()) cfg.out_dir = g.out_dir;
    if (g.seed) cfg.mc.seed = *g.seed;
    if (g.threads) cfg.mc.threads = *g.threads;
    return cfg;
}

int run_with(ExperimentConfig cfg) {
    Runner runner(std::move(cfg));
    auto rr = runner.run();
    std::cout << "record: " << (rr.out_dir / "record.json").string() << "\n";
    for (const auto& [stage, st] : rr.record["stage_status"].items())
        std::cout << "  " << stage << ": " << st.get<std::string>() << "\n";
    if (rr.record.contains("cache"))
        std::cout << "  cache: " << rr.record["cache"]["hits"] << " hits, "
                  << rr.record["cache"]["misses"] << " misses\n";
    return rr.any_failed ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"metastable: Eyring-Kramers predictions, discrete potential theory and "
                 "first-passage simulation for reversible gradient diffusions"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--config", g.config_path, "experiment config file");
    app.add_option("--out", g.out_dir, "output directory (overrides config)");
    std::uint64_t seed_val = 0;
    auto* seed_opt = app.add_option("--seed", seed_val, "override the MC master seed");
    int threads_val = 0;
    auto* threads_opt = app.add_option("--threads", threads_val, "override MC thread count");

    // `analyze` runs the analyses listed in the config; the named
    // subcommands run exactly one analysis each.
    app.add_subcommand("analyze", "run all analyses requested in the config");
    for (const auto& a : known_analyses())
        app.add_subcommand(a, "run only the '" + a + "' analysis");
    auto* report = app.add_subcommand("report", "emit plot-ready CSVs from a finished run");
    std::string report_dir, report_kind = "all";
    report->add_option("--dir", report_dir, "run directory containing record.json");
    report->add_option("--kind", report_kind, "survival | arrhenius | committor | all");

    CLI11_PARSE(app, argc, argv);
    if (seed_opt->count()) g.seed = seed_val;
    if (threads_opt->count()) g.threads = threads_val;

    try {
        auto* sub = app.get_subcommands().front();
        const std::string name = sub->get_name();
        if (name == "report") {
            fs::path dir = report_dir.empty() ? fs::path(g.out_dir) : fs::path(report_dir);
            if (dir.empty()) throw ValidationError("report needs --dir (or --out)");
            std::vector<std::string> kinds;
            if (report_kind == "all")
                kinds = {"survival", "arrhenius", "committor"};
            else
                kinds = {report_kind};
            int emitted = 0;
            for (const auto& k : kinds) {
                try {
                    for (const auto& p : emit_plot_data(dir, k)) {
                        std::cout << p.string() << "\n";
                        ++emitted;
                    }
                } catch (const MissingAnalysis& e) {
                    if (report_kind != "all") throw;
                    std::cout << "# " << k << ": " << e.what() << "\n";
                }
            }
            return emitted > 0 ? 0 : 1;
        }
        ExperimentConfig cfg = load_config(g);
        if (name != "analyze") cfg.analyses = {name};
        return run_with(std::move(cfg));
    } catch (const ParseError& e) {
        std::cerr << "parse error at line " << e.line << ", column " << e.column << ": "
                  << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
