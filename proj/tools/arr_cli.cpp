// Command-line front end for the pipeline stages.
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "arrkit/core/error.hpp"
#include "arrkit/pipeline/pipeline.hpp"

namespace {

int fail(std::string_view type, std::string_view message) {
    nlohmann::json err{{"error", {{"type", type}, {"message", message}}}};
    std::cerr << err.dump() << "\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace arrkit;

    CLI::App app{"Autoencoder reconstruction ratio pipeline"};
    app.require_subcommand(1, 1);
    app.fallthrough();  // global flags may follow the verb
    std::string config_path, out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> threads;
    app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "master seed");
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

    const std::vector<std::pair<std::string, void (*)(const pipeline::RunConfig&)>> verbs = {
        {"generate", pipeline::cmd_generate}, {"train", pipeline::cmd_train},   {"arr", pipeline::cmd_arr},
        {"analyze", pipeline::cmd_analyze},   {"forecast", pipeline::cmd_forecast}, {"report", pipeline::cmd_report},
        {"all", pipeline::run_all}};
    const char* help[] = {"write the tick panel and calendar", "fit the autoencoder and PCA models",
                          "compute ARR series",                "KDE grids and rank correlations",
                          "forecasting experiments",            "aggregate stage outputs into one report",
                          "run every stage in order"};
    for (std::size_t i = 0; i < verbs.size(); ++i) app.add_subcommand(verbs[i].first, help[i]);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("usage", e.what());
    }

    try {
        auto config = config_path.empty() ? pipeline::default_config() : pipeline::load_config(config_path);
        if (!out_dir.empty()) config.output_dir = out_dir;
        if (seed) {
            config.seed = *seed;
            config.synthetic.seed = *seed;
        }
        if (threads) config.threads = *threads;
        for (const auto& [name, fn] : verbs)
            if (app.got_subcommand(name)) fn(config);
    } catch (const DataError& e) {
        return fail("data", e.what());
    } catch (const TrainingError& e) {
        return fail("training", e.what());
    } catch (const Error& e) {
        return fail("pipeline", e.what());
    } catch (const std::exception& e) {
        return fail("internal", e.what());
    }
    return 0;
}
