#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gaplab/experiment.hpp"
#include "gaplab/io.hpp"

int main(int argc, char** argv) {
    CLI::App app{"gaplab: reproducible threshold experiments"};
    app.require_subcommand(1);

    int threads = 1;
    if (const char* env = std::getenv("GAPLAB_THREADS")) threads = std::atoi(env);

    std::string config_path;
    std::optional<std::uint64_t> seed_override;
    std::uint64_t seed_value = 0;

    auto* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("config", config_path, "path to the JSON config")->required();
    auto* seed_opt = run->add_option("--seed-override", seed_value, "replace the config seed");
    run->add_option("--threads", threads, "worker threads (deterministic for any count)");

    auto* list = app.add_subcommand("list", "list experiment kinds and their parameters");

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "check a config against its schema");
    validate->add_option("config", validate_path, "path to the JSON config")->required();

    CLI11_PARSE(app, argc, argv);

    if (list->parsed()) {
        for (const auto& info : gaplab::experiment::list_experiments()) {
            std::printf("%-18s %s\n", info.kind.c_str(), info.topic.c_str());
            std::printf("%-18s   params:", "");
            for (const auto& p : info.required_params) std::printf(" %s", p.c_str());
            std::printf(" seed\n");
        }
        return 0;
    }

    if (validate->parsed()) {
        try {
            const auto config = gaplab::experiment::json::parse(
                gaplab::io::read_file(validate_path));
            gaplab::experiment::validate_config(config);
            std::printf("ok\n");
            return 0;
        } catch (const std::exception& e) {
            std::fprintf(stderr, "config error: %s\n", e.what());
            return 2;
        }
    }

    if (seed_opt->count() > 0) seed_override = seed_value;
    std::string message;
    const int status =
        gaplab::experiment::run_experiment_file(config_path, seed_override, threads, &message);
    if (status == 0) std::printf("%s\n", message.c_str());
    else std::fprintf(stderr, "%s\n", message.c_str());
    return status;
}
