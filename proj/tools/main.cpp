#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
    using namespace gapinterp::cli;
    CLI::App app{"Interpolation of stationary sequences with gaps and least-favourable densities"};
    app.require_subcommand(1);

    Flags flags;
    std::size_t grid = 0;
    std::vector<int> truncation;
    std::uint64_t seed = 0;
    std::string format = "json";
    std::string config;

    app.add_option("--grid", grid, "quadrature grid size")->check(CLI::PositiveNumber);
    app.add_option("--truncation", truncation, "truncation schedule for S1-S3")->delimiter(',');
    app.add_option("--seed", seed, "random seed");
    app.add_option("--out", flags.out, "output directory")->capture_default_str();
    app.add_option("--format", format, "artifacts to write")->check(CLI::IsMember({"json", "csv", "both"}))
        ->capture_default_str();

    for (const auto& name : kCommands) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("config", config, "experiment config (JSON)")->required();
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitValidation;
    }

    if (app.count("--grid")) flags.grid = grid;
    if (app.count("--truncation")) flags.truncation = truncation;
    if (app.count("--seed")) flags.seed = seed;
    flags.format = format == "csv" ? Format::Csv : format == "both" ? Format::Both : Format::Json;
    return run(app.get_subcommands().front()->get_name(), config, flags, std::cout);
}
