#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>

#include "roughflow/experiments.hpp"
#include "roughflow/fixtures.hpp"

int main(int argc, char** argv) {
    CLI::App app{"roughflow: truncated graded algebras, rough paths and almost-flow experiments"};
    app.require_subcommand(1);

    struct CommonOpts {
        std::string config;
        std::string out = "out";
        std::optional<std::uint64_t> seed;
        std::optional<double> tolerance;
    };

    const std::vector<std::string> kinds{"chen",        "bchd",       "tree-products",
                                         "aromatic-products", "taylor", "composition",
                                         "convergence", "decay",      "four-point"};
    std::map<std::string, CommonOpts> opts;
    for (const auto& kind : kinds) {
        auto* sub = app.add_subcommand(kind, "run the '" + kind + "' experiment");
        auto& o = opts[kind];
        sub->add_option("--config", o.config, "JSON config file (comments allowed)")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--out", o.out, "output directory")->capture_default_str();
        sub->add_option("--seed", [&o](const std::vector<std::string>& v) {
            o.seed = std::stoull(v.at(0));
            return true;
        }, "RNG seed override");
        sub->add_option("--tolerance", [&o](const std::vector<std::string>& v) {
            o.tolerance = std::stod(v.at(0));
            return true;
        }, "tolerance override");
    }

    std::string fixtures_dir;
    auto* lf = app.add_subcommand("list-fixtures", "print bundled drivers, fields and golden tables");
    lf->add_option("--fixtures", fixtures_dir, "additional fixture directory to scan");

    CLI11_PARSE(app, argc, argv);

    if (lf->parsed()) {
        for (const auto& fx : roughflow::fixtures::catalog(fixtures_dir))
            std::cout << fx.category << "  " << fx.name << "  -  " << fx.description << '\n';
        return 0;
    }

    for (const auto& kind : kinds) {
        auto* sub = app.get_subcommand(kind);
        if (!sub->parsed()) continue;
        const auto& o = opts[kind];
        auto res = roughflow::run_experiment_file(o.config, kind, o.out, o.seed, o.tolerance);
        std::cout << res.summary;
        return res.exit_code;
    }
    return 2;
}
