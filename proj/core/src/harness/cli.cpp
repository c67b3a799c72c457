#include "selfadj/harness/cli.hpp"

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "selfadj/error.hpp"
#include "selfadj/harness/config.hpp"
#include "selfadj/harness/experiments.hpp"

namespace selfadj::harness {

namespace {

struct Overrides {
    std::string config;
    std::optional<std::string> out;
    std::optional<std::size_t> k;
    std::optional<std::string> n;
};

void add_common(CLI::App* sub, Overrides& o) {
    sub->add_option("--config", o.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output path prefix");
    sub->add_option("--k", o.k, "number of eigenpairs")->check(CLI::PositiveNumber);
    sub->add_option("--n", o.n, "N or a comma-separated ladder of N");
}

int execute(Experiment experiment, const Overrides& o) {
    RunConfig config = load_config(o.config);
    if (config.experiment && *config.experiment != experiment) {
        throw Error(ErrorKind::InvalidConfig, "config is for '" + to_string(*config.experiment) +
                                                  "', not '" + to_string(experiment) + "'");
    }
    if (o.out) config.output = *o.out;
    if (o.k) config.k = *o.k;
    if (o.n) config.resolutions = parse_ladder(*o.n);
    return run_experiment(config, experiment, std::cout);
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"Spectra of the Laplacian on intervals under self-adjoint boundary conditions"};
    app.require_subcommand(1);
    Overrides o;
    const std::pair<const char*, Experiment> commands[] = {
        {"solve", Experiment::Solve},         {"converge", Experiment::Converge},
        {"condition", Experiment::Condition}, {"stability", Experiment::Stability},
        {"symmetry", Experiment::Symmetry},
    };
    const char* help[] = {"lowest eigenpairs for one N", "convergence against an oracle over an N ladder",
                          "conditioning of the boundary system F", "eigenvalue ratio K(eps) under U + i eps A",
                          "commutant check against a representation"};
    std::vector<CLI::App*> subs;
    for (std::size_t i = 0; i < std::size(commands); ++i) {
        subs.push_back(app.add_subcommand(commands[i].first, help[i]));
        add_common(subs.back(), o);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        for (std::size_t i = 0; i < subs.size(); ++i) {
            if (subs[i]->parsed()) return execute(commands[i].second, o);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
    return 2;
}

}  // namespace selfadj::harness
