//
// superrad — batch CLI for collective-emission noise experiments.
// Subcommands: norms, spectrum, rates, markov-check, km-compare.
// Exit codes: 0 success, 2 configuration error, 3 numerical non-convergence.
//

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "superrad/experiments.hpp"

namespace {

struct CliOverrides {
    std::string config_path;
    std::string output_dir;
    std::string model;
    std::string mode;
    std::vector<int> sweep;
    std::vector<double> dipole;
    std::vector<int> dims;
    double spacing = -1.0;
    double lambda_a = -1.0;
    double gamma = -1.0;
    double rel_tol = -1.0;
    double dt = -1.0;
    double t_end = -1.0;
    int bins = -1;
    long eigensolver_cap = -1;
    int jobs = -1;
    int seed = -1;
    int include_diagonal = -1;  // tri-state: unset/-1, 0, 1
    int corner_only = -1;
};

void add_common_options(CLI::App* cmd, CliOverrides& o)
{
    cmd->add_option("-c,--config", o.config_path, "JSON config file");
    cmd->add_option("-o,--output-dir", o.output_dir, "output directory");
    cmd->add_option("--model", o.model, "kernel|km|both");
    cmd->add_option("--mode", o.mode, "lattice mode: 3d|2d");
    cmd->add_option("--sweep", o.sweep, "side lengths, ascending");
    cmd->add_option("--dims", o.dims, "explicit lattice extents n1 n2 n3");
    cmd->add_option("--dipole", o.dipole, "dipole direction (3 components)");
    cmd->add_option("-d,--spacing", o.spacing, "qubit spacing d [cm]");
    cmd->add_option("--lambda", o.lambda_a, "radiation wavelength [cm]");
    cmd->add_option("--gamma", o.gamma, "single-atom decay rate [1/s]");
    cmd->add_option("--rel-tol", o.rel_tol, "quadrature relative tolerance");
    cmd->add_option("--dt", o.dt, "integrator step [s]");
    cmd->add_option("--t-end", o.t_end, "integrator horizon [s]");
    cmd->add_option("--bins", o.bins, "histogram bin count");
    cmd->add_option("--eigensolver-cap", o.eigensolver_cap, "max N for dense eigensolves");
    cmd->add_option("-j,--jobs", o.jobs, "worker count for independent scan points");
    cmd->add_option("--seed", o.seed, "seed for randomized checks");
    cmd->add_flag("--include-diagonal{1},--no-include-diagonal{0}", o.include_diagonal,
                  "include the Gamma/2 self term in norm sums");
    cmd->add_flag("--corner-only{1},--all-atoms{0}", o.corner_only,
                  "norm sums for the corner atom only / averaged over all atoms");
}

superrad::ExperimentConfig build_config(superrad::Experiment experiment, const CliOverrides& o)
{
    superrad::ExperimentConfig cfg;
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in)
            throw superrad::ConfigError("config: cannot open " + o.config_path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw superrad::ConfigError("config: invalid JSON: " + std::string(e.what()));
        }
        cfg = superrad::config_from_json(j);
    }
    cfg.experiment = experiment;

    // flags win over the config file
    if (!o.output_dir.empty()) cfg.output_dir = o.output_dir;
    if (!o.model.empty()) cfg.model = superrad::parse_model(o.model);
    if (!o.mode.empty()) {
        if (o.mode != "2d" && o.mode != "3d")
            throw superrad::ConfigError("mode: expected 2d or 3d");
        cfg.planar = (o.mode == "2d");
    }
    if (!o.sweep.empty()) cfg.sweep = o.sweep;
    if (!o.dims.empty()) {
        if (o.dims.size() != 3)
            throw superrad::ConfigError("dims: expected 3 extents");
        cfg.dims = o.dims;
    }
    if (!o.dipole.empty()) {
        if (o.dipole.size() != 3)
            throw superrad::ConfigError("dipole: expected 3 components");
        cfg.dipole = {o.dipole[0], o.dipole[1], o.dipole[2]};
    }
    if (o.spacing >= 0.0) cfg.spacing = o.spacing;
    if (o.lambda_a >= 0.0) cfg.lambda_a = o.lambda_a;
    if (o.gamma >= 0.0) cfg.gamma = o.gamma;
    if (o.rel_tol >= 0.0) cfg.quadrature.rel_tol = o.rel_tol;
    if (o.dt >= 0.0) cfg.dt = o.dt;
    if (o.t_end >= 0.0) cfg.t_end = o.t_end;
    if (o.bins >= 0) cfg.bins = o.bins;
    if (o.eigensolver_cap >= 0) cfg.eigensolver_cap = o.eigensolver_cap;
    if (o.jobs >= 0) cfg.jobs = static_cast<unsigned>(o.jobs);
    if (o.seed >= 0) cfg.seed = static_cast<unsigned>(o.seed);
    if (o.include_diagonal >= 0) cfg.include_diagonal = (o.include_diagonal == 1);
    if (o.corner_only >= 0) cfg.corner_only = (o.corner_only == 1);
    return cfg;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"collective-emission (superradiance) noise experiments"};
    app.require_subcommand(1);

    struct Cmd {
        const char* name;
        const char* desc;
        superrad::Experiment experiment;
    };
    const Cmd cmds[] = {
        {"norms", "norm-sum sweep and power-law fit", superrad::Experiment::Norms},
        {"spectrum", "eigenspectra and decay-rate histograms", superrad::Experiment::Spectrum},
        {"rates", "largest collective rate sweep and fit", superrad::Experiment::Rates},
        {"markov-check", "exact vs Markov dynamics on a small array",
         superrad::Experiment::MarkovCheck},
        {"km-compare", "memory-kernel vs KM element comparison table",
         superrad::Experiment::KmCompare},
    };

    CliOverrides overrides;
    superrad::Experiment chosen = superrad::Experiment::Norms;
    for (const Cmd& c : cmds) {
        CLI::App* sub = app.add_subcommand(c.name, c.desc);
        add_common_options(sub, overrides);
        sub->callback([&chosen, exp = c.experiment] { chosen = exp; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const superrad::ExperimentConfig cfg = build_config(chosen, overrides);
        const std::vector<std::string> files = superrad::run_experiment(cfg);
        for (const std::string& f : files)
            std::cout << f << "\n";
        return 0;
    } catch (const superrad::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const superrad::NumericsError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
