#pragma once
//
// Experiment configuration: JSON config file plus command-line overrides,
// validated before any computation starts.
//

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "superrad/kernel.hpp"
#include "superrad/quadrature.hpp"

namespace superrad {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Experiment { Norms, Spectrum, Rates, MarkovCheck, KmCompare };
enum class ModelChoice { Kernel, KM, Both };

struct ExperimentConfig {
    Experiment experiment = Experiment::Norms;

    // lattice
    bool planar = false;                       // 2D mode: n x n x 1 sweeps
    std::vector<int> dims{2, 1, 1};            // explicit dims (markov-check)
    double spacing = 20.0;                     // d [cm]
    std::array<double, 3> dipole{0.0, 0.0, 1.0};

    // physics
    double lambda_a = 9.0;  // [cm]
    double gamma = 1.0;     // [1/s]; reduced units by default

    ModelChoice model = ModelChoice::KM;
    std::vector<int> sweep;  // side lengths
    std::string output_dir = ".";

    QuadratureSettings quadrature;
    double dt = 0.0;     // integrator step; 0 = auto
    double t_end = 0.0;  // integrator horizon; 0 = auto
    int scheme_order = 2;

    bool include_diagonal = false;
    bool corner_only = true;
    int bins = 41;
    long eigensolver_cap = 1331;
    unsigned seed = 0;
    unsigned jobs = 1;

    // km-compare grid
    std::vector<double> compare_x{0.5, 1.0, 2.0, 5.0, 10.0, 14.0, 20.0, 30.0, 50.0, 100.0};
    std::vector<double> compare_theta_deg{90.0, 60.0, 45.0, 30.0, 0.0};

    PhysicalParams physics() const { return PhysicalParams{gamma, lambda_a}; }

    void validate() const
    {
        if (!(spacing > 0.0))
            throw ConfigError("lattice.spacing: must be > 0");
        if (!(lambda_a > 0.0))
            throw ConfigError("physics.lambda_a: must be > 0");
        if (!(gamma > 0.0))
            throw ConfigError("physics.gamma: must be > 0");
        const double dn = std::sqrt(dipole[0] * dipole[0] + dipole[1] * dipole[1] +
                                    dipole[2] * dipole[2]);
        if (std::abs(dn - 1.0) > 1e-12)
            throw ConfigError("lattice.dipole: must be a unit vector");
        try {
            quadrature.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("quadrature: ") + e.what());
        }
        const bool needs_sweep = experiment == Experiment::Norms ||
                                 experiment == Experiment::Spectrum ||
                                 experiment == Experiment::Rates;
        if (needs_sweep) {
            if (sweep.empty())
                throw ConfigError("sweep: must list at least one side length");
            for (std::size_t i = 0; i < sweep.size(); ++i) {
                if (sweep[i] < 2)
                    throw ConfigError("sweep: side lengths must be >= 2");
                if (i > 0 && sweep[i] <= sweep[i - 1])
                    throw ConfigError("sweep: side lengths must be strictly ascending");
            }
        }
        if (experiment == Experiment::MarkovCheck) {
            long N = 1;
            for (int d : dims) {
                if (d < 1)
                    throw ConfigError("lattice.dims: extents must be >= 1");
                N *= d;
            }
            if (N > 4)
                throw ConfigError("lattice.dims: markov-check requires N <= 4");
        }
        if (bins < 1)
            throw ConfigError("bins: must be >= 1");
        if (eigensolver_cap < 1)
            throw ConfigError("eigensolver_cap: must be >= 1");
        if (jobs < 1)
            throw ConfigError("jobs: must be >= 1");
        if (experiment == Experiment::KmCompare) {
            if (compare_x.empty())
                throw ConfigError("compare.x: must be non-empty");
            for (double x : compare_x)
                if (!(x > 0.0))
                    throw ConfigError("compare.x: values must be > 0");
        }
    }
};

inline Experiment parse_experiment(const std::string& s)
{
    if (s == "norms") return Experiment::Norms;
    if (s == "spectrum") return Experiment::Spectrum;
    if (s == "rates") return Experiment::Rates;
    if (s == "markov-check") return Experiment::MarkovCheck;
    if (s == "km-compare") return Experiment::KmCompare;
    throw ConfigError("experiment: unknown value '" + s + "'");
}

inline const char* experiment_name(Experiment e)
{
    switch (e) {
        case Experiment::Norms: return "norms";
        case Experiment::Spectrum: return "spectrum";
        case Experiment::Rates: return "rates";
        case Experiment::MarkovCheck: return "markov-check";
        case Experiment::KmCompare: return "km-compare";
    }
    return "?";
}

inline ModelChoice parse_model(const std::string& s)
{
    if (s == "kernel") return ModelChoice::Kernel;
    if (s == "km") return ModelChoice::KM;
    if (s == "both") return ModelChoice::Both;
    throw ConfigError("model: unknown value '" + s + "' (expected kernel|km|both)");
}

inline const char* model_choice_name(ModelChoice m)
{
    switch (m) {
        case ModelChoice::Kernel: return "kernel";
        case ModelChoice::KM: return "km";
        case ModelChoice::Both: return "both";
    }
    return "?";
}

namespace detail {

template <typename T>
void get_if_present(const nlohmann::json& j, const char* key, T& out, const std::string& path)
{
    if (!j.contains(key))
        return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(path + key + ": wrong type");
    }
}

} // namespace detail

inline ExperimentConfig config_from_json(const nlohmann::json& j)
{
    ExperimentConfig cfg;
    if (j.contains("experiment"))
        cfg.experiment = parse_experiment(j.at("experiment").get<std::string>());
    if (j.contains("lattice")) {
        const auto& l = j.at("lattice");
        std::string mode = cfg.planar ? "2d" : "3d";
        detail::get_if_present(l, "mode", mode, "lattice.");
        if (mode != "2d" && mode != "3d")
            throw ConfigError("lattice.mode: expected 2d or 3d");
        cfg.planar = (mode == "2d");
        detail::get_if_present(l, "spacing", cfg.spacing, "lattice.");
        detail::get_if_present(l, "dims", cfg.dims, "lattice.");
        std::vector<double> dip{cfg.dipole[0], cfg.dipole[1], cfg.dipole[2]};
        detail::get_if_present(l, "dipole", dip, "lattice.");
        if (dip.size() != 3)
            throw ConfigError("lattice.dipole: expected 3 components");
        cfg.dipole = {dip[0], dip[1], dip[2]};
    }
    if (j.contains("physics")) {
        const auto& p = j.at("physics");
        detail::get_if_present(p, "lambda_a", cfg.lambda_a, "physics.");
        detail::get_if_present(p, "gamma", cfg.gamma, "physics.");
    }
    if (j.contains("model"))
        cfg.model = parse_model(j.at("model").get<std::string>());
    detail::get_if_present(j, "sweep", cfg.sweep, "");
    detail::get_if_present(j, "output_dir", cfg.output_dir, "");
    if (j.contains("quadrature")) {
        const auto& q = j.at("quadrature");
        detail::get_if_present(q, "rel_tol", cfg.quadrature.rel_tol, "quadrature.");
        detail::get_if_present(q, "u_max_factor", cfg.quadrature.u_max_factor, "quadrature.");
        detail::get_if_present(q, "singularity_pad", cfg.quadrature.singularity_pad, "quadrature.");
        detail::get_if_present(q, "avg_periods", cfg.quadrature.avg_periods, "quadrature.");
    }
    if (j.contains("integrator")) {
        const auto& i = j.at("integrator");
        detail::get_if_present(i, "dt", cfg.dt, "integrator.");
        detail::get_if_present(i, "t_end", cfg.t_end, "integrator.");
        detail::get_if_present(i, "scheme_order", cfg.scheme_order, "integrator.");
    }
    detail::get_if_present(j, "include_diagonal", cfg.include_diagonal, "");
    detail::get_if_present(j, "corner_only", cfg.corner_only, "");
    detail::get_if_present(j, "bins", cfg.bins, "");
    detail::get_if_present(j, "eigensolver_cap", cfg.eigensolver_cap, "");
    detail::get_if_present(j, "seed", cfg.seed, "");
    detail::get_if_present(j, "jobs", cfg.jobs, "");
    if (j.contains("compare")) {
        const auto& c = j.at("compare");
        detail::get_if_present(c, "x", cfg.compare_x, "compare.");
        detail::get_if_present(c, "theta_deg", cfg.compare_theta_deg, "compare.");
    }
    return cfg;
}

inline nlohmann::json config_to_json(const ExperimentConfig& cfg)
{
    nlohmann::json j;
    j["experiment"] = experiment_name(cfg.experiment);
    j["lattice"] = {{"mode", cfg.planar ? "2d" : "3d"},
                    {"spacing", cfg.spacing},
                    {"dims", cfg.dims},
                    {"dipole", cfg.dipole}};
    j["physics"] = {{"lambda_a", cfg.lambda_a}, {"gamma", cfg.gamma}};
    j["model"] = model_choice_name(cfg.model);
    j["sweep"] = cfg.sweep;
    j["output_dir"] = cfg.output_dir;
    j["quadrature"] = {{"rel_tol", cfg.quadrature.rel_tol},
                       {"u_max_factor", cfg.quadrature.u_max_factor},
                       {"singularity_pad", cfg.quadrature.singularity_pad},
                       {"avg_periods", cfg.quadrature.avg_periods}};
    j["integrator"] = {{"dt", cfg.dt}, {"t_end", cfg.t_end}, {"scheme_order", cfg.scheme_order}};
    j["include_diagonal"] = cfg.include_diagonal;
    j["corner_only"] = cfg.corner_only;
    j["bins"] = cfg.bins;
    j["eigensolver_cap"] = cfg.eigensolver_cap;
    j["seed"] = cfg.seed;
    j["jobs"] = cfg.jobs;
    if (cfg.experiment == Experiment::KmCompare)
        j["compare"] = {{"x", cfg.compare_x}, {"theta_deg", cfg.compare_theta_deg}};
    return j;
}

} // namespace superrad
