#pragma once
//
// End-to-end experiment drivers behind the CLI: each one validates the
// configuration, runs the requested sweep and emits plot-ready CSV/JSON.
//

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "superrad/config.hpp"
#include "superrad/dynamics.hpp"
#include "superrad/io.hpp"
#include "superrad/scaling.hpp"
#include "superrad/spectra.hpp"

namespace superrad {

namespace detail {

inline std::vector<std::string> config_header(const ExperimentConfig& cfg)
{
    return {"config: " + config_to_json(cfg).dump(), "units: rates and norms in Gamma, lengths in cm"};
}

inline std::vector<Model> resolved_models(ModelChoice choice)
{
    switch (choice) {
        case ModelChoice::Kernel: return {Model::MemoryKernel};
        case ModelChoice::KM: return {Model::KM};
        case ModelChoice::Both: return {Model::MemoryKernel, Model::KM};
    }
    return {};
}

inline std::string out_path(const ExperimentConfig& cfg, const std::string& name)
{
    std::filesystem::create_directories(cfg.output_dir);
    return (std::filesystem::path(cfg.output_dir) / name).string();
}

inline nlohmann::json fit_to_json(const PowerLawFit& fit)
{
    return {{"exponent", fit.exponent},
            {"log_prefactor", fit.log_prefactor},
            {"rms_residual", fit.rms_residual}};
}

} // namespace detail

/// Norm-sum sweep (per model) plus power-law fits. Writes norms.csv, fit.json.
inline std::vector<std::string> run_norms(const ExperimentConfig& cfg)
{
    cfg.validate();
    const LatticeTemplate tmpl{cfg.spacing, {cfg.dipole[0], cfg.dipole[1], cfg.dipole[2]},
                               cfg.planar};
    const auto models = detail::resolved_models(cfg.model);

    std::vector<ScalingSeries> series;
    nlohmann::json fits;
    for (Model m : models) {
        ElementEvaluator eval(cfg.physics(), m, cfg.quadrature);
        series.push_back(norm_scan(cfg.sweep, tmpl, eval, cfg.corner_only, cfg.include_diagonal,
                                   cfg.jobs));
        fits[model_name(m)] = detail::fit_to_json(fit_power_law(series.back()));
    }

    std::vector<std::string> columns{"N"};
    for (Model m : models)
        columns.push_back(std::string("norm_sum_") + model_name(m));
    const std::string csv_path = detail::out_path(cfg, "norms.csv");
    CsvWriter csv(csv_path, detail::config_header(cfg), columns);
    for (std::size_t i = 0; i < series.front().points.size(); ++i) {
        std::vector<double> row{static_cast<double>(series.front().points[i].n_qubits)};
        for (const auto& s : series)
            row.push_back(s.points[i].value / cfg.gamma);
        csv.write_row(row);
    }

    fits["config"] = config_to_json(cfg);
    const std::string fit_path = detail::out_path(cfg, "fit.json");
    std::ofstream(fit_path) << fits.dump(2) << "\n";
    return {csv_path, fit_path};
}

/// Eigenspectra, histograms and summary statistics per sweep point.
inline std::vector<std::string> run_spectrum(const ExperimentConfig& cfg)
{
    cfg.validate();
    const LatticeTemplate tmpl{cfg.spacing, {cfg.dipole[0], cfg.dipole[1], cfg.dipole[2]},
                               cfg.planar};
    std::vector<std::string> written;
    nlohmann::json summary = nlohmann::json::array();
    for (Model m : detail::resolved_models(cfg.model)) {
        ElementEvaluator eval(cfg.physics(), m, cfg.quadrature);
        for (int n : cfg.sweep) {
            const LatticeSpec spec = tmpl.at_side(n);
            const long N = static_cast<long>(spec.qubit_count());
            if (N > cfg.eigensolver_cap)
                throw ConfigError("sweep: N=" + std::to_string(N) + " exceeds eigensolver_cap");
            const SpectrumResult res =
                eigen_spectrum(build_single_excitation(build_lattice(spec), eval));

            const std::string tag = std::string(model_name(m)) + "_N" + std::to_string(N);
            const std::string spath = detail::out_path(cfg, "spectrum_" + tag + ".csv");
            CsvWriter scsv(spath, detail::config_header(cfg), {"re", "im", "collective_rate"});
            for (std::size_t k = 0; k < res.eigenvalues.size(); ++k)
                scsv.write_row({res.eigenvalues[k].real() / cfg.gamma,
                                res.eigenvalues[k].imag() / cfg.gamma,
                                res.collective_rates[k] / cfg.gamma});
            written.push_back(spath);

            const Histogram h = rate_histogram(res, static_cast<std::size_t>(cfg.bins));
            const std::string hpath = detail::out_path(cfg, "histogram_" + tag + ".csv");
            CsvWriter hcsv(hpath, detail::config_header(cfg), {"bin_lo", "bin_hi", "count"});
            for (std::size_t b = 0; b < h.counts.size(); ++b)
                hcsv.write_row({h.bin_edges[b] / cfg.gamma, h.bin_edges[b + 1] / cfg.gamma,
                                static_cast<double>(h.counts[b])});
            written.push_back(hpath);

            summary.push_back({{"model", model_name(m)},
                               {"N", N},
                               {"largest_rate", res.largest_rate / cfg.gamma},
                               {"min_abs_rate", res.min_abs_rate / cfg.gamma},
                               {"superradiant_fraction", superradiant_fraction(res)},
                               {"width", rate_width(res) / cfg.gamma}});
        }
    }
    nlohmann::json doc{{"results", summary}, {"config", config_to_json(cfg)}};
    const std::string jpath = detail::out_path(cfg, "summary.json");
    std::ofstream(jpath) << doc.dump(2) << "\n";
    written.push_back(jpath);
    return written;
}

/// Largest-collective-rate sweep plus power-law fits. Writes rates.csv, fit.json.
inline std::vector<std::string> run_rates(const ExperimentConfig& cfg)
{
    cfg.validate();
    const LatticeTemplate tmpl{cfg.spacing, {cfg.dipole[0], cfg.dipole[1], cfg.dipole[2]},
                               cfg.planar};
    const auto models = detail::resolved_models(cfg.model);

    std::vector<ScalingSeries> series;
    nlohmann::json fits;
    for (Model m : models) {
        ElementEvaluator eval(cfg.physics(), m, cfg.quadrature);
        series.push_back(rate_scan(cfg.sweep, tmpl, eval, cfg.eigensolver_cap));
        fits[model_name(m)] = detail::fit_to_json(fit_power_law(series.back()));
    }

    std::vector<std::string> columns{"N"};
    for (Model m : models)
        columns.push_back(std::string("largest_rate_") + model_name(m));
    const std::string csv_path = detail::out_path(cfg, "rates.csv");
    CsvWriter csv(csv_path, detail::config_header(cfg), columns);
    for (std::size_t i = 0; i < series.front().points.size(); ++i) {
        std::vector<double> row{static_cast<double>(series.front().points[i].n_qubits)};
        for (const auto& s : series)
            row.push_back(s.points[i].value / cfg.gamma);
        csv.write_row(row);
    }

    fits["config"] = config_to_json(cfg);
    const std::string fit_path = detail::out_path(cfg, "fit.json");
    std::ofstream(fit_path) << fits.dump(2) << "\n";
    return {csv_path, fit_path};
}

/// Exact-vs-Markov comparison on a small array. Writes deviation.csv.
inline std::vector<std::string> run_markov_check(const ExperimentConfig& cfg)
{
    cfg.validate();
    const PhysicalParams params = cfg.physics();
    const LatticeSpec spec{{cfg.dims[0], cfg.dims[1], cfg.dims[2]},
                           cfg.spacing,
                           {cfg.dipole[0], cfg.dipole[1], cfg.dipole[2]}};
    const QubitArray array = build_lattice(spec);

    IntegratorSettings settings;
    settings.scheme_order = cfg.scheme_order;
    settings.t_end = cfg.t_end > 0.0 ? cfg.t_end : 0.05 / params.gamma;
    double dt_max = 1e-3 / params.gamma;
    for (std::size_t j = 0; j < array.size(); ++j)
        for (std::size_t jp = j + 1; jp < array.size(); ++jp)
            dt_max = std::min(dt_max, 0.1 * pair_geometry(array, j, jp).r / PhysicalParams::c_light);
    if (cfg.dt > 0.0)
        settings.dt = cfg.dt;
    else
        settings.dt = settings.t_end / std::ceil(settings.t_end / dt_max);

    Eigen::VectorXcd initial = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(array.size()));
    initial(0) = 1.0;

    const Trajectory exact = solve_exact(array, params, initial, settings, cfg.quadrature);
    ElementEvaluator eval(params, Model::MemoryKernel, cfg.quadrature);
    const Trajectory markov = solve_markov(array, eval, initial, settings, /*time_dependent=*/true);
    const DeviationSeries dev = markov_deviation(exact, markov);

    const std::string path = detail::out_path(cfg, "deviation.csv");
    CsvWriter csv(path, detail::config_header(cfg), {"t_gamma", "max_deviation"});
    for (std::size_t k = 0; k < dev.times.size(); ++k)
        csv.write_row({dev.times[k] * params.gamma, dev.max_deviation[k]});
    return {path};
}

/// Element-by-element comparison of the long-time memory-kernel model against
/// the closed-form KM model over a grid of (x, theta). Writes compare.csv.
inline std::vector<std::string> run_km_compare(const ExperimentConfig& cfg)
{
    cfg.validate();
    const PhysicalParams params = cfg.physics();
    const std::string path = detail::out_path(cfg, "compare.csv");
    CsvWriter csv(path, detail::config_header(cfg),
                  {"x", "theta_deg", "re_kernel", "im_kernel", "re_km", "im_km", "ratio_mag"});
    for (double x : cfg.compare_x)
        for (double theta : cfg.compare_theta_deg) {
            const PairGeometry geom{x / params.k_a(), std::cos(theta * pi / 180.0)};
            const Complex hk = asymptotic_element(geom, params, cfg.quadrature);
            const Complex hkm = km_element(geom, params);
            const double ratio = std::abs(hkm) > 0.0
                                     ? std::abs(hk) / std::abs(hkm)
                                     : std::numeric_limits<double>::quiet_NaN();
            csv.write_row({x, theta, hk.real() / cfg.gamma, hk.imag() / cfg.gamma,
                           hkm.real() / cfg.gamma, hkm.imag() / cfg.gamma, ratio});
        }
    return {path};
}

/// Dispatch on the configured experiment.
inline std::vector<std::string> run_experiment(const ExperimentConfig& cfg)
{
    switch (cfg.experiment) {
        case Experiment::Norms: return run_norms(cfg);
        case Experiment::Spectrum: return run_spectrum(cfg);
        case Experiment::Rates: return run_rates(cfg);
        case Experiment::MarkovCheck: return run_markov_check(cfg);
        case Experiment::KmCompare: return run_km_compare(cfg);
    }
    throw ConfigError("experiment: unknown");
}

} // namespace superrad
