#pragma once
//
// Complex eigenspectra of the effective Hamiltonian, collective decay rates
// (single-atom rate subtracted, positive = superradiant) and histograms.
//

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "superrad/hamiltonian.hpp"

namespace superrad {

/// Eigenvalues sorted by descending collective rate. Rates are in the same
/// units as Gamma; rate_k = -Im(lambda_k) - Gamma/2.
struct SpectrumResult {
    std::vector<Complex> eigenvalues;
    std::vector<double> collective_rates;
    double largest_rate = 0.0;
    double min_abs_rate = 0.0;
    double gamma = 1.0;
};

inline SpectrumResult eigen_spectrum(const EffectiveHamiltonian& H)
{
    const Eigen::Index n = H.matrix.rows();
    if (n < 1)
        throw std::invalid_argument("eigen_spectrum: empty matrix");

    SpectrumResult res;
    res.gamma = H.params.gamma;
    if (n == 1) {
        res.eigenvalues = {H.matrix(0, 0)};
    } else {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(H.matrix, false);
        if (solver.info() != Eigen::Success)
            throw NumericsError("eigen_spectrum: solver failed for N=" + std::to_string(n) +
                                    " model=" + model_name(H.model),
                                0.0);
        res.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
    }

    std::sort(res.eigenvalues.begin(), res.eigenvalues.end(),
              [](const Complex& a, const Complex& b) {
                  if (a.imag() != b.imag())
                      return a.imag() < b.imag();  // descending rate = ascending Im
                  return a.real() < b.real();
              });
    res.collective_rates.reserve(n);
    for (const Complex& ev : res.eigenvalues)
        res.collective_rates.push_back(-ev.imag() - 0.5 * res.gamma);
    res.largest_rate = res.collective_rates.front();
    res.min_abs_rate = std::abs(*std::min_element(
        res.collective_rates.begin(), res.collective_rates.end(),
        [](double a, double b) { return std::abs(a) < std::abs(b); }));
    return res;
}

inline double largest_collective_rate(const SpectrumResult& spec)
{
    return spec.largest_rate;
}

inline double min_abs_rate(const SpectrumResult& spec)
{
    return spec.min_abs_rate;
}

inline double superradiant_fraction(const SpectrumResult& spec)
{
    const auto n = static_cast<double>(spec.collective_rates.size());
    return std::count_if(spec.collective_rates.begin(), spec.collective_rates.end(),
                         [](double r) { return r > 0.0; }) / n;
}

/// Sample standard deviation of the rates (distribution width).
inline double rate_width(const SpectrumResult& spec)
{
    const auto& r = spec.collective_rates;
    const double mean = std::accumulate(r.begin(), r.end(), 0.0) / r.size();
    double ss = 0.0;
    for (double v : r)
        ss += (v - mean) * (v - mean);
    return std::sqrt(ss / r.size());
}

struct Histogram {
    std::vector<double> bin_edges;  // ascending, size = counts.size() + 1
    std::vector<std::size_t> counts;
};

/// Uniform bins over [min rate, max rate]; boundary values fall in the lower
/// bin except the global maximum, which lands in the last bin.
inline Histogram rate_histogram(const SpectrumResult& spec, std::size_t n_bins)
{
    if (n_bins < 1)
        throw std::invalid_argument("rate_histogram: n_bins must be >= 1");
    const auto& rates = spec.collective_rates;
    const auto [lo_it, hi_it] = std::minmax_element(rates.begin(), rates.end());
    const double lo = *lo_it, hi = *hi_it;

    Histogram h;
    if (lo == hi) {
        // degenerate span: one bin holds everything
        h.bin_edges = {lo, std::nextafter(hi, hi + 1.0)};
        h.counts = {rates.size()};
        return h;
    }
    h.bin_edges.resize(n_bins + 1);
    const double w = (hi - lo) / n_bins;
    for (std::size_t i = 0; i <= n_bins; ++i)
        h.bin_edges[i] = lo + w * i;
    h.bin_edges.back() = hi;
    h.counts.assign(n_bins, 0);
    for (double r : rates) {
        auto bin = static_cast<std::size_t>((r - lo) / w);
        if (r >= hi)
            bin = n_bins - 1;
        else if (bin > 0 && h.bin_edges[bin] == r)
            --bin;  // boundary goes to the lower bin
        h.counts[std::min(bin, n_bins - 1)]++;
    }
    return h;
}

} // namespace superrad
