#pragma once
//
// N-sweeps of norm sums and largest collective rates, and power-law fits
// c * N^p to the resulting series.
//

#include <cmath>
#include <future>
#include <stdexcept>
#include <vector>

#include "superrad/hamiltonian.hpp"
#include "superrad/spectra.hpp"

namespace superrad {

enum class Quantity { NormSum, LargestRate };

struct ScalingPoint {
    long n_qubits = 0;
    double value = 0.0;
};

struct ScalingSeries {
    std::vector<ScalingPoint> points;  // strictly increasing in n_qubits
    Quantity quantity = Quantity::NormSum;
};

/// Lattice family for a side-length sweep: n x n x n, or n x n x 1 when
/// planar (the 2D geometry is a degenerate 3D lattice).
struct LatticeTemplate {
    double spacing = 20.0;
    Eigen::Vector3d dipole{0.0, 0.0, 1.0};
    bool planar = false;

    LatticeSpec at_side(int n) const
    {
        return LatticeSpec{{n, n, planar ? 1 : n}, spacing, dipole};
    }
};

inline void check_sides(const std::vector<int>& sides)
{
    if (sides.empty())
        throw std::invalid_argument("scan: empty side-length list");
    for (std::size_t i = 0; i < sides.size(); ++i) {
        if (sides[i] < 2)
            throw std::invalid_argument("scan: side lengths must be >= 2");
        if (i > 0 && sides[i] <= sides[i - 1])
            throw std::invalid_argument("scan: side lengths must be ascending");
    }
}

/// Corner-atom norm sums over a side-length sweep. Points are independent
/// tasks; the element cache is shared across all of them. With corner_only
/// false the value is instead averaged over every atom in the array.
inline ScalingSeries norm_scan(const std::vector<int>& sides, const LatticeTemplate& tmpl,
                               const ElementEvaluator& eval, bool corner_only = true,
                               bool include_diagonal = false, unsigned jobs = 1)
{
    check_sides(sides);
    auto point = [&](int n) {
        const QubitArray array = build_lattice(tmpl.at_side(n));
        if (corner_only)
            return norm_sum_for_qubit(array, eval, corner_index(array), include_diagonal);
        double sum = 0.0;
        for (std::size_t j = 0; j < array.size(); ++j)
            sum += norm_sum_for_qubit(array, eval, j, include_diagonal);
        return sum / static_cast<double>(array.size());
    };

    ScalingSeries series;
    series.quantity = Quantity::NormSum;
    if (jobs <= 1) {
        for (int n : sides)
            series.points.push_back({static_cast<long>(tmpl.at_side(n).qubit_count()), point(n)});
    } else {
        std::vector<std::future<double>> futs;
        for (int n : sides)
            futs.push_back(std::async(std::launch::async, point, n));
        for (std::size_t i = 0; i < sides.size(); ++i)
            series.points.push_back(
                {static_cast<long>(tmpl.at_side(sides[i]).qubit_count()), futs[i].get()});
    }
    return series;
}

/// Largest collective rate over a side-length sweep.
inline ScalingSeries rate_scan(const std::vector<int>& sides, const LatticeTemplate& tmpl,
                               const ElementEvaluator& eval, long eigensolver_cap = 1331)
{
    check_sides(sides);
    ScalingSeries series;
    series.quantity = Quantity::LargestRate;
    for (int n : sides) {
        const LatticeSpec spec = tmpl.at_side(n);
        const long N = static_cast<long>(spec.qubit_count());
        if (N > eigensolver_cap)
            throw std::invalid_argument("rate_scan: N=" + std::to_string(N) +
                                        " exceeds eigensolver cap " +
                                        std::to_string(eigensolver_cap));
        const EffectiveHamiltonian H = build_single_excitation(build_lattice(spec), eval);
        series.points.push_back({N, eigen_spectrum(H).largest_rate});
    }
    return series;
}

struct PowerLawFit {
    double exponent = 0.0;
    double log_prefactor = 0.0;  // ln c
    double rms_residual = 0.0;   // rms of ln(value) - ln(c N^p)
};

/// Least-squares power-law fit value = c * N^p. Seeded by ordinary least
/// squares on (ln N, ln value), then refined by Gauss-Newton in linear space,
/// which weights the fit the way the reference scaling figures do (large-N
/// points dominate). Exact power laws are reproduced to machine precision.
inline PowerLawFit fit_power_law(const ScalingSeries& series)
{
    const auto& pts = series.points;
    if (pts.size() < 3)
        throw std::invalid_argument("fit_power_law: need at least 3 points");
    for (const auto& p : pts)
        if (!(p.value > 0.0))
            throw std::invalid_argument("fit_power_law: values must be > 0");

    const auto m = static_cast<double>(pts.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& p : pts) {
        const double lx = std::log(static_cast<double>(p.n_qubits));
        const double ly = std::log(p.value);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double p_exp = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    double lc = (sy - p_exp * sx) / m;

    // Gauss-Newton on (ln c, p) minimizing sum (v_i - c N_i^p)^2
    for (int iter = 0; iter < 200; ++iter) {
        double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
        for (const auto& pt : pts) {
            const double lx = std::log(static_cast<double>(pt.n_qubits));
            const double model = std::exp(lc + p_exp * lx);
            const double r = pt.value - model;
            const double j1 = model, j2 = model * lx;  // d model / d(ln c), d/dp
            a11 += j1 * j1;
            a12 += j1 * j2;
            a22 += j2 * j2;
            b1 += j1 * r;
            b2 += j2 * r;
        }
        const double det = a11 * a22 - a12 * a12;
        if (det == 0.0)
            break;
        const double dlc = (b1 * a22 - b2 * a12) / det;
        const double dp = (a11 * b2 - a12 * b1) / det;
        lc += dlc;
        p_exp += dp;
        if (std::abs(dlc) < 1e-14 && std::abs(dp) < 1e-14)
            break;
    }

    double ss = 0.0;
    for (const auto& pt : pts) {
        const double r = std::log(pt.value) - (lc + p_exp * std::log(static_cast<double>(pt.n_qubits)));
        ss += r * r;
    }
    return PowerLawFit{p_exp, lc, std::sqrt(ss / m)};
}

} // namespace superrad
