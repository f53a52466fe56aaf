#pragma once
//
// Single-excitation effective Hamiltonian assembly, two-qubit pair blocks,
// sup operator norms and the fault-tolerance threshold inequality.
//

#include <complex>
#include <cstddef>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "superrad/geometry.hpp"
#include "superrad/kernel.hpp"

namespace superrad {

/// Dense single-excitation effective Hamiltonian. Complex symmetric (not
/// Hermitian: it carries radiative decay and the collective Lamb shift),
/// diagonal pinned to -i*Gamma/2.
struct EffectiveHamiltonian {
    Eigen::MatrixXcd matrix;  // in the same rate units as Gamma
    Model model = Model::KM;
    LatticeSpec lattice;
    PhysicalParams params;
};

inline EffectiveHamiltonian build_single_excitation(const QubitArray& array,
                                                    const ElementEvaluator& eval)
{
    const std::size_t n = array.size();
    if (n == 0)
        throw std::invalid_argument("build_single_excitation: empty array");
    Eigen::MatrixXcd m(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        m(j, j) = eval.diagonal();
        for (std::size_t jp = j + 1; jp < n; ++jp) {
            const Complex h = eval(pair_geometry(array, j, jp));
            m(j, jp) = h;
            m(jp, j) = h;
        }
    }
    return EffectiveHamiltonian{std::move(m), eval.model(), array.spec(), eval.params()};
}

/// Two-qubit interaction block on the subspace (|00>, |01>, |10>, |11>).
/// Off-diagonal pairs carry only the flip-flop coupling h_{jj'}; the
/// single-qubit decay -i*Gamma/2 belongs to the j = j' term and is reported
/// separately.
struct PairBlock {
    Eigen::Matrix4cd block;
    std::size_t j = 0, jp = 0;
    Complex coupling{0.0, 0.0};
};

inline PairBlock pair_block(const QubitArray& array, const ElementEvaluator& eval,
                            std::size_t j, std::size_t jp)
{
    if (j == jp)
        throw std::invalid_argument("pair_block: j == j' is the single-qubit decay term");
    const Complex h = eval(pair_geometry(array, j, jp));
    PairBlock b;
    b.block.setZero();
    b.block(1, 2) = h;
    b.block(2, 1) = h;
    b.j = j;
    b.jp = jp;
    b.coupling = h;
    return b;
}

/// Sup operator norm: largest singular value.
inline double sup_norm(const Eigen::Matrix4cd& block)
{
    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(block);
    return svd.singularValues()(0);
}

inline double sup_norm(const PairBlock& b)
{
    return sup_norm(b.block);
}

/// Sum of pair-block norms seen by qubit j. Streams over j' without ever
/// materializing the N x N matrix; element evaluations are memoized by the
/// evaluator, so the cost is O(N) with O(distinct pair classes) quadratures.
inline double norm_sum_for_qubit(const QubitArray& array, const ElementEvaluator& eval,
                                 std::size_t j, bool include_diagonal = false)
{
    if (j >= array.size())
        throw std::out_of_range("norm_sum_for_qubit: index out of range");
    double sum = include_diagonal ? 0.5 * eval.params().gamma : 0.0;
    for (std::size_t jp = 0; jp < array.size(); ++jp) {
        if (jp == j)
            continue;
        sum += std::abs(eval(pair_geometry(array, j, jp)));
    }
    return sum;
}

/// Threshold-theorem inequality for one qubit: sum_j' ||H^{jj'}|| * t0 < eta.
struct ThresholdReport {
    double norm_sum = 0.0;  // in the same rate units as Gamma [1/s]
    double t0 = 0.0;        // gate time [s]
    double eta = 0.0;       // error threshold
    bool satisfied = false;
};

inline ThresholdReport check_threshold(double norm_sum, double t0, double eta)
{
    if (!(t0 > 0.0) || !(eta > 0.0))
        throw std::invalid_argument("check_threshold: t0 and eta must be > 0");
    // strict inequality: boundary equality counts as violated
    return ThresholdReport{norm_sum, t0, eta, norm_sum * t0 < eta};
}

} // namespace superrad
