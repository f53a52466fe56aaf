#pragma once
//
// Exact integration of the coupled integro-differential amplitude equations
// in the single-excitation sector, and the Markov-approximated ODE evolution
// used to validate them at early times.
//

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "superrad/hamiltonian.hpp"

namespace superrad {

struct AmplitudeState {
    Eigen::VectorXcd amplitudes;
    double t = 0.0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXcd> states;
};

struct IntegratorSettings {
    double dt = 0.0;     // step [s]; must resolve both 1/Gamma and r/c
    double t_end = 0.0;  // final time [s]
    int scheme_order = 2;
    long max_history_steps = 200000;

    void validate(const QubitArray& array, const PhysicalParams& params) const
    {
        if (!(dt > 0.0) || !(t_end > 0.0))
            throw std::invalid_argument("IntegratorSettings: dt and t_end must be > 0");
        if (scheme_order != 1 && scheme_order != 2)
            throw std::invalid_argument("IntegratorSettings: scheme_order must be 1 or 2");
        if (dt > 1e-3 / params.gamma)
            throw std::invalid_argument("IntegratorSettings: dt must be <= 1e-3 / Gamma");
        for (std::size_t j = 0; j < array.size(); ++j)
            for (std::size_t jp = j + 1; jp < array.size(); ++jp) {
                const double T = pair_geometry(array, j, jp).r / PhysicalParams::c_light;
                if (dt > 0.1 * T)
                    throw std::invalid_argument(
                        "IntegratorSettings: dt must be <= 0.1 * min(r/c) over all pairs");
            }
        if (static_cast<long>(std::llround(t_end / dt)) > max_history_steps)
            throw std::length_error("IntegratorSettings: step count exceeds history budget");
    }

    long n_steps() const { return static_cast<long>(std::llround(t_end / dt)); }
};

namespace detail {

inline void check_normalized(const Eigen::VectorXcd& c)
{
    if (std::abs(c.squaredNorm() - 1.0) > 1e-9)
        throw std::invalid_argument("dynamics: initial state must be normalized");
}

// Product-integration weights for one pair class: c is linear on each step
// and the kernel (box window, log singularity included) is integrated
// accurately across the step in the reduced variable u = omega_a * s.
//   A_m = int over step m of e^{iu} G~(u;x) * (1 - (u-u_a)/du)
//   B_m = same with weight (u-u_a)/du
struct PairWeights {
    std::vector<Complex> A, B;
};

inline PairWeights pair_weights(double x, double du, long n_steps, double pad_rel)
{
    const double eps =
        std::max(pad_rel * x * 0x1p-46, 4.0 * std::numeric_limits<double>::epsilon() * x);
    PairWeights w;
    w.A.resize(n_steps);
    w.B.resize(n_steps);
    for (long m = 0; m < n_steps; ++m) {
        const double ua = m * du;
        const double ub = ua + du;
        auto integrand = [&](double u, bool rising) {
            const double box = (u < x) ? 2.0 * pi / x : 0.0;
            const double lg = (2.0 / x) * std::log((x + u) / std::abs(x - u));
            const Complex g = Complex{std::cos(u), std::sin(u)} * Complex{box, -lg};
            const double lin = (u - ua) / du;
            return g * (rising ? lin : 1.0 - lin);
        };
        auto compute = [&](bool rising) {
            auto f = [&](double u) { return integrand(u, rising); };
            std::vector<double> breaks = graded_singularity_breaks(x, pad_rel, ua, ub);
            if (ua < x - eps && ub > x + eps) {
                const auto left = integrate_piecewise(f, breaks, ua, x - eps, 1e-12);
                const auto right = integrate_piecewise(f, breaks, x + eps, ub, 1e-12);
                return left.value + right.value;
            }
            double lo = ua, hi = ub;
            if (ua >= x - eps && ua <= x + eps)
                lo = x + eps;
            if (ub >= x - eps && ub <= x + eps)
                hi = x - eps;
            if (!(hi > lo))
                return Complex{0.0, 0.0};
            return integrate_piecewise(f, breaks, lo, hi, 1e-12).value;
        };
        w.A[m] = compute(false);
        w.B[m] = compute(true);
    }
    return w;
}

// Coupling structure: per history lag m, matrices W_m and V_m with
// (j, j') entry = (1 - cos^2 theta_{jj'}) * {A_m, B_m} of the pair's class.
struct MemoryOperator {
    std::vector<Eigen::MatrixXcd> W, V;
};

inline MemoryOperator build_memory_operator(const QubitArray& array, const PhysicalParams& params,
                                            const IntegratorSettings& s, double pad_rel)
{
    const std::size_t n = array.size();
    const long steps = s.n_steps();
    const double du = params.omega_a() * s.dt;

    std::map<std::pair<long long, long long>, PairWeights> classes;
    auto class_key = [&](const PairGeometry& g) {
        return std::make_pair(std::llround(g.r * 1e12), std::llround(g.cos2() * 1e12));
    };

    MemoryOperator op;
    op.W.assign(steps, Eigen::MatrixXcd::Zero(n, n));
    op.V.assign(steps, Eigen::MatrixXcd::Zero(n, n));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t jp = 0; jp < n; ++jp) {
            if (j == jp)
                continue;
            const PairGeometry g = pair_geometry(array, j, jp);
            const double angular = 1.0 - g.cos2();
            if (angular == 0.0)
                continue;
            auto [it, inserted] = classes.try_emplace(class_key(g));
            if (inserted)
                it->second = pair_weights(params.k_a() * g.r, du, steps, pad_rel);
            for (long m = 0; m < steps; ++m) {
                op.W[m](j, jp) = angular * it->second.A[m];
                op.V[m](j, jp) = angular * it->second.B[m];
            }
        }
    return op;
}

} // namespace detail

/// Exact solution of the coupled amplitude equations (single-excitation
/// sector, dimension N <= 6) by second-order product integration with full
/// history. The j = j' self-term is pinned to the Wigner-Weisskopf rate.
inline Trajectory solve_exact(const QubitArray& array, const PhysicalParams& params,
                              const Eigen::VectorXcd& initial, const IntegratorSettings& settings,
                              const QuadratureSettings& q = {})
{
    if (array.size() > 6)
        throw std::invalid_argument("solve_exact: restricted to N <= 6");
    if (static_cast<std::size_t>(initial.size()) != array.size())
        throw std::invalid_argument("solve_exact: state dimension must equal N");
    params.validate();
    settings.validate(array, params);
    detail::check_normalized(initial);

    const long steps = settings.n_steps();
    const double dt = settings.dt;
    const double gamma = params.gamma;
    const double kappa = (3.0 / (8.0 * pi)) * 0.5 * gamma;
    const auto n = static_cast<Eigen::Index>(array.size());

    const detail::MemoryOperator op =
        detail::build_memory_operator(array, params, settings, q.singularity_pad);

    std::vector<Eigen::VectorXcd> c;
    c.reserve(steps + 1);
    c.push_back(initial);

    // memory(k) = sum_{m=0}^{k-1} (W_m c_{k-m} + V_m c_{k-m-1})
    auto memory_at = [&](long k) {
        Eigen::VectorXcd mem = Eigen::VectorXcd::Zero(n);
        for (long m = 0; m < k; ++m)
            mem += op.W[m] * c[k - m] + op.V[m] * c[k - m - 1];
        return mem;
    };
    auto rhs_at = [&](long k) {
        return (-0.5 * gamma * c[k] - kappa * memory_at(k)).eval();
    };

    if (settings.scheme_order == 1) {
        for (long k = 0; k < steps; ++k)
            c.push_back(c[k] + dt * rhs_at(k));
    } else {
        // implicit trapezoid; the new value enters through W_0 only
        Eigen::MatrixXcd lhs = Eigen::MatrixXcd::Identity(n, n) * (1.0 + 0.25 * dt * gamma) +
                               (0.5 * dt * kappa) * op.W[0];
        const auto lu = lhs.partialPivLu();
        for (long k = 0; k < steps; ++k) {
            Eigen::VectorXcd tail = Eigen::VectorXcd::Zero(n);  // history part of memory(k+1)
            tail += op.V[0] * c[k];
            for (long m = 1; m <= k; ++m)
                tail += op.W[m] * c[k + 1 - m] + op.V[m] * c[k - m];
            const Eigen::VectorXcd rhs =
                c[k] + 0.5 * dt * (rhs_at(k) - kappa * tail);
            c.push_back(lu.solve(rhs));
        }
    }

    Trajectory traj;
    traj.times.resize(steps + 1);
    for (long k = 0; k <= steps; ++k)
        traj.times[k] = k * dt;
    traj.states = std::move(c);
    return traj;
}

/// Markov-approximated evolution i dc/dt = H(t) c. With a static Hamiltonian
/// (long-time or KM elements) this converges to matrix-exponential evolution;
/// with time_dependent = true the finite-time memory-kernel elements are used.
inline Trajectory solve_markov(const QubitArray& array, const ElementEvaluator& eval,
                               const Eigen::VectorXcd& initial, const IntegratorSettings& settings,
                               bool time_dependent = false)
{
    if (static_cast<std::size_t>(initial.size()) != array.size())
        throw std::invalid_argument("solve_markov: state dimension must equal N");
    if (time_dependent && eval.model() != Model::MemoryKernel)
        throw std::invalid_argument("solve_markov: time-dependent elements require the memory-kernel model");
    settings.validate(array, eval.params());
    detail::check_normalized(initial);

    const auto n = static_cast<Eigen::Index>(array.size());
    const long steps = settings.n_steps();
    const double dt = settings.dt;

    Eigen::MatrixXcd H_static;
    if (!time_dependent)
        H_static = build_single_excitation(array, eval).matrix;

    auto hamiltonian_at = [&](double t) {
        if (!time_dependent)
            return H_static;
        Eigen::MatrixXcd H(n, n);
        ElementCache cache;  // per-time-point reuse of equivalent pairs
        for (Eigen::Index j = 0; j < n; ++j) {
            H(j, j) = eval.diagonal();
            for (Eigen::Index jp = j + 1; jp < n; ++jp) {
                const PairGeometry g = pair_geometry(array, j, jp);
                const Complex h =
                    t <= 0.0 ? Complex{0.0, 0.0}
                             : cache.get_or_compute(eval.params().k_a() * g.r, g.cos2(), [&] {
                                   return markov_element(t, g, eval.params(), eval.quadrature());
                               });
                H(j, jp) = h;
                H(jp, j) = h;
            }
        }
        return H;
    };

    auto f = [&](double t, const Eigen::VectorXcd& cvec) {
        return (-imag_unit * (hamiltonian_at(t) * cvec)).eval();
    };

    Trajectory traj;
    traj.times.resize(steps + 1);
    traj.states.reserve(steps + 1);
    traj.states.push_back(initial);
    for (long k = 0; k < steps; ++k) {
        const double t = k * dt;
        traj.times[k] = t;
        const Eigen::VectorXcd& ck = traj.states.back();
        if (settings.scheme_order == 1) {
            traj.states.push_back(ck + dt * f(t, ck));
        } else {
            const Eigen::VectorXcd mid = ck + 0.5 * dt * f(t, ck);
            traj.states.push_back(ck + dt * f(t + 0.5 * dt, mid));
        }
    }
    traj.times[steps] = steps * dt;
    return traj;
}

/// Per-time-point max_q |c_q^A - c_q^B| between two trajectories on the same grid.
struct DeviationSeries {
    std::vector<double> times;
    std::vector<double> max_deviation;
};

inline DeviationSeries markov_deviation(const Trajectory& exact, const Trajectory& markov)
{
    if (exact.times.size() != markov.times.size())
        throw std::invalid_argument("markov_deviation: trajectory grids differ in length");
    DeviationSeries dev;
    dev.times = exact.times;
    dev.max_deviation.reserve(exact.times.size());
    for (std::size_t k = 0; k < exact.times.size(); ++k) {
        if (std::abs(exact.times[k] - markov.times[k]) >
            1e-12 * std::max(1.0, std::abs(exact.times[k])))
            throw std::invalid_argument("markov_deviation: trajectory grids do not match");
        dev.max_deviation.push_back(
            (exact.states[k] - markov.states[k]).cwiseAbs().maxCoeff());
    }
    return dev;
}

} // namespace superrad
