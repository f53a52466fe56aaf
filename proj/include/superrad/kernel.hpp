#pragma once
//
// The retarded memory kernel, the Markov matrix-element integral (finite
// time and long-time limit) and the closed-form Kurizki-Molmer element.
//
// All integrals are evaluated in dimensionless variables x = k_a * r and
// u = omega_a * (t - tau); distance and wavelength enter only through x.
//

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <unordered_map>

#include "superrad/geometry.hpp"
#include "superrad/physics.hpp"
#include "superrad/quadrature.hpp"

namespace superrad {

using Complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr Complex imag_unit{0.0, 1.0};

/// Memory kernel G(s) of the coupled amplitude equations, in 1/s units.
/// Real part is the retarded propagation window, imaginary part the
/// logarithmic tail. Singular (integrably) at s = r/c.
inline Complex memory_kernel(double s, double r, const PhysicalParams& params)
{
    if (!(s >= 0.0))
        throw std::invalid_argument("memory_kernel: s must be >= 0");
    if (!(r > 0.0))
        throw std::invalid_argument("memory_kernel: r must be > 0");
    const double T = r / PhysicalParams::c_light;
    if (s == T)
        throw std::domain_error("memory_kernel: s = r/c is the (integrable) singular point");
    const double re = (s > 0.0 && s < T) ? 2.0 * pi / T : 0.0;
    const double im = -(2.0 / T) * std::log((T + s) / std::abs(T - s));
    return {re, im};
}

namespace detail {

// exp(i*m) - 1 without cancellation for small m
inline Complex expm1_i(double m)
{
    return {-2.0 * std::pow(std::sin(0.5 * m), 2), std::sin(m)};
}

// Box-window portion of int_0^U exp(iu) G~(u; x) du, in closed form.
inline Complex box_portion(double x, double U)
{
    const double m = std::min(U, x);
    return -imag_unit * (2.0 * pi / x) * expm1_i(m);
}

// Log-tail integrand exp(iu) * (-i) * (2/x) * ln((x+u)/|x-u|)
struct LogIntegrand {
    double x;
    Complex operator()(double u) const
    {
        const double L = (2.0 / x) * std::log((x + u) / std::abs(x - u));
        return Complex{std::sin(u), -std::cos(u)} * L;  // exp(iu) * (-i L)
    }
};

// Integrate the log tail over [0, U] (optionally weighted), excluding a
// sliver of relative width ~2^-46 around u = x where the integrand is
// singular; the omitted mass is below double-precision relevance.
template <typename W>
IntegralResult log_portion(double x, double U, const QuadratureSettings& q, W&& weight,
                           const std::vector<double>& weight_knots)
{
    LogIntegrand g{x};
    auto f = [&](double u) { return g(u) * weight(u); };
    const double eps = std::max(q.singularity_pad * x * 0x1p-46,
                                4.0 * std::numeric_limits<double>::epsilon() * x);

    IntegralResult total;
    auto run = [&](double lo, double hi) {
        if (!(hi > lo))
            return;
        std::vector<double> breaks = graded_singularity_breaks(x, q.singularity_pad, lo, hi);
        breaks.insert(breaks.end(), weight_knots.begin(), weight_knots.end());
        const IntegralResult r = integrate_piecewise(f, std::move(breaks), lo, hi, 0.02 * q.rel_tol);
        total.value += r.value;
        total.error += r.error;
        total.abs_integral += r.abs_integral;
    };
    if (U <= x - eps) {
        run(0.0, U);
    } else {
        run(0.0, x - eps);
        run(std::min(x + eps, U), U);
    }
    return total;
}

inline void check_converged(const IntegralResult& r, const Complex& full, double rel_tol,
                            const char* what)
{
    const double scale = std::max(std::abs(full), 0.01 * r.abs_integral);
    if (r.error > rel_tol * std::max(scale, 1e-300))
        throw NumericsError(std::string(what) + ": quadrature did not converge",
                            r.error / std::max(scale, 1e-300));
}

} // namespace detail

/// Reduced element integral I(x, U) = int_0^U exp(iu) G~(u; x) du at finite
/// upper limit U = omega_a * t.
inline Complex markov_integral(double x, double U, const QuadratureSettings& q)
{
    if (!(x > 0.0))
        throw std::invalid_argument("markov_integral: x must be > 0");
    if (U <= 0.0)
        return {0.0, 0.0};
    const Complex box = detail::box_portion(x, U);
    const IntegralResult lg =
        detail::log_portion(x, U, q, [](double) { return 1.0; }, {});
    detail::check_converged(lg, box + lg.value, q.rel_tol, "markov_integral");
    return box + lg.value;
}

/// Long-time limit of the reduced integral. The conditionally convergent
/// oscillatory tail is regularized by iterated period-averaging of the
/// running integral (equivalently: integration against the Irwin-Hall CDF
/// weight over the last avg_periods oscillation periods), with a
/// doubling-of-u_max stability check.
inline Complex asymptotic_integral(double x, const QuadratureSettings& q)
{
    if (!(x > 0.0))
        throw std::invalid_argument("asymptotic_integral: x must be > 0");
    constexpr double two_pi = 2.0 * pi;

    auto weighted = [&](double u_max) {
        const double ramp_lo = u_max - q.avg_periods * two_pi;
        auto w = [&](double u) {
            return u <= ramp_lo ? 1.0 : irwin_hall_cdf((u_max - u) / two_pi, q.avg_periods);
        };
        std::vector<double> knots;
        for (int k = 0; k <= q.avg_periods; ++k)
            knots.push_back(u_max - k * two_pi);
        return detail::log_portion(x, u_max, q, w, knots);
    };

    // u_max floor keeps the averaged tail residual below rel_tol at small x
    const double u_max = std::max(q.u_max_factor * x, 250.0);
    const Complex box = detail::box_portion(x, x);  // full window
    const IntegralResult base = weighted(u_max);
    const Complex value = box + base.value;
    detail::check_converged(base, value, q.rel_tol, "asymptotic_integral");

    const IntegralResult doubled = weighted(2.0 * u_max);
    const double scale = std::max(std::abs(box + doubled.value), 1e-300);
    const double drift = std::abs(base.value - doubled.value) / scale;
    if (drift > q.rel_tol)
        throw NumericsError("asymptotic_integral: tail not stable under doubling of u_max", drift);
    return value;
}

/// Overall element prefactor -i * (3/8pi) * (Gamma/2), applied to the
/// angular factor times the reduced integral.
inline Complex element_prefactor(const PhysicalParams& params)
{
    return -imag_unit * (3.0 / (8.0 * pi)) * 0.5 * params.gamma;
}

/// Finite-time effective-Hamiltonian matrix element for one pair.
inline Complex markov_element(double t, const PairGeometry& geom, const PhysicalParams& params,
                              const QuadratureSettings& q = {})
{
    if (!(t > 0.0))
        throw std::invalid_argument("markov_element: t must be > 0");
    const double angular = 1.0 - geom.cos2();
    if (angular == 0.0)
        return {0.0, 0.0};
    const double x = params.k_a() * geom.r;
    return element_prefactor(params) * angular * markov_integral(x, params.omega_a() * t, q);
}

/// Long-time (t >> r/c) effective-Hamiltonian matrix element for one pair.
inline Complex asymptotic_element(const PairGeometry& geom, const PhysicalParams& params,
                                  const QuadratureSettings& q = {})
{
    const double angular = 1.0 - geom.cos2();
    if (angular == 0.0)
        return {0.0, 0.0};
    const double x = params.k_a() * geom.r;
    return element_prefactor(params) * angular * asymptotic_integral(x, q);
}

/// Closed-form Kurizki-Molmer element (far-field sinc plus near-field terms).
inline Complex km_element(const PairGeometry& geom, const PhysicalParams& params)
{
    const double x = params.k_a() * geom.r;
    const double c2 = geom.cos2();
    // cos(x)/x^2 - sin(x)/x^3 loses ~eps/x^2 to cancellation at small x;
    // switch to its Taylor series sum_{k>=1} (-1)^k 2k x^{2k-2} / (2k+1)!
    double near;
    if (x < 0.5) {
        near = 0.0;
        const double x2 = x * x;
        double pw = 1.0, fact = 6.0;  // x^{2k-2}, (2k+1)! at k = 1
        for (int k = 1; k <= 10; ++k) {
            near += ((k % 2 != 0) ? -1.0 : 1.0) * 2.0 * k * pw / fact;
            pw *= x2;
            fact *= (2.0 * k + 2.0) * (2.0 * k + 3.0);
        }
    } else {
        near = std::cos(x) / (x * x) - std::sin(x) / (x * x * x);
    }
    const double bracket = 4.0 * pi * (1.0 - c2) * std::sin(x) / x +
                           4.0 * pi * (1.0 - 3.0 * c2) * near;
    return element_prefactor(params) * bracket;
}

/// Uncoupled (j = j') element, pinned to the Wigner-Weisskopf value.
inline Complex diagonal_element(const PhysicalParams& params)
{
    return {0.0, -0.5 * params.gamma};
}

/// Memoization cache for pair elements. A lattice has O(N) distinct
/// (x, cos^2 theta) pair classes, not O(N^2) pairs; large scans rely on this.
/// Safe for concurrent insert/read.
class ElementCache {
public:
    template <typename Compute>
    Complex get_or_compute(double x, double cos2, Compute&& compute)
    {
        const Key key{quantize(x), quantize(cos2)};
        {
            std::lock_guard lock(mutex_);
            if (auto it = map_.find(key); it != map_.end())
                return it->second;
        }
        const Complex value = compute();
        std::lock_guard lock(mutex_);
        map_.emplace(key, value);
        return value;
    }

    std::size_t size() const
    {
        std::lock_guard lock(mutex_);
        return map_.size();
    }

private:
    struct Key {
        std::int64_t x_q, c2_q;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const
        {
            const std::uint64_t a = static_cast<std::uint64_t>(k.x_q) * 0x9e3779b97f4a7c15ull;
            return static_cast<std::size_t>(a ^ (static_cast<std::uint64_t>(k.c2_q) + (a >> 31)));
        }
    };
    static std::int64_t quantize(double v) { return std::llround(v * 1e12); }

    mutable std::mutex mutex_;
    std::unordered_map<Key, Complex, KeyHash> map_;
};

enum class Model { MemoryKernel, KM };

inline const char* model_name(Model m)
{
    return m == Model::MemoryKernel ? "memory_kernel" : "km";
}

/// Memoized pair-element evaluator for one (params, model, settings) context.
class ElementEvaluator {
public:
    ElementEvaluator(PhysicalParams params, Model model, QuadratureSettings q = {},
                     std::shared_ptr<ElementCache> cache = nullptr)
        : params_(params), model_(model), q_(q)
        , cache_(cache ? std::move(cache) : std::make_shared<ElementCache>())
    {
        params_.validate();
        q_.validate();
    }

    Complex operator()(const PairGeometry& geom) const
    {
        const double x = params_.k_a() * geom.r;
        const double c2 = geom.cos2();
        return cache_->get_or_compute(x, c2, [&] {
            return model_ == Model::KM ? km_element(geom, params_)
                                       : asymptotic_element(geom, params_, q_);
        });
    }

    Complex diagonal() const { return diagonal_element(params_); }

    const PhysicalParams& params() const { return params_; }
    Model model() const { return model_; }
    const QuadratureSettings& quadrature() const { return q_; }
    const std::shared_ptr<ElementCache>& cache() const { return cache_; }

private:
    PhysicalParams params_;
    Model model_;
    QuadratureSettings q_;
    std::shared_ptr<ElementCache> cache_;
};

} // namespace superrad
