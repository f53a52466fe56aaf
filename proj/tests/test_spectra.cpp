#include <catch2/catch_amalgamated.hpp>

#include <numeric>

#include "oracles.hpp"
#include "superrad/spectra.hpp"

using namespace superrad;

namespace {

EffectiveHamiltonian make_h(const LatticeSpec& spec, Model model,
                            const PhysicalParams& params = PhysicalParams{1.0, 9.0})
{
    return build_single_excitation(build_lattice(spec), ElementEvaluator(params, model));
}

} // namespace

TEST_CASE("two-qubit spectrum is analytic")
{
    const PhysicalParams params{1.0, 9.0};
    const EffectiveHamiltonian H = make_h(LatticeSpec{{2, 1, 1}, 20.0, {0, 0, 1}}, Model::KM);
    const Complex h = H.matrix(0, 1);
    REQUIRE(h.imag() != 0.0);

    const SpectrumResult res = eigen_spectrum(H);
    REQUIRE(res.eigenvalues.size() == 2);

    // eigenvalues -i Gamma/2 +- h, sorted by descending rate
    const Complex lo{h.real() - 0.0, -0.5 - std::abs(h.imag())};
    const Complex hi{0.0, -0.5 + std::abs(h.imag())};
    REQUIRE(std::abs(res.eigenvalues[0] - lo) < 1e-12);
    REQUIRE(std::abs(res.eigenvalues[1] - hi) < 1e-12);

    REQUIRE(res.collective_rates[0] == Catch::Approx(std::abs(h.imag())));
    REQUIRE(res.collective_rates[1] == Catch::Approx(-std::abs(h.imag())));
    REQUIRE(res.largest_rate == Catch::Approx(std::abs(h.imag())));
    REQUIRE(superradiant_fraction(res) == Catch::Approx(0.5));
}

TEST_CASE("spectrum matches independent eigenvalue oracles")
{
    for (Model model : {Model::KM, Model::MemoryKernel}) {
        // asymmetric cuboid: the cubic lattice has symmetry-degenerate
        // eigenvalues, which characteristic-polynomial root finding can only
        // resolve to ~sqrt(machine eps); simple roots are accurate
        const EffectiveHamiltonian Hsimple =
            make_h(LatticeSpec{{1, 2, 3}, 20.0, {0, 0, 1}}, model);
        const std::vector<Complex> lib_simple = eigen_spectrum(Hsimple).eigenvalues;
        const std::vector<Complex> poly = oracles::charpoly_eigenvalues(Hsimple.matrix);
        REQUIRE(oracles::max_pairing_error(lib_simple, poly) < 1e-8);

        // real 2N x 2N embedding spectrum = eig(H) union conj(eig(H))
        const EffectiveHamiltonian H =
            make_h(LatticeSpec{{2, 2, 2}, 20.0, {0, 0, 1}}, model);
        const std::vector<Complex> lib = eigen_spectrum(H).eigenvalues;
        std::vector<Complex> expected = lib;
        for (const Complex& ev : lib)
            expected.push_back(std::conj(ev));
        const std::vector<Complex> embed = oracles::real_embedding_eigenvalues(H.matrix);
        REQUIRE(oracles::max_pairing_error(expected, embed) < 1e-8);
    }
}

TEST_CASE("collective rates sum to zero by the trace identity")
{
    for (Model model : {Model::KM, Model::MemoryKernel}) {
        const SpectrumResult res =
            eigen_spectrum(make_h(LatticeSpec{{3, 3, 3}, 20.0, {0, 0, 1}}, model));
        const double sum =
            std::accumulate(res.collective_rates.begin(), res.collective_rates.end(), 0.0);
        REQUIRE(std::abs(sum) < 1e-10 * res.collective_rates.size());
    }
}

TEST_CASE("spectrum scales linearly with gamma")
{
    const SpectrumResult base =
        eigen_spectrum(make_h(LatticeSpec{{2, 2, 1}, 20.0, {0, 0, 1}}, Model::KM));
    const SpectrumResult scaled = eigen_spectrum(
        make_h(LatticeSpec{{2, 2, 1}, 20.0, {0, 0, 1}}, Model::KM, PhysicalParams{1e9, 9.0}));
    for (std::size_t k = 0; k < base.collective_rates.size(); ++k)
        REQUIRE(scaled.collective_rates[k] ==
                Catch::Approx(1e9 * base.collective_rates[k]).margin(1e-4));
}

TEST_CASE("single qubit has zero collective rate")
{
    const SpectrumResult res =
        eigen_spectrum(make_h(LatticeSpec{{1, 1, 1}, 20.0, {0, 0, 1}}, Model::KM));
    REQUIRE(res.eigenvalues.size() == 1);
    REQUIRE(res.eigenvalues[0] == Complex{0.0, -0.5});
    REQUIRE(res.largest_rate == 0.0);
    REQUIRE(res.min_abs_rate == 0.0);
}

TEST_CASE("rate width matches a direct computation")
{
    SpectrumResult res;
    res.collective_rates = {1.0, -1.0, 3.0, -3.0};
    REQUIRE(rate_width(res) == Catch::Approx(std::sqrt(5.0)));
}

TEST_CASE("rate histogram binning rules")
{
    SpectrumResult res;
    res.collective_rates = {0.0, 1.0, 2.0, 3.0, 4.0};
    const Histogram h = rate_histogram(res, 4);
    REQUIRE(h.bin_edges.size() == 5);
    REQUIRE(h.bin_edges.front() == 0.0);
    REQUIRE(h.bin_edges.back() == 4.0);
    // interior boundary values fall in the lower bin; the max goes last
    REQUIRE(h.counts == std::vector<std::size_t>{2, 1, 1, 1});

    const std::size_t total = std::accumulate(h.counts.begin(), h.counts.end(), std::size_t{0});
    REQUIRE(total == res.collective_rates.size());

    // degenerate span collapses to one bin
    SpectrumResult flat;
    flat.collective_rates = {0.5, 0.5, 0.5};
    const Histogram hf = rate_histogram(flat, 10);
    REQUIRE(hf.counts == std::vector<std::size_t>{3});

    REQUIRE_THROWS_AS(rate_histogram(res, 0), std::invalid_argument);
}

TEST_CASE("histogram counts are conserved on a real spectrum")
{
    const SpectrumResult res =
        eigen_spectrum(make_h(LatticeSpec{{3, 3, 3}, 20.0, {0, 0, 1}}, Model::KM));
    const Histogram h = rate_histogram(res, 41);
    const std::size_t total = std::accumulate(h.counts.begin(), h.counts.end(), std::size_t{0});
    REQUIRE(total == res.collective_rates.size());
    REQUIRE(superradiant_fraction(res) > 0.0);
    REQUIRE(superradiant_fraction(res) < 1.0);
}
