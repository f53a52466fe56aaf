#include <catch2/catch_amalgamated.hpp>

#include "superrad/geometry.hpp"
#include "superrad/scaling.hpp"

using namespace superrad;

TEST_CASE("lattice spec validation")
{
    LatticeSpec good{{2, 2, 2}, 20.0, {0.0, 0.0, 1.0}};
    REQUIRE_NOTHROW(good.validate());

    LatticeSpec bad = good;
    bad.spacing = 0.0;
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = good;
    bad.dims = {2, 0, 2};
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = good;
    bad.dipole = {0.0, 0.0, 2.0};
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("build_lattice index order and corner")
{
    const LatticeSpec spec{{2, 3, 4}, 1.5, {0.0, 0.0, 1.0}};
    const QubitArray arr = build_lattice(spec);
    REQUIRE(arr.size() == 24);
    REQUIRE(corner_index(arr) == 0);
    REQUIRE(arr.position(0).isApprox(Eigen::Vector3d(0, 0, 0)));
    // last axis fastest
    REQUIRE(arr.position(1).isApprox(Eigen::Vector3d(0, 0, 1.5)));
    REQUIRE(arr.position(4).isApprox(Eigen::Vector3d(0, 1.5, 0)));
    REQUIRE(arr.position(12).isApprox(Eigen::Vector3d(1.5, 0, 0)));
    REQUIRE(arr.position(23).isApprox(Eigen::Vector3d(1.5, 3.0, 4.5)));
}

TEST_CASE("pair geometry distances and angles")
{
    const LatticeSpec spec{{2, 1, 2}, 2.0, {0.0, 0.0, 1.0}};
    const QubitArray arr = build_lattice(spec);
    // index: i1*2 + i3; pair (0,1) along z, (0,2) along x, (0,3) diagonal
    const PairGeometry gz = pair_geometry(arr, 0, 1);
    REQUIRE(gz.r == Catch::Approx(2.0));
    REQUIRE(std::abs(gz.cos_theta) == Catch::Approx(1.0));

    const PairGeometry gx = pair_geometry(arr, 0, 2);
    REQUIRE(gx.r == Catch::Approx(2.0));
    REQUIRE(gx.cos_theta == Catch::Approx(0.0).margin(1e-15));

    const PairGeometry gd = pair_geometry(arr, 0, 3);
    REQUIRE(gd.r == Catch::Approx(2.0 * std::sqrt(2.0)));
    REQUIRE(gd.cos2() == Catch::Approx(0.5));

    // symmetric under index swap (cos_theta flips sign, cos2 does not)
    const PairGeometry grev = pair_geometry(arr, 3, 0);
    REQUIRE(grev.r == Catch::Approx(gd.r));
    REQUIRE(grev.cos2() == Catch::Approx(gd.cos2()));
}

TEST_CASE("pair geometry error paths")
{
    const QubitArray arr = build_lattice(LatticeSpec{{2, 1, 1}, 1.0, {0, 0, 1}});
    REQUIRE_THROWS_AS(pair_geometry(arr, 0, 0), std::invalid_argument);
    REQUIRE_THROWS_AS(pair_geometry(arr, 0, 2), std::out_of_range);
    REQUIRE_THROWS_AS(pair_geometry(arr, 5, 0), std::out_of_range);
}

TEST_CASE("pair geometry is translation invariant")
{
    const LatticeSpec spec{{2, 2, 2}, 3.0, {0, 0, 1}};
    const QubitArray base = build_lattice(spec);

    std::vector<Eigen::Vector3d> shifted = base.positions();
    const Eigen::Vector3d offset(17.0, -4.0, 2.5);
    for (auto& p : shifted)
        p += offset;
    const QubitArray moved(std::move(shifted), spec);

    for (std::size_t j = 0; j < base.size(); ++j)
        for (std::size_t jp = 0; jp < base.size(); ++jp) {
            if (j == jp)
                continue;
            const PairGeometry a = pair_geometry(base, j, jp);
            const PairGeometry b = pair_geometry(moved, j, jp);
            REQUIRE(a.r == Catch::Approx(b.r));
            REQUIRE(a.cos_theta == Catch::Approx(b.cos_theta).margin(1e-14));
        }
}

TEST_CASE("lattice template side sweeps")
{
    const LatticeTemplate cubic{20.0, {0, 0, 1}, /*planar=*/false};
    REQUIRE(cubic.at_side(4).dims == std::array<int, 3>{4, 4, 4});
    REQUIRE(cubic.at_side(4).qubit_count() == 64);

    const LatticeTemplate planar{20.0, {0, 0, 1}, /*planar=*/true};
    REQUIRE(planar.at_side(4).dims == std::array<int, 3>{4, 4, 1});
    REQUIRE(planar.at_side(4).qubit_count() == 16);
}
