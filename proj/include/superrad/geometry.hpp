#pragma once
//
// Rectangular qubit lattices and the pairwise geometric quantities
// (separation distance, dipole angle) that the interaction elements need.
//

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace superrad {

/// Extents, spacing and dipole orientation of a rectangular lattice.
/// 2D arrays are 3D lattices with one extent equal to 1.
struct LatticeSpec {
    std::array<int, 3> dims{1, 1, 1};   // qubit counts per axis
    double spacing = 0.0;               // inter-qubit spacing d [cm]
    Eigen::Vector3d dipole{0.0, 0.0, 1.0};  // unit dipole direction

    void validate() const
    {
        for (int n : dims)
            if (n < 1)
                throw std::invalid_argument("LatticeSpec: all extents must be >= 1");
        if (!(spacing > 0.0))
            throw std::invalid_argument("LatticeSpec: spacing must be > 0");
        if (std::abs(dipole.norm() - 1.0) > 1e-12)
            throw std::invalid_argument("LatticeSpec: dipole direction must be a unit vector");
    }

    std::size_t qubit_count() const
    {
        return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
    }
};

/// Immutable set of qubit positions generated from a LatticeSpec.
/// Index order is row-major with the last axis fastest; the qubit at the
/// coordinate origin has index 0.
class QubitArray {
public:
    QubitArray(std::vector<Eigen::Vector3d> positions, LatticeSpec spec)
        : positions_(std::move(positions)), spec_(std::move(spec))
    {}

    std::size_t size() const { return positions_.size(); }
    const Eigen::Vector3d& position(std::size_t j) const { return positions_.at(j); }
    const std::vector<Eigen::Vector3d>& positions() const { return positions_; }
    const LatticeSpec& spec() const { return spec_; }

private:
    std::vector<Eigen::Vector3d> positions_;
    LatticeSpec spec_;
};

/// Separation distance and dipole angle cosine for one qubit pair.
/// Only r and cos_theta^2 are consumed downstream, so the sign of
/// cos_theta is irrelevant to every caller.
struct PairGeometry {
    double r = 0.0;          // |r_j - r_j'| [cm]
    double cos_theta = 0.0;  // dipole . (r_j - r_j') / r

    double cos2() const { return cos_theta * cos_theta; }
};

inline QubitArray build_lattice(const LatticeSpec& spec)
{
    spec.validate();
    std::vector<Eigen::Vector3d> pos;
    pos.reserve(spec.qubit_count());
    for (int i1 = 0; i1 < spec.dims[0]; ++i1)
        for (int i2 = 0; i2 < spec.dims[1]; ++i2)
            for (int i3 = 0; i3 < spec.dims[2]; ++i3)
                pos.emplace_back(i1 * spec.spacing, i2 * spec.spacing, i3 * spec.spacing);
    return QubitArray(std::move(pos), spec);
}

inline PairGeometry pair_geometry(const QubitArray& array, std::size_t j, std::size_t jp)
{
    if (j >= array.size() || jp >= array.size())
        throw std::out_of_range("pair_geometry: qubit index out of range");
    if (j == jp)
        throw std::invalid_argument("pair_geometry: j == j' has zero separation");
    const Eigen::Vector3d sep = array.position(j) - array.position(jp);
    const double r = sep.norm();
    return PairGeometry{r, array.spec().dipole.dot(sep) / r};
}

/// Index of the qubit at the origin ("atom at the corner").
inline std::size_t corner_index(const QubitArray& array)
{
    return 0;
}

} // namespace superrad
