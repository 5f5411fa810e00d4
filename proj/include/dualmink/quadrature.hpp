#pragma once

#include <cstdint>
#include <string>

#include "dualmink/core.hpp"
#include "dualmink/group.hpp"

namespace dualmink {

// Surface area of the unit sphere in R^n.
double sphere_area(int n);

// Volume of the unit ball in R^n.
double ball_volume(int n);

// Quadrature rule on the unit sphere: node columns and positive weights summing
// to the sphere area. Construction is deterministic for a fixed seed.
class SphereQuadrature {
public:
    // n = 1: the two endpoint directions, weight 1 each.
    static SphereQuadrature pair();
    // n = 2: uniform angular grid, staggered by `offset` cells.
    static SphereQuadrature circle(int nodes, double offset = 0.5);
    // n = 3: spiral lattice with equal weights.
    static SphereQuadrature spiral(int nodes);
    // any n >= 2: seeded uniform sampling with equal weights.
    static SphereQuadrature monte_carlo(int n, int nodes, std::uint64_t seed);
    // dispatch on dimension: circle / spiral / monte_carlo.
    static SphereQuadrature for_dimension(int n, int nodes, std::uint64_t seed);

    // Union of group translates with weights divided by the group order. The node
    // multiset becomes exactly invariant; totals are preserved.
    SphereQuadrature symmetrized(const FiniteGroup& g) const;

    // Variant with doubled resolution and decorrelated nodes, for independent
    // recomputation of the same integrals.
    SphereQuadrature independent_variant(std::uint64_t salt) const;

    int ambient() const { return static_cast<int>(nodes_.rows()); }
    Eigen::Index size() const { return nodes_.cols(); }
    const Eigen::MatrixXd& nodes() const { return nodes_; }
    const Eigen::VectorXd& weights() const { return weights_; }
    const std::string& scheme() const { return scheme_; }
    std::uint64_t seed() const { return seed_; }

private:
    SphereQuadrature(Eigen::MatrixXd nodes, Eigen::VectorXd weights, std::string scheme,
                     std::uint64_t seed)
        : nodes_(std::move(nodes)), weights_(std::move(weights)), scheme_(std::move(scheme)),
          seed_(seed) {}
    Eigen::MatrixXd nodes_;   // n x M, unit columns
    Eigen::VectorXd weights_; // M, positive, summing to sphere_area(n)
    std::string scheme_;
    std::uint64_t seed_ = 0;
};

} // namespace dualmink
