#pragma once

#include <cstdint>
#include <vector>

#include "dualmink/core.hpp"

namespace dualmink {

// Finite subgroup of the orthogonal group O(n), stored as an explicit element list.
// Invariants: contains the identity, closed under products, every element orthogonal.
class FiniteGroup {
public:
    // Multiplicative closure of the generators. Throws InputError if a generator is
    // not orthogonal or the closure would exceed max_order (infinite or huge group).
    static FiniteGroup close_generators(const std::vector<Eigen::MatrixXd>& generators,
                                        int max_order = 10000);

    static FiniteGroup trivial(int n);

    int ambient() const { return ambient_; }
    std::size_t order() const { return elements_.size(); }
    const std::vector<Eigen::MatrixXd>& elements() const { return elements_; }

private:
    FiniteGroup(std::vector<Eigen::MatrixXd> elements, int n)
        : elements_(std::move(elements)), ambient_(n) {}
    std::vector<Eigen::MatrixXd> elements_;
    int ambient_;
};

// Common fixed subspace {x : gx = x for all g}.
Subspace fixed_subspace(const FiniteGroup& g);

// Orbit of a direction, deduplicated at the angular tolerance.
std::vector<UnitVector> orbit(const FiniteGroup& g, const UnitVector& v,
                              double tol = tolerances().angular);

// Probabilistic irreducibility test: symmetrized random symmetric matrices must be
// scalar. One-sided error; deterministic for a fixed seed.
bool is_irreducible(const FiniteGroup& g, int trials = 8, std::uint64_t seed = 20240901);

// Projector commutes with every element within tol.
bool is_invariant_subspace(const FiniteGroup& g, const Subspace& s,
                           double tol = tolerances().subspace_eq);

// Smallest invariant subspace containing the given vectors.
Subspace invariant_closure(const FiniteGroup& g, const std::vector<Eigen::VectorXd>& vectors);

// Restriction of the action to an invariant subspace, expressed in its basis.
// Throws InputError if s is not invariant.
FiniteGroup restrict_to(const FiniteGroup& g, const Subspace& s);

} // namespace dualmink
