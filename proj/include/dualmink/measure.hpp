#pragma once

#include <cstdint>
#include <vector>

#include "dualmink/core.hpp"
#include "dualmink/group.hpp"

namespace dualmink {

struct Atom {
    UnitVector direction;
    double weight;
};

// Finite discrete measure on the unit sphere with strictly positive weights and
// pairwise distinct directions. An empty measure (total mass zero) is representable
// only through the empty() factory and reports valid() == false.
class DiscreteMeasure {
public:
    static DiscreteMeasure from_atoms(std::vector<Atom> atoms);
    static DiscreteMeasure empty(int n);

    int ambient() const { return ambient_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    double total_mass() const { return total_mass_; }
    bool valid() const { return !atoms_.empty(); }

private:
    DiscreteMeasure(std::vector<Atom> atoms, int n);
    std::vector<Atom> atoms_;
    int ambient_;
    double total_mass_;
};

// Every atom maps to an atom of equal weight under each group element.
bool is_invariant_measure(const DiscreteMeasure& mu, const FiniteGroup& g,
                          double tol = 1e-9);

// Group average of the measure; atoms merged at the angular tolerance,
// relative weights below the drop threshold discarded. Total mass is preserved.
DiscreteMeasure symmetrize(const DiscreteMeasure& mu, const FiniteGroup& g);

// Mass carried by atoms lying in the subspace (within tol).
double subspace_mass(const DiscreteMeasure& mu, const Subspace& l,
                     double tol = tolerances().membership);

// Second moment matrix  sum_i w_i u_i u_i^T.
Eigen::MatrixXd second_moment(const DiscreteMeasure& mu);

// All proper nonzero invariant subspaces of the form invariant_closure(G, A) for
// atom subsets A, deduplicated. Enumeration walks the closure lattice generated by
// atom orbits; throws InputError when the lattice would exceed max_subsets nodes.
std::vector<Subspace> candidate_invariant_subspaces(const DiscreteMeasure& mu,
                                                    const FiniteGroup& g,
                                                    std::size_t max_subsets = 1u << 20);

// All proper nonzero spans of atom subsets (trivial-group candidate lattice).
std::vector<Subspace> candidate_spans(const DiscreteMeasure& mu,
                                      std::size_t max_subsets = 1u << 20);

// Measure of the atoms inside l, re-expressed in the basis coordinates of l.
// Atoms outside l are ignored; returns an empty measure if none lie inside.
DiscreteMeasure restrict_measure(const DiscreteMeasure& mu, const Subspace& l,
                                 double tol = tolerances().membership);

// Partition of the atom indices into group orbits (indices into mu.atoms()).
std::vector<std::vector<int>> atom_orbits(const DiscreteMeasure& mu, const FiniteGroup& g,
                                          double tol = 1e-8);

} // namespace dualmink
