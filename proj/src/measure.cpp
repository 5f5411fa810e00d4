#include "dualmink/measure.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace dualmink {

namespace {

int find_atom(const std::vector<Atom>& atoms, const UnitVector& dir, double tol) {
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (atoms[i].direction.distance(dir) <= tol) return static_cast<int>(i);
    }
    return -1;
}

} // namespace

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms, int n)
    : atoms_(std::move(atoms)), ambient_(n), total_mass_(0.0) {
    for (const auto& a : atoms_) total_mass_ += a.weight;
}

DiscreteMeasure DiscreteMeasure::from_atoms(std::vector<Atom> atoms) {
    if (atoms.empty()) throw InputError("DiscreteMeasure: no atoms (use empty() for the zero measure)");
    const int n = atoms.front().direction.ambient();
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (atoms[i].direction.ambient() != n) {
            throw InputError("DiscreteMeasure: atom dimensions disagree");
        }
        if (!(atoms[i].weight > 0.0) || !std::isfinite(atoms[i].weight)) {
            throw InputError("DiscreteMeasure: weights must be strictly positive and finite");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (atoms[i].direction.distance(atoms[j].direction) <= tolerances().angular) {
                throw InputError("DiscreteMeasure: duplicate atom directions");
            }
        }
    }
    return DiscreteMeasure(std::move(atoms), n);
}

DiscreteMeasure DiscreteMeasure::empty(int n) {
    if (n < 1) throw InputError("DiscreteMeasure::empty: ambient dimension must be positive");
    return DiscreteMeasure({}, n);
}

bool is_invariant_measure(const DiscreteMeasure& mu, const FiniteGroup& g, double tol) {
    if (mu.ambient() != g.ambient()) throw InputError("is_invariant_measure: dimension mismatch");
    if (!mu.valid()) return true;
    const double match_tol = tolerances().group_dedup;
    for (const auto& m : g.elements()) {
        for (const auto& a : mu.atoms()) {
            UnitVector image(m * a.direction.coords());
            const int j = find_atom(mu.atoms(), image, match_tol);
            if (j < 0) return false;
            if (std::abs(mu.atoms()[static_cast<std::size_t>(j)].weight - a.weight) >
                tol * mu.total_mass()) {
                return false;
            }
        }
    }
    return true;
}

DiscreteMeasure symmetrize(const DiscreteMeasure& mu, const FiniteGroup& g) {
    if (mu.ambient() != g.ambient()) throw InputError("symmetrize: dimension mismatch");
    if (!mu.valid()) return mu;
    const double share = 1.0 / static_cast<double>(g.order());
    std::vector<Atom> merged;
    merged.reserve(mu.size() * g.order());
    for (const auto& m : g.elements()) {
        for (const auto& a : mu.atoms()) {
            UnitVector image(m * a.direction.coords());
            const int j = find_atom(merged, image, tolerances().angular);
            if (j >= 0) {
                merged[static_cast<std::size_t>(j)].weight += a.weight * share;
            } else {
                merged.push_back({std::move(image), a.weight * share});
            }
        }
    }
    const double drop = tolerances().weight_drop * mu.total_mass();
    std::vector<Atom> kept;
    kept.reserve(merged.size());
    for (auto& a : merged) {
        if (a.weight >= drop) kept.push_back(std::move(a));
    }
    return DiscreteMeasure::from_atoms(std::move(kept));
}

double subspace_mass(const DiscreteMeasure& mu, const Subspace& l, double tol) {
    if (mu.ambient() != l.ambient()) throw InputError("subspace_mass: dimension mismatch");
    double mass = 0.0;
    for (const auto& a : mu.atoms()) {
        if (l.contains(a.direction.coords(), tol)) mass += a.weight;
    }
    return mass;
}

Eigen::MatrixXd second_moment(const DiscreteMeasure& mu) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(mu.ambient(), mu.ambient());
    for (const auto& a : mu.atoms()) {
        m += a.weight * a.direction.coords() * a.direction.coords().transpose();
    }
    return m;
}

std::vector<std::vector<int>> atom_orbits(const DiscreteMeasure& mu, const FiniteGroup& g,
                                          double tol) {
    if (mu.ambient() != g.ambient()) throw InputError("atom_orbits: dimension mismatch");
    std::vector<int> orbit_of(mu.size(), -1);
    std::vector<std::vector<int>> orbits;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (orbit_of[i] >= 0) continue;
        const int id = static_cast<int>(orbits.size());
        orbits.emplace_back();
        orbit_of[i] = id;
        orbits[static_cast<std::size_t>(id)].push_back(static_cast<int>(i));
        for (const auto& m : g.elements()) {
            UnitVector image(m * mu.atoms()[i].direction.coords());
            const int j = find_atom(mu.atoms(), image, tol);
            if (j >= 0 && orbit_of[static_cast<std::size_t>(j)] < 0) {
                orbit_of[static_cast<std::size_t>(j)] = id;
                orbits[static_cast<std::size_t>(id)].push_back(j);
            }
        }
    }
    return orbits;
}

namespace {

// Closure-lattice enumeration shared by the invariant and trivial-group candidate
// sets. Blocks are atom groups added as a unit; closure() maps a vector set to a
// subspace. A lattice node is identified by the exact set of blocks it contains,
// which determines the subspace (a closed subspace equals the closure of the blocks
// it contains), so the bitmask dedup is exact.
std::vector<Subspace> enumerate_closed(
    const DiscreteMeasure& mu, const std::vector<std::vector<int>>& blocks,
    const std::function<Subspace(const std::vector<Eigen::VectorXd>&)>& closure,
    std::size_t max_subsets) {
    const int n = mu.ambient();
    if (blocks.size() > 62) {
        throw InputError("candidate enumeration: too many atom orbits for exhaustive search");
    }
    const double tol = tolerances().membership;

    auto block_mask = [&](const Subspace& s) {
        std::uint64_t mask = 0;
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            bool all_in = true;
            for (int idx : blocks[b]) {
                if (!s.contains(mu.atoms()[static_cast<std::size_t>(idx)].direction.coords(), tol)) {
                    all_in = false;
                    break;
                }
            }
            if (all_in) mask |= (std::uint64_t{1} << b);
        }
        return mask;
    };

    std::vector<std::pair<std::uint64_t, Subspace>> nodes;
    auto closure_of_mask = [&](std::uint64_t mask) {
        std::vector<Eigen::VectorXd> vecs;
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            if (mask & (std::uint64_t{1} << b)) {
                for (int idx : blocks[b]) {
                    vecs.push_back(mu.atoms()[static_cast<std::size_t>(idx)].direction.coords());
                }
            }
        }
        return closure(vecs);
    };

    std::size_t frontier_begin = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        Subspace s = closure_of_mask(std::uint64_t{1} << b);
        const std::uint64_t mask = block_mask(s);
        bool seen = false;
        for (const auto& node : nodes) {
            if (node.first == mask) { seen = true; break; }
        }
        if (!seen) nodes.emplace_back(mask, std::move(s));
    }

    while (frontier_begin < nodes.size()) {
        const std::size_t frontier_end = nodes.size();
        for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
            if (nodes[i].second.dim() >= n) continue;
            for (std::size_t b = 0; b < blocks.size(); ++b) {
                const std::uint64_t bit = std::uint64_t{1} << b;
                if (nodes[i].first & bit) continue;
                Subspace s = closure_of_mask(nodes[i].first | bit);
                const std::uint64_t mask = block_mask(s);
                bool seen = false;
                for (const auto& node : nodes) {
                    if (node.first == mask) { seen = true; break; }
                }
                if (!seen) {
                    if (nodes.size() >= max_subsets) {
                        throw InputError("candidate enumeration: lattice exceeds max_subsets");
                    }
                    nodes.emplace_back(mask, std::move(s));
                }
            }
        }
        frontier_begin = frontier_end;
    }

    std::vector<Subspace> result;
    for (auto& node : nodes) {
        if (node.second.dim() > 0 && node.second.dim() < n) {
            result.push_back(std::move(node.second));
        }
    }
    return result;
}

} // namespace

std::vector<Subspace> candidate_invariant_subspaces(const DiscreteMeasure& mu,
                                                    const FiniteGroup& g,
                                                    std::size_t max_subsets) {
    if (mu.ambient() != g.ambient()) {
        throw InputError("candidate_invariant_subspaces: dimension mismatch");
    }
    if (!mu.valid()) return {};
    const auto orbits = atom_orbits(mu, g);
    return enumerate_closed(
        mu, orbits,
        [&](const std::vector<Eigen::VectorXd>& vecs) { return invariant_closure(g, vecs); },
        max_subsets);
}

std::vector<Subspace> candidate_spans(const DiscreteMeasure& mu, std::size_t max_subsets) {
    if (!mu.valid()) return {};
    std::vector<std::vector<int>> singletons;
    singletons.reserve(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        singletons.push_back({static_cast<int>(i)});
    }
    return enumerate_closed(
        mu, singletons,
        [&](const std::vector<Eigen::VectorXd>& vecs) { return span_of(vecs, mu.ambient()); },
        max_subsets);
}

DiscreteMeasure restrict_measure(const DiscreteMeasure& mu, const Subspace& l, double tol) {
    if (mu.ambient() != l.ambient()) throw InputError("restrict_measure: dimension mismatch");
    if (l.dim() == 0) throw InputError("restrict_measure: zero target subspace");
    std::vector<Atom> atoms;
    for (const auto& a : mu.atoms()) {
        if (l.contains(a.direction.coords(), tol)) {
            atoms.push_back({UnitVector(l.basis().transpose() * a.direction.coords()), a.weight});
        }
    }
    if (atoms.empty()) return DiscreteMeasure::empty(l.dim());
    return DiscreteMeasure::from_atoms(std::move(atoms));
}

} // namespace dualmink
