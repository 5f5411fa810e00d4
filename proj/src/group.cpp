#include "dualmink/group.hpp"

#include <random>
#include <string>

namespace dualmink {

namespace {

bool matrices_close(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double tol) {
    return (a - b).cwiseAbs().maxCoeff() <= tol;
}

int find_element(const std::vector<Eigen::MatrixXd>& elements, const Eigen::MatrixXd& m,
                 double tol) {
    for (std::size_t i = 0; i < elements.size(); ++i) {
        if (matrices_close(elements[i], m, tol)) return static_cast<int>(i);
    }
    return -1;
}

} // namespace

FiniteGroup FiniteGroup::close_generators(const std::vector<Eigen::MatrixXd>& generators,
                                          int max_order) {
    if (generators.empty()) throw InputError("close_generators: no generators given");
    const int n = static_cast<int>(generators.front().rows());
    for (const auto& g : generators) {
        if (g.rows() != n || g.cols() != n) {
            throw InputError("close_generators: generator dimensions disagree");
        }
        if (!is_orthogonal_matrix(g, tolerances().algebra)) {
            throw InputError("close_generators: generator is not orthogonal");
        }
    }

    const double tol = tolerances().group_dedup;
    std::vector<Eigen::MatrixXd> elements;
    elements.push_back(Eigen::MatrixXd::Identity(n, n));
    for (const auto& g : generators) {
        if (find_element(elements, g, tol) < 0) elements.push_back(g);
    }

    // Breadth-first product closure; finite orthogonal groups are closed under
    // products alone since every element has finite order.
    std::size_t frontier_begin = 0;
    while (frontier_begin < elements.size()) {
        const std::size_t frontier_end = elements.size();
        for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
            for (const auto& g : generators) {
                for (const Eigen::MatrixXd& prod :
                     {Eigen::MatrixXd(elements[i] * g), Eigen::MatrixXd(g * elements[i])}) {
                    if (find_element(elements, prod, tol) < 0) {
                        if (static_cast<int>(elements.size()) >= max_order) {
                            throw InputError(
                                "close_generators: closure exceeds max_order = " +
                                std::to_string(max_order) + " (infinite or too-large group)");
                        }
                        elements.push_back(prod);
                    }
                }
            }
        }
        frontier_begin = frontier_end;
    }
    return FiniteGroup(std::move(elements), n);
}

FiniteGroup FiniteGroup::trivial(int n) {
    if (n < 1) throw InputError("FiniteGroup::trivial: ambient dimension must be positive");
    return FiniteGroup({Eigen::MatrixXd::Identity(n, n)}, n);
}

Subspace fixed_subspace(const FiniteGroup& g) {
    const int n = g.ambient();
    if (g.order() == 1) return Subspace::full(n);
    // Common kernel of (g - I): null space of the stacked differences.
    Eigen::MatrixXd stacked(static_cast<Eigen::Index>(g.order()) * n, n);
    Eigen::Index row = 0;
    for (const auto& m : g.elements()) {
        stacked.middleRows(row, n) = m - Eigen::MatrixXd::Identity(n, n);
        row += n;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i) {
        if (sv[i] > tolerances().algebra * std::max(1.0, sv[0])) ++rank;
    }
    if (rank == n) return Subspace::zero(n);
    return Subspace::from_orthonormal(svd.matrixV().rightCols(n - rank), n);
}

std::vector<UnitVector> orbit(const FiniteGroup& g, const UnitVector& v, double tol) {
    if (v.ambient() != g.ambient()) throw InputError("orbit: dimension mismatch");
    std::vector<UnitVector> result;
    result.reserve(g.order());
    for (const auto& m : g.elements()) {
        UnitVector image(m * v.coords());
        bool seen = false;
        for (const auto& u : result) {
            if (u.distance(image) <= tol) {
                seen = true;
                break;
            }
        }
        if (!seen) result.push_back(std::move(image));
    }
    return result;
}

bool is_irreducible(const FiniteGroup& g, int trials, std::uint64_t seed) {
    const int n = g.ambient();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int t = 0; t < trials; ++t) {
        Eigen::MatrixXd a(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = i; j < n; ++j) {
                const double x = gauss(rng);
                a(i, j) = x;
                a(j, i) = x;
            }
        }
        Eigen::MatrixXd sym = Eigen::MatrixXd::Zero(n, n);
        for (const auto& m : g.elements()) {
            sym += m * a * m.transpose();
        }
        sym /= static_cast<double>(g.order());
        const double mean_eig = sym.trace() / n;
        Eigen::MatrixXd dev = sym - mean_eig * Eigen::MatrixXd::Identity(n, n);
        // Scalar commutant is equivalent to irreducibility over R for orthogonal actions
        // whose complexification stays irreducible; random trials make failures visible.
        if (dev.cwiseAbs().maxCoeff() > tolerances().subspace_eq * std::max(1.0, a.cwiseAbs().maxCoeff())) {
            return false;
        }
    }
    return true;
}

bool is_invariant_subspace(const FiniteGroup& g, const Subspace& s, double tol) {
    if (s.ambient() != g.ambient()) throw InputError("is_invariant_subspace: dimension mismatch");
    const Eigen::MatrixXd p = s.projector();
    for (const auto& m : g.elements()) {
        if (operator_norm(p * m - m * p) > tol) return false;
    }
    return true;
}

Subspace invariant_closure(const FiniteGroup& g, const std::vector<Eigen::VectorXd>& vectors) {
    std::vector<Eigen::VectorXd> images;
    images.reserve(vectors.size() * g.order());
    for (const auto& v : vectors) {
        if (v.size() != g.ambient()) throw InputError("invariant_closure: dimension mismatch");
        for (const auto& m : g.elements()) {
            images.push_back(m * v);
        }
    }
    return span_of(images, g.ambient());
}

FiniteGroup restrict_to(const FiniteGroup& g, const Subspace& s) {
    if (!is_invariant_subspace(g, s)) {
        throw InputError("restrict_to: subspace is not invariant under the group");
    }
    if (s.dim() == 0) throw InputError("restrict_to: cannot restrict to the zero subspace");
    const double tol = tolerances().group_dedup;
    std::vector<Eigen::MatrixXd> restricted;
    restricted.reserve(g.order());
    for (const auto& m : g.elements()) {
        Eigen::MatrixXd r = s.basis().transpose() * m * s.basis();
        if (!is_orthogonal_matrix(r, tolerances().subspace_eq)) {
            throw InputError("restrict_to: restriction is not orthogonal (invariance too loose)");
        }
        if (find_element(restricted, r, tol) < 0) restricted.push_back(std::move(r));
    }
    std::vector<Eigen::MatrixXd> gens(restricted.begin(), restricted.end());
    return FiniteGroup::close_generators(gens, static_cast<int>(g.order()) + 1);
}

} // namespace dualmink
