#pragma once

#include <Eigen/Dense>
#include <vector>

#include "dualmink/errors.hpp"
#include "dualmink/tolerances.hpp"

namespace dualmink {

// Direction on the unit sphere; renormalized on construction.
class UnitVector {
public:
    explicit UnitVector(Eigen::VectorXd v);
    static UnitVector axis(int n, int i);

    int ambient() const { return static_cast<int>(coords_.size()); }
    const Eigen::VectorXd& coords() const { return coords_; }
    double dot(const UnitVector& other) const { return coords_.dot(other.coords_); }
    UnitVector negated() const;

    // Chord distance; two directions are considered identical below the angular tolerance.
    double distance(const UnitVector& other) const { return (coords_ - other.coords_).norm(); }

private:
    Eigen::VectorXd coords_;
};

// Linear subspace stored as an orthonormal column basis (n x k, k possibly 0).
class Subspace {
public:
    static Subspace zero(int n);
    static Subspace full(int n);
    static Subspace from_orthonormal(Eigen::MatrixXd basis, int n);
    static Subspace line(const UnitVector& direction);

    int ambient() const { return ambient_; }
    int dim() const { return static_cast<int>(basis_.cols()); }
    const Eigen::MatrixXd& basis() const { return basis_; }
    Eigen::MatrixXd projector() const;
    bool contains(const Eigen::VectorXd& x, double tol) const;

private:
    Subspace(Eigen::MatrixXd basis, int n) : basis_(std::move(basis)), ambient_(n) {}
    Eigen::MatrixXd basis_; // orthonormal columns
    int ambient_;
};

// Orthogonal projection of x onto s.
Eigen::VectorXd project(const Subspace& s, const Eigen::VectorXd& x);

// Span of a set of vectors in R^n; rank cut at tol * largest singular value.
Subspace span_of(const std::vector<Eigen::VectorXd>& vectors, int n, double tol = 1e-10);

// Operator-norm distance between the orthogonal projectors of two subspaces.
// Equals sin of the largest principal angle when dimensions agree, 1 otherwise.
double grassmann_distance(const Subspace& a, const Subspace& b);

bool subspaces_equal(const Subspace& a, const Subspace& b, double tol);

// Orthogonal complement.
Subspace complement(const Subspace& s);

// Largest singular value.
double operator_norm(const Eigen::MatrixXd& m);

// A^T A = I within tol.
bool is_orthogonal_matrix(const Eigen::MatrixXd& m, double tol);

// Direct sum check and combined span helpers used by the condition checks.
Subspace subspace_sum(const Subspace& a, const Subspace& b);

} // namespace dualmink
