#include "dualmink/core.hpp"

#include <cmath>

namespace dualmink {

UnitVector::UnitVector(Eigen::VectorXd v) : coords_(std::move(v)) {
    if (coords_.size() == 0) {
        throw InputError("UnitVector: empty coordinate vector");
    }
    const double norm = coords_.norm();
    if (!std::isfinite(norm) || norm <= 0.0) {
        throw InputError("UnitVector: zero or non-finite vector");
    }
    coords_ /= norm;
}

UnitVector UnitVector::axis(int n, int i) {
    if (n < 1 || i < 0 || i >= n) throw InputError("UnitVector::axis: index out of range");
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    v[i] = 1.0;
    return UnitVector(std::move(v));
}

UnitVector UnitVector::negated() const {
    return UnitVector(-coords_);
}

Subspace Subspace::zero(int n) {
    if (n < 1) throw InputError("Subspace: ambient dimension must be positive");
    return Subspace(Eigen::MatrixXd::Zero(n, 0), n);
}

Subspace Subspace::full(int n) {
    if (n < 1) throw InputError("Subspace: ambient dimension must be positive");
    return Subspace(Eigen::MatrixXd::Identity(n, n), n);
}

Subspace Subspace::from_orthonormal(Eigen::MatrixXd basis, int n) {
    if (basis.rows() != n || n < 1) throw InputError("Subspace: basis/ambient mismatch");
    if (basis.cols() > n) throw InputError("Subspace: more basis vectors than ambient dimension");
    const Eigen::MatrixXd gram = basis.transpose() * basis;
    const int k = static_cast<int>(basis.cols());
    if ((gram - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff() > tolerances().algebra) {
        throw InputError("Subspace: basis columns are not orthonormal");
    }
    return Subspace(std::move(basis), n);
}

Subspace Subspace::line(const UnitVector& direction) {
    Eigen::MatrixXd b(direction.ambient(), 1);
    b.col(0) = direction.coords();
    return Subspace(std::move(b), direction.ambient());
}

Eigen::MatrixXd Subspace::projector() const {
    return basis_ * basis_.transpose();
}

bool Subspace::contains(const Eigen::VectorXd& x, double tol) const {
    if (x.size() != ambient_) throw InputError("Subspace::contains: dimension mismatch");
    return (x - basis_ * (basis_.transpose() * x)).norm() <= tol;
}

Eigen::VectorXd project(const Subspace& s, const Eigen::VectorXd& x) {
    if (x.size() != s.ambient()) throw InputError("project: dimension mismatch");
    return s.basis() * (s.basis().transpose() * x);
}

Subspace span_of(const std::vector<Eigen::VectorXd>& vectors, int n, double tol) {
    if (n < 1) throw InputError("span_of: ambient dimension must be positive");
    if (vectors.empty()) return Subspace::zero(n);
    Eigen::MatrixXd m(n, static_cast<Eigen::Index>(vectors.size()));
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (vectors[i].size() != n) throw InputError("span_of: dimension mismatch");
        m.col(static_cast<Eigen::Index>(i)) = vectors[i];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv[0] <= 0.0) return Subspace::zero(n);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i) {
        if (sv[i] > tol * sv[0]) ++rank;
    }
    if (rank == 0) return Subspace::zero(n);
    return Subspace::from_orthonormal(svd.matrixU().leftCols(rank), n);
}

double grassmann_distance(const Subspace& a, const Subspace& b) {
    if (a.ambient() != b.ambient()) throw InputError("grassmann_distance: ambient mismatch");
    const Eigen::MatrixXd diff = a.projector() - b.projector();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(diff, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

bool subspaces_equal(const Subspace& a, const Subspace& b, double tol) {
    return a.dim() == b.dim() && grassmann_distance(a, b) <= tol;
}

Subspace complement(const Subspace& s) {
    const int n = s.ambient();
    const int k = s.dim();
    if (k == 0) return Subspace::full(n);
    if (k == n) return Subspace::zero(n);
    // Null space of basis^T: right-singular vectors with vanishing singular value.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(s.basis().transpose(), Eigen::ComputeFullV);
    return Subspace::from_orthonormal(svd.matrixV().rightCols(n - k), n);
}

double operator_norm(const Eigen::MatrixXd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues().size() > 0 ? svd.singularValues()[0] : 0.0;
}

bool is_orthogonal_matrix(const Eigen::MatrixXd& m, double tol) {
    if (m.rows() != m.cols() || m.rows() == 0) return false;
    const Eigen::MatrixXd gram = m.transpose() * m;
    return (gram - Eigen::MatrixXd::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <= tol;
}

Subspace subspace_sum(const Subspace& a, const Subspace& b) {
    if (a.ambient() != b.ambient()) throw InputError("subspace_sum: ambient mismatch");
    std::vector<Eigen::VectorXd> cols;
    cols.reserve(static_cast<std::size_t>(a.dim() + b.dim()));
    for (int i = 0; i < a.dim(); ++i) cols.push_back(a.basis().col(i));
    for (int i = 0; i < b.dim(); ++i) cols.push_back(b.basis().col(i));
    return span_of(cols, a.ambient());
}

} // namespace dualmink
