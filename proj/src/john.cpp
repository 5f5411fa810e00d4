#include "dualmink/john.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dualmink {

namespace {

// Symmetric-matrix coordinate basis: E_kk = e_k e_k^T, then E_kl = e_k e_l^T + e_l e_k^T.
Eigen::MatrixXd basis_element(int n, int idx) {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
    if (idx < n) {
        b(idx, idx) = 1;
        return b;
    }
    int r = idx - n;
    for (int k = 0; k < n; ++k) {
        const int row_len = n - 1 - k;
        if (r < row_len) {
            b(k, k + 1 + r) = 1;
            b(k + 1 + r, k) = 1;
            return b;
        }
        r -= row_len;
    }
    throw NumericalError("basis_element: index out of range");
}

double logdet_if_pd(const Eigen::MatrixXd& m, bool& ok) {
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) {
        ok = false;
        return 0;
    }
    ok = true;
    return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

} // namespace

Eigen::MatrixXd max_inscribed_shape_matrix(const BodySpec& body) {
    const int n = body.ambient();
    const Eigen::Index nfac = body.facets();
    const double hscale = body.support().maxCoeff();
    const Eigen::MatrixXd& vmat = body.normal_matrix();
    const Eigen::VectorXd h = body.support() / hscale;

    const int p = n * (n + 1) / 2;
    std::vector<Eigen::MatrixXd> bas(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) bas[static_cast<std::size_t>(i)] = basis_element(n, i);
    // Per-constraint coordinates of v v^T in the basis: (v_j^T B_i v_j)_i.
    Eigen::MatrixXd vcoord(nfac, p);
    for (Eigen::Index j = 0; j < nfac; ++j) {
        int idx = n;
        for (int k = 0; k < n; ++k) vcoord(j, k) = vmat(k, j) * vmat(k, j);
        for (int k = 0; k < n; ++k) {
            for (int l = k + 1; l < n; ++l) vcoord(j, idx++) = 2.0 * vmat(k, j) * vmat(l, j);
        }
    }

    const double r0 = 0.9 * h.minCoeff();
    Eigen::MatrixXd m = (r0 * r0) * Eigen::MatrixXd::Identity(n, n);
    // Barrier rounds: minimize -t log det M - sum_j log(h_j^2 - v_j^T M v_j);
    // after centering at t the log det suboptimality is at most nfac / t.
    const double t_final = 1e12 * static_cast<double>(nfac);
    Eigen::VectorXd grad(p), step(p), cvec(nfac);
    Eigen::MatrixXd hess(p, p);
    for (double t = 1.0; t <= t_final; t *= 10.0) {
        for (int newton = 0; newton < 80; ++newton) {
            Eigen::LLT<Eigen::MatrixXd> llt(m);
            if (llt.info() != Eigen::Success) {
                throw NumericalError("max_inscribed_shape_matrix: iterate left the PD cone");
            }
            const Eigen::MatrixXd minv =
                llt.solve(Eigen::MatrixXd::Identity(n, n));
            for (Eigen::Index j = 0; j < nfac; ++j) {
                cvec(j) = h(j) * h(j) - vmat.col(j).dot(m * vmat.col(j));
                if (!(cvec(j) > 0)) {
                    throw NumericalError("max_inscribed_shape_matrix: constraint slack vanished");
                }
            }
            Eigen::MatrixXd gmat = -t * minv;
            for (Eigen::Index j = 0; j < nfac; ++j) {
                gmat += (vmat.col(j) * vmat.col(j).transpose()) / cvec(j);
            }
            std::vector<Eigen::MatrixXd> c(static_cast<std::size_t>(p));
            for (int i = 0; i < p; ++i) {
                grad(i) = (gmat.array() * bas[static_cast<std::size_t>(i)].array()).sum();
                c[static_cast<std::size_t>(i)] = minv * bas[static_cast<std::size_t>(i)];
            }
            for (int i = 0; i < p; ++i) {
                for (int j2 = i; j2 < p; ++j2) {
                    double e = t * (c[static_cast<std::size_t>(i)].array() *
                                    c[static_cast<std::size_t>(j2)].transpose().array())
                                       .sum();
                    for (Eigen::Index l = 0; l < nfac; ++l) {
                        e += vcoord(l, i) * vcoord(l, j2) / (cvec(l) * cvec(l));
                    }
                    hess(i, j2) = e;
                    hess(j2, i) = e;
                }
            }
            step = hess.ldlt().solve(-grad);
            const double decrement2 = -grad.dot(step);
            if (!(decrement2 > 2e-13 * std::max(1.0, t))) break;
            Eigen::MatrixXd dir = Eigen::MatrixXd::Zero(n, n);
            for (int i = 0; i < p; ++i) dir += step(i) * bas[static_cast<std::size_t>(i)];
            bool ok = false;
            double f0 = -t * logdet_if_pd(m, ok) - cvec.array().log().sum();
            double alpha = 1.0;
            bool moved = false;
            while (alpha > 1e-16) {
                const Eigen::MatrixXd trial = m + alpha * dir;
                bool pd = false;
                const double ld = logdet_if_pd(trial, pd);
                if (pd) {
                    double fs = -t * ld;
                    bool feas = true;
                    for (Eigen::Index j = 0; j < nfac; ++j) {
                        const double cj = h(j) * h(j) - vmat.col(j).dot(trial * vmat.col(j));
                        if (!(cj > 0)) {
                            feas = false;
                            break;
                        }
                        fs -= std::log(cj);
                    }
                    if (feas && fs <= f0 - 1e-4 * alpha * decrement2) {
                        m = trial;
                        moved = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if (!moved) break;
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0) {
        throw NumericalError("max_inscribed_shape_matrix: result is not positive-definite");
    }
    return hscale * (es.eigenvectors() *
                     es.eigenvalues().array().sqrt().matrix().asDiagonal() *
                     es.eigenvectors().transpose());
}

namespace {

BlockEllipsoid blocks_from_shape(const Eigen::MatrixXd& a, const FiniteGroup* g) {
    const int n = static_cast<int>(a.rows());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0) {
        throw NumericalError("john_ellipsoid: shape matrix is not positive-definite");
    }
    const Eigen::VectorXd ev = es.eigenvalues(); // ascending
    const double rel = tolerances().eigen_group;
    std::vector<Subspace> blocks;
    std::vector<double> axes;
    int start = 0;
    while (start < n) {
        int stop = start + 1;
        while (stop < n && ev(stop) <= ev(stop - 1) * (1.0 + rel)) ++stop;
        blocks.push_back(Subspace::from_orthonormal(
            es.eigenvectors().middleCols(start, stop - start), n));
        axes.push_back(ev.segment(start, stop - start).mean());
        start = stop;
    }
    if (g != nullptr) {
        for (const auto& bl : blocks) {
            if (!is_invariant_subspace(*g, bl)) {
                throw NumericalError("john_ellipsoid: spectral block is not G-invariant");
            }
        }
    }
    Eigen::VectorXd semi(static_cast<Eigen::Index>(axes.size()));
    for (std::size_t i = 0; i < axes.size(); ++i) semi(static_cast<Eigen::Index>(i)) = axes[i];
    return BlockEllipsoid(std::move(blocks), std::move(semi));
}

} // namespace

BlockEllipsoid john_ellipsoid(const BodySpec& b) {
    return blocks_from_shape(max_inscribed_shape_matrix(b), nullptr);
}

BlockEllipsoid john_ellipsoid(const BodySpec& b, const FiniteGroup& g) {
    if (g.ambient() != b.ambient()) throw InputError("john_ellipsoid: dimension mismatch");
    if (fixed_subspace(g).dim() != 0) {
        throw InputError("john_ellipsoid: Fix(G) must be trivial for an origin-centered ellipsoid");
    }
    if (!b.is_invariant_under(g)) {
        throw InputError("john_ellipsoid: body is not invariant under the group");
    }
    Eigen::MatrixXd a = max_inscribed_shape_matrix(b);
    // By uniqueness of the maximizer the averaged matrix agrees up to solver error.
    Eigen::MatrixXd avg = Eigen::MatrixXd::Zero(a.rows(), a.cols());
    for (const auto& elem : g.elements()) {
        avg += elem * a * elem.transpose();
    }
    avg /= static_cast<double>(g.order());
    if ((avg - a).norm() > 1e-5 * a.norm()) {
        throw NumericalError("john_ellipsoid: shape matrix is far from G-invariant");
    }
    return blocks_from_shape(avg, &g);
}

bool john_sandwich_check(const BodySpec& b, const BlockEllipsoid& e, double tol) {
    if (b.ambient() != e.ambient()) throw InputError("john_sandwich_check: dimension mismatch");
    const int n = b.ambient();
    const double hscale = std::max(1.0, b.support().maxCoeff());
    for (Eigen::Index j = 0; j < b.facets(); ++j) {
        if (e.support(b.normal_matrix().col(j)) > b.support()(j) + tol * hscale) return false;
    }
    if (n == 2) {
        for (const auto& v : polygon_vertices(b)) {
            Eigen::VectorXd x(2);
            x << v(0) / n, v(1) / n;
            if (!e.contains(x, tol)) return false;
        }
        return true;
    }
    const SphereQuadrature quad = SphereQuadrature::for_dimension(n, 20000, 20240901);
    for (Eigen::Index c = 0; c < quad.size(); ++c) {
        const Eigen::VectorXd u = quad.nodes().col(c);
        const Eigen::VectorXd x = (b.radial(u) / n) * u;
        if (!e.contains(x, tol)) return false;
    }
    return true;
}

} // namespace dualmink
