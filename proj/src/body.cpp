#include "dualmink/body.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace dualmink {

namespace {

// Dense single-phase simplex for  max c^T x  s.t.  A x <= b,  x >= 0  with b >= 0
// (the all-slack basis is feasible). Bland's rule, so termination is guaranteed.
double simplex_max(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                   const Eigen::VectorXd& c) {
    const Eigen::Index m = a.rows();
    const Eigen::Index nv = a.cols();
    Eigen::MatrixXd tab(m + 1, nv + m + 1);
    tab.setZero();
    tab.block(0, 0, m, nv) = a;
    tab.block(0, nv, m, m) = Eigen::MatrixXd::Identity(m, m);
    tab.block(0, nv + m, m, 1) = b;
    tab.block(m, 0, 1, nv) = -c.transpose(); // minimize -c^T x
    std::vector<Eigen::Index> basis(m);
    for (Eigen::Index i = 0; i < m; ++i) basis[i] = nv + i;

    const double eps = 1e-9;
    for (int iter = 0; iter < 20000; ++iter) {
        Eigen::Index enter = -1;
        for (Eigen::Index j = 0; j < nv + m; ++j) {
            if (tab(m, j) < -eps) { enter = j; break; }
        }
        if (enter < 0) break;
        Eigen::Index leave = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < m; ++i) {
            if (tab(i, enter) > eps) {
                const double ratio = tab(i, nv + m) / tab(i, enter);
                if (ratio < best_ratio - 1e-15 ||
                    (ratio < best_ratio + 1e-15 && (leave < 0 || basis[i] < basis[leave]))) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
        }
        if (leave < 0) {
            // Objective unbounded above; only reachable on malformed input here.
            return std::numeric_limits<double>::infinity();
        }
        tab.row(leave) /= tab(leave, enter);
        for (Eigen::Index i = 0; i <= m; ++i) {
            if (i != leave && std::abs(tab(i, enter)) > 0) {
                tab.row(i) -= tab(i, enter) * tab.row(leave);
            }
        }
        basis[leave] = enter;
    }
    return tab(m, nv + m);
}

// A halfspace intersection over unit normals V is bounded iff V has full rank and
// no u != 0 satisfies V^T u <= 0. The second part is decided by the LP
//   max sum(s)  s.t.  V^T (p - q) + s <= 0,  0 <= p,q <= 1,  0 <= s <= 1,
// whose optimum is positive exactly when such a u = p - q exists.
bool positively_spans(const Eigen::MatrixXd& vmat) {
    const Eigen::Index n = vmat.rows();
    const Eigen::Index nfac = vmat.cols();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(vmat);
    const double smax = svd.singularValues()(0);
    if (smax <= 0) return false;
    if (svd.singularValues()(std::min(n, nfac) - 1) < 1e-10 * smax) return false;
    if (nfac < n + 1) return false;

    const Eigen::Index nv = 2 * n + nfac; // p, q, s
    const Eigen::Index m = nfac + nv;     // cone rows + unit boxes
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, nv);
    a.block(0, 0, nfac, n) = vmat.transpose();
    a.block(0, n, nfac, n) = -vmat.transpose();
    a.block(0, 2 * n, nfac, nfac) = Eigen::MatrixXd::Identity(nfac, nfac);
    a.block(nfac, 0, nv, nv) = Eigen::MatrixXd::Identity(nv, nv);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
    b.segment(nfac, nv).setOnes();
    Eigen::VectorXd c = Eigen::VectorXd::Zero(nv);
    c.segment(2 * n, nfac).setOnes();
    return simplex_max(a, b, c) < 1e-7;
}

// Applies f(node_index, rho, facet, weight) over all quadrature nodes, with the
// facet dot products computed in column blocks.
template <typename F>
void scan_radial(const BodySpec& body, const SphereQuadrature& quad, F&& f) {
    const Eigen::MatrixXd& vmat = body.normal_matrix();
    const Eigen::VectorXd& h = body.support();
    const Eigen::Index nfac = h.size();
    const Eigen::Index total = quad.size();
    constexpr Eigen::Index chunk = 4096;
    Eigen::MatrixXd dots;
    for (Eigen::Index start = 0; start < total; start += chunk) {
        const Eigen::Index cols = std::min(chunk, total - start);
        dots.noalias() = vmat.transpose() * quad.nodes().middleCols(start, cols);
        for (Eigen::Index c = 0; c < cols; ++c) {
            double rho = std::numeric_limits<double>::infinity();
            Eigen::Index jmin = -1;
            for (Eigen::Index j = 0; j < nfac; ++j) {
                const double d = dots(j, c);
                if (d > 1e-14) {
                    const double r = h(j) / d;
                    if (r < rho) {
                        rho = r;
                        jmin = j;
                    }
                }
            }
            if (jmin < 0) {
                throw NumericalError("radial scan hit an unbounded direction");
            }
            f(start + c, rho, jmin, quad.weights()(start + c));
        }
    }
}

} // namespace

BodySpec::BodySpec(std::vector<UnitVector> normals, Eigen::VectorXd h) : ambient_(0) {
    if (normals.empty()) throw InputError("BodySpec: empty normal set");
    ambient_ = normals.front().ambient();
    for (const auto& v : normals) {
        if (v.ambient() != ambient_) throw InputError("BodySpec: mixed ambient dimensions");
    }
    if (h.size() != static_cast<Eigen::Index>(normals.size())) {
        throw InputError("BodySpec: support size does not match the normal count");
    }
    for (Eigen::Index i = 0; i < h.size(); ++i) {
        if (!(h(i) > 0) || !std::isfinite(h(i))) {
            throw InputError("BodySpec: support values must be positive and finite");
        }
    }
    vmat_.resize(ambient_, static_cast<Eigen::Index>(normals.size()));
    for (std::size_t i = 0; i < normals.size(); ++i) {
        vmat_.col(static_cast<Eigen::Index>(i)) = normals[i].coords();
    }
    if (!positively_spans(vmat_)) {
        throw InputError("BodySpec: normals do not positively span R^n (unbounded shape)");
    }
    normals_ = std::move(normals);
    h_ = std::move(h);
}

BodySpec BodySpec::with_support(Eigen::VectorXd h) const {
    if (h.size() != h_.size()) {
        throw InputError("with_support: support size does not match the normal count");
    }
    for (Eigen::Index i = 0; i < h.size(); ++i) {
        if (!(h(i) > 0) || !std::isfinite(h(i))) {
            throw InputError("with_support: support values must be positive and finite");
        }
    }
    return BodySpec(normals_, vmat_, std::move(h), ambient_);
}

BodySpec BodySpec::scaled(double c) const {
    if (!(c > 0) || !std::isfinite(c)) throw InputError("scaled: factor must be positive");
    return with_support(c * h_);
}

bool BodySpec::is_invariant_under(const FiniteGroup& g, double tol) const {
    if (g.ambient() != ambient_) return false;
    const double href = h_.cwiseAbs().maxCoeff();
    for (const auto& elem : g.elements()) {
        for (Eigen::Index j = 0; j < h_.size(); ++j) {
            const Eigen::VectorXd image = elem * vmat_.col(j);
            Eigen::Index match = -1;
            for (Eigen::Index k = 0; k < h_.size(); ++k) {
                if ((vmat_.col(k) - image).norm() < 1e-8) {
                    match = k;
                    break;
                }
            }
            if (match < 0) return false;
            if (std::abs(h_(match) - h_(j)) > tol * std::max(1.0, href)) return false;
        }
    }
    return true;
}

double BodySpec::radial(const Eigen::VectorXd& u) const {
    if (u.size() != ambient_) throw InputError("radial: dimension mismatch");
    double rho = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < h_.size(); ++j) {
        const double d = vmat_.col(j).dot(u);
        if (d > 1e-14) rho = std::min(rho, h_(j) / d);
    }
    if (!std::isfinite(rho)) throw NumericalError("radial: no facet faces this direction");
    return rho;
}

Eigen::Index BodySpec::argmin_facet(const Eigen::VectorXd& u) const {
    if (u.size() != ambient_) throw InputError("argmin_facet: dimension mismatch");
    double rho = std::numeric_limits<double>::infinity();
    Eigen::Index jmin = -1;
    for (Eigen::Index j = 0; j < h_.size(); ++j) {
        const double d = vmat_.col(j).dot(u);
        if (d > 1e-14) {
            const double r = h_(j) / d;
            if (r < rho) {
                rho = r;
                jmin = j;
            }
        }
    }
    if (jmin < 0) throw NumericalError("argmin_facet: no facet faces this direction");
    return jmin;
}

double dual_quermassintegral(const BodySpec& b, double q, const SphereQuadrature& quad) {
    if (quad.ambient() != b.ambient()) throw InputError("dual_quermassintegral: dimension mismatch");
    double acc = 0;
    scan_radial(b, quad, [&](Eigen::Index, double rho, Eigen::Index, double w) {
        acc += w * std::pow(rho, q);
    });
    return acc / b.ambient();
}

std::vector<Eigen::VectorXd> dual_curvature_masses_multi(const BodySpec& b,
                                                         const std::vector<double>& qs,
                                                         const SphereQuadrature& quad) {
    if (quad.ambient() != b.ambient()) throw InputError("dual_curvature_masses: dimension mismatch");
    std::vector<Eigen::VectorXd> out(qs.size(), Eigen::VectorXd::Zero(b.facets()));
    const double n = b.ambient();
    scan_radial(b, quad, [&](Eigen::Index, double rho, Eigen::Index j, double w) {
        for (std::size_t k = 0; k < qs.size(); ++k) {
            out[k](j) += w * std::pow(rho, qs[k]) / n;
        }
    });
    return out;
}

Eigen::VectorXd dual_curvature_masses(const BodySpec& b, double q, const SphereQuadrature& quad) {
    return dual_curvature_masses_multi(b, {q}, quad).front();
}

DiscreteMeasure dual_curvature_measure(const BodySpec& b, double q, const SphereQuadrature& quad) {
    const Eigen::VectorXd masses = dual_curvature_masses(b, q, quad);
    const double total = masses.sum();
    std::vector<Atom> atoms;
    for (Eigen::Index j = 0; j < masses.size(); ++j) {
        if (masses(j) > tolerances().weight_drop * total) {
            atoms.push_back({b.normals()[static_cast<std::size_t>(j)], masses(j)});
        }
    }
    if (atoms.empty()) throw NumericalError("dual_curvature_measure: all masses vanished");
    return DiscreteMeasure::from_atoms(std::move(atoms));
}

std::vector<Eigen::Vector2d> polygon_vertices(const BodySpec& b) {
    if (b.ambient() != 2) throw InputError("polygon_vertices: requires n = 2");
    const Eigen::MatrixXd& v = b.normal_matrix();
    const Eigen::VectorXd& h = b.support();
    const Eigen::Index nfac = h.size();
    const double scale = h.maxCoeff();
    // Every vertex is the intersection of two facet lines that satisfies every
    // other constraint; at this scale the O(N^3) sweep is exact and simple.
    std::vector<Eigen::Vector2d> verts;
    for (Eigen::Index i = 0; i < nfac; ++i) {
        for (Eigen::Index j = i + 1; j < nfac; ++j) {
            const double det = v(0, i) * v(1, j) - v(1, i) * v(0, j);
            if (std::abs(det) < 1e-12) continue;
            Eigen::Vector2d x;
            x(0) = (h(i) * v(1, j) - h(j) * v(1, i)) / det;
            x(1) = (v(0, i) * h(j) - v(0, j) * h(i)) / det;
            bool inside = true;
            for (Eigen::Index k = 0; k < nfac && inside; ++k) {
                if (v.col(k).dot(x) > h(k) + 1e-9 * std::max(1.0, scale)) inside = false;
            }
            if (!inside) continue;
            bool dup = false;
            for (const auto& y : verts) {
                if ((y - Eigen::Vector2d(x)).norm() < 1e-9 * std::max(1.0, scale)) {
                    dup = true;
                    break;
                }
            }
            if (!dup) verts.push_back(x);
        }
    }
    std::sort(verts.begin(), verts.end(), [](const Eigen::Vector2d& a, const Eigen::Vector2d& c) {
        return std::atan2(a(1), a(0)) < std::atan2(c(1), c(0));
    });
    return verts;
}

Eigen::VectorXd cone_volume_masses_2d(const BodySpec& b) {
    if (b.ambient() != 2) throw InputError("cone_volume_masses_2d: requires n = 2");
    const auto verts = polygon_vertices(b);
    if (verts.size() < 3) throw NumericalError("cone_volume_masses_2d: degenerate polygon");
    const Eigen::MatrixXd& v = b.normal_matrix();
    const Eigen::VectorXd& h = b.support();
    const double scale = h.maxCoeff();
    Eigen::VectorXd masses = Eigen::VectorXd::Zero(h.size());
    for (Eigen::Index j = 0; j < h.size(); ++j) {
        const Eigen::Vector2d tangent(-v(1, j), v(0, j));
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        int on_line = 0;
        for (const auto& x : verts) {
            if (std::abs(v.col(j).dot(x) - h(j)) < 1e-8 * std::max(1.0, scale)) {
                const double t = tangent.dot(x);
                lo = std::min(lo, t);
                hi = std::max(hi, t);
                ++on_line;
            }
        }
        if (on_line >= 2) masses(j) = 0.5 * h(j) * (hi - lo);
    }
    return masses;
}

DiscreteMeasure cone_volume_exact_2d(const BodySpec& b) {
    const Eigen::VectorXd masses = cone_volume_masses_2d(b);
    const double total = masses.sum();
    std::vector<Atom> atoms;
    for (Eigen::Index j = 0; j < masses.size(); ++j) {
        if (masses(j) > tolerances().weight_drop * total) {
            atoms.push_back({b.normals()[static_cast<std::size_t>(j)], masses(j)});
        }
    }
    return DiscreteMeasure::from_atoms(std::move(atoms));
}

namespace {

// 64-point Gauss-Legendre rule on (0,1), nodes by Newton iteration.
void gauss_legendre_01(std::vector<double>& nodes, std::vector<double>& weights) {
    constexpr int k = 64;
    nodes.resize(k);
    weights.resize(k);
    for (int i = 0; i < k; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (k + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= k; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = k * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = 0.5 * (x + 1.0);
        weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
}

// Gamma(beta) for beta > 0 by quadrature, split at t = 1 with the origin
// singularity absorbed by the substitution t = s^(1/beta).
double gamma_by_quadrature(double beta) {
    std::vector<double> xs, ws;
    gauss_legendre_01(xs, ws);
    double head = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        head += ws[i] * std::exp(-std::pow(xs[i], 1.0 / beta));
    }
    head /= beta;
    // Tail: the integrand is analytic on [1, inf) and the mass beyond t = 41
    // is below e^{-41}, so composite panels of width 5 converge spectrally.
    double tail = 0;
    for (int panel = 0; panel < 8; ++panel) {
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double t = 1.0 + 5.0 * (panel + xs[i]);
            tail += 5.0 * ws[i] * std::pow(t, beta - 1.0) * std::exp(-t);
        }
    }
    return head + tail;
}

} // namespace

GaussianIdentityReport gaussian_identity_check(const BodySpec& b, double q, long samples,
                                               std::uint64_t seed, const SphereQuadrature& quad) {
    const int n = b.ambient();
    if (!(q > 0) || !(q < n)) {
        throw InputError("gaussian_identity_check: requires 0 < q < n");
    }
    if (samples < 100) throw InputError("gaussian_identity_check: too few samples");
    const double area = sphere_area(n);
    // Proposal: u uniform on the sphere, t = r^2 ~ Gamma(a,1) with a = 0.75(n-q),
    // giving weight area * (Gamma(a)/2) * rho(u)^q * t^{(n-q)/2 - a}.
    const double a = 0.75 * (n - q);
    const double wconst = area * 0.5 * std::tgamma(a);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::gamma_distribution<double> radial2(a, 1.0);
    Eigen::VectorXd u(n);
    double sum = 0, sumsq = 0;
    for (long i = 0; i < samples; ++i) {
        double norm2 = 0;
        do {
            for (int k = 0; k < n; ++k) u(k) = gauss(rng);
            norm2 = u.squaredNorm();
        } while (norm2 < 1e-24);
        u /= std::sqrt(norm2);
        const double t = std::max(radial2(rng), 1e-300);
        const double w = wconst * std::pow(b.radial(u), q) * std::pow(t, 0.5 * (n - q) - a);
        sum += w;
        sumsq += w * w;
    }
    GaussianIdentityReport rep;
    rep.mc_value = sum / samples;
    const double var = std::max(0.0, sumsq / samples - rep.mc_value * rep.mc_value);
    rep.mc_std_error = std::sqrt(var / samples);
    rep.c0 = 0.5 * n * gamma_by_quadrature(0.5 * (n - q));
    rep.reference = rep.c0 * dual_quermassintegral(b, q, quad);
    rep.rel_err = std::abs(rep.mc_value - rep.reference) / std::abs(rep.reference);
    return rep;
}

std::vector<int> spherical_partition(const std::vector<Subspace>& blocks, double delta,
                                     const Eigen::MatrixXd& unit_columns) {
    const int m = static_cast<int>(blocks.size());
    if (m < 1) throw InputError("spherical_partition: no blocks");
    const int n = blocks.front().ambient();
    int total_dim = 0;
    for (const auto& bl : blocks) {
        if (bl.ambient() != n) throw InputError("spherical_partition: mixed ambient dimensions");
        total_dim += bl.dim();
    }
    if (total_dim != n) throw InputError("spherical_partition: blocks must sum to R^n");
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            if ((blocks[i].basis().transpose() * blocks[j].basis()).cwiseAbs().maxCoeff() > 1e-9) {
                throw InputError("spherical_partition: blocks must be pairwise orthogonal");
            }
        }
    }
    if (!(delta > 0) || !(delta < 1.0 / std::sqrt(static_cast<double>(m)))) {
        throw InputError("spherical_partition: delta must lie in (0, 1/sqrt(m))");
    }
    if (unit_columns.rows() != n) throw InputError("spherical_partition: dimension mismatch");
    std::vector<int> assign(unit_columns.cols());
    for (Eigen::Index c = 0; c < unit_columns.cols(); ++c) {
        int chosen = -1;
        double best = -1;
        int argmax = 0;
        for (int j = m - 1; j >= 0; --j) {
            const double p = (blocks[static_cast<std::size_t>(j)].basis().transpose() *
                              unit_columns.col(c))
                                 .norm();
            if (chosen < 0 && p >= delta) chosen = j;
            if (p > best) {
                best = p;
                argmax = j;
            }
        }
        assign[static_cast<std::size_t>(c)] = chosen >= 0 ? chosen : argmax;
    }
    return assign;
}

BlockEllipsoid::BlockEllipsoid(std::vector<Subspace> blocks, Eigen::VectorXd semi_axes)
    : ambient_(0) {
    if (blocks.empty()) throw InputError("BlockEllipsoid: no blocks");
    if (semi_axes.size() != static_cast<Eigen::Index>(blocks.size())) {
        throw InputError("BlockEllipsoid: one semi-axis per block required");
    }
    ambient_ = blocks.front().ambient();
    int total = 0;
    for (const auto& bl : blocks) {
        if (bl.ambient() != ambient_) throw InputError("BlockEllipsoid: mixed ambient dimensions");
        if (bl.dim() < 1) throw InputError("BlockEllipsoid: empty block");
        total += bl.dim();
    }
    if (total != ambient_) throw InputError("BlockEllipsoid: blocks must sum to R^n");
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (!(semi_axes(static_cast<Eigen::Index>(i)) > 0) ||
            !std::isfinite(semi_axes(static_cast<Eigen::Index>(i)))) {
            throw InputError("BlockEllipsoid: semi-axes must be positive and finite");
        }
        for (std::size_t j = i + 1; j < blocks.size(); ++j) {
            if ((blocks[i].basis().transpose() * blocks[j].basis()).cwiseAbs().maxCoeff() > 1e-9) {
                throw InputError("BlockEllipsoid: blocks must be pairwise orthogonal");
            }
        }
    }
    std::vector<int> order(blocks.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return semi_axes(a) < semi_axes(b); });
    semi_axes_.resize(semi_axes.size());
    blocks_.reserve(blocks.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        semi_axes_(static_cast<Eigen::Index>(i)) = semi_axes(order[i]);
        blocks_.push_back(blocks[static_cast<std::size_t>(order[i])]);
    }
}

double BlockEllipsoid::support(const Eigen::VectorXd& v) const {
    if (v.size() != ambient_) throw InputError("BlockEllipsoid::support: dimension mismatch");
    double acc = 0;
    for (std::size_t j = 0; j < blocks_.size(); ++j) {
        const double p = (blocks_[j].basis().transpose() * v).squaredNorm();
        acc += semi_axes_(static_cast<Eigen::Index>(j)) * semi_axes_(static_cast<Eigen::Index>(j)) * p;
    }
    return std::sqrt(acc);
}

double BlockEllipsoid::radial(const Eigen::VectorXd& u) const {
    if (u.size() != ambient_) throw InputError("BlockEllipsoid::radial: dimension mismatch");
    double acc = 0;
    for (std::size_t j = 0; j < blocks_.size(); ++j) {
        const double p = (blocks_[j].basis().transpose() * u).squaredNorm();
        acc += p / (semi_axes_(static_cast<Eigen::Index>(j)) * semi_axes_(static_cast<Eigen::Index>(j)));
    }
    if (acc <= 0) throw NumericalError("BlockEllipsoid::radial: zero direction");
    return 1.0 / std::sqrt(acc);
}

bool BlockEllipsoid::contains(const Eigen::VectorXd& x, double tol) const {
    if (x.size() != ambient_) throw InputError("BlockEllipsoid::contains: dimension mismatch");
    double acc = 0;
    for (std::size_t j = 0; j < blocks_.size(); ++j) {
        const double p = (blocks_[j].basis().transpose() * x).squaredNorm();
        acc += p / (semi_axes_(static_cast<Eigen::Index>(j)) * semi_axes_(static_cast<Eigen::Index>(j)));
    }
    return acc <= 1.0 + tol;
}

Eigen::MatrixXd BlockEllipsoid::shape_matrix() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(ambient_, ambient_);
    for (std::size_t j = 0; j < blocks_.size(); ++j) {
        const double b2 = semi_axes_(static_cast<Eigen::Index>(j)) *
                          semi_axes_(static_cast<Eigen::Index>(j));
        m += b2 * blocks_[j].projector();
    }
    return m;
}

double ellipsoid_entropy(const DiscreteMeasure& mu, const BlockEllipsoid& e) {
    if (mu.ambient() != e.ambient()) throw InputError("ellipsoid_entropy: dimension mismatch");
    if (!mu.valid()) throw InputError("ellipsoid_entropy: empty measure");
    double acc = 0;
    for (const auto& atom : mu.atoms()) {
        acc += atom.weight * std::log(e.support(atom.direction.coords()));
    }
    return -acc / mu.total_mass();
}

namespace {

int barrier_index_r(const Eigen::VectorXi& dims, double q) {
    int acc = 0;
    for (int j = 0; j < dims.size(); ++j) {
        acc += dims(j);
        if (q <= acc) return j;
    }
    return static_cast<int>(dims.size()) - 1; // q > n
}

} // namespace

double entropy_upper_bound(const BlockEllipsoid& e, double q, double delta0, double t0) {
    if (!(q > 0)) throw InputError("entropy_upper_bound: q must be positive");
    if (!(delta0 > 0) || !(t0 > 0)) {
        throw InputError("entropy_upper_bound: constants must be positive");
    }
    const int m = e.block_count();
    Eigen::VectorXi dims(m);
    for (int j = 0; j < m; ++j) dims(j) = e.blocks()[static_cast<std::size_t>(j)].dim();
    const int r = barrier_index_r(dims, q);
    const Eigen::VectorXd& b = e.semi_axes();
    double dprev = 0;
    double bound = -std::log(delta0 / 2.0);
    for (int j = 0; j < r; ++j) {
        bound -= (dims(j) / q) * std::log(b(j));
        dprev += dims(j);
    }
    bound -= (1.0 - dprev / q) * std::log(b(r));
    bound += t0 * (std::log(b(0)) - std::log(b(m - 1)));
    return bound;
}

bool entropy_bound_applies(const DiscreteMeasure& mu, const BlockEllipsoid& e, double q,
                           double delta0, double t0) {
    if (mu.ambient() != e.ambient()) throw InputError("entropy_bound_applies: dimension mismatch");
    if (!mu.valid()) throw InputError("entropy_bound_applies: empty measure");
    const int m = e.block_count();
    if (m == 1) return true;
    Eigen::MatrixXd cols(mu.ambient(), static_cast<Eigen::Index>(mu.size()));
    for (std::size_t i = 0; i < mu.size(); ++i) {
        cols.col(static_cast<Eigen::Index>(i)) = mu.atoms()[i].direction.coords();
    }
    const auto assign = spherical_partition(e.blocks(), delta0, cols);
    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(m);
    for (std::size_t i = 0; i < mu.size(); ++i) {
        lambda(assign[i]) += mu.atoms()[i].weight / mu.total_mass();
    }
    double partial = 0;
    double dcum = 0;
    for (int j = 0; j < m - 1; ++j) {
        partial += lambda(j);
        dcum += e.blocks()[static_cast<std::size_t>(j)].dim();
        const double sigma = std::min(dcum / q, 1.0) - t0;
        if (partial > sigma + 1e-15) return false;
    }
    return true;
}

std::optional<EntropyConstants> select_entropy_constants(const DiscreteMeasure& mu,
                                                         const BlockEllipsoid& e, double q) {
    if (mu.ambient() != e.ambient()) throw InputError("select_entropy_constants: dimension mismatch");
    if (!mu.valid() || !(q > 0)) throw InputError("select_entropy_constants: invalid input");
    const int m = e.block_count();
    double min_nonzero = 1.0;
    for (const auto& atom : mu.atoms()) {
        for (const auto& bl : e.blocks()) {
            const double p = (bl.basis().transpose() * atom.direction.coords()).norm();
            if (p > 1e-9) min_nonzero = std::min(min_nonzero, p);
        }
    }
    EntropyConstants out;
    out.delta0 = std::min(0.5 * min_nonzero, 0.9 / std::sqrt(static_cast<double>(m)));
    if (m == 1) {
        out.t0 = 0.05;
        return out;
    }
    Eigen::MatrixXd cols(mu.ambient(), static_cast<Eigen::Index>(mu.size()));
    for (std::size_t i = 0; i < mu.size(); ++i) {
        cols.col(static_cast<Eigen::Index>(i)) = mu.atoms()[i].direction.coords();
    }
    const auto assign = spherical_partition(e.blocks(), out.delta0, cols);
    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(m);
    for (std::size_t i = 0; i < mu.size(); ++i) {
        lambda(assign[i]) += mu.atoms()[i].weight / mu.total_mass();
    }
    double worst = std::numeric_limits<double>::infinity();
    double partial = 0;
    double dcum = 0;
    for (int j = 0; j < m - 1; ++j) {
        partial += lambda(j);
        dcum += e.blocks()[static_cast<std::size_t>(j)].dim();
        worst = std::min(worst, std::min(dcum / q, 1.0) - partial);
    }
    if (!(worst > 0)) return std::nullopt;
    out.t0 = 0.5 * worst;
    return out;
}

BarrierReport barrier_bound_check(BarrierKind kind, const BarrierParams& p,
                                  const SphereQuadrature& quad, double spread_tol) {
    BarrierReport rep;
    rep.b_grid = {1.0, 0.5, 0.25, 0.125};
    const int n = quad.ambient();
    int expected = 0;
    switch (kind) {
        case BarrierKind::BallBlock:
            if (p.d < 1 || p.m < 0 || !(p.alpha > 0) || !(p.alpha < p.d)) {
                throw InputError("barrier_bound_check: need d >= 1, 0 < alpha < d");
            }
            expected = p.d + p.m;
            break;
        case BarrierKind::BlockBarrier:
            if (p.k < 0 || p.d < 1 || p.m < 0 || !(p.q > p.k) || !(p.q < p.k + p.d)) {
                throw InputError("barrier_bound_check: need k < q < k + d");
            }
            expected = p.k + p.d + p.m;
            break;
        case BarrierKind::QGreaterN: {
            if (p.dims.empty() || p.dims.size() != p.base.size()) {
                throw InputError("barrier_bound_check: dims/base mismatch");
            }
            for (std::size_t i = 0; i < p.dims.size(); ++i) {
                if (p.dims[i] < 1 || !(p.base[i] > 0)) {
                    throw InputError("barrier_bound_check: invalid block data");
                }
                expected += p.dims[i];
            }
            if (!(p.q > expected)) throw InputError("barrier_bound_check: need q > n");
            break;
        }
    }
    if (expected != n) throw InputError("barrier_bound_check: quadrature dimension mismatch");

    for (const double b : rep.b_grid) {
        double acc = 0;
        for (Eigen::Index c = 0; c < quad.size(); ++c) {
            const auto u = quad.nodes().col(c);
            double rho = std::numeric_limits<double>::infinity();
            double qexp = 0;
            switch (kind) {
                case BarrierKind::BallBlock: {
                    const double x = u.head(p.d).norm();
                    const double y = p.m > 0 ? u.tail(p.m).norm() : 0.0;
                    if (x > 0) rho = b / x;
                    if (y > 0) rho = std::min(rho, 1.0 / y);
                    qexp = p.alpha;
                    break;
                }
                case BarrierKind::BlockBarrier: {
                    const double ke = p.k > 0 ? u.head(p.k).norm() : 0.0;
                    const double x = u.segment(p.k, p.d).norm();
                    const double y = p.m > 0 ? u.tail(p.m).norm() : 0.0;
                    if (ke > 0) rho = 1.0 / ke;
                    if (x > 0) rho = std::min(rho, b / x);
                    if (y > 0) rho = std::min(rho, 1.0 / y);
                    qexp = p.q;
                    break;
                }
                case BarrierKind::QGreaterN: {
                    double s = 0;
                    int off = 0;
                    for (std::size_t i = 0; i < p.dims.size(); ++i) {
                        const double axis = p.base[i] * (i == 0 ? b : 1.0);
                        s += u.segment(off, p.dims[i]).squaredNorm() / (axis * axis);
                        off += p.dims[i];
                    }
                    rho = 1.0 / std::sqrt(s);
                    qexp = p.q;
                    break;
                }
            }
            acc += quad.weights()(c) * std::pow(rho, qexp);
        }
        const double w = acc / n;
        double denom = 1;
        switch (kind) {
            case BarrierKind::BallBlock:
                denom = std::pow(b, p.alpha);
                break;
            case BarrierKind::BlockBarrier:
                denom = (p.k > 0 ? ball_volume(p.k) : 1.0) * std::pow(b, p.q - p.k);
                break;
            case BarrierKind::QGreaterN: {
                double bm = 0;
                double prod = 1;
                for (std::size_t i = 0; i < p.dims.size(); ++i) {
                    const double axis = p.base[i] * (i == 0 ? b : 1.0);
                    bm = std::max(bm, axis);
                    prod *= std::pow(axis, p.dims[i]);
                }
                denom = std::pow(bm, p.q - n) * prod;
                break;
            }
        }
        rep.ratios.push_back(w / denom);
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0;
    bool finite = true;
    for (const double r : rep.ratios) {
        if (!std::isfinite(r) || r <= 0) finite = false;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    rep.spread = finite ? hi / lo - 1.0 : std::numeric_limits<double>::infinity();
    rep.bounded = finite && rep.spread <= spread_tol;
    return rep;
}

} // namespace dualmink
