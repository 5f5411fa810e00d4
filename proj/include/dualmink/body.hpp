#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dualmink/core.hpp"
#include "dualmink/group.hpp"
#include "dualmink/measure.hpp"
#include "dualmink/quadrature.hpp"

namespace dualmink {

// Convex body given as the intersection of halfspaces {<x,v> <= h(v)} over a
// finite normal set. Construction verifies boundedness: the normals must span
// R^n and leave no direction u with <u,v> <= 0 for all v (checked by a small
// linear program). Support values must be strictly positive, so the origin is
// always interior.
class BodySpec {
public:
    BodySpec(std::vector<UnitVector> normals, Eigen::VectorXd h);

    // Same normal set, new support values; skips the boundedness re-check.
    BodySpec with_support(Eigen::VectorXd h) const;
    BodySpec scaled(double c) const;

    int ambient() const { return ambient_; }
    Eigen::Index facets() const { return h_.size(); }
    const std::vector<UnitVector>& normals() const { return normals_; }
    // Normals as columns, n x N.
    const Eigen::MatrixXd& normal_matrix() const { return vmat_; }
    const Eigen::VectorXd& support() const { return h_; }

    // Normal set closed under g and h constant on orbits.
    bool is_invariant_under(const FiniteGroup& g, double tol = 1e-9) const;

    // rho(u) = min over v with <u,v> > 0 of h(v)/<u,v>.
    double radial(const Eigen::VectorXd& u) const;
    // Index attaining the minimum in radial(); ties resolved to the smallest index.
    Eigen::Index argmin_facet(const Eigen::VectorXd& u) const;

private:
    BodySpec(std::vector<UnitVector> normals, Eigen::MatrixXd vmat, Eigen::VectorXd h, int n)
        : normals_(std::move(normals)), vmat_(std::move(vmat)), h_(std::move(h)), ambient_(n) {}
    std::vector<UnitVector> normals_;
    Eigen::MatrixXd vmat_; // n x N, unit columns
    Eigen::VectorXd h_;    // N, positive
    int ambient_;
};

// (1/n) * sum_i w_i rho(u_i)^q.
double dual_quermassintegral(const BodySpec& b, double q, const SphereQuadrature& quad);

/// Per-facet masses: node contributions (1/n) w_i rho(u_i)^q accumulated onto the
// facet selected by argmin_facet. Zeros mark facets trimmed away by the Wulff
// intersection. The entries sum to dual_quermassintegral exactly.
Eigen::VectorXd dual_curvature_masses(const BodySpec& b, double q, const SphereQuadrature& quad);

// Batched variant: one radial scan shared by every exponent in qs.
std::vector<Eigen::VectorXd> dual_curvature_masses_multi(const BodySpec& b,
                                                         const std::vector<double>& qs,
                                                         const SphereQuadrature& quad);

// Same masses packaged as a measure on the normals carrying nonzero mass.
DiscreteMeasure dual_curvature_measure(const BodySpec& b, double q, const SphereQuadrature& quad);

// Vertices of the polygon in counterclockwise order (n = 2 only).
std::vector<Eigen::Vector2d> polygon_vertices(const BodySpec& b);

// Exact per-facet cone areas (1/2) h_j len(F_j) for n = 2, aligned with the
// normals; trimmed facets get zero.
Eigen::VectorXd cone_volume_masses_2d(const BodySpec& b);
DiscreteMeasure cone_volume_exact_2d(const BodySpec& b);

struct GaussianIdentityReport {
    double mc_value = 0;    // Monte Carlo estimate of the Gaussian radial-power integral
    double mc_std_error = 0;
    double reference = 0;   // c0(n,q) * dual_quermassintegral
    double c0 = 0;          // n * int_0^inf e^{-r^2} r^{n-q-1} dr, by 1-D quadrature
    double rel_err = 0;     // |mc_value - reference| / reference
};

// Checks int_{R^n} rho(z)^q e^{-|z|^2} dz = c0(n,q) * W-tilde_{n-q} for 0 < q < n,
// with rho extended (-1)-homogeneously. The sampler draws directions uniformly
// and the squared radius from a Gamma(0.75(n-q), 1) proposal, which keeps the
// importance weights square-integrable over the whole exponent range.
GaussianIdentityReport gaussian_identity_check(const BodySpec& b, double q, long samples,
                                               std::uint64_t seed, const SphereQuadrature& quad);

// For each unit column u: the largest block index j with |P_{V_j} u| >= delta.
// Requires 0 < delta < 1/sqrt(m) so that every direction is assigned.
std::vector<int> spherical_partition(const std::vector<Subspace>& blocks, double delta,
                                     const Eigen::MatrixXd& unit_columns);

// Ellipsoid {x : sum_j |P_{V_j}x|^2 / b_j^2 <= 1} over pairwise-orthogonal blocks
// spanning R^n. Blocks are sorted by ascending semi-axis on construction.
class BlockEllipsoid {
public:
    BlockEllipsoid(std::vector<Subspace> blocks, Eigen::VectorXd semi_axes);

    int ambient() const { return ambient_; }
    int block_count() const { return static_cast<int>(blocks_.size()); }
    const std::vector<Subspace>& blocks() const { return blocks_; }
    const Eigen::VectorXd& semi_axes() const { return semi_axes_; }

    // h(v) = sqrt(sum_j b_j^2 |P_{V_j} v|^2).
    double support(const Eigen::VectorXd& v) const;
    // rho(u) = 1 / sqrt(sum_j |P_{V_j} u|^2 / b_j^2), (-1)-homogeneous in |u|.
    double radial(const Eigen::VectorXd& u) const;
    bool contains(const Eigen::VectorXd& x, double tol = 0.0) const;
    // Shape matrix M = sum_j b_j^2 P_{V_j}; support(v) = sqrt(v^T M v).
    Eigen::MatrixXd shape_matrix() const;

private:
    std::vector<Subspace> blocks_;
    Eigen::VectorXd semi_axes_; // ascending
    int ambient_;
};

// -(1/|mu|) sum_i w_i log h_E(u_i).
double ellipsoid_entropy(const DiscreteMeasure& mu, const BlockEllipsoid& e);

// Upper bound for the ellipsoid entropy built from the block dimensions and
// semi-axes: with D_j = d_1+...+d_j and r the index with D_{r-1} < q <= D_r
// (r = m when q > n),
//   -log(delta0/2) - sum_{j<r} (d_j/q) log b_j - (1 - D_{r-1}/q) log b_r
//   + t0 log b_1 - t0 log b_m.
// Valid whenever entropy_bound_applies holds for the same (delta0, t0).
double entropy_upper_bound(const BlockEllipsoid& e, double q, double delta0, double t0);

// Applicability of the bound: partition the atoms at threshold delta0 (largest
// block with projection >= delta0) and require the partial sums of the block
// mass fractions to stay below min(D_{r'}/q, 1) - t0 for every r' < m.
bool entropy_bound_applies(const DiscreteMeasure& mu, const BlockEllipsoid& e, double q,
                           double delta0, double t0);

struct EntropyConstants {
    double delta0 = 0;
    double t0 = 0;
};

// Picks (delta0, t0) making the bound applicable: delta0 from the smallest
// nonzero atom-block projection, t0 as half the worst partial-sum margin.
// Empty when some margin is nonpositive (the mass hypothesis fails for q).
std::optional<EntropyConstants> select_entropy_constants(const DiscreteMeasure& mu,
                                                         const BlockEllipsoid& e, double q);

enum class BarrierKind { BallBlock, BlockBarrier, QGreaterN };

// Parameters for the three scaling estimates; only the fields of the selected
// kind are read.
struct BarrierParams {
    // BallBlock: W(b B^d x B^m) with exponent alpha, 0 < alpha < d.
    int d = 0;
    int m = 0;
    double alpha = 0;
    // BlockBarrier: W(B^k x b B^d x B^m) with exponent q - k, k < q < k + d.
    int k = 0;
    double q = 0;
    // QGreaterN: ellipsoid with block dims and base semi-axes; the first block is
    // scaled by b; exponent structure b_max^{q-n} * prod b_i^{d_i}.
    std::vector<int> dims;
    std::vector<double> base;
};

struct BarrierReport {
    std::vector<double> b_grid;
    std::vector<double> ratios; // quermassintegral / predicted power of b
    double spread = 0;          // max/min - 1 over the grid
    bool bounded = false;       // spread within the requested tolerance
};

// Evaluates the quermassintegral of the degenerating product body on a fixed
// node set for b in {1, 1/2, 1/4, 1/8} and checks that the ratio to the
// predicted power law stays within spread_tol.
BarrierReport barrier_bound_check(BarrierKind kind, const BarrierParams& p,
                                  const SphereQuadrature& quad, double spread_tol = 0.10);

} // namespace dualmink
