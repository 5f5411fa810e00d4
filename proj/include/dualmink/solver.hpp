#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "dualmink/body.hpp"
#include "dualmink/conditions.hpp"

namespace dualmink {

struct SolveConfig {
    double q = 2.0;
    int max_iters = 2000;
    double step0 = 0.5;          // initial backtracking step
    double grad_tol = 1e-6;      // infinity norm of the orbit gradient
    double residual_tol = 1e-3;  // total-variation acceptance after scaling
    // Base quadrature resolution (symmetrized over G). Facet masses move in
    // steps of one nodal weight as h varies, so the attainable gradient floor
    // is ~kappa/nodes; the default keeps that floor under grad_tol.
    int quad_nodes = 1000000;
    std::uint64_t seed = 20240901;
    bool enforce_conditions = true;
};

struct SolveResult {
    BodySpec body; // scaled so the q-th dual quermassintegral equals |mu|
    double scale = 1;
    double residual_tv = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
    std::vector<double> phi_trace; // nondecreasing up to line-search tolerance
    double grad_norm = std::numeric_limits<double>::infinity();
    std::string notes;
};

// -(1/|mu|) sum_i w_i log f_i; f holds positive values at the atoms, in order.
double entropy(const DiscreteMeasure& mu, const Eigen::VectorXd& f);

// entropy at the body's support values on supp mu, plus (1/q) log of the q-th
// dual quermassintegral; invariant under scaling of the body.
double phi(const DiscreteMeasure& mu, const BodySpec& b, double q, const SphereQuadrature& quad);

// Maximizes phi over bodies with normal set = supp mu and support constant on
// G-orbits (one log-h variable per orbit), by gradient ascent with backtracking.
// The orbit gradient is -mu(orbit)/|mu| + mass_q(orbit)/W, so stationarity plus
// the terminal scaling c^q W = |mu| makes the measure of c K match mu. The
// existence condition for the given q is checked first unless cfg disables it.
// The returned body's normals follow mu's atom order.
SolveResult solve(const DiscreteMeasure& mu, const FiniteGroup& g, const SolveConfig& cfg);

// Recomputes the dual curvature masses of r.body on an independent quadrature
// (derived from quad via independent_variant) and returns the total-variation
// distance to mu, normalized by |mu|.
double verify(const DiscreteMeasure& mu, const SolveResult& r, double q,
              const SphereQuadrature& quad);

// q = n with the concentration condition holding with equality on some proper
// invariant L: splits mu onto L and M = span(supp mu \ L), solves the two
// lower-dimensional cone-volume problems under the restricted groups, and
// reassembles the sheared-cylinder sum, whose support values at the atoms are
// a * h_C on L and a' * h_C' on M. The mass distribution is independent of
// a/a' once the volume is normalized; the ratio is still swept by a golden-
// section search on the residual as a self-check. Defers to solve when the
// condition is strict everywhere.
SolveResult solve_log_with_equality(const DiscreteMeasure& mu, const FiniteGroup& g,
                                    const SolveConfig& cfg);

// Phi evaluated on block ellipsoids along a degeneration schedule of semi-axis
// tuples: support at atoms for the entropy term, radial power integral on the
// quadrature for the volume term. Witnesses coercivity: under the existence
// condition the sequence is eventually decreasing without bound as b_1 -> 0.
std::vector<double> degenerating_phi_trace(const DiscreteMeasure& mu, const FiniteGroup& g,
                                           double q, const std::vector<Subspace>& blocks,
                                           const std::vector<Eigen::VectorXd>& b_schedule,
                                           const SphereQuadrature& quad);

} // namespace dualmink
