#include "dualmink/selfcheck.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <vector>

#include "dualmink/body.hpp"
#include "dualmink/conditions.hpp"
#include "dualmink/john.hpp"
#include "dualmink/solver.hpp"

namespace dualmink {
namespace {

constexpr double kPi = 3.14159265358979323846;

using Clock = std::chrono::steady_clock;

double secs_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", x);
    return buf;
}

// ---------------------------------------------------------------------------
// Groups and fixed instances.

FiniteGroup antipodal_group(int n) {
    return FiniteGroup::close_generators({-Eigen::MatrixXd::Identity(n, n)});
}

FiniteGroup rotation_c3() {
    const double c = std::cos(2 * kPi / 3), s = std::sin(2 * kPi / 3);
    Eigen::Matrix2d r;
    r << c, -s, s, c;
    return FiniteGroup::close_generators({r});
}

// {diag(e) : e in {+-1}^3, even number of -1}; abstractly the Klein four group.
FiniteGroup sign_even_r3() {
    Eigen::Matrix3d a = Eigen::Vector3d(1, -1, -1).asDiagonal();
    Eigen::Matrix3d b = Eigen::Vector3d(-1, 1, -1).asDiagonal();
    return FiniteGroup::close_generators({a, b});
}

// Klein four group acting on R^4: {I, diag(-1,-1,1,1), diag(1,1,-1,-1), -I}.
FiniteGroup klein_four_r4() {
    Eigen::Matrix4d a = Eigen::Vector4d(-1, -1, 1, 1).asDiagonal();
    Eigen::Matrix4d b = Eigen::Vector4d(1, 1, -1, -1).asDiagonal();
    return FiniteGroup::close_generators({a, b});
}

FiniteGroup cube_rotation_group() {
    Eigen::Matrix3d rz, rx;
    rz << 0, -1, 0, 1, 0, 0, 0, 0, 1;
    rx << 1, 0, 0, 0, 0, -1, 0, 1, 0;
    return FiniteGroup::close_generators({rz, rx});
}

// +-e_i with unit weight: the cross-polytope cone-volume data up to scale.
DiscreteMeasure axis_cross_measure(int n) {
    std::vector<Atom> atoms;
    for (int i = 0; i < n; ++i) {
        atoms.push_back({UnitVector::axis(n, i), 1.0});
        atoms.push_back({UnitVector(-UnitVector::axis(n, i).coords()), 1.0});
    }
    return DiscreteMeasure::from_atoms(std::move(atoms));
}

UnitVector direction_at(double theta) {
    Eigen::Vector2d v(std::cos(theta), std::sin(theta));
    return UnitVector(v);
}

// Cone-volume data of the unit-inradius equilateral triangle with normals at
// 90, 210, 330 degrees: each cone has area sqrt(3).
DiscreteMeasure triangle_measure() {
    std::vector<Atom> atoms;
    for (int k = 0; k < 3; ++k)
        atoms.push_back({direction_at(kPi / 2 + 2 * kPi * k / 3), std::sqrt(3.0)});
    return DiscreteMeasure::from_atoms(std::move(atoms));
}

// ---------------------------------------------------------------------------
// Random generators (all seeded by the caller).

UnitVector random_direction(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> nd;
    for (;;) {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = nd(rng);
        if (v.norm() > 1e-6) return UnitVector(v);
    }
}

// Orbit representative for invariant-body generation. Mixed styles plant atoms
// inside proper invariant subspaces so the candidate lattice is nonvacuous.
UnitVector orbit_representative(std::mt19937_64& rng, const FiniteGroup& g, bool force_generic) {
    const int n = g.ambient();
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_real_distribution<double> ang(0.0, 2 * kPi);
    if (force_generic || n == 2) return random_direction(rng, n);
    const double p = u01(rng);
    if (n == 3) {
        if (p < 0.4) return random_direction(rng, 3);
        if (p < 0.8) { // coordinate plane
            int skip = static_cast<int>(rng() % 3);
            double t = ang(rng);
            Eigen::Vector3d v = Eigen::Vector3d::Zero();
            v[(skip + 1) % 3] = std::cos(t);
            v[(skip + 2) % 3] = std::sin(t);
            return UnitVector(v);
        }
        return UnitVector::axis(3, static_cast<int>(rng() % 3));
    }
    // n == 4, Klein four action: isotypic planes span{e1,e2} and span{e3,e4}.
    if (p < 0.5) return random_direction(rng, 4);
    int off = (p < 0.75) ? 0 : 2;
    double t = ang(rng);
    Eigen::Vector4d v = Eigen::Vector4d::Zero();
    v[off] = std::cos(t);
    v[off + 1] = std::sin(t);
    return UnitVector(v);
}

// G-invariant body from random orbits: normal set a union of orbits with
// pairwise chord separation, support constant on each orbit. Retries until the
// halfspace intersection is bounded.
BodySpec random_invariant_body(std::mt19937_64& rng, const FiniteGroup& g, int min_orbits,
                               int max_orbits, double hmin, double hmax, double min_chord,
                               bool mixed_reps) {
    const int n = g.ambient();
    std::uniform_int_distribution<int> ko(min_orbits, max_orbits);
    std::uniform_real_distribution<double> hu(hmin, hmax);
    for (int attempt = 0; attempt < 400; ++attempt) {
        const int k = ko(rng);
        std::vector<UnitVector> normals;
        std::vector<double> hv;
        bool clash = false;
        for (int j = 0; j < k && !clash; ++j) {
            UnitVector rep = orbit_representative(rng, g, !mixed_reps || j == 0);
            const double hj = hu(rng);
            for (const auto& u : orbit(g, rep)) {
                for (const auto& w : normals)
                    if (u.distance(w) < min_chord) { clash = true; break; }
                if (clash) break;
                normals.push_back(u);
                hv.push_back(hj);
            }
        }
        if (clash || static_cast<int>(normals.size()) < n + 1) continue;
        try {
            Eigen::VectorXd h = Eigen::Map<Eigen::VectorXd>(hv.data(), hv.size());
            return BodySpec(std::move(normals), std::move(h));
        } catch (const InputError&) {
            continue; // unbounded normal set; redraw
        }
    }
    throw NumericalError("random_invariant_body: no bounded instance after 400 attempts");
}

// k angles on the circle with all circular gaps in [min_gap, max_gap].
std::vector<double> random_angles(std::mt19937_64& rng, int k, double min_gap, double max_gap) {
    std::exponential_distribution<double> ex(1.0);
    std::uniform_real_distribution<double> u(0.0, 2 * kPi);
    const double slack = 2 * kPi - k * min_gap;
    for (int attempt = 0; attempt < 500; ++attempt) {
        std::vector<double> gaps(k);
        double s = 0;
        for (auto& x : gaps) { x = ex(rng); s += x; }
        double biggest = 0;
        for (auto& x : gaps) { x = min_gap + slack * x / s; biggest = std::max(biggest, x); }
        if (biggest > max_gap) continue;
        std::vector<double> a(k);
        double t = u(rng);
        for (int i = 0; i < k; ++i) { a[i] = std::fmod(t, 2 * kPi); t += gaps[i]; }
        std::sort(a.begin(), a.end());
        return a;
    }
    throw NumericalError("random_angles: gap constraints unsatisfiable");
}

BodySpec random_polygon(std::mt19937_64& rng, int kmin, int kmax, double hmin, double hmax,
                        double min_gap, double max_gap) {
    std::uniform_int_distribution<int> kk(kmin, kmax);
    std::uniform_real_distribution<double> hu(hmin, hmax);
    const int k = kk(rng);
    const auto angles = random_angles(rng, k, min_gap, max_gap);
    std::vector<UnitVector> normals;
    Eigen::VectorXd h(k);
    for (int i = 0; i < k; ++i) {
        normals.push_back(direction_at(angles[i]));
        h[i] = hu(rng);
    }
    return BodySpec(std::move(normals), std::move(h));
}

DiscreteMeasure random_symmetrized_measure(std::mt19937_64& rng, const FiniteGroup& g,
                                           int base_dirs) {
    std::uniform_real_distribution<double> wu(0.5, 2.0);
    std::vector<Atom> atoms;
    for (int i = 0; i < base_dirs; ++i)
        atoms.push_back({random_direction(rng, g.ambient()), wu(rng)});
    return symmetrize(DiscreteMeasure::from_atoms(std::move(atoms)), g);
}

// ---------------------------------------------------------------------------
// Check 1: cone-volume round trip on the square data.

CheckResult check_square_round_trip() {
    CheckResult r;
    const auto t0 = Clock::now();
    const auto mu = axis_cross_measure(2);
    const auto g = antipodal_group(2);
    SolveConfig cfg;
    cfg.q = 2.0;
    const auto res = solve(mu, g, cfg);
    // Scale is pinned by c^q W = |mu|: the solution is the square with h = 1.
    const double h_err = (res.body.support().array() - 1.0).abs().maxCoeff();
    const double indep =
        verify(mu, res, cfg.q, SphereQuadrature::circle(150000).symmetrized(g));
    const double el = secs_since(t0);
    const bool ok = res.converged && res.residual_tv < 1e-3 && indep < 1e-3 && h_err <= 1e-3;
    r.pass = ok && el < 30.0;
    std::ostringstream d;
    d << "residual_tv=" << num(res.residual_tv) << " indep_residual=" << num(indep)
      << " max|h-1|=" << num(h_err) << " iters=" << res.iterations << " t=" << num(el) << "s";
    r.detail = d.str();
    return r;
}

// ---------------------------------------------------------------------------
// Check 2: C3-invariant triangle (non-origin-symmetric solution).

CheckResult check_triangle_reconstruction() {
    CheckResult r;
    const auto t0 = Clock::now();
    const auto mu = triangle_measure();
    const auto g = rotation_c3();
    SolveConfig cfg;
    cfg.q = 2.0;
    const auto res = solve(mu, g, cfg);
    const double h_err = (res.body.support().array() - 1.0).abs().maxCoeff();
    const double el = secs_since(t0);
    r.pass = res.converged && res.residual_tv < 1e-3 && el < 30.0;
    std::ostringstream d;
    d << "residual_tv=" << num(res.residual_tv) << " max|h-1|=" << num(h_err)
      << " iters=" << res.iterations << " t=" << num(el) << "s";
    r.detail = d.str();
    return r;
}

// ---------------------------------------------------------------------------
// Check 3: subspace mass ratios of dual curvature measures on random invariant
// bodies, against min(dim L / q, 1), with strictness when q <= dim L.

CheckResult check_subspace_mass_ratios() {
    CheckResult r;
    const auto t0 = Clock::now();
    struct GroupCase {
        FiniteGroup g;
        int bodies;
        std::vector<double> qs;
        SphereQuadrature quad;
        int min_orbits;
        int max_orbits;
    };
    std::vector<GroupCase> cases;
    {
        auto g = antipodal_group(2);
        auto q = SphereQuadrature::circle(20000).symmetrized(g);
        cases.push_back({g, 20, {0.5, 1.0, 1.7}, q, 3, 6});
    }
    {
        auto g = sign_even_r3();
        auto q = SphereQuadrature::spiral(30011).symmetrized(g);
        cases.push_back({g, 16, {0.5, 1.0, 1.7, 2.0}, q, 2, 4});
    }
    {
        auto g = klein_four_r4();
        auto q = SphereQuadrature::monte_carlo(4, 30000, 20240913).symmetrized(g);
        cases.push_back({g, 14, {0.5, 1.0, 1.7, 2.0, 3.0}, q, 3, 5});
    }
    std::mt19937_64 rng(20240903);
    int bodies_done = 0, candidates_seen = 0, strict_checked = 0;
    double max_excess = -1e300; // ratio - bound, must stay <= 2e-3
    double min_strict_gap = 1e300; // 1 - ratio when q <= dim L, must stay > 1e-3
    std::string violation;
    for (const auto& c : cases) {
        const int nfacqs = static_cast<int>(c.qs.size());
        for (int i = 0; i < c.bodies; ++i) {
            // Regenerate until every facet keeps a healthy mass share at each q,
            // so the strictness margin is a property of the body, not a sliver.
            std::vector<Eigen::VectorXd> masses;
            BodySpec b = random_invariant_body(rng, c.g, c.min_orbits, c.max_orbits, 0.9, 1.1,
                                               0.12, true);
            for (int attempt = 0; attempt < 80; ++attempt) {
                masses = dual_curvature_masses_multi(b, c.qs, c.quad);
                double worst_share = 1e300;
                for (const auto& m : masses)
                    worst_share = std::min(worst_share, m.minCoeff() / m.sum());
                if (worst_share >= 1.2e-3) break;
                masses.clear();
                b = random_invariant_body(rng, c.g, c.min_orbits, c.max_orbits, 0.9, 1.1, 0.12,
                                          true);
            }
            if (masses.empty()) {
                r.pass = false;
                r.detail = "body generation kept producing sliver facets";
                return r;
            }
            std::vector<Atom> at;
            for (const auto& u : b.normals()) at.push_back({u, 1.0});
            const auto nu = DiscreteMeasure::from_atoms(std::move(at));
            const auto cands = candidate_invariant_subspaces(nu, c.g);
            candidates_seen += static_cast<int>(cands.size());
            for (int qi = 0; qi < nfacqs; ++qi) {
                const double q = c.qs[qi];
                const double total = masses[qi].sum();
                for (const auto& l : cands) {
                    double inmass = 0;
                    for (Eigen::Index j = 0; j < b.facets(); ++j)
                        if (l.contains(b.normals()[static_cast<std::size_t>(j)].coords(),
                                       tolerances().membership))
                            inmass += masses[qi][j];
                    const double ratio = inmass / total;
                    const double bound = std::min(l.dim() / q, 1.0);
                    max_excess = std::max(max_excess, ratio - bound);
                    if (ratio > bound + 2e-3 && violation.empty())
                        violation = "ratio " + num(ratio) + " > bound " + num(bound) +
                                    " at q=" + num(q) + " dimL=" + num(l.dim());
                    if (q <= l.dim() + 1e-12) {
                        ++strict_checked;
                        min_strict_gap = std::min(min_strict_gap, 1.0 - ratio);
                        if (!(ratio < 1.0 - 1e-3) && violation.empty())
                            violation = "strictness: ratio " + num(ratio) + " at q=" + num(q) +
                                        " dimL=" + num(l.dim());
                    }
                }
            }
            ++bodies_done;
        }
    }
    const double el = secs_since(t0);
    r.pass = violation.empty() && bodies_done == 50 && el < 300.0;
    std::ostringstream d;
    d << "bodies=" << bodies_done << " candidates=" << candidates_seen
      << " strict_cases=" << strict_checked << " max(ratio-bound)=" << num(max_excess)
      << " min_strict_gap=" << num(min_strict_gap) << " t=" << num(el) << "s";
    if (!violation.empty()) d << " VIOLATION: " << violation;
    r.detail = d.str();
    return r;
}

// ---------------------------------------------------------------------------
// Check 4: irreducible action: second moment is a multiple of the identity and
// the classical concentration condition holds, with exact equality structure on
// the cross-polytope instance.

CheckResult check_irreducible_moment() {
    CheckResult r;
    const auto t0 = Clock::now();
    const auto g = cube_rotation_group();
    std::ostringstream d;
    bool ok = g.order() == 24 && is_irreducible(g);
    if (!ok) d << "group order/irreducibility failed; ";
    std::mt19937_64 rng(20240904);
    double worst_moment = 0;
    for (int i = 0; i < 20 && ok; ++i) {
        const auto mu = random_symmetrized_measure(rng, g, 1 + static_cast<int>(rng() % 2));
        ok = is_invariant_measure(mu, g);
        const Eigen::MatrixXd m =
            second_moment(mu) - (mu.total_mass() / 3.0) * Eigen::MatrixXd::Identity(3, 3);
        worst_moment = std::max(worst_moment, m.norm());
        ok = ok && m.norm() < 1e-9;
        ok = ok && check_classical(mu, ClassicalMode::Concentration).satisfied;
        if (!ok) d << "random measure " << i << " failed; ";
    }
    // Equality instance: +-e_i. Mass ratio on each axis is exactly 1/3 and the
    // measure concentrates on the axis together with its orthogonal complement.
    const auto mux = axis_cross_measure(3);
    const auto rep = check_classical(mux, ClassicalMode::Concentration);
    bool eq_ok = rep.satisfied;
    const auto line = Subspace::line(UnitVector::axis(3, 0));
    bool found = false;
    for (const auto& ec : rep.equality_cases) {
        if (!subspaces_equal(ec.subspace, line, tolerances().subspace_eq)) continue;
        found = true;
        eq_ok = eq_ok && ec.complement.has_value() &&
                subspaces_equal(*ec.complement, complement(line), tolerances().subspace_eq);
    }
    eq_ok = eq_ok && found;
    const double ratio = subspace_mass(mux, line) / mux.total_mass();
    eq_ok = eq_ok && ratio == 1.0 / 3.0;
    const double split =
        subspace_mass(mux, line) + subspace_mass(mux, complement(line)) - mux.total_mass();
    eq_ok = eq_ok && split == 0.0;
    if (!eq_ok) d << "equality instance failed; ";
    const double el = secs_since(t0);
    r.pass = ok && eq_ok && el < 60.0;
    d << "worst |M - (|mu|/3)I| = " << num(worst_moment) << ", axis ratio " << num(ratio)
      << ", equality cases " << rep.equality_cases.size() << ", t=" << num(el) << "s";
    r.detail = d.str();
    return r;
}

// ---------------------------------------------------------------------------
// Check 5: invariant vs classical condition audit over the measure corpus.

CheckResult check_equivalence_audit() {
    CheckResult r;
    const auto t0 = Clock::now();
    struct Instance {
        DiscreteMeasure mu;
        FiniteGroup g;
        std::string label;
    };
    std::vector<Instance> corpus;
    corpus.push_back({axis_cross_measure(2), antipodal_group(2), "square"});
    corpus.push_back({triangle_measure(), rotation_c3(), "triangle"});
    corpus.push_back({axis_cross_measure(3), sign_even_r3(), "cross-polytope/sign-even"});
    corpus.push_back({axis_cross_measure(3), cube_rotation_group(), "cross-polytope/cube"});
    std::mt19937_64 rng(20240905);
    {
        const auto g = antipodal_group(2);
        corpus.push_back({random_symmetrized_measure(rng, g, 4), g, "r2 8-direction"});
        for (int i = 0; i < 2; ++i)
            corpus.push_back({random_symmetrized_measure(rng, g, 3), g, "r2 random"});
    }
    {
        const auto g = sign_even_r3();
        for (int i = 0; i < 2; ++i)
            corpus.push_back({random_symmetrized_measure(rng, g, 2), g, "r3 random"});
    }
    {
        const auto g = klein_four_r4();
        for (int i = 0; i < 2; ++i)
            corpus.push_back({random_symmetrized_measure(rng, g, 2), g, "r4 random"});
    }
    {
        const auto g = cube_rotation_group();
        for (int i = 0; i < 2; ++i)
            corpus.push_back({random_symmetrized_measure(rng, g, 2), g, "cube random"});
    }
    bool ok = true;
    int consistent = 0;
    std::string bad;
    for (const auto& inst : corpus) {
        const auto aud = equivalence_audit(inst.mu, inst.g);
        if (aud.consistent) ++consistent;
        if (aud.invariant_report.satisfied && !aud.classical_report.satisfied) {
            ok = false;
            if (bad.empty()) bad = inst.label;
        }
    }
    // Sharpness instance: both sides satisfied, classical equality ratio 1/n.
    const auto mux = axis_cross_measure(3);
    const auto g = cube_rotation_group();
    const auto aud = equivalence_audit(mux, g);
    const double ratio =
        subspace_mass(mux, Subspace::line(UnitVector::axis(3, 0))) / mux.total_mass();
    const bool sharp = aud.invariant_report.satisfied && aud.classical_report.satisfied &&
                       ratio == 1.0 / 3.0;
    const double el = secs_since(t0);
    r.pass = ok && sharp && el < 120.0;
    std::ostringstream d;
    d << "corpus=" << corpus.size() << " consistent=" << consistent
      << " sharpness_ratio=" << num(ratio) << " t=" << num(el) << "s";
    if (!ok) d << " FAILED: invariant holds but classical fails on " << bad;
    if (!sharp) d << " sharpness instance failed";
    r.detail = d.str();
    return r;
}

// ---------------------------------------------------------------------------
// Check 6: Gaussian radial-power integral identity.

CheckResult check_gaussian_identity() {
    CheckResult r;
    const auto t0 = Clock::now();
    const auto quad = SphereQuadrature::circle(20000);
    std::vector<BodySpec> bodies;
    std::vector<std::string> labels;
    {
        const int k = 256;
        std::vector<UnitVector> normals;
        Eigen::VectorXd h = Eigen::VectorXd::Ones(k);
        for (int i = 0; i < k; ++i) normals.push_back(direction_at(2 * kPi * i / k));
        bodies.emplace_back(std::move(normals), std::move(h));
        labels.push_back("disk256");
    }
    std::mt19937_64 rng(20240906);
    for (int i = 0; i < 5; ++i) {
        bodies.push_back(random_polygon(rng, 6, 12, 0.8, 1.2, 2 * kPi / 60, 2.0));
        labels.push_back("poly" + std::to_string(i));
    }
    const double qs[3] = {0.5, 1.0, 1.5};
    bool ok = true;
    double worst = 0, disk_closed_err = -1;
    std::string bad;
    std::uint64_t seed = 20240906;
    for (std::size_t bi = 0; bi < bodies.size(); ++bi) {
        for (double q : qs) {
            const auto rep = gaussian_identity_check(bodies[bi], q, 1000000, seed++, quad);
            worst = std::max(worst, rep.rel_err);
            if (rep.rel_err >= 0.02 && bad.empty())
                bad = labels[bi] + " q=" + num(q) + " rel_err=" + num(rep.rel_err);
            ok = ok && rep.rel_err < 0.02;
            if (bi == 0 && q == 1.0) {
                // rho = 1 on the disk: the integral is pi^(3/2) in closed form.
                const double closed = std::pow(kPi, 1.5);
                disk_closed_err = std::abs(rep.mc_value - closed) / closed;
                ok = ok && disk_closed_err < 0.02;
            }
        }
    }
    const double el = secs_since(t0);
    r.pass = ok && el < 120.0;
    std::ostringstream d;
    d << "worst rel_err=" << num(worst) << " disk closed-form err=" << num(disk_closed_err)
      << " t=" << num(el) << "s";
    if (!bad.empty()) d << " FAILED: " << bad;
    r.detail = d.str();
    return r;
}

// ---------------------------------------------------------------------------
// Check 7: maximal inscribed ellipsoid and the E subset K subset nE sandwich.

CheckResult check_john_sandwich() {
    CheckResult r;
    const auto t0 = Clock::now();
    std::ostringstream d;
    BodySpec rect({UnitVector::axis(2, 0), UnitVector(-UnitVector::axis(2, 0).coords()),
                   UnitVector::axis(2, 1), UnitVector(-UnitVector::axis(2, 1).coords())},
                  (Eigen::VectorXd(4) << 1.5, 1.5, 0.7, 0.7).finished());
    const auto er = john_ellipsoid(rect);
    const Eigen::VectorXd ax = er.semi_axes();
    const double ax_err =
        std::max(std::abs(ax[0] - 0.7), std::abs(ax[ax.size() - 1] - 1.5));
    bool ok = ax_err < 1e-6;
    d << "rectangle semi-axes err=" << num(ax_err);
    std::mt19937_64 rng(20240907);
    int sandwiches = 0;
    {
        const auto g = antipodal_group(2);
        for (int i = 0; i < 30 && ok; ++i) {
            const auto b = random_invariant_body(rng, g, 3, 6, 0.8, 1.2, 0.05, false);
            const auto e = john_ellipsoid(b, g);
            ok = john_sandwich_check(b, e, 1e-7);
            if (ok) ++sandwiches;
        }
    }
    {
        const auto g = sign_even_r3();
        for (int i = 0; i < 20 && ok; ++i) {
            const auto b = random_invariant_body(rng, g, 2, 4, 0.8, 1.2, 0.05, true);
            const auto e = john_ellipsoid(b, g);
            ok = john_sandwich_check(b, e, 1e-7);
            if (ok) ++sandwiches;
        }
    }
    const double el = secs_since(t0);
    r.pass = ok && sandwiches == 50 && el < 120.0;
    d << " sandwiches=" << sandwiches << "/50 t=" << num(el) << "s";
    r.detail = d.str();
    return r;
}

// ---------------------------------------------------------------------------
// Check 8: entropy upper bound on random block ellipsoids, plus the coercivity
// witness: the degenerating-ellipsoid trace must eventually decrease and pass
// below -50 by b1 = 1e-6.

CheckResult check_entropy_and_coercivity() {
    CheckResult r;
    const auto t0 = Clock::now();
    std::ostringstream d;
    std::mt19937_64 rng(20240908);
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> au(0.05, 1.0);
    std::uniform_real_distribution<double> wu(0.2, 2.0);
    int valid = 0, attempts = 0, skipped = 0;
    double worst_gap = -1e300; // lhs - rhs, must stay <= 1e-12
    bool bound_ok = true;
    while (valid < 100 && attempts < 1000) {
        ++attempts;
        const int n = 2 + static_cast<int>(rng() % 3);
        Eigen::MatrixXd a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = nd(rng);
        const Eigen::MatrixXd qmat = Eigen::HouseholderQR<Eigen::MatrixXd>(a)
                                         .householderQ() *
                                     Eigen::MatrixXd::Identity(n, n);
        const int m = 1 + static_cast<int>(rng() % static_cast<unsigned>(std::min(3, n)));
        std::vector<int> dims(m, 1);
        for (int extra = n - m; extra > 0; --extra) ++dims[rng() % m];
        std::vector<Subspace> blocks;
        Eigen::VectorXd axes(m);
        int off = 0;
        for (int j = 0; j < m; ++j) {
            blocks.push_back(Subspace::from_orthonormal(qmat.middleCols(off, dims[j]), n));
            axes[j] = au(rng);
            off += dims[j];
        }
        const BlockEllipsoid e(blocks, axes);
        const int natoms = 4 + static_cast<int>(rng() % 5);
        std::vector<Atom> atoms;
        for (int i = 0; i < natoms; ++i) atoms.push_back({random_direction(rng, n), wu(rng)});
        const auto mu = DiscreteMeasure::from_atoms(std::move(atoms));
        const double qchoices[4] = {0.7, 1.5, double(n), n + 1.5};
        const double q = qchoices[valid % 4];
        const auto sel = select_entropy_constants(mu, e, q);
        if (!sel) { ++skipped; continue; }
        if (!entropy_bound_applies(mu, e, q, sel->delta0, sel->t0)) {
            bound_ok = false;
            d << "selector returned inapplicable constants; ";
            break;
        }
        const double lhs = ellipsoid_entropy(mu, e);
        const double rhs = entropy_upper_bound(e, q, sel->delta0, sel->t0);
        worst_gap = std::max(worst_gap, lhs - rhs);
        if (lhs > rhs + 1e-12) {
            bound_ok = false;
            d << "bound violated: lhs-rhs=" << num(lhs - rhs) << " at q=" << num(q) << "; ";
            break;
        }
        ++valid;
    }
    const bool ok_a = bound_ok && valid == 100;
    d << "bound instances=" << valid << " skipped=" << skipped
      << " worst lhs-rhs=" << num(worst_gap) << "; ";

    // Coercivity witness: mu = +-e1, +-e2, q = 1.5, ellipse (b1, 1/2), b1 -> 0.
    const auto mu = axis_cross_measure(2);
    const auto g = antipodal_group(2);
    const std::vector<Subspace> blocks = {Subspace::line(UnitVector::axis(2, 0)),
                                          Subspace::line(UnitVector::axis(2, 1))};
    std::vector<Eigen::VectorXd> schedule;
    for (int k = 0; k <= 6; ++k)
        schedule.push_back((Eigen::VectorXd(2) << std::pow(10.0, -k), 0.5).finished());
    const auto trace = degenerating_phi_trace(mu, g, 1.5, blocks, schedule,
                                              SphereQuadrature::circle(4000000));
    int tail_start = static_cast<int>(trace.size()) - 1;
    while (tail_start > 0 && trace[tail_start] < trace[tail_start - 1]) --tail_start;
    const bool monotone = tail_start <= 3; // decreasing over at least the last four decades
    const bool deep = trace.back() < -50.0;
    const double rate = (trace.back() - trace.front()) / 6.0; // per decade of b1
    d << "phi(b1=1)=" << num(trace.front()) << " phi(b1=1e-6)=" << num(trace.back())
      << " decreasing from decade " << tail_start << " rate=" << num(rate) << "/decade";
    if (!deep)
        d << "; FAILED: trace never reaches -50 (at the measured rate that takes b1 ~ 1e-"
          << static_cast<long>((trace.front() - 50.0 - trace.back()) / rate) + 6 << ")";
    const double el = secs_since(t0);
    d << " t=" << num(el) << "s";
    r.pass = ok_a && monotone && deep;
    r.detail = d.str();
    return r;
}

// ---------------------------------------------------------------------------
// Check 9: power-law scaling of the quermassintegral barriers.

CheckResult check_barrier_scaling() {
    CheckResult r;
    const auto t0 = Clock::now();
    const auto quad7 = SphereQuadrature::monte_carlo(7, 1000000, 20240909);
    BarrierParams p1;
    p1.d = 6;
    p1.m = 1;
    p1.alpha = 1.0;
    const auto r1 = barrier_bound_check(BarrierKind::BallBlock, p1, quad7);
    BarrierParams p2;
    p2.k = 1;
    p2.d = 2;
    p2.m = 0;
    p2.q = 2.96;
    const auto r2 =
        barrier_bound_check(BarrierKind::BlockBarrier, p2, SphereQuadrature::spiral(200003));
    BarrierParams p3;
    p3.dims = {1, 6};
    p3.base = {0.7, 1.0};
    p3.q = 7.5;
    const auto r3 = barrier_bound_check(BarrierKind::QGreaterN, p3, quad7);
    const double el = secs_since(t0);
    r.pass = r1.bounded && r2.bounded && r3.bounded && el < 120.0;
    std::ostringstream d;
    d << "spreads: ball-block=" << num(r1.spread) << " block-barrier=" << num(r2.spread)
      << " q>n=" << num(r3.spread) << " (limit 0.10) t=" << num(el) << "s";
    r.detail = d.str();
    return r;
}

// ---------------------------------------------------------------------------
// Check 10: quadrature curvature masses against exact planar cone areas.

CheckResult check_planar_oracle() {
    CheckResult r;
    const auto t0 = Clock::now();
    std::mt19937_64 rng(20240910);
    const auto quad = SphereQuadrature::circle(100000);
    double worst = 0;
    bool ok = true;
    for (int i = 0; i < 20 && ok; ++i) {
        Eigen::VectorXd exact;
        BodySpec b = random_polygon(rng, 8, 12, 0.8, 1.2, 2 * kPi / 60, 2.0);
        for (int attempt = 0; attempt < 200; ++attempt) {
            exact = cone_volume_masses_2d(b);
            if (exact.minCoeff() > 1e-3 * exact.sum()) break;
            exact.resize(0);
            b = random_polygon(rng, 8, 12, 0.8, 1.2, 2 * kPi / 60, 2.0);
        }
        if (exact.size() == 0) {
            r.detail = "polygon generation kept producing trimmed facets";
            r.pass = false;
            return r;
        }
        const Eigen::VectorXd approx = dual_curvature_masses(b, 2.0, quad);
        for (Eigen::Index j = 0; j < exact.size(); ++j) {
            const double rel = std::abs(approx[j] - exact[j]) / exact[j];
            worst = std::max(worst, rel);
            ok = ok && rel <= 1e-3;
        }
    }
    const double el = secs_since(t0);
    r.pass = ok && el < 60.0;
    std::ostringstream d;
    d << "worst per-facet rel err=" << num(worst) << " t=" << num(el) << "s";
    r.detail = d.str();
    return r;
}

struct Entry {
    const char* name;
    CheckResult (*fn)();
};

constexpr Entry kEntries[] = {
    {"square_cone_volume_round_trip", check_square_round_trip},
    {"triangle_nonsymmetric_reconstruction", check_triangle_reconstruction},
    {"subspace_mass_ratio_suite", check_subspace_mass_ratios},
    {"irreducible_second_moment_and_concentration", check_irreducible_moment},
    {"invariant_vs_classical_equivalence_audit", check_equivalence_audit},
    {"gaussian_radial_identity", check_gaussian_identity},
    {"john_ellipsoid_and_sandwich", check_john_sandwich},
    {"entropy_bound_and_coercivity_witness", check_entropy_and_coercivity},
    {"barrier_power_law_scaling", check_barrier_scaling},
    {"planar_oracle_equivalence", check_planar_oracle},
};

} // namespace

int acceptance_check_count() { return static_cast<int>(std::size(kEntries)); }

std::string acceptance_check_name(int index) {
    if (index < 1 || index > acceptance_check_count()) return "invalid";
    return kEntries[index - 1].name;
}

CheckResult run_acceptance_check(int index) {
    CheckResult r;
    if (index < 1 || index > acceptance_check_count()) {
        r.name = "invalid";
        r.detail = "check index out of range";
        return r;
    }
    const auto t0 = Clock::now();
    try {
        r = kEntries[index - 1].fn();
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.name = kEntries[index - 1].name;
    r.seconds = secs_since(t0);
    return r;
}

std::vector<CheckResult> run_all_acceptance_checks() {
    std::vector<CheckResult> out;
    for (int i = 1; i <= acceptance_check_count(); ++i) out.push_back(run_acceptance_check(i));
    return out;
}

} // namespace dualmink
