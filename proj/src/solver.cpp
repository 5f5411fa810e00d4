#include "dualmink/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dualmink {

double entropy(const DiscreteMeasure& mu, const Eigen::VectorXd& f) {
    if (!mu.valid()) throw InputError("entropy: empty measure");
    if (f.size() != static_cast<Eigen::Index>(mu.size())) {
        throw InputError("entropy: one value per atom required");
    }
    double acc = 0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const double fi = f(static_cast<Eigen::Index>(i));
        if (!(fi > 0) || !std::isfinite(fi)) throw InputError("entropy: values must be positive");
        acc += mu.atoms()[i].weight * std::log(fi);
    }
    return -acc / mu.total_mass();
}

namespace {

// Support values of b at the atoms of mu, matched by direction.
Eigen::VectorXd support_at_atoms(const DiscreteMeasure& mu, const BodySpec& b) {
    Eigen::VectorXd f(static_cast<Eigen::Index>(mu.size()));
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const Eigen::VectorXd& u = mu.atoms()[i].direction.coords();
        Eigen::Index match = -1;
        for (Eigen::Index j = 0; j < b.facets(); ++j) {
            if ((b.normal_matrix().col(j) - u).norm() < 1e-8) {
                match = j;
                break;
            }
        }
        if (match < 0) throw InputError("phi: an atom of mu is not a normal of the body");
        f(static_cast<Eigen::Index>(i)) = b.support()(match);
    }
    return f;
}

} // namespace

double phi(const DiscreteMeasure& mu, const BodySpec& b, double q, const SphereQuadrature& quad) {
    if (!(q > 0)) throw InputError("phi: q must be positive");
    if (mu.ambient() != b.ambient()) throw InputError("phi: dimension mismatch");
    return entropy(mu, support_at_atoms(mu, b)) +
           std::log(dual_quermassintegral(b, q, quad)) / q;
}

namespace {

struct OrbitData {
    std::vector<std::vector<int>> orbits;
    Eigen::VectorXd target; // mu(orbit)/|mu|
    std::vector<int> orbit_of; // atom index -> orbit index
};

OrbitData orbit_data(const DiscreteMeasure& mu, const FiniteGroup& g) {
    OrbitData od;
    od.orbits = atom_orbits(mu, g);
    od.target = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(od.orbits.size()));
    od.orbit_of.assign(mu.size(), -1);
    for (std::size_t k = 0; k < od.orbits.size(); ++k) {
        for (const int i : od.orbits[k]) {
            od.target(static_cast<Eigen::Index>(k)) += mu.atoms()[static_cast<std::size_t>(i)].weight;
            od.orbit_of[static_cast<std::size_t>(i)] = static_cast<int>(k);
        }
    }
    od.target /= mu.total_mass();
    return od;
}

Eigen::VectorXd expand_log(const OrbitData& od, const Eigen::VectorXd& s, std::size_t atoms) {
    Eigen::VectorXd h(static_cast<Eigen::Index>(atoms));
    for (std::size_t i = 0; i < atoms; ++i) {
        h(static_cast<Eigen::Index>(i)) = std::exp(s(od.orbit_of[i]));
    }
    return h;
}

void gate_conditions(const DiscreteMeasure& mu, const FiniteGroup& g, double q,
                     std::string& notes) {
    const int n = mu.ambient();
    if (q < n - 1e-9) {
        ConditionReport rep = check_mass_inequality(mu, g, q);
        if (!rep.satisfied) {
            throw ConditionError("solve: the q-th subspace mass inequality fails", std::move(rep));
        }
    } else if (q <= n + 1e-9) {
        ConditionReport rep = check_concentration(mu, g);
        if (!rep.satisfied) {
            throw ConditionError("solve: the subspace concentration condition fails",
                                 std::move(rep));
        }
    } else {
        notes += "q > n: existence is not characterized by the mass inequality; "
                 "experimental run without condition gate. ";
    }
}

double tv_residual(const DiscreteMeasure& mu, const Eigen::VectorXd& masses) {
    double acc = 0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        acc += std::abs(masses(static_cast<Eigen::Index>(i)) - mu.atoms()[i].weight);
    }
    return 0.5 * acc / mu.total_mass();
}

void validate_solve_inputs(const DiscreteMeasure& mu, const FiniteGroup& g,
                           const SolveConfig& cfg) {
    if (!mu.valid()) throw InputError("solve: empty measure");
    if (mu.ambient() != g.ambient()) throw InputError("solve: dimension mismatch");
    if (!(cfg.q > 0)) throw InputError("solve: q must be positive");
    if (cfg.max_iters < 1 || cfg.quad_nodes < 4) throw InputError("solve: malformed config");
    if (fixed_subspace(g).dim() != 0) {
        throw InputError("solve: the group must have no nonzero fixed points");
    }
    if (!is_invariant_measure(mu, g)) {
        throw InputError("solve: the measure is not invariant under the group");
    }
}

} // namespace

SolveResult solve(const DiscreteMeasure& mu, const FiniteGroup& g, const SolveConfig& cfg) {
    validate_solve_inputs(mu, g, cfg);
    std::string notes;
    if (cfg.enforce_conditions) {
        gate_conditions(mu, g, cfg.q, notes);
    } else {
        notes += "condition gate disabled by config. ";
    }
    const int n = mu.ambient();
    const double q = cfg.q;
    const SphereQuadrature quad =
        SphereQuadrature::for_dimension(n, cfg.quad_nodes, cfg.seed).symmetrized(g);

    std::vector<UnitVector> normals;
    normals.reserve(mu.size());
    for (const auto& a : mu.atoms()) normals.push_back(a.direction);
    const OrbitData od = orbit_data(mu, g);
    const Eigen::Index norb = static_cast<Eigen::Index>(od.orbits.size());

    Eigen::VectorXd s = Eigen::VectorXd::Zero(norb); // log h per orbit, h == 1 start
    BodySpec body(normals, expand_log(od, s, mu.size()));

    const auto eval = [&](const BodySpec& b) {
        Eigen::VectorXd masses = dual_curvature_masses(b, q, quad);
        const double w = masses.sum();
        Eigen::VectorXd orbit_mass = Eigen::VectorXd::Zero(norb);
        for (std::size_t i = 0; i < mu.size(); ++i) {
            orbit_mass(od.orbit_of[i]) += masses(static_cast<Eigen::Index>(i));
        }
        const double ph = entropy(mu, b.support()) + std::log(w) / q;
        return std::tuple<double, double, Eigen::VectorXd>(ph, w, std::move(orbit_mass));
    };

    auto [ph, w, orbit_mass] = eval(body);
    std::vector<double> trace{ph};
    Eigen::VectorXd grad(norb);
    double grad_norm = std::numeric_limits<double>::infinity();
    double step_init = cfg.step0; // carries the accepted scale across iterations
    int iter = 0;
    for (; iter < cfg.max_iters; ++iter) {
        grad = -od.target + orbit_mass / w;
        grad_norm = grad.cwiseAbs().maxCoeff();
        if (grad_norm < cfg.grad_tol) break;
        double step = step_init;
        bool moved = false;
        const double gg = grad.squaredNorm();
        while (step > 1e-14) {
            const Eigen::VectorXd s_try = s + step * grad;
            BodySpec trial = body.with_support(expand_log(od, s_try, mu.size()));
            auto [ph_try, w_try, om_try] = eval(trial);
            // Strict increase required: once step*grad underflows against s the
            // Armijo threshold rounds to ph and a zero move would be accepted.
            if (ph_try > ph && ph_try >= ph + 1e-4 * step * gg) {
                s = s_try;
                body = std::move(trial);
                ph = ph_try;
                w = w_try;
                orbit_mass = std::move(om_try);
                trace.push_back(ph);
                moved = true;
                step_init = std::min(2.0 * step, 1e3);
                break;
            }
            step *= 0.5;
        }
        if (!moved) {
            // Facet masses move in quanta of one nodal weight, so below the
            // quadrature resolution floor no support vector improves phi.
            notes += "line search stalled at the quadrature resolution floor; "
                     "increase quad_nodes or relax grad_tol. ";
            break;
        }
    }

    const double c = std::pow(mu.total_mass() / w, 1.0 / q);
    SolveResult res{body.scaled(c),
                    c,
                    std::numeric_limits<double>::infinity(),
                    iter,
                    false,
                    std::move(trace),
                    grad_norm,
                    std::move(notes)};
    res.residual_tv = verify(mu, res, q, quad);
    res.converged = grad_norm < cfg.grad_tol && res.residual_tv < cfg.residual_tol;
    if (!res.converged) {
        std::ostringstream diag;
        diag << "grad_norm=" << grad_norm << " residual_tv=" << res.residual_tv << ". ";
        res.notes += diag.str();
    }
    return res;
}

double verify(const DiscreteMeasure& mu, const SolveResult& r, double q,
              const SphereQuadrature& quad) {
    const SphereQuadrature ind = quad.independent_variant(17);
    const Eigen::VectorXd masses = dual_curvature_masses(r.body, q, ind);
    if (masses.size() != static_cast<Eigen::Index>(mu.size())) {
        throw InputError("verify: body normals do not match the measure atoms");
    }
    return tv_residual(mu, masses);
}

namespace {

SolveResult solve_cone_volume_subproblem(const DiscreteMeasure& mu, const FiniteGroup& g,
                                         const SolveConfig& cfg);

// 1-D base case: the body is a segment and each endpoint's cone volume is its
// support value, so h equals the atom weights exactly.
SolveResult segment_solution(const DiscreteMeasure& mu) {
    if (mu.ambient() != 1 || mu.size() != 2) {
        throw InputError("segment_solution: expected two atoms on S^0");
    }
    std::vector<UnitVector> normals;
    Eigen::VectorXd h(2);
    for (std::size_t i = 0; i < 2; ++i) {
        normals.push_back(mu.atoms()[i].direction);
        h(static_cast<Eigen::Index>(i)) = mu.atoms()[i].weight;
    }
    SolveResult res{BodySpec(std::move(normals), std::move(h)),
                    1.0,
                    0.0,
                    0,
                    true,
                    {},
                    0.0,
                    "segment base case. "};
    return res;
}

SolveResult solve_cone_volume_subproblem(const DiscreteMeasure& mu, const FiniteGroup& g,
                                         const SolveConfig& cfg) {
    if (mu.ambient() == 1) return segment_solution(mu);
    SolveConfig sub = cfg;
    sub.q = mu.ambient();
    return solve_log_with_equality(mu, g, sub);
}

} // namespace

SolveResult solve_log_with_equality(const DiscreteMeasure& mu, const FiniteGroup& g,
                                    const SolveConfig& cfg) {
    validate_solve_inputs(mu, g, cfg);
    const int n = mu.ambient();
    if (std::abs(cfg.q - n) > 1e-9) {
        throw InputError("solve_log_with_equality: requires q = n");
    }
    ConditionReport rep = check_concentration(mu, g);
    if (!rep.satisfied) {
        throw ConditionError("solve_log_with_equality: concentration condition fails",
                             std::move(rep));
    }
    if (rep.equality_cases.empty()) return solve(mu, g, cfg);
    const EqualityCase* chosen = nullptr;
    for (const auto& ec : rep.equality_cases) {
        if (ec.complement.has_value()) {
            chosen = &ec;
            break;
        }
    }
    if (chosen == nullptr) {
        throw ConditionError("solve_log_with_equality: equality without a complement split",
                             std::move(rep));
    }
    const Subspace& lsub = chosen->subspace;
    const Subspace& msub = *chosen->complement;

    const DiscreteMeasure mu_l = restrict_measure(mu, lsub);
    const DiscreteMeasure mu_m = restrict_measure(mu, msub);
    if (!mu_l.valid() || !mu_m.valid() ||
        mu_l.size() + mu_m.size() != mu.size()) {
        throw ConditionError("solve_log_with_equality: support does not split across L and M",
                             std::move(rep));
    }
    const SolveResult sol_l = solve_cone_volume_subproblem(mu_l, restrict_to(g, lsub), cfg);
    const SolveResult sol_m = solve_cone_volume_subproblem(mu_m, restrict_to(g, msub), cfg);

    // Support values of the assembled body at the atoms: tau * h_C on the L
    // side, h_C' on the M side; the mass distribution is tau-independent after
    // volume normalization, so the sweep is a flatness self-check.
    std::vector<UnitVector> normals;
    normals.reserve(mu.size());
    Eigen::VectorXd h_l(static_cast<Eigen::Index>(mu.size()));
    std::vector<bool> in_l(mu.size(), false);
    {
        std::size_t cl = 0, cm = 0;
        for (std::size_t i = 0; i < mu.size(); ++i) {
            const auto& atom = mu.atoms()[i];
            normals.push_back(atom.direction);
            if (lsub.contains(atom.direction.coords(), tolerances().membership)) {
                h_l(static_cast<Eigen::Index>(i)) = sol_l.body.support()(static_cast<Eigen::Index>(cl++));
                in_l[i] = true;
            } else {
                h_l(static_cast<Eigen::Index>(i)) = sol_m.body.support()(static_cast<Eigen::Index>(cm++));
            }
        }
        if (cl != mu_l.size() || cm != mu_m.size()) {
            throw NumericalError("solve_log_with_equality: atom bookkeeping failed");
        }
    }
    const SphereQuadrature quad =
        SphereQuadrature::for_dimension(n, cfg.quad_nodes, cfg.seed).symmetrized(g);
    const BodySpec base(normals, Eigen::VectorXd::Ones(static_cast<Eigen::Index>(mu.size())));

    int evals = 0;
    const auto residual_at = [&](double log_tau, BodySpec* out) {
        const double tau = std::exp(log_tau);
        Eigen::VectorXd h(h_l.size());
        for (Eigen::Index i = 0; i < h.size(); ++i) {
            h(i) = in_l[static_cast<std::size_t>(i)] ? tau * h_l(i) : h_l(i);
        }
        BodySpec body = base.with_support(std::move(h));
        const double vol = dual_quermassintegral(body, n, quad);
        const double sigma = std::pow(mu.total_mass() / vol, 1.0 / n);
        BodySpec scaled = body.scaled(sigma);
        const double res = tv_residual(mu, dual_curvature_masses(scaled, n, quad));
        ++evals;
        if (out != nullptr) *out = std::move(scaled);
        return res;
    };

    double lo = -3.0, hi = 3.0;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = residual_at(x1, nullptr), f2 = residual_at(x2, nullptr);
    for (int it = 0; it < 24; ++it) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = residual_at(x1, nullptr);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = residual_at(x2, nullptr);
        }
    }
    const double best = 0.5 * (lo + hi);
    BodySpec final_body = base;
    residual_at(best, &final_body);

    std::ostringstream notes;
    notes << "split dim " << lsub.dim() << " + " << (n - lsub.dim()) << " at tau=e^" << best
          << "; sub-residuals " << sol_l.residual_tv << ", " << sol_m.residual_tv << ". ";
    SolveResult res{std::move(final_body),
                    std::exp(best),
                    std::numeric_limits<double>::infinity(),
                    evals,
                    false,
                    {},
                    0.0,
                    notes.str()};
    res.residual_tv = verify(mu, res, n, quad);
    res.converged = sol_l.converged && sol_m.converged && res.residual_tv < cfg.residual_tol;
    res.phi_trace.push_back(phi(mu, res.body, n, quad));
    return res;
}

std::vector<double> degenerating_phi_trace(const DiscreteMeasure& mu, const FiniteGroup& g,
                                           double q, const std::vector<Subspace>& blocks,
                                           const std::vector<Eigen::VectorXd>& b_schedule,
                                           const SphereQuadrature& quad) {
    if (!mu.valid()) throw InputError("degenerating_phi_trace: empty measure");
    if (mu.ambient() != g.ambient() || mu.ambient() != quad.ambient()) {
        throw InputError("degenerating_phi_trace: dimension mismatch");
    }
    if (!(q > 0)) throw InputError("degenerating_phi_trace: q must be positive");
    const int n = mu.ambient();
    std::vector<double> trace;
    trace.reserve(b_schedule.size());
    for (const auto& axes : b_schedule) {
        const BlockEllipsoid e(blocks, axes);
        double acc = 0;
        for (Eigen::Index c = 0; c < quad.size(); ++c) {
            acc += quad.weights()(c) * std::pow(e.radial(quad.nodes().col(c)), q);
        }
        trace.push_back(ellipsoid_entropy(mu, e) + std::log(acc / n) / q);
    }
    return trace;
}

} // namespace dualmink
