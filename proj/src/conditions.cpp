#include "dualmink/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dualmink {

namespace {

// Shared scan over a candidate family. bound_of(dim) gives the admissible mass
// fraction; on_equality (optional) validates an equality case and may append to
// the report or mark it unsatisfied.
template <typename BoundFn, typename EqualityFn>
ConditionReport scan_candidates(const DiscreteMeasure& mu, const std::vector<Subspace>& candidates,
                                BoundFn bound_of, bool strict, double strict_tol, double eq_tol,
                                EqualityFn on_equality) {
    ConditionReport report;
    report.candidates_checked = candidates.size();
    bool first = true;
    for (const auto& l : candidates) {
        const double ratio = subspace_mass(mu, l) / mu.total_mass();
        const double bound = bound_of(l.dim());
        const double margin = bound - ratio;
        if (first || margin < report.margin) {
            report.margin = margin;
            report.worst_subspace = l;
            report.worst_ratio = ratio;
            report.bound = bound;
            first = false;
        }
        if (strict) {
            if (!(ratio < bound - strict_tol)) {
                report.satisfied = false;
            }
        } else {
            if (ratio > bound + eq_tol) {
                report.satisfied = false;
            } else if (std::abs(ratio - bound) <= eq_tol) {
                on_equality(l, report);
            }
        }
    }
    return report;
}

// Equality-case structure shared by the invariant and classical concentration
// checks: the remaining support must span a complement of matching dimension,
// and every atom must lie in the union.
void validate_equality_split(const DiscreteMeasure& mu, const Subspace& l,
                             const Subspace& m, ConditionReport& report) {
    const int n = mu.ambient();
    std::ostringstream oss;
    if (m.dim() != n - l.dim()) {
        report.satisfied = false;
        oss << "equality case: complementary span has dimension " << m.dim() << ", expected "
            << (n - l.dim());
        report.detail = oss.str();
        return;
    }
    if (subspace_sum(l, m).dim() != n) {
        report.satisfied = false;
        report.detail = "equality case: subspace and complementary span intersect nontrivially";
        return;
    }
    const double tol = tolerances().membership;
    for (const auto& a : mu.atoms()) {
        if (!l.contains(a.direction.coords(), tol) && !m.contains(a.direction.coords(), tol)) {
            report.satisfied = false;
            report.detail = "equality case: support not contained in the split subspaces";
            return;
        }
    }
    report.equality_cases.push_back({l, m});
}

Subspace residual_span(const DiscreteMeasure& mu, const Subspace& l) {
    std::vector<Eigen::VectorXd> rest;
    const double tol = tolerances().membership;
    for (const auto& a : mu.atoms()) {
        if (!l.contains(a.direction.coords(), tol)) rest.push_back(a.direction.coords());
    }
    return span_of(rest, mu.ambient());
}

} // namespace

ConditionReport check_mass_inequality(const DiscreteMeasure& mu, const FiniteGroup& g,
                                      double q, double strict_tol) {
    if (!(q > 0.0)) throw InputError("check_mass_inequality: q must be positive");
    if (!mu.valid()) throw InputError("check_mass_inequality: empty measure");
    const auto candidates = candidate_invariant_subspaces(mu, g);
    auto report = scan_candidates(
        mu, candidates,
        [&](int dim) { return std::min(static_cast<double>(dim) / q, 1.0); },
        /*strict=*/true, strict_tol, 0.0, [](const Subspace&, ConditionReport&) {});
    if (report.detail.empty() && !report.satisfied) {
        report.detail = "subspace mass fraction reaches its admissible bound";
    }
    return report;
}

ConditionReport check_concentration(const DiscreteMeasure& mu, const FiniteGroup& g,
                                    double eq_tol) {
    if (!mu.valid()) throw InputError("check_concentration: empty measure");
    const double n = static_cast<double>(mu.ambient());
    const auto candidates = candidate_invariant_subspaces(mu, g);
    return scan_candidates(
        mu, candidates, [&](int dim) { return static_cast<double>(dim) / n; },
        /*strict=*/false, 0.0, eq_tol,
        [&](const Subspace& l, ConditionReport& report) {
            validate_equality_split(mu, l, residual_span(mu, l), report);
        });
}

ConditionReport check_classical(const DiscreteMeasure& mu, ClassicalMode mode, double q,
                                double strict_tol, double eq_tol) {
    if (!mu.valid()) throw InputError("check_classical: empty measure");
    const auto candidates = candidate_spans(mu);
    if (mode == ClassicalMode::MassInequality) {
        if (!(q > 0.0)) throw InputError("check_classical: q must be positive");
        return scan_candidates(
            mu, candidates,
            [&](int dim) { return std::min(static_cast<double>(dim) / q, 1.0); },
            /*strict=*/true, strict_tol, 0.0, [](const Subspace&, ConditionReport&) {});
    }
    const double n = static_cast<double>(mu.ambient());
    return scan_candidates(
        mu, candidates, [&](int dim) { return static_cast<double>(dim) / n; },
        /*strict=*/false, 0.0, eq_tol,
        [&](const Subspace& l, ConditionReport& report) {
            validate_equality_split(mu, l, residual_span(mu, l), report);
        });
}

EquivalenceAudit equivalence_audit(const DiscreteMeasure& mu, const FiniteGroup& g) {
    if (fixed_subspace(g).dim() != 0) {
        throw InputError("equivalence_audit: group has nonzero fixed subspace");
    }
    if (!is_invariant_measure(mu, g)) {
        throw InputError("equivalence_audit: measure is not invariant under the group");
    }
    EquivalenceAudit audit;
    audit.invariant_report = check_concentration(mu, g);
    audit.classical_report = check_classical(mu, ClassicalMode::Concentration);
    audit.consistent = (audit.invariant_report.satisfied == audit.classical_report.satisfied);
    return audit;
}

} // namespace dualmink
