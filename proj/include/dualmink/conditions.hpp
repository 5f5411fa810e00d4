#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dualmink/measure.hpp"

namespace dualmink {

struct EqualityCase {
    Subspace subspace;
    std::optional<Subspace> complement;
};

// Outcome of a solvability-condition check over a finite candidate family.
// worst_* describe the candidate minimizing bound - ratio; margin is that minimum.
// For a vacuous candidate family: satisfied, ratio 0, bound 1, margin 1.
struct ConditionReport {
    bool satisfied = true;
    std::optional<Subspace> worst_subspace;
    double worst_ratio = 0.0;
    double bound = 1.0;
    double margin = 1.0;
    std::vector<EqualityCase> equality_cases;
    std::size_t candidates_checked = 0;
    std::string detail;
};

class ConditionError : public std::runtime_error {
public:
    ConditionError(const std::string& what, ConditionReport report)
        : std::runtime_error(what), report_(std::move(report)) {}
    const ConditionReport& report() const { return report_; }

private:
    ConditionReport report_;
};

// Strict subspace mass bound for exponent q: for every proper nonzero invariant
// candidate L, mass(L)/|mu| < min(dim L / q, 1) - strict_tol.
ConditionReport check_mass_inequality(const DiscreteMeasure& mu, const FiniteGroup& g,
                                      double q, double strict_tol = 0.0);

// Log-case condition: mass(L)/|mu| <= dim L / n + eq_tol for every invariant
// candidate L; at equality the support must split across L and a complementary
// invariant subspace spanned by the remaining atoms.
ConditionReport check_concentration(const DiscreteMeasure& mu, const FiniteGroup& g,
                                    double eq_tol = tolerances().equality_case);

enum class ClassicalMode { MassInequality, Concentration };

// Same checks against all spans of atom subsets (no group structure). For the
// mass-inequality mode q must be supplied.
ConditionReport check_classical(const DiscreteMeasure& mu, ClassicalMode mode,
                                double q = 0.0, double strict_tol = 0.0,
                                double eq_tol = tolerances().equality_case);

struct EquivalenceAudit {
    ConditionReport invariant_report;
    ConditionReport classical_report;
    bool consistent = true;
};

// Cross-checks the invariant-candidate verdict against the full classical one.
// For measures invariant under a group with trivial fixed subspace the two must
// agree; a disagreement indicates a defect and is flagged as inconsistent.
EquivalenceAudit equivalence_audit(const DiscreteMeasure& mu, const FiniteGroup& g);

} // namespace dualmink
