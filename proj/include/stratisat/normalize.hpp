#ifndef STRATISAT_NORMALIZE_HPP
#define STRATISAT_NORMALIZE_HPP

#include <optional>
#include <string>
#include <vector>

#include "stratisat/formula.hpp"
#include "stratisat/interpretation.hpp"

namespace stratisat {

struct NormalizeOptions {
    // Hard cap on the total number of literals produced while building
    // disjunctive normal forms; exceeding it raises ResourceLimitError.
    std::size_t dnf_literal_cap = 10'000;
    std::uint64_t validity_budget = 20'000'000;
};

// Disjunctive normal form with quantified subformulas treated as opaque
// literals. Contradictory disjuncts (containing l and ~l) are dropped, so
// the result may be empty (an unsatisfiable propositional skeleton).
std::vector<FormulaPtr> to_dnf(const FormulaPtr& f, const NormalizeOptions& opts = {});

// Removes every negated universal literal from a conjunction of literals by
// replacing it with its negated matrix (the bound variables become free
// witnesses), re-normalizing as needed. Satisfiability is preserved; the
// input must be renamed apart.
std::vector<FormulaPtr> eliminate_negated_universals(const FormulaPtr& conj,
                                                     const NormalizeOptions& opts = {});

// A conjunction of type-(I) quantifier-free literals, type-(II) level-0
// universals and type-(III) level-1 universals, renamed apart, with no
// negated universal.
struct NormalizedConjunction {
    std::vector<FormulaPtr> literals1; // atoms and negated atoms
    std::vector<FormulaPtr> literals2; // level-0 universals
    std::vector<FormulaPtr> literals3; // level-1 universals

    std::vector<FormulaPtr> all_literals() const;
    FormulaPtr as_formula() const;
};

// Full reduction pipeline: rename apart, DNF, eliminate negated universals,
// classify. The input is satisfiable iff some output is (over the same
// domain size).
std::vector<NormalizedConjunction> normalize(const FormulaPtr& f,
                                             const NormalizeOptions& opts = {});

// The quantifier-free proof obligation tying a level-0 universal
// (forall z1..zn) phi0 to the enclosing level-1 bound variables Z1..Zm:
//     ~phi0 -> /\_i /\_j  zi in Zj
FormulaPtr linkedness_obligation(const FormulaPtr& forall0, const std::vector<Variable>& zvars);

struct ObligationCheck {
    FormulaPtr universal;            // the nested (forall z...) phi0
    std::vector<Variable> enclosing; // Z variables of the enclosing block
    FormulaPtr obligation;
    enum class Method { Syntactic, Semantic };
    Method method = Method::Syntactic;
    bool valid = false;
    bool resource_limited = false;
    int bound_used = 0;                          // semantic path: domain sizes searched
    std::optional<Interpretation> counterexample; // semantic rejections carry one
    std::string phase; // "original" or "normalized"
};

struct FragmentReport {
    bool in_fragment = true;
    bool resource_limited = false;
    std::string note;
    std::vector<ObligationCheck> obligations;
};

// Membership test for the restricted fragment: every level-0 universal
// nested in a level-1 universal must have a valid linkedness obligation.
// The syntactic fast path accepts obligations whose membership conjuncts
// appear verbatim in the negation of the matrix (the ~(p -> q) -> p
// pattern); the rest are decided semantically at the quantifier-free
// small-model bound |V0| + (l+2)|V1| via grounding. Universals are checked
// both on the input formula and on its normalized conjunctions.
FragmentReport check_fragment(const FormulaPtr& f, const NormalizeOptions& opts = {});

// True when the obligation would be accepted by the semantic route: valid
// at every domain size up to the quantifier-free small-model bound.
// Exposed for cross-validation against the brute-force reference.
int obligation_semantic_bound(const FormulaPtr& obligation);

} // namespace stratisat

#endif
