#ifndef STRATISAT_FORMULA_HPP
#define STRATISAT_FORMULA_HPP

#include <compare>
#include <cstddef>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace stratisat {

// The three variable levels: individuals (elements of the domain), sets
// (subsets of the domain), collections (sets of subsets of the domain).
enum class Sort { Individual = 0, Set = 1, Collection = 2 };

constexpr int sort_index(Sort s) { return static_cast<int>(s); }
const char* sort_name(Sort s);

struct Variable {
    std::string name;
    Sort sort{Sort::Individual};

    friend bool operator==(const Variable&, const Variable&) = default;
    friend auto operator<=>(const Variable&, const Variable&) = default;
};

// A finite enumeration term {x1,...,xk} of sort-0 variables, k >= 1.
// Duplicates are allowed syntactically; semantics collapses them.
struct Enumeration {
    std::vector<Variable> members;

    friend bool operator==(const Enumeration&, const Enumeration&) = default;
};

// Quantifier-free atomic formulae. Level 0: x = y, x in X, {x...} = X,
// {x...} in A. Level 1: X = Y, X in A.
struct Atom {
    enum class Kind { Eq0, Mem01, EnumEq, EnumMem, Eq1, Mem12 };

    Kind kind{Kind::Eq0};
    Enumeration members; // EnumEq / EnumMem only
    Variable lhs;        // Eq0, Mem01, Eq1, Mem12
    Variable rhs;        // all kinds

    bool is_level0() const {
        return kind == Kind::Eq0 || kind == Kind::Mem01 || kind == Kind::EnumEq ||
               kind == Kind::EnumMem;
    }

    friend bool operator==(const Atom&, const Atom&) = default;
};

Atom atom_eq0(Variable x, Variable y);
Atom atom_mem01(Variable x, Variable X);
Atom atom_enum_eq(Enumeration e, Variable X);
Atom atom_enum_mem(Enumeration e, Variable A);
Atom atom_eq1(Variable X, Variable Y);
Atom atom_mem12(Variable X, Variable A);

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Immutable formula tree. Quantification is restricted by construction:
// Forall0 bodies are propositional combinations of level-0 atoms, Forall1
// bodies may additionally contain Forall0 blocks but no further Forall1.
class Formula {
public:
    enum class Kind { Atom, Not, And, Or, Implies, Iff, Forall0, Forall1 };

    Kind kind() const { return kind_; }
    const Atom& atom() const { return atom_; }
    const FormulaPtr& lhs() const { return lhs_; } // operand / body
    const FormulaPtr& rhs() const { return rhs_; }
    const std::vector<Variable>& bound() const { return bound_; }

    bool is_atom() const { return kind_ == Kind::Atom; }
    bool is_quantifier() const { return kind_ == Kind::Forall0 || kind_ == Kind::Forall1; }

    // Construction goes through the mk_* factories so the invariants above
    // hold for every reachable node.
    struct Key {};
    Formula(Key, Kind k, Atom a, FormulaPtr l, FormulaPtr r, std::vector<Variable> b)
        : kind_(k), atom_(std::move(a)), lhs_(std::move(l)), rhs_(std::move(r)),
          bound_(std::move(b)) {}

private:
    Kind kind_;
    Atom atom_;
    FormulaPtr lhs_, rhs_;
    std::vector<Variable> bound_;
};

FormulaPtr mk_atom(Atom a);
FormulaPtr mk_not(FormulaPtr f);
FormulaPtr mk_and(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_or(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_iff(FormulaPtr a, FormulaPtr b);
FormulaPtr mk_forall0(std::vector<Variable> vars, FormulaPtr body);
FormulaPtr mk_forall1(std::vector<Variable> vars, FormulaPtr body);

// Right-fold of a nonempty list with the given binary connective.
FormulaPtr mk_conjunction(const std::vector<FormulaPtr>& fs);
FormulaPtr mk_disjunction(const std::vector<FormulaPtr>& fs);

bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b);

struct VariableSets {
    std::set<Variable> v0, v1, v2;

    std::set<Variable>& by_sort(Sort s);
    const std::set<Variable>& by_sort(Sort s) const;
    bool contains(const Variable& v) const;
    void insert(const Variable& v);

    friend bool operator==(const VariableSets&, const VariableSets&) = default;
};

// Variables with at least one free occurrence, split by sort.
VariableSets free_variables(const FormulaPtr& f);

// Every variable occurrence, bound or free.
VariableSets all_variables(const FormulaPtr& f);

// Alpha-renames so that each bound variable binds in exactly one quantifier
// block and no variable has both bound and free occurrences. Already-apart
// formulas come back unchanged (pointer-equal subtrees where possible).
FormulaPtr rename_apart(const FormulaPtr& f);

// Simultaneous substitution of sort-1 variables for sort-1 variables on free
// occurrences. Callers must pass distinct sources; capture cannot arise when
// the formula is renamed apart (precondition).
FormulaPtr substitute1(const FormulaPtr& f,
                       const std::vector<std::pair<Variable, Variable>>& pairs);

// Largest enumeration length in the formula, clamped below by 1 so the value
// is always usable as the relativization parameter l.
int enum_bound(const FormulaPtr& f);

// Node count: each atom, connective and quantified-variable occurrence
// counts 1. Stable under re-rendering.
std::size_t formula_length(const FormulaPtr& f);

// The maximal subformulas of the propositional structure: atoms and purely
// universal blocks (the "propositional components").
std::vector<FormulaPtr> propositional_components(const FormulaPtr& f);

// Pre-order traversal over every node.
void for_each_node(const FormulaPtr& f, const std::function<void(const FormulaPtr&)>& fn);

// True when the formula is a propositional combination of level-0 atoms only
// (a legal Forall0 body).
bool is_level0_matrix(const FormulaPtr& f);

// True when the formula contains no quantifier at all.
bool quantifier_free(const FormulaPtr& f);

} // namespace stratisat

#endif
