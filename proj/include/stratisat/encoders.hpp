#ifndef STRATISAT_ENCODERS_HPP
#define STRATISAT_ENCODERS_HPP

#include <cstdint>
#include <set>
#include <vector>

#include "stratisat/formula.hpp"
#include "stratisat/interpretation.hpp"

namespace stratisat {

// ---- level-0 set formers: (forall z)(z in X <-> phi(z)) -------------------

FormulaPtr build_empty0(Variable X);                                // X = 0
FormulaPtr build_universe0(Variable X);                             // X = 1
FormulaPtr build_complement0(Variable X, Variable Y);               // X = ~Y
FormulaPtr build_union0(Variable X, Variable Y1, Variable Y2);      // X = Y1 u Y2
FormulaPtr build_intersection0(Variable X, Variable Y1, Variable Y2);
FormulaPtr build_difference0(Variable X, Variable Y1, Variable Y2); // X = Y1 \ Y2

// Z subseteq X as a linked level-0 universal.
FormulaPtr build_subset(Variable Z, Variable X);

// ---- cardinality literals --------------------------------------------------

// |Z| <= h is the key shape: (forall z1..z_{h+1})(/\ zi in Z -> \/ zi = zj),
// whose linkedness obligation is an instance of ~(p -> q) -> p. The other
// kinds rewrite into it: |Z| < h is |Z| <= h-1 (and unsatisfiable for h=0),
// |Z| >= h is ~(|Z| <= h-1) with |Z| >= 0 degenerating to Z = Z, and
// |Z| = h conjoins both directions.
enum class CardinalityKind { AtMost, LessThan, AtLeast, Exactly };

FormulaPtr build_cardinality(CardinalityKind kind, Variable Z, int h);

// ---- level-1 set formers: (forall Z)(Z in A <-> phi(Z)) --------------------

FormulaPtr build_empty1(Variable A);
FormulaPtr build_universe1(Variable A);
FormulaPtr build_complement1(Variable A, Variable B);
FormulaPtr build_union1(Variable A, Variable B1, Variable B2);
FormulaPtr build_intersection1(Variable A, Variable B1, Variable B2);
FormulaPtr build_difference1(Variable A, Variable B1, Variable B2);
FormulaPtr build_enumeration1(Variable A, const std::vector<Variable>& Xs); // A = {X1,...,Xk}
FormulaPtr build_pow(Variable A, Variable X);                                // A = pow(X)
FormulaPtr build_pow_atmost(Variable A, Variable X, int h);                  // A = pow_{<=h}(X)
FormulaPtr build_pow_exactly(Variable A, Variable X, int h);                 // A = pow_{=h}(X)
FormulaPtr build_pow_atleast(Variable A, Variable X, int h);                 // A = pow_{>=h}(X)
FormulaPtr build_pow_lessthan(Variable A, Variable X, int h);                // A = pow_{<h+1}(X)

// A = pow*(X1..Xk): subsets of the union meeting every Xi, via the rewrite
// Z ∩ Xi != 0  <=>  ~(Z subseteq ~Xi).
FormulaPtr build_pow_star(Variable A, const std::vector<Variable>& Xs);

// ---- unordered Cartesian product -------------------------------------------

// Reference oracle: X1 (x) ... (x) Xn by direct tuple enumeration, each
// tuple collapsed to the set of its components.
std::set<Mask> ucp_oracle(const std::vector<Mask>& xs);

// Enumeration-based encoding, linear length in n; its inner universal is
// linked only semantically ({x1..xn} = Z forces each xi in Z).
FormulaPtr build_ucp_enum(Variable A, const std::vector<Variable>& Xs);

// Enumeration-free special cases. The caller asserts the side condition;
// with it violated the formula and the oracle part ways.
FormulaPtr build_ucp_disjoint(Variable A, const std::vector<Variable>& Xs);
FormulaPtr build_ucp_same(Variable A, Variable X, int n);

// Enumeration-free general encoding: one disjunct per partition of {1..n}
// (hence Bell-number growth), each pinning |Z| = |P| and a system of
// distinct representatives for the blocks.
FormulaPtr build_ucp_partition(Variable A, const std::vector<Variable>& Xs);

// ---- partitions and growth measurements -------------------------------------

// Blocks are disjoint, nonempty, cover {1..n} and are ordered by their
// minimum element. Enumeration follows restricted growth strings.
struct Partition {
    std::vector<std::vector<int>> blocks;
};

std::vector<Partition> partitions(int n); // 1 <= n <= 12
std::uint64_t bell(int n);                // 1 <= n <= 12, by enumeration count

struct LengthRow {
    int n = 0;
    std::uint64_t bell = 0;
    std::size_t len_enum = 0;
    std::size_t len_partition = 0;
    std::size_t partition_disjuncts = 0;
};

// Length growth of the two product encodings for n = 1..n_max (n_max <= 6).
std::vector<LengthRow> length_report(int n_max);

} // namespace stratisat

#endif
