#ifndef STRATISAT_RELATIVIZE_HPP
#define STRATISAT_RELATIVIZE_HPP

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "stratisat/interpretation.hpp"
#include "stratisat/normalize.hpp"

namespace stratisat {

// Parameters of a relativized interpretation: the retained universe D*, the
// anchor element d* in D* that stray sort-0 values are redirected to, the
// variable collections V0' and V1' whose values get special treatment in
// collection values, and the enumeration bound l > 0.
struct RelativizationParams {
    std::set<int> dstar;
    int anchor = 0;
    std::set<std::string> v0prime;
    std::set<std::string> v1prime;
    int l = 1;
};

struct RelativizedModel {
    Interpretation model;         // canonical domain 0..|D*|-1
    std::vector<int> element_map; // new element -> original element (ascending)

    int to_original(int e) const { return element_map[static_cast<std::size_t>(e)]; }
    int to_canonical(int original) const; // -1 when original not in D*
};

// The relativized interpretation of M with respect to the parameters:
//   M*x = Mx if Mx in D*, otherwise d*
//   M*X = MX intersect D*
//   M*A = ((MA ∩ pow(D*)) \ ({M*X : X in V1'} ∪ pow_{<=l}({M*x : x in V0'})))
//         ∪ ({M*X : X in V1', MX in MA} ∪ (pow_{<=l}({M*x : x in V0'}) ∩ MA))
// re-encoded over the canonical domain 0..|D*|-1.
RelativizedModel relativize(const Interpretation& M, const RelativizationParams& p);

// A set D0 of elements separating every pair of unequal sets:
// sets[i] != sets[j] implies sets[i] ∩ D0 != sets[j] ∩ D0, with
// |D0| <= (number of distinct sets) - 1. Greedy class splitting, always
// taking the smallest element of a symmetric difference.
std::set<int> distinguish(const std::vector<Mask>& sets);

struct WitnessRecord {
    FormulaPtr component;                  // the level-0 universal inside a type-(III) literal
    std::vector<std::string> substitution; // set variables substituted for the Z's, in order
    std::vector<int> elements;             // inserted falsifying elements
};

// The retained universe and its construction trace: the base {Mx}, the
// distinguishing set D0, the cardinality-covering set D1, and one witness
// tuple per failing substituted instance of a nested level-0 universal.
struct UniverseReport {
    std::set<int> dstar;
    std::set<int> base, d0, d1;
    std::vector<WitnessRecord> witnesses;
    int anchor = 0;
    int l = 1;
    std::set<std::string> v0prime, v1prime;
    std::uint64_t bound_used = 0;

    RelativizationParams params() const;
};

// Builds D* for a normalized conjunction satisfied by M. Witness search
// scans element tuples in lexicographic order; the per-instance searches
// are independent and run in parallel, merged in task order.
UniverseReport build_universe(const Interpretation& M, const NormalizedConjunction& psi,
                              std::uint64_t budget = 50'000'000);

// Syntactic size bound for the retained universe:
//   max(1, |V0| + max(0,|V1|-1) + (l+1)|V1| + N * |V1|^M * |Phi|)
// where Phi collects the propositional components of all type-(III)
// matrices, M is the largest level-1 quantifier block and N the largest
// level-0 block nested inside one. Saturating arithmetic; degenerate
// variable counts clamp at a nonempty domain.
std::uint64_t domain_bound(const NormalizedConjunction& psi);

} // namespace stratisat

#endif
