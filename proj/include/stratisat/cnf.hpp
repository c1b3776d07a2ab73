#ifndef STRATISAT_CNF_HPP
#define STRATISAT_CNF_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stratisat/formula.hpp"
#include "stratisat/interpretation.hpp"

namespace stratisat {

// Meaning of one propositional variable in a grounded instance:
//   p(x,u)  element assignment   (exactly-one row per sort-0 variable)
//   q(X,u)  subset membership
//   r(A,S)  collection membership
//   t       Tseitin auxiliary
struct GroundAtomRef {
    enum class Kind { P, Q, R, T };
    Kind kind = Kind::T;
    std::string var;
    int element = 0; // P, Q
    Mask subset = 0; // R
};

struct CnfInstance {
    int num_vars = 0;
    std::vector<std::vector<int>> clauses; // signed 1-based literals
    std::vector<GroundAtomRef> map;        // map[i-1] describes variable i
    int domain_size = 0;                   // m the instance was grounded at

    std::uint64_t literal_count() const;
};

struct GroundOptions {
    std::uint64_t literal_budget = 20'000'000;
    // Fix the first sort-0 variable to element 0 and sort the tail of the
    // first sort-1 variable's row; sound under domain permutation.
    bool symmetry_break = false;
};

// Grounds a well-formed formula at domain size m: the instance is
// satisfiable iff f has a model with domain {0..m-1}. Level-0 universals
// expand over element tuples, level-1 universals over all subsets (2^m per
// variable, refused for m > 16), sort-2 variables get one row entry per
// subset of the domain.
CnfInstance ground(const FormulaPtr& f, int m, const GroundOptions& opts = {});

struct DpllOptions {
    std::uint64_t conflict_budget = 20'000'000;
};

// Complete DPLL: unit propagation plus branching on the unassigned variable
// with the highest static occurrence count (ties to the lowest index,
// positive polarity first). No clause learning. Returns a satisfying total
// assignment (index 0 unused) or nullopt for unsat.
std::optional<std::vector<bool>> dpll(const CnfInstance& cnf, const DpllOptions& opts = {});

// Reads the p/q/r rows of a satisfying assignment back into an
// interpretation. A p-row with no or multiple true entries is an internal
// error.
Interpretation reconstruct_model(const CnfInstance& cnf, const std::vector<bool>& assignment);

// DIMACS with `c map <idx> <kind> <args>` comments for the grounding map
// and `c domain <m>`. Round-trips bit-exactly through import_dimacs.
std::string export_dimacs(const CnfInstance& cnf);
CnfInstance import_dimacs(const std::string& text);

} // namespace stratisat

#endif
