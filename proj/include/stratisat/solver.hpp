#ifndef STRATISAT_SOLVER_HPP
#define STRATISAT_SOLVER_HPP

#include <optional>
#include <string>

#include "stratisat/cnf.hpp"
#include "stratisat/normalize.hpp"
#include "stratisat/relativize.hpp"

namespace stratisat {

struct SolveOptions {
    // Cap on the searched domain size; 0 means "up to each conjunction's
    // syntactic bound". A cap below the bound makes an unsat answer
    // incomplete, reported via SatResult::bound_complete.
    int max_m = 0;
    std::uint64_t budget = 20'000'000; // grounding literals / dpll conflicts
    bool symmetry = true;
    bool enforce_fragment = true;
    std::size_t dnf_literal_cap = 10'000;
    std::string dimacs_dir; // dump each grounded instance when nonempty
};

struct SatResult {
    enum class Kind { Sat, Unsat, ResourceLimit };
    Kind kind = Kind::Unsat;
    std::optional<Interpretation> model; // Sat: verified model of the input
    int m = 0;                           // Sat: domain size used
    bool bound_complete = true;          // Unsat: searched every size up to the bound
    std::string stage, detail;           // ResourceLimit provenance
};

// Raised when the input fails the fragment membership check and the caller
// did not override it.
class NotInFragmentError : public std::runtime_error {
public:
    explicit NotInFragmentError(FragmentReport rep)
        : std::runtime_error("formula is not in the restricted fragment"), report(std::move(rep)) {}
    FragmentReport report;
};

// Grounds one normalized conjunction at domain size m; grounding
// arbitrary formulas is available through ground().
CnfInstance ground_conjunction(const NormalizedConjunction& conj, int m,
                               const GroundOptions& opts = {});

// The decision procedure: normalize, then for each conjunction search
// domain sizes 1..domain_bound via grounding + DPLL. Sat answers are
// re-verified against both the conjunction and the original formula before
// being returned; resource exhaustion is reported as ResourceLimit, never
// as unsat.
SatResult decide(const FormulaPtr& f, const SolveOptions& opts = {});

} // namespace stratisat

#endif
