#ifndef STRATISAT_SEARCH_HPP
#define STRATISAT_SEARCH_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "stratisat/interpretation.hpp"

namespace stratisat {

// The candidate space of interpretations over {0..m-1} for the free
// variables of a compiled formula, indexed by one mixed-radix counter.
// The order is lexicographic over (assign0, assign1, assign2) with
// variables sorted by name inside each sort: the first sort-0 variable is
// the most significant digit, sort-1 digits are subset masks in ascending
// numeric order, and a sort-2 digit encodes the whole collection as a
// 2^m-bit number. This is the documented enumeration order of every
// model stream the engine produces.
class ModelSpace {
public:
    ModelSpace(const CompiledFormula& cf, int m);

    std::uint64_t size() const { return size_; }
    int domain_size() const { return m_; }

    // Writes the candidate with the given index into the env slots.
    void load(std::uint64_t index, EvalEnv& env) const;

    // Full interpretation for the candidate (free variables only).
    Interpretation decode(std::uint64_t index) const;

private:
    const CompiledFormula* cf_;
    int m_;
    std::uint64_t size_;
    std::uint64_t radix0_, radix1_, radix2_;
    std::uint64_t weight0_, weight1_; // weight of one whole sort-0/sort-1 digit group
};

inline constexpr std::uint64_t kDefaultSearchBudget = 200'000'000;

// Serial reference enumeration: invokes fn on every satisfying
// interpretation in index order until fn returns false. Throws
// ResourceLimitError once more than `budget` candidates were scanned.
void for_each_model(const FormulaPtr& f, int m, std::uint64_t budget,
                    const std::function<bool(const Interpretation&)>& fn);

// Collects up to max_models satisfying interpretations (serial reference).
std::vector<Interpretation> enumerate_models(const FormulaPtr& f, int m,
                                             std::uint64_t budget = kDefaultSearchBudget,
                                             std::size_t max_models = SIZE_MAX);

// First satisfying interpretation in enumeration order, or nullopt. The
// parallel variant scans index blocks with OpenMP and returns the same
// model as the serial one.
std::optional<Interpretation> first_model(const FormulaPtr& f, int m,
                                          std::uint64_t budget = kDefaultSearchBudget,
                                          bool parallel = true);

// Number of models at domain size m.
std::uint64_t count_models(const FormulaPtr& f, int m,
                           std::uint64_t budget = kDefaultSearchBudget,
                           bool parallel = true);

// True iff ~f has no model at any domain size 1..m_max.
bool is_valid_upto(const FormulaPtr& f, int m_max,
                   std::uint64_t budget = kDefaultSearchBudget,
                   bool parallel = true);

// First countermodel of f with domain size <= m_max, if any.
std::optional<Interpretation> countermodel_upto(const FormulaPtr& f, int m_max,
                                                std::uint64_t budget = kDefaultSearchBudget,
                                                bool parallel = true);

} // namespace stratisat

#endif
