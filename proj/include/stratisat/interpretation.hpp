#ifndef STRATISAT_INTERPRETATION_HPP
#define STRATISAT_INTERPRETATION_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "stratisat/formula.hpp"

namespace stratisat {

// Subsets of the canonical domain {0..m-1} are m-bit values.
using Mask = std::uint32_t;

constexpr int kMaxDomain = 31;

inline Mask full_mask(int m) { return m >= 32 ? ~Mask{0} : (Mask{1} << m) - 1; }

// A finite interpretation over the canonical domain {0..m-1}. Sort-2 values
// are sets of subset encodings, ordered numerically.
struct Interpretation {
    int m = 1;
    std::map<std::string, int> assign0;
    std::map<std::string, Mask> assign1;
    std::map<std::string, std::set<Mask>> assign2;

    friend bool operator==(const Interpretation&, const Interpretation&) = default;
};

// A single update M[v/value] for a variable of sort 0 or 1.
struct Binding {
    Variable var;
    int element = 0; // sort 0
    Mask subset = 0; // sort 1
};

Binding bind0(Variable v, int element);
Binding bind1(Variable v, Mask subset);

// New interpretation differing from M exactly on the bound variables
// (later bindings win). Values are range-checked against M's domain.
Interpretation update(const Interpretation& M, const std::vector<Binding>& bindings);

// Evaluation environment with slot-resolved variables; the hot loops of the
// search kernels mutate it in place.
struct CollectionRef {
    // With 2^m <= 64 the whole collection fits one word (bit S set iff the
    // subset encoded by S is a member); larger collections go through a set.
    bool small = true;
    std::uint64_t bits = 0;
    const std::set<Mask>* big = nullptr;

    bool contains(Mask s) const {
        return small ? ((bits >> s) & 1u) != 0 : big->count(s) > 0;
    }
};

struct EvalEnv {
    int m = 1;
    Mask full = 1;
    std::vector<int> v0;
    std::vector<Mask> v1;
    std::vector<CollectionRef> v2;
};

// A formula compiled against a fixed variable layout: free variables first
// (sorted by name within each sort), then quantified ones. Evaluation is
// pure and reentrant as long as each thread owns its EvalEnv.
class CompiledFormula {
public:
    explicit CompiledFormula(FormulaPtr f);
    ~CompiledFormula();
    CompiledFormula(CompiledFormula&&) noexcept;
    CompiledFormula& operator=(CompiledFormula&&) noexcept;

    const FormulaPtr& formula() const { return source_; }
    const std::vector<Variable>& free_of(Sort s) const;

    // Binds the free-variable slots from M; every free variable must be
    // assigned and in range.
    EvalEnv make_env(const Interpretation& M) const;

    // Fresh env with default values (element 0, empty set, empty collection);
    // collection slots use the small representation (requires 2^m <= 64).
    EvalEnv blank_env(int m) const;

    bool eval(EvalEnv& env) const;

private:
    struct Node;
    FormulaPtr source_;
    std::unique_ptr<Node> root_;
    std::vector<Variable> free0_, free1_, free2_;
    int slots0_ = 0, slots1_ = 0, slots2_ = 0;

    friend class ModelSpace;
};

// Truth of f in M per the standard meaning of membership and equality;
// enumeration terms denote the set of their members (duplicates collapse),
// level-0 universals range over elements, level-1 universals over all 2^m
// subsets per variable.
bool evaluate(const Interpretation& M, const FormulaPtr& f);

} // namespace stratisat

#endif
