#ifndef STRATISAT_TESTS_HELPERS_HPP
#define STRATISAT_TESTS_HELPERS_HPP

#include <random>
#include <string>
#include <vector>

#include "stratisat/formula.hpp"
#include "stratisat/interpretation.hpp"

namespace ts {

using namespace stratisat;

inline Variable v0(const std::string& n) { return {n, Sort::Individual}; }
inline Variable v1(const std::string& n) { return {n, Sort::Set}; }
inline Variable v2(const std::string& n) { return {n, Sort::Collection}; }

inline FormulaPtr eq0(const Variable& a, const Variable& b) { return mk_atom(atom_eq0(a, b)); }
inline FormulaPtr mem01(const Variable& a, const Variable& b) { return mk_atom(atom_mem01(a, b)); }
inline FormulaPtr eq1(const Variable& a, const Variable& b) { return mk_atom(atom_eq1(a, b)); }
inline FormulaPtr mem12(const Variable& a, const Variable& b) { return mk_atom(atom_mem12(a, b)); }
inline FormulaPtr enum_eq(std::vector<Variable> xs, const Variable& X) {
    return mk_atom(atom_enum_eq(Enumeration{std::move(xs)}, X));
}
inline FormulaPtr enum_mem(std::vector<Variable> xs, const Variable& A) {
    return mk_atom(atom_enum_mem(Enumeration{std::move(xs)}, A));
}

using Rng = std::mt19937_64;

inline int pick(Rng& rng, int lo, int hi) { // inclusive
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline bool chance(Rng& rng, double p) {
    return std::uniform_real_distribution<double>(0, 1)(rng) < p;
}

// ---------------------------------------------------------------------------
// Random formula generation. Free pools per sort plus dedicated bound pools,
// kept name-disjoint so every generated formula parses back after rendering.
// Level-0 universals nested inside level-1 ones are linked by construction
// (their membership atoms appear as antecedent conjuncts) unless
// linked_inner is cleared.
// ---------------------------------------------------------------------------

struct GenOptions {
    int n_v0 = 2, n_v1 = 2, n_v2 = 1;
    int depth = 3;
    int max_enum = 2;
    int max_block = 2; // quantified variables per block
    bool allow_forall0 = true;
    bool allow_forall1 = true;
    bool linked_inner = true;
    double atom_chance = 0.3;      // early cut-off toward leaves
    int quantifier_weight = 2;     // out of 10 top-level rolls per kind
};

class Gen {
public:
    Gen(Rng& rng, GenOptions opts) : rng_(rng), opts_(opts) {
        for (int i = 1; i <= opts.n_v0; ++i)
            free0_.push_back(v0("x" + std::to_string(i)));
        for (int i = 1; i <= opts.n_v1; ++i)
            free1_.push_back(v1("X" + std::to_string(i)));
        for (int i = 1; i <= opts.n_v2; ++i)
            free2_.push_back(v2("A" + std::to_string(i)));
    }

    FormulaPtr formula() { return gen(opts_.depth, {}, {}); }

    // A quantifier-free propositional combination of the six atom shapes.
    FormulaPtr quantifier_free(int depth) {
        GenOptions saved = opts_;
        opts_.allow_forall0 = opts_.allow_forall1 = false;
        FormulaPtr out = gen(depth, {}, {});
        opts_ = saved;
        return out;
    }

    FormulaPtr level0_universal() { return forall0({}, {}); }
    FormulaPtr level1_universal() { return forall1(); }

    const std::vector<Variable>& pool0() const { return free0_; }
    const std::vector<Variable>& pool1() const { return free1_; }
    const std::vector<Variable>& pool2() const { return free2_; }

private:
    Rng& rng_;
    GenOptions opts_;
    std::vector<Variable> free0_, free1_, free2_;

    Variable pick_from(const std::vector<Variable>& pool) {
        return pool[static_cast<std::size_t>(pick(rng_, 0, static_cast<int>(pool.size()) - 1))];
    }

    // extra0/extra1: quantified variables currently in scope
    FormulaPtr atom(const std::vector<Variable>& extra0, const std::vector<Variable>& extra1,
                    bool level0_only) {
        std::vector<Variable> p0 = free0_;
        p0.insert(p0.end(), extra0.begin(), extra0.end());
        std::vector<Variable> p1 = free1_;
        p1.insert(p1.end(), extra1.begin(), extra1.end());
        for (int attempt = 0; attempt < 32; ++attempt) {
            switch (pick(rng_, 0, 5)) {
            case 0:
                if (!p0.empty())
                    return eq0(pick_from(p0), pick_from(p0));
                break;
            case 1:
                if (!p0.empty() && !p1.empty())
                    return mem01(pick_from(p0), pick_from(p1));
                break;
            case 2:
                if (!p0.empty() && !p1.empty()) {
                    std::vector<Variable> members;
                    int k = pick(rng_, 1, opts_.max_enum);
                    for (int i = 0; i < k; ++i)
                        members.push_back(pick_from(p0));
                    return enum_eq(std::move(members), pick_from(p1));
                }
                break;
            case 3:
                if (!p0.empty() && !free2_.empty()) {
                    std::vector<Variable> members;
                    int k = pick(rng_, 1, opts_.max_enum);
                    for (int i = 0; i < k; ++i)
                        members.push_back(pick_from(p0));
                    return enum_mem(std::move(members), pick_from(free2_));
                }
                break;
            case 4:
                if (!level0_only && !p1.empty())
                    return eq1(pick_from(p1), pick_from(p1));
                break;
            case 5:
                if (!level0_only && !p1.empty() && !free2_.empty())
                    return mem12(pick_from(p1), pick_from(free2_));
                break;
            }
        }
        // fallback: always constructible with nonempty pools
        return p0.empty() ? eq1(pick_from(p1), pick_from(p1)) : eq0(pick_from(p0), pick_from(p0));
    }

    FormulaPtr propositional(int depth, const std::vector<Variable>& extra0,
                             const std::vector<Variable>& extra1, bool level0_only) {
        if (depth <= 0 || chance(rng_, 0.35))
            return atom(extra0, extra1, level0_only);
        switch (pick(rng_, 0, 4)) {
        case 0:
            return mk_not(propositional(depth - 1, extra0, extra1, level0_only));
        case 1:
            return mk_and(propositional(depth - 1, extra0, extra1, level0_only),
                          propositional(depth - 1, extra0, extra1, level0_only));
        case 2:
            return mk_or(propositional(depth - 1, extra0, extra1, level0_only),
                         propositional(depth - 1, extra0, extra1, level0_only));
        case 3:
            return mk_implies(propositional(depth - 1, extra0, extra1, level0_only),
                              propositional(depth - 1, extra0, extra1, level0_only));
        default:
            return mk_iff(propositional(depth - 1, extra0, extra1, level0_only),
                          propositional(depth - 1, extra0, extra1, level0_only));
        }
    }

    // Level-0 universal; when `linked` is nonempty the matrix has the shape
    // (/\ memberships & ...) -> psi so the linkedness obligation is an
    // instance of the syntactic tautology.
    FormulaPtr forall0(const std::vector<Variable>& linked, const std::vector<Variable>& extra1) {
        int n = pick(rng_, 1, opts_.max_block);
        std::vector<Variable> zs;
        for (int i = 1; i <= n; ++i)
            zs.push_back(v0("b" + std::to_string(i)));
        FormulaPtr matrix;
        if (!linked.empty() && opts_.linked_inner) {
            std::vector<FormulaPtr> antecedent;
            for (const auto& z : zs)
                for (const auto& Z : linked)
                    antecedent.push_back(mem01(z, Z));
            if (chance(rng_, 0.5))
                antecedent.push_back(propositional(1, zs, extra1, true));
            matrix = mk_implies(mk_conjunction(antecedent), propositional(1, zs, extra1, true));
        } else {
            matrix = propositional(2, zs, extra1, true);
        }
        return mk_forall0(std::move(zs), matrix);
    }

    FormulaPtr forall1() {
        int n = pick(rng_, 1, std::min(opts_.max_block, 2));
        std::vector<Variable> Zs;
        for (int i = 1; i <= n; ++i)
            Zs.push_back(v1("W" + std::to_string(i)));
        // matrix: propositional combination of atoms and linked level-0
        // universals over the bound set variables
        std::vector<FormulaPtr> parts;
        int k = pick(rng_, 1, 3);
        for (int i = 0; i < k; ++i) {
            if (opts_.allow_forall0 && chance(rng_, 0.5))
                parts.push_back(forall0(Zs, Zs));
            else
                parts.push_back(propositional(1, {}, Zs, false));
        }
        FormulaPtr matrix = parts[0];
        for (std::size_t i = 1; i < parts.size(); ++i) {
            switch (pick(rng_, 0, 2)) {
            case 0: matrix = mk_and(matrix, parts[i]); break;
            case 1: matrix = mk_or(matrix, parts[i]); break;
            default: matrix = mk_implies(parts[i], matrix); break;
            }
        }
        if (chance(rng_, 0.3))
            matrix = mk_not(matrix);
        return mk_forall1(std::move(Zs), matrix);
    }

    FormulaPtr gen(int depth, const std::vector<Variable>& extra0,
                   const std::vector<Variable>& extra1) {
        if (depth <= 0 || chance(rng_, opts_.atom_chance))
            return atom(extra0, extra1, false);
        int roll = pick(rng_, 0, 9);
        if (roll < opts_.quantifier_weight && opts_.allow_forall0)
            return forall0({}, {});
        if (roll < 2 * opts_.quantifier_weight && opts_.allow_forall1)
            return forall1();
        switch (pick(rng_, 0, 4)) {
        case 0: return mk_not(gen(depth - 1, extra0, extra1));
        case 1: return mk_and(gen(depth - 1, extra0, extra1), gen(depth - 1, extra0, extra1));
        case 2: return mk_or(gen(depth - 1, extra0, extra1), gen(depth - 1, extra0, extra1));
        case 3: return mk_implies(gen(depth - 1, extra0, extra1), gen(depth - 1, extra0, extra1));
        default: return mk_iff(gen(depth - 1, extra0, extra1), gen(depth - 1, extra0, extra1));
        }
    }
};

// Random interpretation over domain size m for the given variables; sort-2
// collections include each subset independently with probability density.
inline Interpretation random_model(Rng& rng, int m, const VariableSets& vars,
                                   double density = 0.4) {
    Interpretation M;
    M.m = m;
    std::uniform_int_distribution<int> elem(0, m - 1);
    std::uniform_int_distribution<Mask> subset(0, full_mask(m));
    for (const auto& v : vars.v0)
        M.assign0[v.name] = elem(rng);
    for (const auto& v : vars.v1)
        M.assign1[v.name] = subset(rng);
    for (const auto& v : vars.v2) {
        std::set<Mask> collection;
        for (Mask s = 0; s <= full_mask(m); ++s)
            if (chance(rng, density))
                collection.insert(s);
        M.assign2[v.name] = std::move(collection);
    }
    return M;
}

} // namespace ts

#endif
