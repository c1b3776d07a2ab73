#include "stratisat/normalize.hpp"

#include <algorithm>
#include <map>

#include "stratisat/cnf.hpp"
#include "stratisat/parser.hpp"
#include "stratisat/errors.hpp"

namespace stratisat {

namespace {

bool is_universal(const FormulaPtr& f) { return f->is_quantifier(); }

bool is_literal(const FormulaPtr& f) {
    if (f->is_atom() || is_universal(f))
        return true;
    return f->kind() == Formula::Kind::Not && (f->lhs()->is_atom() || is_universal(f->lhs()));
}

// Negation normal form over the propositional skeleton; atoms and universal
// blocks stay opaque (a negated universal remains a literal here).
FormulaPtr nnf(const FormulaPtr& f, bool positive) {
    switch (f->kind()) {
    case Formula::Kind::Atom:
    case Formula::Kind::Forall0:
    case Formula::Kind::Forall1:
        return positive ? f : mk_not(f);
    case Formula::Kind::Not:
        return nnf(f->lhs(), !positive);
    case Formula::Kind::And:
        return positive ? mk_and(nnf(f->lhs(), true), nnf(f->rhs(), true))
                        : mk_or(nnf(f->lhs(), false), nnf(f->rhs(), false));
    case Formula::Kind::Or:
        return positive ? mk_or(nnf(f->lhs(), true), nnf(f->rhs(), true))
                        : mk_and(nnf(f->lhs(), false), nnf(f->rhs(), false));
    case Formula::Kind::Implies:
        return positive ? mk_or(nnf(f->lhs(), false), nnf(f->rhs(), true))
                        : mk_and(nnf(f->lhs(), true), nnf(f->rhs(), false));
    case Formula::Kind::Iff:
        // (a & b) | (~a & ~b), negated: (a & ~b) | (~a & b)
        if (positive)
            return mk_or(mk_and(nnf(f->lhs(), true), nnf(f->rhs(), true)),
                         mk_and(nnf(f->lhs(), false), nnf(f->rhs(), false)));
        return mk_or(mk_and(nnf(f->lhs(), true), nnf(f->rhs(), false)),
                     mk_and(nnf(f->lhs(), false), nnf(f->rhs(), true)));
    }
    return f;
}

using LiteralList = std::vector<FormulaPtr>;

FormulaPtr complement(const FormulaPtr& lit) {
    return lit->kind() == Formula::Kind::Not ? lit->lhs() : mk_not(lit);
}

bool contains_literal(const LiteralList& ls, const FormulaPtr& lit) {
    return std::any_of(ls.begin(), ls.end(),
                       [&](const FormulaPtr& l) { return structurally_equal(l, lit); });
}

// Appends lit unless present; returns false when the complement is present
// (the disjunct is contradictory).
bool add_literal(LiteralList& ls, const FormulaPtr& lit) {
    if (contains_literal(ls, complement(lit)))
        return false;
    if (!contains_literal(ls, lit))
        ls.push_back(lit);
    return true;
}

struct DnfBudget {
    std::size_t cap;
    std::size_t used = 0;

    void charge(std::size_t n) {
        used += n;
        if (used > cap)
            throw ResourceLimitError("dnf", "disjunct-literal cap of " + std::to_string(cap) +
                                                " exceeded");
    }
};

// DNF of an NNF formula as lists of deduplicated literals.
std::vector<LiteralList> dnf_lists(const FormulaPtr& f, DnfBudget& budget) {
    if (is_literal(f)) {
        budget.charge(1);
        return {{f}};
    }
    if (f->kind() == Formula::Kind::Or) {
        auto l = dnf_lists(f->lhs(), budget);
        auto r = dnf_lists(f->rhs(), budget);
        l.insert(l.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
        return l;
    }
    if (f->kind() == Formula::Kind::And) {
        auto l = dnf_lists(f->lhs(), budget);
        auto r = dnf_lists(f->rhs(), budget);
        std::vector<LiteralList> out;
        for (const auto& a : l) {
            for (const auto& b : r) {
                LiteralList merged = a;
                bool alive = true;
                for (const auto& lit : b) {
                    if (!add_literal(merged, lit)) {
                        alive = false;
                        break;
                    }
                }
                if (alive) {
                    budget.charge(merged.size());
                    out.push_back(std::move(merged));
                }
            }
        }
        return out;
    }
    throw InternalError("dnf: input not in negation normal form");
}

std::vector<LiteralList> dnf_of(const FormulaPtr& f, const NormalizeOptions& opts) {
    DnfBudget budget{opts.dnf_literal_cap};
    return dnf_lists(nnf(f, true), budget);
}

FormulaPtr list_as_formula(const LiteralList& ls) { return mk_conjunction(ls); }

// One round of negated-universal elimination over a literal list,
// recursing through the re-normalization it triggers.
void eliminate_lists(LiteralList literals, const NormalizeOptions& opts,
                     std::vector<LiteralList>& out, int depth) {
    if (depth > 64)
        throw ResourceLimitError("eliminate", "negated-universal elimination recursion too deep");
    for (std::size_t i = 0; i < literals.size(); ++i) {
        const FormulaPtr& lit = literals[i];
        if (lit->kind() != Formula::Kind::Not || !is_universal(lit->lhs()))
            continue;
        // ~forall vs phi  ~>  ~phi with the bound variables freed as
        // existential witnesses.
        FormulaPtr negated_matrix = mk_not(lit->lhs()->lhs());
        LiteralList rest;
        rest.reserve(literals.size());
        for (std::size_t j = 0; j < literals.size(); ++j)
            if (j != i)
                rest.push_back(literals[j]);
        rest.push_back(negated_matrix);
        // Renaming apart again separates the freed variables from any other
        // quantifier still binding the same names.
        FormulaPtr conj = rename_apart(list_as_formula(rest));
        for (auto& disjunct : dnf_of(conj, opts))
            eliminate_lists(std::move(disjunct), opts, out, depth + 1);
        return;
    }
    out.push_back(std::move(literals));
}

NormalizedConjunction classify(const LiteralList& literals) {
    NormalizedConjunction out;
    for (const auto& lit : literals) {
        if (lit->is_atom() ||
            (lit->kind() == Formula::Kind::Not && lit->lhs()->is_atom())) {
            out.literals1.push_back(lit);
        } else if (lit->kind() == Formula::Kind::Forall0) {
            out.literals2.push_back(lit);
        } else if (lit->kind() == Formula::Kind::Forall1) {
            out.literals3.push_back(lit);
        } else {
            throw InternalError("normalize: literal fits no normalized type: " +
                                std::to_string(static_cast<int>(lit->kind())));
        }
    }
    return out;
}

} // namespace

std::vector<FormulaPtr> to_dnf(const FormulaPtr& f, const NormalizeOptions& opts) {
    std::vector<FormulaPtr> out;
    for (const auto& ls : dnf_of(f, opts))
        out.push_back(list_as_formula(ls));
    return out;
}

std::vector<FormulaPtr> eliminate_negated_universals(const FormulaPtr& conj,
                                                     const NormalizeOptions& opts) {
    LiteralList literals;
    std::function<void(const FormulaPtr&)> flatten = [&](const FormulaPtr& g) {
        if (g->kind() == Formula::Kind::And) {
            flatten(g->lhs());
            flatten(g->rhs());
        } else {
            literals.push_back(g);
        }
    };
    flatten(conj);
    for (const auto& lit : literals)
        if (!is_literal(lit))
            throw WellFormednessError("eliminate_negated_universals: input is not a conjunction of literals");
    std::vector<LiteralList> lists;
    eliminate_lists(std::move(literals), opts, lists, 0);
    std::vector<FormulaPtr> out;
    for (const auto& ls : lists)
        out.push_back(list_as_formula(ls));
    return out;
}

std::vector<FormulaPtr> NormalizedConjunction::all_literals() const {
    std::vector<FormulaPtr> out = literals1;
    out.insert(out.end(), literals2.begin(), literals2.end());
    out.insert(out.end(), literals3.begin(), literals3.end());
    return out;
}

FormulaPtr NormalizedConjunction::as_formula() const { return mk_conjunction(all_literals()); }

std::vector<NormalizedConjunction> normalize(const FormulaPtr& f, const NormalizeOptions& opts) {
    FormulaPtr apart = rename_apart(f);
    std::vector<NormalizedConjunction> out;
    for (const auto& disjunct : dnf_of(apart, opts)) {
        std::vector<LiteralList> lists;
        eliminate_lists(disjunct, opts, lists, 0);
        for (const auto& ls : lists)
            out.push_back(classify(ls));
    }
    return out;
}

FormulaPtr linkedness_obligation(const FormulaPtr& forall0, const std::vector<Variable>& zvars) {
    if (forall0->kind() != Formula::Kind::Forall0)
        throw WellFormednessError("linkedness_obligation: first argument must be a level-0 universal");
    if (zvars.empty())
        throw WellFormednessError("linkedness_obligation: no enclosing variables");
    std::vector<FormulaPtr> memberships;
    for (const auto& z : forall0->bound())
        for (const auto& Z : zvars)
            memberships.push_back(mk_atom(atom_mem01(z, Z)));
    return mk_implies(mk_not(forall0->lhs()), mk_conjunction(memberships));
}

int obligation_semantic_bound(const FormulaPtr& obligation) {
    VariableSets fv = free_variables(obligation);
    int l = enum_bound(obligation);
    int bound = static_cast<int>(fv.v0.size()) + (l + 2) * static_cast<int>(fv.v1.size());
    return std::max(1, bound);
}

namespace {

// Syntactic fast path: the obligation is an instance of ~(p -> q) -> p when
// every required membership already sits among the conjuncts of ~phi0's
// negation normal form.
bool syntactic_linked(const FormulaPtr& forall0, const std::vector<Variable>& zvars) {
    FormulaPtr negated = nnf(mk_not(forall0->lhs()), true);
    LiteralList conjuncts;
    std::function<void(const FormulaPtr&)> flatten = [&](const FormulaPtr& g) {
        if (g->kind() == Formula::Kind::And) {
            flatten(g->lhs());
            flatten(g->rhs());
        } else {
            conjuncts.push_back(g);
        }
    };
    flatten(negated);
    for (const auto& z : forall0->bound())
        for (const auto& Z : zvars) {
            FormulaPtr need = mk_atom(atom_mem01(z, Z));
            if (!contains_literal(conjuncts, need))
                return false;
        }
    return true;
}

// Semantic path: the obligation is quantifier-free, so validity is decided
// by refutation up to the quantifier-free small-model bound, with each
// size checked through grounding + DPLL.
void semantic_linked(ObligationCheck& check, std::uint64_t budget) {
    const FormulaPtr& ob = check.obligation;
    int bound = obligation_semantic_bound(ob);
    check.bound_used = bound;
    FormulaPtr neg = mk_not(ob);
    GroundOptions gopts;
    gopts.literal_budget = budget;
    DpllOptions dopts;
    dopts.conflict_budget = budget;
    for (int m = 1; m <= bound; ++m) {
        CnfInstance cnf = ground(neg, m, gopts);
        auto assignment = dpll(cnf, dopts);
        if (assignment) {
            check.valid = false;
            check.counterexample = reconstruct_model(cnf, *assignment);
            return;
        }
    }
    check.valid = true;
}

struct ObligationCache {
    // keyed by the rendered obligation: identical obligations recur across
    // the original/normalized phases and duplicated subtrees
    std::map<std::string, ObligationCheck> seen;
};

void collect_obligations(const FormulaPtr& g, const NormalizeOptions& opts,
                         const std::string& phase, FragmentReport& report,
                         ObligationCache& cache) {
    for_each_node(g, [&](const FormulaPtr& node) {
        if (node->kind() != Formula::Kind::Forall1)
            return;
        for_each_node(node->lhs(), [&](const FormulaPtr& inner) {
            if (inner->kind() != Formula::Kind::Forall0)
                return;
            ObligationCheck check;
            check.universal = inner;
            check.enclosing = node->bound();
            check.obligation = linkedness_obligation(inner, node->bound());
            check.phase = phase;
            std::string key = render_formula(check.obligation);
            auto hit = cache.seen.find(key);
            if (hit != cache.seen.end()) {
                ObligationCheck cached = hit->second;
                cached.phase = phase;
                if (!cached.valid && !cached.resource_limited)
                    report.in_fragment = false;
                if (cached.resource_limited)
                    report.resource_limited = true;
                report.obligations.push_back(std::move(cached));
                return;
            }
            if (syntactic_linked(inner, node->bound())) {
                check.method = ObligationCheck::Method::Syntactic;
                check.valid = true;
            } else {
                check.method = ObligationCheck::Method::Semantic;
                try {
                    semantic_linked(check, opts.validity_budget);
                } catch (const ResourceLimitError&) {
                    check.resource_limited = true;
                    check.valid = false;
                    report.resource_limited = true;
                }
            }
            if (!check.valid && !check.resource_limited)
                report.in_fragment = false;
            cache.seen.emplace(std::move(key), check);
            report.obligations.push_back(std::move(check));
        });
    });
}

} // namespace

FragmentReport check_fragment(const FormulaPtr& f, const NormalizeOptions& opts) {
    FragmentReport report;
    ObligationCache cache;
    collect_obligations(f, opts, "original", report, cache);
    try {
        for (const auto& conj : normalize(f, opts))
            for (const auto& lit : conj.literals3)
                collect_obligations(lit, opts, "normalized", report, cache);
    } catch (const ResourceLimitError& e) {
        report.resource_limited = true;
        report.note = std::string("normalization not completed: ") + e.what();
    }
    if (report.resource_limited)
        report.in_fragment = false;
    return report;
}

} // namespace stratisat
