#include "stratisat/formula.hpp"

#include <algorithm>
#include <map>

#include "stratisat/errors.hpp"

namespace stratisat {

const char* sort_name(Sort s) {
    switch (s) {
    case Sort::Individual: return "sort0";
    case Sort::Set: return "sort1";
    case Sort::Collection: return "sort2";
    }
    return "?";
}

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond)
        throw WellFormednessError(msg);
}

void require_sort(const Variable& v, Sort s, const char* where) {
    require(v.sort == s, std::string(where) + ": variable '" + v.name + "' has wrong sort");
}

} // namespace

Atom atom_eq0(Variable x, Variable y) {
    require_sort(x, Sort::Individual, "x = y");
    require_sort(y, Sort::Individual, "x = y");
    Atom a;
    a.kind = Atom::Kind::Eq0;
    a.lhs = std::move(x);
    a.rhs = std::move(y);
    return a;
}

Atom atom_mem01(Variable x, Variable X) {
    require_sort(x, Sort::Individual, "x in X");
    require_sort(X, Sort::Set, "x in X");
    Atom a;
    a.kind = Atom::Kind::Mem01;
    a.lhs = std::move(x);
    a.rhs = std::move(X);
    return a;
}

Atom atom_enum_eq(Enumeration e, Variable X) {
    require(!e.members.empty(), "enumeration must have k >= 1 members");
    for (const auto& m : e.members)
        require_sort(m, Sort::Individual, "{...} = X");
    require_sort(X, Sort::Set, "{...} = X");
    Atom a;
    a.kind = Atom::Kind::EnumEq;
    a.members = std::move(e);
    a.rhs = std::move(X);
    return a;
}

Atom atom_enum_mem(Enumeration e, Variable A) {
    require(!e.members.empty(), "enumeration must have k >= 1 members");
    for (const auto& m : e.members)
        require_sort(m, Sort::Individual, "{...} in A");
    require_sort(A, Sort::Collection, "{...} in A");
    Atom a;
    a.kind = Atom::Kind::EnumMem;
    a.members = std::move(e);
    a.rhs = std::move(A);
    return a;
}

Atom atom_eq1(Variable X, Variable Y) {
    require_sort(X, Sort::Set, "X = Y");
    require_sort(Y, Sort::Set, "X = Y");
    Atom a;
    a.kind = Atom::Kind::Eq1;
    a.lhs = std::move(X);
    a.rhs = std::move(Y);
    return a;
}

Atom atom_mem12(Variable X, Variable A) {
    require_sort(X, Sort::Set, "X in A");
    require_sort(A, Sort::Collection, "X in A");
    Atom a;
    a.kind = Atom::Kind::Mem12;
    a.lhs = std::move(X);
    a.rhs = std::move(A);
    return a;
}

namespace {

FormulaPtr make(Formula::Kind k, Atom a, FormulaPtr l, FormulaPtr r, std::vector<Variable> b) {
    return std::make_shared<const Formula>(Formula::Key{}, k, std::move(a), std::move(l),
                                           std::move(r), std::move(b));
}

bool contains_forall1(const FormulaPtr& f) {
    if (f->kind() == Formula::Kind::Forall1)
        return true;
    if (f->lhs() && contains_forall1(f->lhs()))
        return true;
    return f->rhs() && contains_forall1(f->rhs());
}

} // namespace

bool quantifier_free(const FormulaPtr& f) {
    if (f->is_quantifier())
        return false;
    if (f->lhs() && !quantifier_free(f->lhs()))
        return false;
    return !f->rhs() || quantifier_free(f->rhs());
}

bool is_level0_matrix(const FormulaPtr& f) {
    switch (f->kind()) {
    case Formula::Kind::Atom:
        return f->atom().is_level0();
    case Formula::Kind::Not:
        return is_level0_matrix(f->lhs());
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff:
        return is_level0_matrix(f->lhs()) && is_level0_matrix(f->rhs());
    default:
        return false;
    }
}

FormulaPtr mk_atom(Atom a) {
    return make(Formula::Kind::Atom, std::move(a), nullptr, nullptr, {});
}

FormulaPtr mk_not(FormulaPtr f) {
    require(f != nullptr, "mk_not: null operand");
    return make(Formula::Kind::Not, {}, std::move(f), nullptr, {});
}

namespace {

FormulaPtr mk_binary(Formula::Kind k, FormulaPtr a, FormulaPtr b) {
    require(a != nullptr && b != nullptr, "binary connective: null operand");
    return make(k, {}, std::move(a), std::move(b), {});
}

} // namespace

FormulaPtr mk_and(FormulaPtr a, FormulaPtr b) { return mk_binary(Formula::Kind::And, std::move(a), std::move(b)); }
FormulaPtr mk_or(FormulaPtr a, FormulaPtr b) { return mk_binary(Formula::Kind::Or, std::move(a), std::move(b)); }
FormulaPtr mk_implies(FormulaPtr a, FormulaPtr b) { return mk_binary(Formula::Kind::Implies, std::move(a), std::move(b)); }
FormulaPtr mk_iff(FormulaPtr a, FormulaPtr b) { return mk_binary(Formula::Kind::Iff, std::move(a), std::move(b)); }

FormulaPtr mk_forall0(std::vector<Variable> vars, FormulaPtr body) {
    require(!vars.empty(), "forall (level 0): quantifier list must be nonempty");
    for (const auto& v : vars)
        require_sort(v, Sort::Individual, "forall (level 0)");
    for (std::size_t i = 0; i < vars.size(); ++i)
        for (std::size_t j = i + 1; j < vars.size(); ++j)
            require(vars[i] != vars[j], "forall: duplicate variable '" + vars[i].name + "' in one quantifier list");
    require(body != nullptr, "forall: null body");
    require(is_level0_matrix(body),
            "forall (level 0): body must be a quantifier-free combination of level-0 atoms");
    return make(Formula::Kind::Forall0, {}, std::move(body), nullptr, std::move(vars));
}

FormulaPtr mk_forall1(std::vector<Variable> vars, FormulaPtr body) {
    require(!vars.empty(), "forall (level 1): quantifier list must be nonempty");
    for (const auto& v : vars)
        require_sort(v, Sort::Set, "forall (level 1)");
    for (std::size_t i = 0; i < vars.size(); ++i)
        for (std::size_t j = i + 1; j < vars.size(); ++j)
            require(vars[i] != vars[j], "forall: duplicate variable '" + vars[i].name + "' in one quantifier list");
    require(body != nullptr, "forall: null body");
    require(!contains_forall1(body), "forall (level 1): body must not contain another level-1 quantifier");
    return make(Formula::Kind::Forall1, {}, std::move(body), nullptr, std::move(vars));
}

FormulaPtr mk_conjunction(const std::vector<FormulaPtr>& fs) {
    require(!fs.empty(), "conjunction of zero formulas");
    FormulaPtr out = fs.back();
    for (std::size_t i = fs.size() - 1; i-- > 0;)
        out = mk_and(fs[i], out);
    return out;
}

FormulaPtr mk_disjunction(const std::vector<FormulaPtr>& fs) {
    require(!fs.empty(), "disjunction of zero formulas");
    FormulaPtr out = fs.back();
    for (std::size_t i = fs.size() - 1; i-- > 0;)
        out = mk_or(fs[i], out);
    return out;
}

bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b) {
    if (a == b)
        return true;
    if (!a || !b)
        return false;
    if (a->kind() != b->kind())
        return false;
    switch (a->kind()) {
    case Formula::Kind::Atom:
        return a->atom() == b->atom();
    case Formula::Kind::Not:
        return structurally_equal(a->lhs(), b->lhs());
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff:
        return structurally_equal(a->lhs(), b->lhs()) && structurally_equal(a->rhs(), b->rhs());
    case Formula::Kind::Forall0:
    case Formula::Kind::Forall1:
        return a->bound() == b->bound() && structurally_equal(a->lhs(), b->lhs());
    }
    return false;
}

std::set<Variable>& VariableSets::by_sort(Sort s) {
    switch (s) {
    case Sort::Individual: return v0;
    case Sort::Set: return v1;
    default: return v2;
    }
}

const std::set<Variable>& VariableSets::by_sort(Sort s) const {
    switch (s) {
    case Sort::Individual: return v0;
    case Sort::Set: return v1;
    default: return v2;
    }
}

bool VariableSets::contains(const Variable& v) const { return by_sort(v.sort).count(v) > 0; }
void VariableSets::insert(const Variable& v) { by_sort(v.sort).insert(v); }

namespace {

void atom_variables(const Atom& a, const std::function<void(const Variable&)>& fn) {
    switch (a.kind) {
    case Atom::Kind::Eq0:
    case Atom::Kind::Mem01:
    case Atom::Kind::Eq1:
    case Atom::Kind::Mem12:
        fn(a.lhs);
        fn(a.rhs);
        break;
    case Atom::Kind::EnumEq:
    case Atom::Kind::EnumMem:
        for (const auto& m : a.members.members)
            fn(m);
        fn(a.rhs);
        break;
    }
}

void free_vars_rec(const FormulaPtr& f, VariableSets& out, std::set<Variable>& bound) {
    switch (f->kind()) {
    case Formula::Kind::Atom:
        atom_variables(f->atom(), [&](const Variable& v) {
            if (!bound.count(v))
                out.insert(v);
        });
        break;
    case Formula::Kind::Forall0:
    case Formula::Kind::Forall1: {
        std::vector<Variable> fresh;
        for (const auto& v : f->bound())
            if (bound.insert(v).second)
                fresh.push_back(v);
        free_vars_rec(f->lhs(), out, bound);
        for (const auto& v : fresh)
            bound.erase(v);
        break;
    }
    default:
        if (f->lhs())
            free_vars_rec(f->lhs(), out, bound);
        if (f->rhs())
            free_vars_rec(f->rhs(), out, bound);
    }
}

} // namespace

VariableSets free_variables(const FormulaPtr& f) {
    VariableSets out;
    std::set<Variable> bound;
    free_vars_rec(f, out, bound);
    return out;
}

VariableSets all_variables(const FormulaPtr& f) {
    VariableSets out;
    for_each_node(f, [&](const FormulaPtr& n) {
        if (n->is_atom())
            atom_variables(n->atom(), [&](const Variable& v) { out.insert(v); });
        for (const auto& v : n->bound())
            out.insert(v);
    });
    return out;
}

void for_each_node(const FormulaPtr& f, const std::function<void(const FormulaPtr&)>& fn) {
    fn(f);
    if (f->lhs())
        for_each_node(f->lhs(), fn);
    if (f->rhs())
        for_each_node(f->rhs(), fn);
}

namespace {

// Renaming environment: per-variable replacement map plus the pool of names
// already taken (free anywhere, or claimed by some quantifier).
struct RenameState {
    std::map<Variable, Variable> env; // active bound-variable renames
    std::set<std::string> taken;
    bool changed = false;

    Variable fresh_for(const Variable& v) {
        for (int n = 2;; ++n) {
            std::string cand = v.name + "_" + std::to_string(n);
            if (!taken.count(cand))
                return Variable{cand, v.sort};
        }
    }
};

Atom rename_atom(const Atom& a, const std::map<Variable, Variable>& env) {
    auto sub = [&](const Variable& v) {
        auto it = env.find(v);
        return it == env.end() ? v : it->second;
    };
    Atom out = a;
    switch (a.kind) {
    case Atom::Kind::EnumEq:
    case Atom::Kind::EnumMem:
        for (auto& m : out.members.members)
            m = sub(m);
        out.rhs = sub(out.rhs);
        break;
    default:
        out.lhs = sub(out.lhs);
        out.rhs = sub(out.rhs);
    }
    return out;
}

FormulaPtr rename_rec(const FormulaPtr& f, RenameState& st) {
    switch (f->kind()) {
    case Formula::Kind::Atom: {
        Atom a = rename_atom(f->atom(), st.env);
        if (a == f->atom())
            return f;
        return mk_atom(std::move(a));
    }
    case Formula::Kind::Forall0:
    case Formula::Kind::Forall1: {
        std::vector<Variable> vars = f->bound();
        std::vector<std::pair<Variable, Variable>> added;
        for (auto& v : vars) {
            Variable orig = v;
            if (st.taken.count(v.name)) {
                v = st.fresh_for(v);
                st.changed = true;
            }
            st.taken.insert(v.name);
            added.emplace_back(orig, st.env.count(orig) ? st.env[orig] : Variable{});
            st.env[orig] = v;
        }
        FormulaPtr body = rename_rec(f->lhs(), st);
        // restore enclosing bindings
        for (auto it = added.rbegin(); it != added.rend(); ++it) {
            if (it->second.name.empty())
                st.env.erase(it->first);
            else
                st.env[it->first] = it->second;
        }
        if (vars == f->bound() && body == f->lhs())
            return f;
        return f->kind() == Formula::Kind::Forall0 ? mk_forall0(std::move(vars), body)
                                                   : mk_forall1(std::move(vars), body);
    }
    case Formula::Kind::Not: {
        FormulaPtr l = rename_rec(f->lhs(), st);
        return l == f->lhs() ? f : mk_not(l);
    }
    default: {
        FormulaPtr l = rename_rec(f->lhs(), st);
        FormulaPtr r = rename_rec(f->rhs(), st);
        if (l == f->lhs() && r == f->rhs())
            return f;
        switch (f->kind()) {
        case Formula::Kind::And: return mk_and(l, r);
        case Formula::Kind::Or: return mk_or(l, r);
        case Formula::Kind::Implies: return mk_implies(l, r);
        default: return mk_iff(l, r);
        }
    }
    }
}

} // namespace

FormulaPtr rename_apart(const FormulaPtr& f) {
    RenameState st;
    VariableSets fv = free_variables(f);
    for (Sort s : {Sort::Individual, Sort::Set, Sort::Collection})
        for (const auto& v : fv.by_sort(s))
            st.taken.insert(v.name);
    return rename_rec(f, st);
}

namespace {

FormulaPtr substitute1_rec(const FormulaPtr& f, const std::map<Variable, Variable>& sub) {
    switch (f->kind()) {
    case Formula::Kind::Atom: {
        Atom a = rename_atom(f->atom(), sub);
        if (a == f->atom())
            return f;
        return mk_atom(std::move(a));
    }
    case Formula::Kind::Forall1: {
        // Bound sort-1 variables shadow the substitution.
        std::map<Variable, Variable> inner = sub;
        for (const auto& v : f->bound())
            inner.erase(v);
        if (inner.empty())
            return f;
        FormulaPtr body = substitute1_rec(f->lhs(), inner);
        return body == f->lhs() ? f : mk_forall1(f->bound(), body);
    }
    case Formula::Kind::Forall0: {
        FormulaPtr body = substitute1_rec(f->lhs(), sub);
        return body == f->lhs() ? f : mk_forall0(f->bound(), body);
    }
    case Formula::Kind::Not: {
        FormulaPtr l = substitute1_rec(f->lhs(), sub);
        return l == f->lhs() ? f : mk_not(l);
    }
    default: {
        FormulaPtr l = substitute1_rec(f->lhs(), sub);
        FormulaPtr r = substitute1_rec(f->rhs(), sub);
        if (l == f->lhs() && r == f->rhs())
            return f;
        switch (f->kind()) {
        case Formula::Kind::And: return mk_and(l, r);
        case Formula::Kind::Or: return mk_or(l, r);
        case Formula::Kind::Implies: return mk_implies(l, r);
        default: return mk_iff(l, r);
        }
    }
    }
}

} // namespace

FormulaPtr substitute1(const FormulaPtr& f,
                       const std::vector<std::pair<Variable, Variable>>& pairs) {
    std::map<Variable, Variable> sub;
    for (const auto& [from, to] : pairs) {
        if (from.sort != Sort::Set || to.sort != Sort::Set)
            throw WellFormednessError("substitute1: only sort-1 variables may be substituted");
        if (!sub.emplace(from, to).second)
            throw WellFormednessError("substitute1: duplicate source variable '" + from.name + "'");
    }
    return substitute1_rec(f, sub);
}

int enum_bound(const FormulaPtr& f) {
    int best = 1; // the relativization parameter requires l > 0
    for_each_node(f, [&](const FormulaPtr& n) {
        if (n->is_atom() &&
            (n->atom().kind == Atom::Kind::EnumEq || n->atom().kind == Atom::Kind::EnumMem))
            best = std::max(best, static_cast<int>(n->atom().members.members.size()));
    });
    return best;
}

std::size_t formula_length(const FormulaPtr& f) {
    switch (f->kind()) {
    case Formula::Kind::Atom:
        return 1;
    case Formula::Kind::Not:
        return 1 + formula_length(f->lhs());
    case Formula::Kind::Forall0:
    case Formula::Kind::Forall1:
        return f->bound().size() + formula_length(f->lhs());
    default:
        return 1 + formula_length(f->lhs()) + formula_length(f->rhs());
    }
}

namespace {

void components_rec(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
    switch (f->kind()) {
    case Formula::Kind::Atom:
    case Formula::Kind::Forall0:
    case Formula::Kind::Forall1:
        out.push_back(f);
        break;
    default:
        if (f->lhs())
            components_rec(f->lhs(), out);
        if (f->rhs())
            components_rec(f->rhs(), out);
    }
}

} // namespace

std::vector<FormulaPtr> propositional_components(const FormulaPtr& f) {
    std::vector<FormulaPtr> out;
    components_rec(f, out);
    return out;
}

} // namespace stratisat
