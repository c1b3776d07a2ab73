#include "stratisat/interpretation.hpp"

#include <algorithm>

#include "stratisat/errors.hpp"

namespace stratisat {

Binding bind0(Variable v, int element) {
    if (v.sort != Sort::Individual)
        throw EvalError("bind0: variable '" + v.name + "' is not of sort 0");
    Binding b;
    b.var = std::move(v);
    b.element = element;
    return b;
}

Binding bind1(Variable v, Mask subset) {
    if (v.sort != Sort::Set)
        throw EvalError("bind1: variable '" + v.name + "' is not of sort 1");
    Binding b;
    b.var = std::move(v);
    b.subset = subset;
    return b;
}

Interpretation update(const Interpretation& M, const std::vector<Binding>& bindings) {
    Interpretation out = M;
    for (const auto& b : bindings) {
        if (b.var.sort == Sort::Individual) {
            if (b.element < 0 || b.element >= M.m)
                throw EvalError("update: element " + std::to_string(b.element) +
                                " out of range for domain size " + std::to_string(M.m));
            out.assign0[b.var.name] = b.element;
        } else if (b.var.sort == Sort::Set) {
            if ((b.subset & ~full_mask(M.m)) != 0)
                throw EvalError("update: subset out of range for domain size " + std::to_string(M.m));
            out.assign1[b.var.name] = b.subset;
        } else {
            throw EvalError("update: sort-2 variables cannot be bound");
        }
    }
    return out;
}

struct CompiledFormula::Node {
    enum class Op { Eq0, Mem01, EnumEq, EnumMem, Eq1, Mem12, Not, And, Or, Implies, Iff, Forall0, Forall1 };
    Op op;
    int a = -1, b = -1;     // atom operand slots
    std::vector<int> slots; // enumeration members / quantified variables
    std::unique_ptr<Node> l, r;

    bool eval(EvalEnv& env) const;
};

CompiledFormula::~CompiledFormula() = default;
CompiledFormula::CompiledFormula(CompiledFormula&&) noexcept = default;
CompiledFormula& CompiledFormula::operator=(CompiledFormula&&) noexcept = default;

const std::vector<Variable>& CompiledFormula::free_of(Sort s) const {
    switch (s) {
    case Sort::Individual: return free0_;
    case Sort::Set: return free1_;
    default: return free2_;
    }
}

namespace {

struct SlotTable {
    std::map<Variable, int> slot;
    int next[3] = {0, 0, 0};

    int get(const Variable& v) {
        auto it = slot.find(v);
        if (it != slot.end())
            return it->second;
        int s = next[sort_index(v.sort)]++;
        slot.emplace(v, s);
        return s;
    }
};

} // namespace

CompiledFormula::CompiledFormula(FormulaPtr f) : source_(std::move(f)) {
    VariableSets fv = free_variables(source_);
    free0_.assign(fv.v0.begin(), fv.v0.end());
    free1_.assign(fv.v1.begin(), fv.v1.end());
    free2_.assign(fv.v2.begin(), fv.v2.end());

    SlotTable table;
    for (const auto& v : free0_)
        table.get(v);
    for (const auto& v : free1_)
        table.get(v);
    for (const auto& v : free2_)
        table.get(v);

    std::function<std::unique_ptr<Node>(const FormulaPtr&)> compile =
        [&](const FormulaPtr& g) -> std::unique_ptr<Node> {
        auto n = std::make_unique<Node>();
        switch (g->kind()) {
        case Formula::Kind::Atom: {
            const Atom& a = g->atom();
            switch (a.kind) {
            case Atom::Kind::Eq0: n->op = Node::Op::Eq0; n->a = table.get(a.lhs); n->b = table.get(a.rhs); break;
            case Atom::Kind::Mem01: n->op = Node::Op::Mem01; n->a = table.get(a.lhs); n->b = table.get(a.rhs); break;
            case Atom::Kind::Eq1: n->op = Node::Op::Eq1; n->a = table.get(a.lhs); n->b = table.get(a.rhs); break;
            case Atom::Kind::Mem12: n->op = Node::Op::Mem12; n->a = table.get(a.lhs); n->b = table.get(a.rhs); break;
            case Atom::Kind::EnumEq:
            case Atom::Kind::EnumMem:
                n->op = a.kind == Atom::Kind::EnumEq ? Node::Op::EnumEq : Node::Op::EnumMem;
                for (const auto& mvar : a.members.members)
                    n->slots.push_back(table.get(mvar));
                n->b = table.get(a.rhs);
                break;
            }
            return n;
        }
        case Formula::Kind::Not:
            n->op = Node::Op::Not;
            n->l = compile(g->lhs());
            return n;
        case Formula::Kind::And:
        case Formula::Kind::Or:
        case Formula::Kind::Implies:
        case Formula::Kind::Iff:
            n->op = g->kind() == Formula::Kind::And       ? Node::Op::And
                    : g->kind() == Formula::Kind::Or      ? Node::Op::Or
                    : g->kind() == Formula::Kind::Implies ? Node::Op::Implies
                                                          : Node::Op::Iff;
            n->l = compile(g->lhs());
            n->r = compile(g->rhs());
            return n;
        case Formula::Kind::Forall0:
        case Formula::Kind::Forall1:
            n->op = g->kind() == Formula::Kind::Forall0 ? Node::Op::Forall0 : Node::Op::Forall1;
            for (const auto& v : g->bound())
                n->slots.push_back(table.get(v));
            n->l = compile(g->lhs());
            return n;
        }
        return n;
    };
    root_ = compile(source_);
    slots0_ = table.next[0];
    slots1_ = table.next[1];
    slots2_ = table.next[2];
}

bool CompiledFormula::Node::eval(EvalEnv& env) const {
    const Node& n = *this;
    using Op = CompiledFormula::Node::Op;
    switch (n.op) {
    case Op::Eq0:
        return env.v0[n.a] == env.v0[n.b];
    case Op::Mem01:
        return ((env.v1[n.b] >> env.v0[n.a]) & 1u) != 0;
    case Op::Eq1:
        return env.v1[n.a] == env.v1[n.b];
    case Op::Mem12:
        return env.v2[n.b].contains(env.v1[n.a]);
    case Op::EnumEq:
    case Op::EnumMem: {
        Mask s = 0;
        for (int slot : n.slots)
            s |= Mask{1} << env.v0[slot];
        return n.op == Op::EnumEq ? s == env.v1[n.b] : env.v2[n.b].contains(s);
    }
    case Op::Not:
        return !n.l->eval(env);
    case Op::And:
        return n.l->eval(env) && n.r->eval(env);
    case Op::Or:
        return n.l->eval(env) || n.r->eval(env);
    case Op::Implies:
        return !n.l->eval(env) || n.r->eval(env);
    case Op::Iff:
        return n.l->eval(env) == n.r->eval(env);
    case Op::Forall0: {
        // Save the slots so a variable that also occurs free (or in a
        // sibling block) is restored after the sweep.
        std::vector<int> saved;
        saved.reserve(n.slots.size());
        for (int slot : n.slots)
            saved.push_back(env.v0[slot]);
        std::size_t k = n.slots.size();
        std::vector<int> tuple(k, 0);
        bool ok = true;
        for (;;) {
            for (std::size_t i = 0; i < k; ++i)
                env.v0[n.slots[i]] = tuple[i];
            if (!n.l->eval(env)) {
                ok = false;
                break;
            }
            std::size_t i = 0;
            while (i < k && ++tuple[i] == env.m) {
                tuple[i] = 0;
                ++i;
            }
            if (i == k)
                break;
        }
        for (std::size_t i = 0; i < k; ++i)
            env.v0[n.slots[i]] = saved[i];
        return ok;
    }
    case Op::Forall1: {
        std::vector<Mask> saved;
        saved.reserve(n.slots.size());
        for (int slot : n.slots)
            saved.push_back(env.v1[slot]);
        std::size_t k = n.slots.size();
        std::vector<Mask> tuple(k, 0);
        bool ok = true;
        for (;;) {
            for (std::size_t i = 0; i < k; ++i)
                env.v1[n.slots[i]] = tuple[i];
            if (!n.l->eval(env)) {
                ok = false;
                break;
            }
            std::size_t i = 0;
            while (i < k && ++tuple[i] > env.full) {
                tuple[i] = 0;
                ++i;
            }
            if (i == k)
                break;
        }
        for (std::size_t i = 0; i < k; ++i)
            env.v1[n.slots[i]] = saved[i];
        return ok;
    }
    }
    return false;
}

EvalEnv CompiledFormula::blank_env(int m) const {
    if (m < 1 || m > kMaxDomain)
        throw EvalError("domain size out of range: " + std::to_string(m));
    EvalEnv env;
    env.m = m;
    env.full = full_mask(m);
    env.v0.assign(slots0_, 0);
    env.v1.assign(slots1_, 0);
    env.v2.assign(slots2_, CollectionRef{});
    return env;
}

EvalEnv CompiledFormula::make_env(const Interpretation& M) const {
    EvalEnv env = blank_env(M.m);
    int slot = 0;
    for (const auto& v : free0_) {
        auto it = M.assign0.find(v.name);
        if (it == M.assign0.end())
            throw EvalError("unassigned free variable '" + v.name + "' (sort 0)");
        if (it->second < 0 || it->second >= M.m)
            throw EvalError("value of '" + v.name + "' out of range");
        env.v0[slot++] = it->second;
    }
    slot = 0;
    for (const auto& v : free1_) {
        auto it = M.assign1.find(v.name);
        if (it == M.assign1.end())
            throw EvalError("unassigned free variable '" + v.name + "' (sort 1)");
        if ((it->second & ~env.full) != 0)
            throw EvalError("value of '" + v.name + "' out of range");
        env.v1[slot++] = it->second;
    }
    slot = 0;
    for (const auto& v : free2_) {
        auto it = M.assign2.find(v.name);
        if (it == M.assign2.end())
            throw EvalError("unassigned free variable '" + v.name + "' (sort 2)");
        CollectionRef ref;
        ref.small = false;
        ref.big = &it->second;
        for (Mask s : it->second)
            if ((s & ~env.full) != 0)
                throw EvalError("value of '" + v.name + "' out of range");
        env.v2[slot++] = ref;
    }
    return env;
}

bool CompiledFormula::eval(EvalEnv& env) const { return root_->eval(env); }

bool evaluate(const Interpretation& M, const FormulaPtr& f) {
    CompiledFormula c(f);
    EvalEnv env = c.make_env(M);
    return c.eval(env);
}

} // namespace stratisat
