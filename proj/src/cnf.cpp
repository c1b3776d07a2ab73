#include "stratisat/cnf.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "stratisat/errors.hpp"

namespace stratisat {

std::uint64_t CnfInstance::literal_count() const {
    std::uint64_t n = 0;
    for (const auto& c : clauses)
        n += c.size();
    return n;
}

namespace {

// A literal during encoding: a propositional literal or a folded constant.
struct ELit {
    enum class Tag { True, False, Var } tag = Tag::False;
    int lit = 0;

    static ELit constant(bool b) { return {b ? Tag::True : Tag::False, 0}; }
    static ELit of(int l) { return {Tag::Var, l}; }
    bool is_const() const { return tag != Tag::Var; }
    bool value() const { return tag == Tag::True; }
    ELit operator-() const {
        if (tag == Tag::Var)
            return of(-lit);
        return constant(tag == Tag::False);
    }
};

class CnfBuilder {
public:
    explicit CnfBuilder(std::uint64_t budget) : budget_(budget) {}

    CnfInstance take() { return std::move(out_); }

    int new_var(GroundAtomRef ref) {
        out_.map.push_back(std::move(ref));
        return ++out_.num_vars;
    }

    void add_clause(std::vector<int> lits) {
        emitted_ += lits.size() + 1;
        if (emitted_ > budget_)
            throw ResourceLimitError("grounding", "clause budget exceeded");
        out_.clauses.push_back(std::move(lits));
    }

    // g <-> AND(ls); constants already folded away by the caller.
    int gate_and(const std::vector<int>& ls) {
        int g = new_var({GroundAtomRef::Kind::T, "", 0, 0});
        std::vector<int> big{g};
        for (int l : ls) {
            add_clause({-g, l});
            big.push_back(-l);
        }
        add_clause(std::move(big));
        return g;
    }

    int gate_or(const std::vector<int>& ls) {
        int g = new_var({GroundAtomRef::Kind::T, "", 0, 0});
        std::vector<int> big{-g};
        for (int l : ls) {
            add_clause({g, -l});
            big.push_back(l);
        }
        add_clause(std::move(big));
        return g;
    }

    int gate_iff(int a, int b) {
        int g = new_var({GroundAtomRef::Kind::T, "", 0, 0});
        add_clause({-g, -a, b});
        add_clause({-g, a, -b});
        add_clause({g, -a, -b});
        add_clause({g, a, b});
        return g;
    }

    ELit fold_and(std::vector<ELit> ls) {
        std::vector<int> vars;
        for (const auto& l : ls) {
            if (l.tag == ELit::Tag::False)
                return ELit::constant(false);
            if (l.tag == ELit::Tag::Var)
                vars.push_back(l.lit);
        }
        if (vars.empty())
            return ELit::constant(true);
        if (vars.size() == 1)
            return ELit::of(vars[0]);
        return ELit::of(gate_and(vars));
    }

    ELit fold_or(std::vector<ELit> ls) {
        std::vector<int> vars;
        for (const auto& l : ls) {
            if (l.tag == ELit::Tag::True)
                return ELit::constant(true);
            if (l.tag == ELit::Tag::Var)
                vars.push_back(l.lit);
        }
        if (vars.empty())
            return ELit::constant(false);
        if (vars.size() == 1)
            return ELit::of(vars[0]);
        return ELit::of(gate_or(vars));
    }

    ELit fold_iff(ELit a, ELit b) {
        if (a.is_const())
            return a.value() ? b : -b;
        if (b.is_const())
            return b.value() ? a : -a;
        return ELit::of(gate_iff(a.lit, b.lit));
    }

private:
    CnfInstance out_;
    std::uint64_t budget_;
    std::uint64_t emitted_ = 0;
};

class Grounder {
public:
    Grounder(const FormulaPtr& f, int m, const GroundOptions& opts)
        : f_(f), m_(m), opts_(opts), builder_(opts.literal_budget) {}

    CnfInstance run() {
        if (m_ < 1)
            throw WellFormednessError("ground: domain size must be positive");
        bool has_forall1 = false;
        for_each_node(f_, [&](const FormulaPtr& n) {
            if (n->kind() == Formula::Kind::Forall1)
                has_forall1 = true;
        });
        if (has_forall1 && m_ > 16)
            throw ResourceLimitError("grounding",
                                     "level-1 universal expansion refused for m > 16");
        VariableSets fv = free_variables(f_);
        if (!fv.v2.empty() && m_ > 20)
            throw ResourceLimitError("grounding", "sort-2 row needs 2^m entries; refuse m > 20");

        for (const auto& x : fv.v0) {
            int base = 0;
            for (int u = 0; u < m_; ++u) {
                int v = builder_.new_var({GroundAtomRef::Kind::P, x.name, u, 0});
                if (u == 0)
                    base = v;
            }
            p_base_[x.name] = base;
            std::vector<int> at_least;
            for (int u = 0; u < m_; ++u)
                at_least.push_back(base + u);
            builder_.add_clause(at_least);
            for (int u = 0; u < m_; ++u)
                for (int v = u + 1; v < m_; ++v)
                    builder_.add_clause({-(base + u), -(base + v)});
        }
        for (const auto& X : fv.v1) {
            int base = 0;
            for (int u = 0; u < m_; ++u) {
                int v = builder_.new_var({GroundAtomRef::Kind::Q, X.name, u, 0});
                if (u == 0)
                    base = v;
            }
            q_base_[X.name] = base;
        }
        for (const auto& A : fv.v2) {
            int base = 0;
            for (Mask s = 0;; ++s) {
                int v = builder_.new_var({GroundAtomRef::Kind::R, A.name, 0, s});
                if (s == 0)
                    base = v;
                if (s == full_mask(m_))
                    break;
            }
            r_base_[A.name] = base;
        }

        if (opts_.symmetry_break) {
            if (!fv.v0.empty())
                builder_.add_clause({p_base_[fv.v0.begin()->name]});
            if (!fv.v1.empty()) {
                int qb = q_base_[fv.v1.begin()->name];
                // keep element 0 out of the ordering when a sort-0 variable
                // is pinned to it
                int from = fv.v0.empty() ? 1 : 2;
                for (int u = from; u < m_; ++u)
                    builder_.add_clause({-(qb + u), qb + u - 1});
            }
        }

        ELit top = encode(f_);
        if (top.is_const()) {
            if (!top.value())
                builder_.add_clause({}); // empty clause: unsatisfiable
        } else {
            builder_.add_clause({top.lit});
        }
        CnfInstance out = builder_.take();
        out.domain_size = m_;
        return out;
    }

private:
    FormulaPtr f_;
    int m_;
    GroundOptions opts_;
    CnfBuilder builder_;
    std::map<std::string, int> p_base_, q_base_, r_base_;
    std::map<Variable, int> elem_env_;
    std::map<Variable, Mask> set_env_;

    bool elem_concrete(const Variable& x, int& u) const {
        auto it = elem_env_.find(x);
        if (it == elem_env_.end())
            return false;
        u = it->second;
        return true;
    }

    bool set_concrete(const Variable& X, Mask& s) const {
        auto it = set_env_.find(X);
        if (it == set_env_.end())
            return false;
        s = it->second;
        return true;
    }

    int p_lit(const Variable& x, int u) const { return p_base_.at(x.name) + u; }
    int q_lit(const Variable& X, int u) const { return q_base_.at(X.name) + u; }
    int r_lit(const Variable& A, Mask s) const { return r_base_.at(A.name) + static_cast<int>(s); }

    // x = u (p-row entry, or a constant when x is a quantified instance)
    ELit elem_is(const Variable& x, int u) {
        int v;
        if (elem_concrete(x, v))
            return ELit::constant(v == u);
        return ELit::of(p_lit(x, u));
    }

    // u in X
    ELit set_has(const Variable& X, int u) {
        Mask s;
        if (set_concrete(X, s))
            return ELit::constant(((s >> u) & 1u) != 0);
        return ELit::of(q_lit(X, u));
    }

    // u in {members}
    ELit enum_has(const Enumeration& e, int u) {
        std::vector<ELit> parts;
        for (const auto& x : e.members)
            parts.push_back(elem_is(x, u));
        return builder_.fold_or(std::move(parts));
    }

    ELit encode_atom(const Atom& a) {
        switch (a.kind) {
        case Atom::Kind::Eq0: {
            int u, v;
            bool cu = elem_concrete(a.lhs, u), cv = elem_concrete(a.rhs, v);
            if (cu && cv)
                return ELit::constant(u == v);
            if (cu)
                return elem_is(a.rhs, u);
            if (cv)
                return elem_is(a.lhs, v);
            std::vector<ELit> parts;
            for (int w = 0; w < m_; ++w)
                parts.push_back(builder_.fold_and({elem_is(a.lhs, w), elem_is(a.rhs, w)}));
            return builder_.fold_or(std::move(parts));
        }
        case Atom::Kind::Mem01: {
            int u;
            if (elem_concrete(a.lhs, u))
                return set_has(a.rhs, u);
            std::vector<ELit> parts;
            for (int w = 0; w < m_; ++w)
                parts.push_back(builder_.fold_and({elem_is(a.lhs, w), set_has(a.rhs, w)}));
            return builder_.fold_or(std::move(parts));
        }
        case Atom::Kind::EnumEq: {
            std::vector<ELit> parts;
            for (int u = 0; u < m_; ++u)
                parts.push_back(builder_.fold_iff(enum_has(a.members, u), set_has(a.rhs, u)));
            return builder_.fold_and(std::move(parts));
        }
        case Atom::Kind::Eq1: {
            std::vector<ELit> parts;
            for (int u = 0; u < m_; ++u)
                parts.push_back(builder_.fold_iff(set_has(a.lhs, u), set_has(a.rhs, u)));
            return builder_.fold_and(std::move(parts));
        }
        case Atom::Kind::EnumMem: {
            // {members} in A: one disjunct per subset S, pinning the member
            // indicator bit-for-bit to S and requiring r(A,S).
            std::vector<ELit> parts;
            for (Mask s = 0;; ++s) {
                std::vector<ELit> conj{ELit::of(r_lit(a.rhs, s))};
                for (int u = 0; u < m_; ++u) {
                    ELit ind = enum_has(a.members, u);
                    conj.push_back(((s >> u) & 1u) ? ind : -ind);
                }
                parts.push_back(builder_.fold_and(std::move(conj)));
                if (s == full_mask(m_))
                    break;
            }
            return builder_.fold_or(std::move(parts));
        }
        case Atom::Kind::Mem12: {
            Mask s;
            if (set_concrete(a.lhs, s))
                return ELit::of(r_lit(a.rhs, s));
            std::vector<ELit> parts;
            for (Mask w = 0;; ++w) {
                std::vector<ELit> conj{ELit::of(r_lit(a.rhs, w))};
                for (int u = 0; u < m_; ++u) {
                    ELit in = set_has(a.lhs, u);
                    conj.push_back(((w >> u) & 1u) ? in : -in);
                }
                parts.push_back(builder_.fold_and(std::move(conj)));
                if (w == full_mask(m_))
                    break;
            }
            return builder_.fold_or(std::move(parts));
        }
        }
        return ELit::constant(false);
    }

    ELit encode(const FormulaPtr& g) {
        switch (g->kind()) {
        case Formula::Kind::Atom:
            return encode_atom(g->atom());
        case Formula::Kind::Not:
            return -encode(g->lhs());
        case Formula::Kind::And:
            return builder_.fold_and({encode(g->lhs()), encode(g->rhs())});
        case Formula::Kind::Or:
            return builder_.fold_or({encode(g->lhs()), encode(g->rhs())});
        case Formula::Kind::Implies:
            return builder_.fold_or({-encode(g->lhs()), encode(g->rhs())});
        case Formula::Kind::Iff:
            return builder_.fold_iff(encode(g->lhs()), encode(g->rhs()));
        case Formula::Kind::Forall0: {
            const auto& vars = g->bound();
            std::vector<int> tuple(vars.size(), 0);
            std::vector<ELit> parts;
            for (;;) {
                for (std::size_t i = 0; i < vars.size(); ++i)
                    elem_env_[vars[i]] = tuple[i];
                parts.push_back(encode(g->lhs()));
                std::size_t i = 0;
                while (i < vars.size() && ++tuple[i] == m_) {
                    tuple[i] = 0;
                    ++i;
                }
                if (i == vars.size())
                    break;
            }
            for (const auto& v : vars)
                elem_env_.erase(v);
            return builder_.fold_and(std::move(parts));
        }
        case Formula::Kind::Forall1: {
            const auto& vars = g->bound();
            std::vector<Mask> tuple(vars.size(), 0);
            std::vector<ELit> parts;
            for (;;) {
                for (std::size_t i = 0; i < vars.size(); ++i)
                    set_env_[vars[i]] = tuple[i];
                parts.push_back(encode(g->lhs()));
                std::size_t i = 0;
                while (i < vars.size() && ++tuple[i] > full_mask(m_)) {
                    tuple[i] = 0;
                    ++i;
                }
                if (i == vars.size())
                    break;
            }
            for (const auto& v : vars)
                set_env_.erase(v);
            return builder_.fold_and(std::move(parts));
        }
        }
        return ELit::constant(false);
    }
};

} // namespace

CnfInstance ground(const FormulaPtr& f, int m, const GroundOptions& opts) {
    Grounder g(f, m, opts);
    return g.run();
}

namespace {

// Two-watched-literal DPLL engine, chronological backtracking.
class Dpll {
public:
    Dpll(const CnfInstance& cnf, const DpllOptions& opts) : opts_(opts) {
        clauses_ = cnf.clauses;
        num_vars_ = cnf.num_vars;
    }

    std::optional<std::vector<bool>> run() {
        const int n = num_vars_;
        value_.assign(n + 1, -1);
        std::vector<std::uint64_t> occ(n + 1, 0);
        watches_.assign(2 * static_cast<std::size_t>(n + 1), {});
        for (const auto& c : clauses_) {
            if (c.empty())
                return std::nullopt;
            for (int l : c)
                ++occ[std::abs(l)];
        }
        order_.resize(n);
        for (int v = 1; v <= n; ++v)
            order_[v - 1] = v;
        std::stable_sort(order_.begin(), order_.end(),
                         [&](int a, int b) { return occ[a] > occ[b]; });

        for (std::size_t ci = 0; ci < clauses_.size(); ++ci) {
            const auto& c = clauses_[ci];
            if (c.size() == 1) {
                if (!enqueue(c[0]))
                    return std::nullopt;
            } else {
                watches_[widx(c[0])].push_back(static_cast<int>(ci));
                watches_[widx(c[1])].push_back(static_cast<int>(ci));
            }
        }

        std::size_t next = 0;
        for (;;) {
            while (!propagate()) {
                if (++conflicts_ > opts_.conflict_budget)
                    throw ResourceLimitError("dpll", "conflict budget exceeded");
                if (!backtrack(next))
                    return std::nullopt;
            }
            while (next < order_.size() && value_[order_[next]] != -1)
                ++next;
            if (next == order_.size()) {
                std::vector<bool> out(n + 1, false);
                for (int v = 1; v <= n; ++v)
                    out[v] = value_[v] == 1;
                return out;
            }
            int var = order_[next];
            decisions_.push_back({var, trail_.size(), next, false});
            enqueue(var); // positive phase first
        }
    }

private:
    struct Decision {
        int var;
        std::size_t trail_mark;
        std::size_t order_pos;
        bool flipped;
    };

    bool backtrack(std::size_t& next) {
        for (;;) {
            if (decisions_.empty())
                return false;
            Decision d = decisions_.back();
            decisions_.pop_back();
            while (trail_.size() > d.trail_mark) {
                value_[std::abs(trail_.back())] = -1;
                trail_.pop_back();
            }
            head_ = trail_.size();
            if (!d.flipped) {
                decisions_.push_back({d.var, d.trail_mark, d.order_pos, true});
                enqueue(-d.var);
                next = d.order_pos;
                return true;
            }
        }
    }

    static std::size_t widx(int lit) {
        return 2 * static_cast<std::size_t>(std::abs(lit)) + (lit < 0 ? 1 : 0);
    }

    bool lit_true(int l) const { return value_[std::abs(l)] == (l > 0 ? 1 : 0); }
    bool lit_false(int l) const { return value_[std::abs(l)] == (l > 0 ? 0 : 1); }

    bool enqueue(int l) {
        int v = std::abs(l);
        int want = l > 0 ? 1 : 0;
        if (value_[v] != -1)
            return value_[v] == want;
        value_[v] = want;
        trail_.push_back(l);
        return true;
    }

    bool propagate() {
        while (head_ < trail_.size()) {
            int l = trail_[head_++];
            std::vector<int>& wl = watches_[widx(-l)];
            std::size_t keep = 0;
            bool conflict = false;
            for (std::size_t i = 0; i < wl.size(); ++i) {
                int ci = wl[i];
                if (conflict) {
                    wl[keep++] = ci;
                    continue;
                }
                auto& c = clauses_[ci];
                if (c[0] == -l)
                    std::swap(c[0], c[1]);
                if (lit_true(c[0])) {
                    wl[keep++] = ci;
                    continue;
                }
                bool moved = false;
                for (std::size_t k = 2; k < c.size(); ++k) {
                    if (!lit_false(c[k])) {
                        std::swap(c[1], c[k]);
                        watches_[widx(c[1])].push_back(ci);
                        moved = true;
                        break;
                    }
                }
                if (moved)
                    continue;
                wl[keep++] = ci;
                if (!enqueue(c[0]))
                    conflict = true;
            }
            wl.resize(keep);
            if (conflict)
                return false;
        }
        return true;
    }

    DpllOptions opts_;
    std::vector<std::vector<int>> clauses_; // own copy: watch order is mutated
    int num_vars_;
    std::vector<int> value_;
    std::vector<int> order_;
    std::vector<std::vector<int>> watches_;
    std::vector<int> trail_;
    std::size_t head_ = 0;
    std::vector<Decision> decisions_;
    std::uint64_t conflicts_ = 0;
};

} // namespace

std::optional<std::vector<bool>> dpll(const CnfInstance& cnf, const DpllOptions& opts) {
    Dpll engine(cnf, opts);
    return engine.run();
}

Interpretation reconstruct_model(const CnfInstance& cnf, const std::vector<bool>& assignment) {
    if (assignment.size() != static_cast<std::size_t>(cnf.num_vars) + 1)
        throw InternalError("reconstruct_model: assignment size mismatch");
    Interpretation M;
    M.m = cnf.domain_size > 0 ? cnf.domain_size : 1;
    std::map<std::string, int> elem;
    for (int v = 1; v <= cnf.num_vars; ++v) {
        const GroundAtomRef& ref = cnf.map[v - 1];
        bool val = assignment[v];
        switch (ref.kind) {
        case GroundAtomRef::Kind::P:
            if (val) {
                if (elem.count(ref.var))
                    throw InternalError("broken exactly-one row for '" + ref.var + "'");
                elem[ref.var] = ref.element;
            }
            M.assign0.emplace(ref.var, 0);
            break;
        case GroundAtomRef::Kind::Q:
            M.assign1.emplace(ref.var, 0);
            if (val)
                M.assign1[ref.var] |= Mask{1} << ref.element;
            break;
        case GroundAtomRef::Kind::R:
            M.assign2.emplace(ref.var, std::set<Mask>{});
            if (val)
                M.assign2[ref.var].insert(ref.subset);
            break;
        case GroundAtomRef::Kind::T:
            break;
        }
    }
    for (auto& [name, value] : M.assign0) {
        auto it = elem.find(name);
        if (it == elem.end())
            throw InternalError("broken exactly-one row for '" + name + "'");
        value = it->second;
    }
    return M;
}

std::string export_dimacs(const CnfInstance& cnf) {
    std::ostringstream os;
    if (cnf.domain_size > 0)
        os << "c domain " << cnf.domain_size << "\n";
    for (std::size_t i = 0; i < cnf.map.size(); ++i) {
        const GroundAtomRef& ref = cnf.map[i];
        switch (ref.kind) {
        case GroundAtomRef::Kind::P:
            os << "c map " << i + 1 << " p " << ref.var << " " << ref.element << "\n";
            break;
        case GroundAtomRef::Kind::Q:
            os << "c map " << i + 1 << " q " << ref.var << " " << ref.element << "\n";
            break;
        case GroundAtomRef::Kind::R:
            os << "c map " << i + 1 << " r " << ref.var << " " << ref.subset << "\n";
            break;
        case GroundAtomRef::Kind::T:
            break;
        }
    }
    os << "p cnf " << cnf.num_vars << " " << cnf.clauses.size() << "\n";
    for (const auto& c : cnf.clauses) {
        for (int l : c)
            os << l << " ";
        os << "0\n";
    }
    return os.str();
}

CnfInstance import_dimacs(const std::string& text) {
    CnfInstance out;
    std::istringstream is(text);
    std::string line;
    bool header = false;
    std::size_t expected_clauses = 0;
    std::map<int, GroundAtomRef> refs;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::istringstream ls(line);
        if (line[0] == 'c') {
            std::string c, word;
            ls >> c >> word;
            if (word == "domain") {
                ls >> out.domain_size;
            } else if (word == "map") {
                int idx = 0;
                std::string kind, var;
                ls >> idx >> kind;
                GroundAtomRef ref;
                if (kind == "p" || kind == "q") {
                    ls >> var >> ref.element;
                    ref.kind = kind == "p" ? GroundAtomRef::Kind::P : GroundAtomRef::Kind::Q;
                    ref.var = var;
                } else if (kind == "r") {
                    unsigned long s = 0;
                    ls >> var >> s;
                    ref.kind = GroundAtomRef::Kind::R;
                    ref.var = var;
                    ref.subset = static_cast<Mask>(s);
                } else {
                    continue;
                }
                refs[idx] = ref;
            }
            continue;
        }
        if (line[0] == 'p') {
            std::string p, fmt;
            long long v = -1, c = -1;
            ls >> p >> fmt >> v >> c;
            if (fmt != "cnf" || v < 0 || c < 0)
                throw WellFormednessError("malformed DIMACS header: " + line);
            out.num_vars = static_cast<int>(v);
            expected_clauses = static_cast<std::size_t>(c);
            header = true;
            continue;
        }
        if (!header)
            throw WellFormednessError("DIMACS clause before header");
        std::vector<int> clause;
        long long l = 0;
        bool terminated = false;
        while (ls >> l) {
            if (l == 0) {
                terminated = true;
                break;
            }
            if (std::llabs(l) > out.num_vars)
                throw WellFormednessError("DIMACS literal out of range: " + std::to_string(l));
            clause.push_back(static_cast<int>(l));
        }
        if (!terminated)
            throw WellFormednessError("DIMACS clause missing terminating 0");
        out.clauses.push_back(std::move(clause));
    }
    if (!header)
        throw WellFormednessError("missing DIMACS header");
    if (out.clauses.size() != expected_clauses)
        throw WellFormednessError("DIMACS clause count mismatch");
    out.map.resize(out.num_vars);
    for (auto& [idx, ref] : refs)
        if (idx >= 1 && idx <= out.num_vars)
            out.map[idx - 1] = ref;
    return out;
}

} // namespace stratisat
