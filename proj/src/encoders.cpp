#include "stratisat/encoders.hpp"

#include <algorithm>
#include <string>

#include "stratisat/errors.hpp"

namespace stratisat {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond)
        throw WellFormednessError(msg);
}

void require_sort1(const Variable& v) {
    require(v.sort == Sort::Set, "encoder: '" + v.name + "' must have sort 1");
}

void require_sort2(const Variable& v) {
    require(v.sort == Sort::Collection, "encoder: '" + v.name + "' must have sort 2");
}

void require_distinct(const std::vector<Variable>& vs) {
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i + 1; j < vs.size(); ++j)
            require(vs[i] != vs[j], "encoder: arguments must be distinct ('" + vs[i].name + "')");
}

std::set<std::string> names_of(std::initializer_list<Variable> vs) {
    std::set<std::string> out;
    for (const auto& v : vs)
        out.insert(v.name);
    return out;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
    if (!avoid.count(base))
        return base;
    for (int k = 2;; ++k) {
        std::string cand = base + "_" + std::to_string(k);
        if (!avoid.count(cand))
            return cand;
    }
}

std::vector<Variable> fresh0(int count, const std::set<std::string>& avoid,
                             const std::string& base = "z") {
    std::vector<Variable> out;
    std::set<std::string> taken = avoid;
    for (int i = 1; i <= count; ++i) {
        std::string name = fresh_name(count == 1 ? base : base + std::to_string(i), taken);
        taken.insert(name);
        out.push_back({name, Sort::Individual});
    }
    return out;
}

Variable fresh1(const std::set<std::string>& avoid, const std::string& base = "Z") {
    return {fresh_name(base, avoid), Sort::Set};
}

// (forall z)(z in X <-> phi(z))
FormulaPtr former0(const Variable& X, const std::set<std::string>& avoid,
                   const std::function<FormulaPtr(const Variable&)>& phi) {
    Variable z = fresh0(1, avoid)[0];
    return mk_forall0({z}, mk_iff(mk_atom(atom_mem01(z, X)), phi(z)));
}

// (forall Z)(Z in A <-> phi(Z))
FormulaPtr former1(const Variable& A, const std::set<std::string>& avoid,
                   const std::function<FormulaPtr(const Variable&)>& phi) {
    Variable Z = fresh1(avoid);
    return mk_forall1({Z}, mk_iff(mk_atom(atom_mem12(Z, A)), phi(Z)));
}

FormulaPtr not_equal0(const Variable& a, const Variable& b) { return mk_not(mk_atom(atom_eq0(a, b))); }

} // namespace

FormulaPtr build_empty0(Variable X) {
    require_sort1(X);
    return former0(X, names_of({X}), [](const Variable& z) { return mk_not(mk_atom(atom_eq0(z, z))); });
}

FormulaPtr build_universe0(Variable X) {
    require_sort1(X);
    return former0(X, names_of({X}), [](const Variable& z) { return mk_atom(atom_eq0(z, z)); });
}

FormulaPtr build_complement0(Variable X, Variable Y) {
    require_sort1(X);
    require_sort1(Y);
    require_distinct({X, Y});
    return former0(X, names_of({X, Y}),
                   [&](const Variable& z) { return mk_not(mk_atom(atom_mem01(z, Y))); });
}

FormulaPtr build_union0(Variable X, Variable Y1, Variable Y2) {
    require_sort1(X);
    require_sort1(Y1);
    require_sort1(Y2);
    require_distinct({X, Y1, Y2});
    return former0(X, names_of({X, Y1, Y2}), [&](const Variable& z) {
        return mk_or(mk_atom(atom_mem01(z, Y1)), mk_atom(atom_mem01(z, Y2)));
    });
}

FormulaPtr build_intersection0(Variable X, Variable Y1, Variable Y2) {
    require_sort1(X);
    require_sort1(Y1);
    require_sort1(Y2);
    require_distinct({X, Y1, Y2});
    return former0(X, names_of({X, Y1, Y2}), [&](const Variable& z) {
        return mk_and(mk_atom(atom_mem01(z, Y1)), mk_atom(atom_mem01(z, Y2)));
    });
}

FormulaPtr build_difference0(Variable X, Variable Y1, Variable Y2) {
    require_sort1(X);
    require_sort1(Y1);
    require_sort1(Y2);
    require_distinct({X, Y1, Y2});
    return former0(X, names_of({X, Y1, Y2}), [&](const Variable& z) {
        return mk_and(mk_atom(atom_mem01(z, Y1)), mk_not(mk_atom(atom_mem01(z, Y2))));
    });
}

FormulaPtr build_subset(Variable Z, Variable X) {
    require_sort1(Z);
    require_sort1(X);
    Variable z = fresh0(1, names_of({Z, X}))[0];
    return mk_forall0({z}, mk_implies(mk_atom(atom_mem01(z, Z)), mk_atom(atom_mem01(z, X))));
}

FormulaPtr build_cardinality(CardinalityKind kind, Variable Z, int h) {
    require_sort1(Z);
    require(h >= 0, "build_cardinality: h must be nonnegative");
    switch (kind) {
    case CardinalityKind::AtMost: {
        std::vector<Variable> zs = fresh0(h + 1, names_of({Z}));
        std::vector<FormulaPtr> antecedent;
        for (const auto& z : zs)
            antecedent.push_back(mk_atom(atom_mem01(z, Z)));
        std::vector<FormulaPtr> collisions;
        for (std::size_t i = 0; i < zs.size(); ++i)
            for (std::size_t j = i + 1; j < zs.size(); ++j)
                collisions.push_back(mk_atom(atom_eq0(zs[i], zs[j])));
        // h = 0 leaves no collision pair; the consequent degenerates to false
        FormulaPtr consequent =
            collisions.empty() ? mk_not(mk_atom(atom_eq0(zs[0], zs[0]))) : mk_disjunction(collisions);
        return mk_forall0(std::move(zs), mk_implies(mk_conjunction(antecedent), consequent));
    }
    case CardinalityKind::LessThan:
        if (h == 0)
            return mk_not(mk_atom(atom_eq1(Z, Z))); // no set has |Z| < 0
        return build_cardinality(CardinalityKind::AtMost, Z, h - 1);
    case CardinalityKind::AtLeast:
        if (h == 0)
            return mk_atom(atom_eq1(Z, Z));
        return mk_not(build_cardinality(CardinalityKind::AtMost, Z, h - 1));
    case CardinalityKind::Exactly:
        return mk_and(build_cardinality(CardinalityKind::AtMost, Z, h),
                      build_cardinality(CardinalityKind::AtLeast, Z, h));
    }
    throw WellFormednessError("build_cardinality: unknown kind");
}

FormulaPtr build_empty1(Variable A) {
    require_sort2(A);
    return former1(A, names_of({A}), [](const Variable& Z) { return mk_not(mk_atom(atom_eq1(Z, Z))); });
}

FormulaPtr build_universe1(Variable A) {
    require_sort2(A);
    return former1(A, names_of({A}), [](const Variable& Z) { return mk_atom(atom_eq1(Z, Z)); });
}

FormulaPtr build_complement1(Variable A, Variable B) {
    require_sort2(A);
    require_sort2(B);
    require_distinct({A, B});
    return former1(A, names_of({A, B}),
                   [&](const Variable& Z) { return mk_not(mk_atom(atom_mem12(Z, B))); });
}

FormulaPtr build_union1(Variable A, Variable B1, Variable B2) {
    require_sort2(A);
    require_sort2(B1);
    require_sort2(B2);
    require_distinct({A, B1, B2});
    return former1(A, names_of({A, B1, B2}), [&](const Variable& Z) {
        return mk_or(mk_atom(atom_mem12(Z, B1)), mk_atom(atom_mem12(Z, B2)));
    });
}

FormulaPtr build_intersection1(Variable A, Variable B1, Variable B2) {
    require_sort2(A);
    require_sort2(B1);
    require_sort2(B2);
    require_distinct({A, B1, B2});
    return former1(A, names_of({A, B1, B2}), [&](const Variable& Z) {
        return mk_and(mk_atom(atom_mem12(Z, B1)), mk_atom(atom_mem12(Z, B2)));
    });
}

FormulaPtr build_difference1(Variable A, Variable B1, Variable B2) {
    require_sort2(A);
    require_sort2(B1);
    require_sort2(B2);
    require_distinct({A, B1, B2});
    return former1(A, names_of({A, B1, B2}), [&](const Variable& Z) {
        return mk_and(mk_atom(atom_mem12(Z, B1)), mk_not(mk_atom(atom_mem12(Z, B2))));
    });
}

FormulaPtr build_enumeration1(Variable A, const std::vector<Variable>& Xs) {
    require_sort2(A);
    require(!Xs.empty(), "build_enumeration1: need at least one set variable");
    for (const auto& X : Xs)
        require_sort1(X);
    std::set<std::string> avoid = names_of({A});
    for (const auto& X : Xs)
        avoid.insert(X.name);
    return former1(A, avoid, [&](const Variable& Z) {
        std::vector<FormulaPtr> eqs;
        for (const auto& X : Xs)
            eqs.push_back(mk_atom(atom_eq1(Z, X)));
        return mk_disjunction(eqs);
    });
}

FormulaPtr build_pow(Variable A, Variable X) {
    require_sort2(A);
    require_sort1(X);
    return former1(A, names_of({A, X}), [&](const Variable& Z) { return build_subset(Z, X); });
}

namespace {

FormulaPtr pow_variant(Variable A, Variable X, CardinalityKind kind, int h) {
    require_sort2(A);
    require_sort1(X);
    return former1(A, names_of({A, X}), [&](const Variable& Z) {
        return mk_and(build_subset(Z, X), build_cardinality(kind, Z, h));
    });
}

} // namespace

FormulaPtr build_pow_atmost(Variable A, Variable X, int h) {
    return pow_variant(std::move(A), std::move(X), CardinalityKind::AtMost, h);
}

FormulaPtr build_pow_exactly(Variable A, Variable X, int h) {
    return pow_variant(std::move(A), std::move(X), CardinalityKind::Exactly, h);
}

FormulaPtr build_pow_atleast(Variable A, Variable X, int h) {
    return pow_variant(std::move(A), std::move(X), CardinalityKind::AtLeast, h);
}

FormulaPtr build_pow_lessthan(Variable A, Variable X, int h) {
    // pow_{<h+1} coincides with pow_{<=h}
    return pow_variant(std::move(A), std::move(X), CardinalityKind::AtMost, h);
}

FormulaPtr build_pow_star(Variable A, const std::vector<Variable>& Xs) {
    require_sort2(A);
    require(!Xs.empty(), "build_pow_star: need at least one set variable");
    for (const auto& X : Xs)
        require_sort1(X);
    std::set<std::string> avoid = names_of({A});
    for (const auto& X : Xs)
        avoid.insert(X.name);
    return former1(A, avoid, [&](const Variable& Z) {
        std::set<std::string> inner = avoid;
        inner.insert(Z.name);
        Variable z = fresh0(1, inner)[0];
        // Z subseteq X1 u ... u Xk
        std::vector<FormulaPtr> any;
        for (const auto& X : Xs)
            any.push_back(mk_atom(atom_mem01(z, X)));
        FormulaPtr covered =
            mk_forall0({z}, mk_implies(mk_atom(atom_mem01(z, Z)), mk_disjunction(any)));
        // /\_i  ~(Z subseteq ~Xi)
        std::vector<FormulaPtr> meets;
        for (const auto& X : Xs) {
            FormulaPtr avoids_x = mk_forall0(
                {z}, mk_implies(mk_atom(atom_mem01(z, Z)), mk_not(mk_atom(atom_mem01(z, X)))));
            meets.push_back(mk_not(avoids_x));
        }
        return mk_and(covered, mk_conjunction(meets));
    });
}

std::set<Mask> ucp_oracle(const std::vector<Mask>& xs) {
    std::set<Mask> out;
    if (xs.empty())
        return out;
    std::vector<std::vector<int>> pools;
    for (Mask x : xs) {
        std::vector<int> pool;
        for (int u = 0; u < kMaxDomain; ++u)
            if ((x >> u) & 1u)
                pool.push_back(u);
        if (pool.empty())
            return out; // no tuple exists
        pools.push_back(std::move(pool));
    }
    std::vector<std::size_t> idx(pools.size(), 0);
    for (;;) {
        Mask s = 0;
        for (std::size_t i = 0; i < pools.size(); ++i)
            s |= Mask{1} << pools[i][idx[i]];
        out.insert(s);
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == pools[k].size()) {
            idx[k] = 0;
            ++k;
        }
        if (k == idx.size())
            return out;
    }
}

namespace {

std::set<std::string> ucp_avoid(const Variable& A, const std::vector<Variable>& Xs) {
    std::set<std::string> avoid{A.name};
    for (const auto& X : Xs)
        avoid.insert(X.name);
    return avoid;
}

} // namespace

FormulaPtr build_ucp_enum(Variable A, const std::vector<Variable>& Xs) {
    require_sort2(A);
    require(!Xs.empty(), "build_ucp_enum: need n >= 1 set variables");
    for (const auto& X : Xs)
        require_sort1(X);
    std::set<std::string> avoid = ucp_avoid(A, Xs);
    return former1(A, avoid, [&](const Variable& Z) {
        std::set<std::string> inner = avoid;
        inner.insert(Z.name);
        std::vector<Variable> xs = fresh0(static_cast<int>(Xs.size()), inner, "x");
        std::vector<FormulaPtr> parts;
        for (std::size_t i = 0; i < Xs.size(); ++i)
            parts.push_back(mk_atom(atom_mem01(xs[i], Xs[i])));
        parts.push_back(mk_atom(atom_enum_eq(Enumeration{xs}, Z)));
        // (exists x1..xn)(...) as ~forall~
        return mk_not(mk_forall0(xs, mk_not(mk_conjunction(parts))));
    });
}

FormulaPtr build_ucp_disjoint(Variable A, const std::vector<Variable>& Xs) {
    require_sort2(A);
    require(!Xs.empty(), "build_ucp_disjoint: need n >= 1 set variables");
    for (const auto& X : Xs)
        require_sort1(X);
    const int n = static_cast<int>(Xs.size());
    std::set<std::string> avoid = ucp_avoid(A, Xs);
    return former1(A, avoid, [&](const Variable& Z) {
        std::set<std::string> inner = avoid;
        inner.insert(Z.name);
        std::vector<Variable> xs = fresh0(n, inner, "x");
        std::vector<FormulaPtr> parts;
        for (std::size_t i = 0; i < Xs.size(); ++i)
            parts.push_back(mk_and(mk_atom(atom_mem01(xs[i], Xs[i])),
                                   mk_atom(atom_mem01(xs[i], Z))));
        FormulaPtr exists = mk_not(mk_forall0(xs, mk_not(mk_conjunction(parts))));
        return mk_and(build_cardinality(CardinalityKind::Exactly, Z, n), exists);
    });
}

FormulaPtr build_ucp_same(Variable A, Variable X, int n) {
    require_sort2(A);
    require_sort1(X);
    require(n >= 1, "build_ucp_same: need n >= 1");
    return former1(A, names_of({A, X}), [&](const Variable& Z) {
        // members of the product are nonempty sets of up to n elements of X
        return mk_and(build_cardinality(CardinalityKind::AtLeast, Z, 1),
                      mk_and(build_cardinality(CardinalityKind::AtMost, Z, n),
                             build_subset(Z, X)));
    });
}

FormulaPtr build_ucp_partition(Variable A, const std::vector<Variable>& Xs) {
    require_sort2(A);
    require(!Xs.empty() && Xs.size() <= 6, "build_ucp_partition: need 1 <= n <= 6 set variables");
    for (const auto& X : Xs)
        require_sort1(X);
    const int n = static_cast<int>(Xs.size());
    std::set<std::string> avoid = ucp_avoid(A, Xs);
    return former1(A, avoid, [&](const Variable& Z) {
        std::set<std::string> inner = avoid;
        inner.insert(Z.name);
        std::vector<FormulaPtr> disjuncts;
        for (const Partition& P : partitions(n)) {
            const int blocks = static_cast<int>(P.blocks.size());
            std::vector<Variable> zs = fresh0(blocks, inner, "z");
            std::vector<FormulaPtr> body;
            for (int i = 0; i < blocks; ++i)
                for (int j = i + 1; j < blocks; ++j)
                    body.push_back(not_equal0(zs[i], zs[j]));
            for (int i = 0; i < blocks; ++i) {
                std::vector<FormulaPtr> memberships{mk_atom(atom_mem01(zs[i], Z))};
                for (int j : P.blocks[i])
                    memberships.push_back(mk_atom(atom_mem01(zs[i], Xs[j - 1])));
                body.push_back(mk_conjunction(memberships));
            }
            FormulaPtr exists = mk_not(mk_forall0(zs, mk_not(mk_conjunction(body))));
            disjuncts.push_back(mk_and(
                build_cardinality(CardinalityKind::Exactly, Z, blocks), exists));
        }
        return mk_disjunction(disjuncts);
    });
}

std::vector<Partition> partitions(int n) {
    if (n < 1 || n > 12)
        throw WellFormednessError("partitions: n out of the guarded range 1..12");
    std::vector<Partition> out;
    std::vector<int> rgs(n, 0); // restricted growth string over elements 1..n
    for (;;) {
        Partition p;
        int blocks = *std::max_element(rgs.begin(), rgs.end()) + 1;
        p.blocks.assign(blocks, {});
        for (int i = 0; i < n; ++i)
            p.blocks[rgs[i]].push_back(i + 1);
        out.push_back(std::move(p));
        // next restricted growth string in lexicographic order
        int i = n - 1;
        for (; i > 0; --i) {
            int prefix_max = *std::max_element(rgs.begin(), rgs.begin() + i);
            if (rgs[i] <= prefix_max) {
                ++rgs[i];
                std::fill(rgs.begin() + i + 1, rgs.end(), 0);
                break;
            }
            rgs[i] = 0;
        }
        if (i == 0)
            return out;
    }
}

std::uint64_t bell(int n) {
    if (n < 1 || n > 12)
        throw WellFormednessError("bell: n out of the guarded range 1..12");
    return partitions(n).size();
}

std::vector<LengthRow> length_report(int n_max) {
    if (n_max < 1 || n_max > 6)
        throw WellFormednessError("length_report: n_max out of range 1..6");
    Variable A{"A", Sort::Collection};
    std::vector<LengthRow> out;
    for (int n = 1; n <= n_max; ++n) {
        std::vector<Variable> Xs;
        for (int i = 1; i <= n; ++i)
            Xs.push_back({"X" + std::to_string(i), Sort::Set});
        LengthRow row;
        row.n = n;
        row.bell = bell(n);
        row.len_enum = formula_length(build_ucp_enum(A, Xs));
        FormulaPtr part = build_ucp_partition(A, Xs);
        row.len_partition = formula_length(part);
        // measure the or-spine of the built matrix rather than trusting the
        // enumerator that produced it
        FormulaPtr rhs = part->lhs()->rhs();
        std::size_t leaves = 1;
        while (rhs->kind() == Formula::Kind::Or) {
            ++leaves;
            rhs = rhs->rhs();
        }
        row.partition_disjuncts = leaves;
        out.push_back(row);
    }
    return out;
}

} // namespace stratisat
