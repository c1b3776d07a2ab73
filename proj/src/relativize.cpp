#include "stratisat/relativize.hpp"

#include <algorithm>
#include <bit>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "stratisat/errors.hpp"

namespace stratisat {

int RelativizedModel::to_canonical(int original) const {
    auto it = std::lower_bound(element_map.begin(), element_map.end(), original);
    if (it == element_map.end() || *it != original)
        return -1;
    return static_cast<int>(it - element_map.begin());
}

namespace {

Mask set_to_mask(const std::set<int>& s) {
    Mask out = 0;
    for (int e : s)
        out |= Mask{1} << e;
    return out;
}

// All submasks of pool with at most l bits set (the empty set included).
std::set<Mask> pow_upto(Mask pool, int l) {
    std::set<Mask> out;
    Mask sub = pool;
    for (;;) {
        if (std::popcount(sub) <= l)
            out.insert(sub);
        if (sub == 0)
            break;
        sub = (sub - 1) & pool;
    }
    return out;
}

Mask remap_mask(Mask s, const std::vector<int>& element_map) {
    Mask out = 0;
    for (std::size_t i = 0; i < element_map.size(); ++i)
        if ((s >> element_map[i]) & 1u)
            out |= Mask{1} << i;
    return out;
}

} // namespace

RelativizedModel relativize(const Interpretation& M, const RelativizationParams& p) {
    if (p.dstar.empty())
        throw WellFormednessError("relativize: D* must be nonempty");
    for (int e : p.dstar)
        if (e < 0 || e >= M.m)
            throw WellFormednessError("relativize: D* element out of domain");
    if (!p.dstar.count(p.anchor))
        throw WellFormednessError("relativize: anchor must belong to D*");
    if (p.l < 1)
        throw WellFormednessError("relativize: l must be positive");
    for (const auto& name : p.v0prime)
        if (!M.assign0.count(name))
            throw WellFormednessError("relativize: V0' variable '" + name + "' unassigned");
    for (const auto& name : p.v1prime)
        if (!M.assign1.count(name))
            throw WellFormednessError("relativize: V1' variable '" + name + "' unassigned");

    const Mask dmask = set_to_mask(p.dstar);

    // Original-space values first.
    std::map<std::string, int> star0;
    for (const auto& [name, v] : M.assign0)
        star0[name] = p.dstar.count(v) ? v : p.anchor;
    std::map<std::string, Mask> star1;
    for (const auto& [name, s] : M.assign1)
        star1[name] = s & dmask;

    Mask pool = 0; // {M*x : x in V0'}
    for (const auto& name : p.v0prime)
        pool |= Mask{1} << star0.at(name);
    std::set<Mask> star_v1; // {M*X : X in V1'}
    for (const auto& name : p.v1prime)
        star_v1.insert(star1.at(name));
    std::set<Mask> small = pow_upto(pool, p.l);

    std::map<std::string, std::set<Mask>> star2;
    for (const auto& [name, collection] : M.assign2) {
        std::set<Mask> out;
        // (MA ∩ pow(D*)) minus the specially handled subsets
        for (Mask s : collection)
            if ((s & ~dmask) == 0 && !star_v1.count(s) && !small.count(s))
                out.insert(s);
        // {M*X : X in V1', MX in MA}
        for (const auto& xname : p.v1prime)
            if (collection.count(M.assign1.at(xname)))
                out.insert(star1.at(xname));
        // pow_{<=l}(pool) ∩ MA
        for (Mask s : small)
            if (collection.count(s))
                out.insert(s);
        star2[name] = std::move(out);
    }

    RelativizedModel out;
    out.element_map.assign(p.dstar.begin(), p.dstar.end());
    out.model.m = static_cast<int>(out.element_map.size());
    std::vector<int> canon(M.m, -1);
    for (std::size_t i = 0; i < out.element_map.size(); ++i)
        canon[out.element_map[i]] = static_cast<int>(i);
    for (const auto& [name, v] : star0)
        out.model.assign0[name] = canon[v];
    for (const auto& [name, s] : star1)
        out.model.assign1[name] = remap_mask(s, out.element_map);
    for (const auto& [name, collection] : star2) {
        std::set<Mask> remapped;
        for (Mask s : collection)
            remapped.insert(remap_mask(s, out.element_map));
        out.model.assign2[name] = std::move(remapped);
    }
    return out;
}

std::set<int> distinguish(const std::vector<Mask>& sets) {
    std::set<int> d0;
    Mask d0mask = 0;
    for (;;) {
        bool split = false;
        for (std::size_t i = 0; i < sets.size() && !split; ++i) {
            for (std::size_t j = i + 1; j < sets.size() && !split; ++j) {
                if (sets[i] == sets[j] || (sets[i] & d0mask) != (sets[j] & d0mask))
                    continue;
                Mask diff = sets[i] ^ sets[j];
                int element = std::countr_zero(diff);
                d0.insert(element);
                d0mask |= Mask{1} << element;
                split = true;
            }
        }
        if (!split)
            return d0;
    }
}

RelativizationParams UniverseReport::params() const {
    RelativizationParams p;
    p.dstar = dstar;
    p.anchor = anchor;
    p.v0prime = v0prime;
    p.v1prime = v1prime;
    p.l = l;
    return p;
}

UniverseReport build_universe(const Interpretation& M, const NormalizedConjunction& psi,
                              std::uint64_t budget) {
    UniverseReport rep;
    FormulaPtr whole = psi.as_formula();
    VariableSets fv = free_variables(whole);
    rep.l = enum_bound(whole);
    for (const auto& x : fv.v0) {
        auto it = M.assign0.find(x.name);
        if (it == M.assign0.end())
            throw EvalError("build_universe: unassigned variable '" + x.name + "'");
        rep.base.insert(it->second);
        rep.v0prime.insert(x.name);
    }
    std::vector<Variable> v1(fv.v1.begin(), fv.v1.end());
    std::vector<Mask> values;
    for (const auto& X : v1) {
        auto it = M.assign1.find(X.name);
        if (it == M.assign1.end())
            throw EvalError("build_universe: unassigned variable '" + X.name + "'");
        values.push_back(it->second);
        rep.v1prime.insert(X.name);
    }
    rep.d0 = distinguish(values);
    // D1: the min(l+1, |MX|) smallest elements of each distinct value.
    std::set<Mask> distinct(values.begin(), values.end());
    for (Mask s : distinct) {
        int need = rep.l + 1;
        for (int u = 0; u < M.m && need > 0; ++u)
            if ((s >> u) & 1u) {
                rep.d1.insert(u);
                --need;
            }
    }

    // Witness insertion: for each level-0 universal component of a type-(III)
    // matrix and each substitution of the block's variables by free set
    // variables that falsifies the instance, record falsifying elements.
    struct Task {
        FormulaPtr component;
        FormulaPtr substituted;
        std::vector<std::string> names;
    };
    std::vector<Task> tasks;
    for (const auto& lit3 : psi.literals3) {
        const std::vector<Variable>& zvars = lit3->bound();
        for (const auto& comp : propositional_components(lit3->lhs())) {
            if (comp->kind() != Formula::Kind::Forall0)
                continue;
            std::vector<std::size_t> idx(zvars.size(), 0);
            if (v1.empty() && !zvars.empty())
                continue;
            for (;;) {
                std::vector<std::pair<Variable, Variable>> subst;
                std::vector<std::string> names;
                for (std::size_t k = 0; k < zvars.size(); ++k) {
                    subst.emplace_back(zvars[k], v1[idx[k]]);
                    names.push_back(v1[idx[k]].name);
                }
                tasks.push_back({comp, substitute1(comp, subst), std::move(names)});
                std::size_t k = 0;
                while (k < idx.size() && ++idx[k] == v1.size()) {
                    idx[k] = 0;
                    ++k;
                }
                if (k == idx.size())
                    break;
            }
        }
    }

    std::uint64_t per_task = tasks.empty() ? budget : std::max<std::uint64_t>(1, budget / tasks.size());
    std::vector<std::optional<WitnessRecord>> results(tasks.size());
    std::vector<std::string> failures(tasks.size());
    std::vector<bool> internal(tasks.size(), false);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::int64_t t = 0; t < static_cast<std::int64_t>(tasks.size()); ++t) {
        const Task& task = tasks[static_cast<std::size_t>(t)];
        try {
            if (evaluate(M, task.substituted))
                continue;
            // The instance fails, so some element tuple falsifies the matrix.
            const std::vector<Variable>& bound = task.substituted->bound();
            const FormulaPtr matrix = task.substituted->lhs();
            std::vector<int> tuple(bound.size(), 0);
            std::uint64_t scanned = 0;
            for (;;) {
                if (++scanned > per_task)
                    throw ResourceLimitError("witness-search", "budget exceeded");
                std::vector<Binding> bs;
                for (std::size_t k = 0; k < bound.size(); ++k)
                    bs.push_back(bind0(bound[k], tuple[k]));
                if (!evaluate(update(M, bs), matrix)) {
                    WitnessRecord w;
                    w.component = task.component;
                    w.substitution = task.names;
                    w.elements = tuple;
                    results[static_cast<std::size_t>(t)] = std::move(w);
                    break;
                }
                std::size_t k = 0;
                while (k < tuple.size() && ++tuple[k] == M.m) {
                    tuple[k] = 0;
                    ++k;
                }
                if (k == tuple.size())
                    throw InternalError("witness-search: failing instance has no falsifying tuple");
            }
        } catch (const InternalError& e) {
            failures[static_cast<std::size_t>(t)] = e.what();
            internal[static_cast<std::size_t>(t)] = true;
        } catch (const std::exception& e) {
            failures[static_cast<std::size_t>(t)] = e.what();
        }
    }
    for (std::size_t t = 0; t < failures.size(); ++t) {
        if (failures[t].empty())
            continue;
        if (internal[t])
            throw InternalError(failures[t]);
        throw ResourceLimitError("witness-search", failures[t]);
    }
    for (auto& r : results)
        if (r)
            rep.witnesses.push_back(std::move(*r));

    rep.dstar = rep.base;
    rep.dstar.insert(rep.d0.begin(), rep.d0.end());
    rep.dstar.insert(rep.d1.begin(), rep.d1.end());
    for (const auto& w : rep.witnesses)
        rep.dstar.insert(w.elements.begin(), w.elements.end());
    if (rep.dstar.empty())
        rep.dstar.insert(0); // the retained universe must be nonempty
    rep.anchor = *rep.dstar.begin();
    rep.bound_used = domain_bound(psi);
    return rep;
}

namespace {

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > UINT64_MAX / a)
        return UINT64_MAX;
    return a * b;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
    return a > UINT64_MAX - b ? UINT64_MAX : a + b;
}

} // namespace

std::uint64_t domain_bound(const NormalizedConjunction& psi) {
    FormulaPtr whole = psi.as_formula();
    VariableSets fv = free_variables(whole);
    const std::uint64_t n0 = fv.v0.size();
    const std::uint64_t n1 = fv.v1.size();
    const std::uint64_t l = static_cast<std::uint64_t>(enum_bound(whole));

    std::uint64_t phi = 0, quant1 = 0, quant0 = 0;
    for (const auto& lit3 : psi.literals3) {
        quant1 = std::max<std::uint64_t>(quant1, lit3->bound().size());
        for (const auto& comp : propositional_components(lit3->lhs())) {
            ++phi;
            if (comp->kind() == Formula::Kind::Forall0)
                quant0 = std::max<std::uint64_t>(quant0, comp->bound().size());
        }
    }
    std::uint64_t witness_term = 0;
    if (phi > 0 && quant0 > 0) {
        std::uint64_t tuples = 1;
        for (std::uint64_t i = 0; i < quant1; ++i)
            tuples = sat_mul(tuples, n1);
        witness_term = sat_mul(quant0, sat_mul(tuples, phi));
    }
    std::uint64_t bound = n0;
    bound = sat_add(bound, n1 > 0 ? n1 - 1 : 0);
    bound = sat_add(bound, sat_mul(l + 1, n1));
    bound = sat_add(bound, witness_term);
    return std::max<std::uint64_t>(1, bound);
}

} // namespace stratisat
