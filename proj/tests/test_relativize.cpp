#include <doctest.h>

#include <bit>

#include "helpers.hpp"
#include "oracles.hpp"
#include "stratisat/errors.hpp"
#include "stratisat/relativize.hpp"
#include "stratisat/search.hpp"

using namespace ts;
using stratisat::build_universe;
using stratisat::distinguish;
using stratisat::domain_bound;
using stratisat::NormalizedConjunction;
using stratisat::RelativizationParams;
using stratisat::RelativizedModel;
using stratisat::relativize;
using stratisat::UniverseReport;

TEST_CASE("full-domain relativization is the identity") {
    Interpretation M;
    M.m = 3;
    M.assign0["x"] = 2;
    M.assign1["X"] = 0b101;
    M.assign2["A"] = {0b000, 0b101};
    RelativizationParams p;
    p.dstar = {0, 1, 2};
    p.anchor = 0;
    p.v0prime = {"x"};
    p.v1prime = {"X"};
    p.l = 3;
    RelativizedModel rel = relativize(M, p);
    CHECK(rel.model == M);
}

TEST_CASE("stray sort-0 values are redirected to the anchor") {
    Interpretation M;
    M.m = 2;
    M.assign0["x"] = 1;
    RelativizationParams p;
    p.dstar = {0};
    p.anchor = 0;
    p.l = 1;
    RelativizedModel rel = relativize(M, p);
    CHECK(rel.model.m == 1);
    CHECK(rel.model.assign0.at("x") == 0);
}

TEST_CASE("collection values keep retained distinguished sets") {
    // MX = {0,1} in MA; with D* = {0} the trace {0} of MX enters M*A
    Interpretation M;
    M.m = 2;
    M.assign1["X"] = 0b11;
    M.assign2["A"] = {0b11};
    RelativizationParams p;
    p.dstar = {0};
    p.anchor = 0;
    p.v1prime = {"X"};
    p.l = 1;
    RelativizedModel rel = relativize(M, p);
    CHECK(rel.model.assign1.at("X") == 0b1);
    CHECK(rel.model.assign2.at("A") == std::set<Mask>{0b1});
}

TEST_CASE("parameter validation") {
    Interpretation M;
    M.m = 2;
    RelativizationParams p;
    CHECK_THROWS_AS(relativize(M, p), WellFormednessError); // empty D*
    p.dstar = {0};
    p.anchor = 1;
    CHECK_THROWS_AS(relativize(M, p), WellFormednessError); // anchor outside D*
    p.anchor = 0;
    p.l = 0;
    CHECK_THROWS_AS(relativize(M, p), WellFormednessError); // l must be positive
    p.l = 1;
    p.v0prime = {"missing"};
    CHECK_THROWS_AS(relativize(M, p), WellFormednessError);
}

TEST_CASE("relativization matches the per-subset oracle") {
    Rng rng(51);
    for (int iter = 0; iter < 400; ++iter) {
        int m = pick(rng, 1, 3);
        VariableSets vars;
        vars.v0 = {v0("x1"), v0("x2")};
        vars.v1 = {v1("X1"), v1("X2")};
        vars.v2 = {v2("A")};
        Interpretation M = random_model(rng, m, vars);
        RelativizationParams p;
        for (int e = 0; e < m; ++e)
            if (chance(rng, 0.6))
                p.dstar.insert(e);
        if (p.dstar.empty())
            p.dstar.insert(pick(rng, 0, m - 1));
        auto it = p.dstar.begin();
        std::advance(it, pick(rng, 0, static_cast<int>(p.dstar.size()) - 1));
        p.anchor = *it;
        if (chance(rng, 0.7)) p.v0prime.insert("x1");
        if (chance(rng, 0.7)) p.v0prime.insert("x2");
        if (chance(rng, 0.7)) p.v1prime.insert("X1");
        if (chance(rng, 0.7)) p.v1prime.insert("X2");
        p.l = pick(rng, 1, 3);

        RelativizedModel rel = relativize(M, p);
        // sort-0 and sort-1 parts, element by element
        for (const auto& [name, v] : M.assign0) {
            int expect = p.dstar.count(v) ? v : p.anchor;
            CHECK(rel.to_original(rel.model.assign0.at(name)) == expect);
        }
        for (const auto& [name, s] : M.assign1) {
            Mask got = rel.model.assign1.at(name);
            for (int e = 0; e < rel.model.m; ++e) {
                bool member = (got >> e) & 1u;
                int orig = rel.to_original(e);
                CHECK(member == (((s >> orig) & 1u) != 0));
            }
        }
        // collection membership decided per candidate subset of D*
        const auto& got = rel.model.assign2.at("A");
        for (Mask s = 0; s <= full_mask(rel.model.m); ++s) {
            Mask original = 0;
            for (int e = 0; e < rel.model.m; ++e)
                if ((s >> e) & 1u)
                    original |= Mask{1} << rel.to_original(e);
            CHECK(got.count(s) == static_cast<std::size_t>(
                                      oracle_relativized_member(M, p, "A", original) ? 1 : 0));
        }
    }
}

TEST_CASE("distinguish separates unequal sets within the stated bound") {
    auto d0 = distinguish({0b00, 0b01, 0b11});
    CHECK(d0.size() <= 2);
    Mask mask = 0;
    for (int e : d0)
        mask |= Mask{1} << e;
    CHECK((0b00 & mask) != (0b01 & mask));
    CHECK((0b01 & mask) != (0b11 & mask));
    CHECK((0b00 & mask) != (0b11 & mask));

    CHECK(distinguish({0b101, 0b101, 0b101}).empty());
    CHECK(distinguish({0b1000, 0b0000}) == std::set<int>{3});
}

TEST_CASE("distinguish randomized: postcondition and cardinality bound") {
    Rng rng(52);
    for (int iter = 0; iter < 300; ++iter) {
        int m = pick(rng, 1, 6);
        int k = pick(rng, 1, 6);
        std::vector<Mask> sets;
        std::uniform_int_distribution<Mask> dist(0, full_mask(m));
        for (int i = 0; i < k; ++i)
            sets.push_back(dist(rng));
        auto d0 = distinguish(sets);
        Mask mask = 0;
        for (int e : d0)
            mask |= Mask{1} << e;
        std::set<Mask> distinct(sets.begin(), sets.end());
        CHECK(d0.size() + 1 <= std::max<std::size_t>(distinct.size(), 1));
        for (std::size_t i = 0; i < sets.size(); ++i)
            for (std::size_t j = i + 1; j < sets.size(); ++j)
                if (sets[i] != sets[j])
                    CHECK((sets[i] & mask) != (sets[j] & mask));
    }
}

namespace {

NormalizedConjunction conj_of(const std::vector<FormulaPtr>& lits) {
    NormalizedConjunction out;
    for (const auto& l : lits) {
        if (l->kind() == Formula::Kind::Forall0)
            out.literals2.push_back(l);
        else if (l->kind() == Formula::Kind::Forall1)
            out.literals3.push_back(l);
        else
            out.literals1.push_back(l);
    }
    return out;
}

} // namespace

TEST_CASE("universe construction without level-1 universals") {
    Interpretation M;
    M.m = 4;
    M.assign0["x"] = 3;
    M.assign1["X"] = 0b0110;
    NormalizedConjunction psi = conj_of({mem01(v0("x"), v1("X"))});
    // not actually satisfied is irrelevant here; feed a satisfying model
    M.assign1["X"] = 0b1110;
    UniverseReport rep = build_universe(M, psi);
    CHECK(rep.witnesses.empty());
    std::set<int> expected = rep.base;
    expected.insert(rep.d0.begin(), rep.d0.end());
    expected.insert(rep.d1.begin(), rep.d1.end());
    CHECK(rep.dstar == expected);
    CHECK(rep.base == std::set<int>{3});
    // D1 holds min(l+1, |MX|) = 2 smallest members of MX
    CHECK(rep.d1 == std::set<int>{1, 2});
    CHECK(rep.anchor == *rep.dstar.begin());
}

TEST_CASE("universe construction covers a failing instantiation with witnesses") {
    // psi = (forall Z)(Z in A -> (forall z)(z in Z -> z in X))
    auto inner = mk_forall0({v0("z")},
                            mk_implies(mem01(v0("z"), v1("Z")), mem01(v0("z"), v1("X"))));
    auto lit3 = mk_forall1({v1("Z")}, mk_implies(mem12(v1("Z"), v2("A")), inner));
    NormalizedConjunction psi = conj_of({lit3, mem01(v0("x"), v1("X"))});
    Interpretation M;
    M.m = 3;
    M.assign0["x"] = 0;
    M.assign1["X"] = 0b001;
    M.assign2["A"] = {0b000, 0b001};
    REQUIRE(evaluate(M, psi.as_formula()));
    UniverseReport rep = build_universe(M, psi);
    // substituting X for Z gives a true instance here, so a witness exists
    // only if the substituted instance fails; either way D* stays within the
    // bound and the relativized model still satisfies psi
    CHECK(rep.dstar.size() <= domain_bound(psi));
    RelativizedModel rel = relativize(M, rep.params());
    CHECK(evaluate(rel.model, psi.as_formula()));
}

TEST_CASE("witness elements enter the universe for failing instances") {
    // (forall Z)((forall z)(z in Z -> z in X1) | x in X1): the escape
    // disjunct holds in the model, so the universal is satisfied even
    // though the inner component fails under the substitution Z := X2.
    auto inner = mk_forall0(
        {v0("z")}, mk_implies(mem01(v0("z"), v1("Z")), mem01(v0("z"), v1("X1"))));
    auto lit3 = mk_forall1({v1("Z")}, mk_or(inner, mem01(v0("x"), v1("X1"))));
    NormalizedConjunction psi = conj_of({lit3, mem01(v0("y"), v1("X2"))});
    Interpretation M;
    M.m = 3;
    M.assign0["x"] = 0;
    M.assign0["y"] = 1;
    M.assign1["X1"] = 0b001; // x in X1: the escape is on
    M.assign1["X2"] = 0b110; // Z := X2 falsifies the inner universal at z = 1
    REQUIRE(evaluate(M, psi.as_formula()));
    UniverseReport rep = build_universe(M, psi);
    REQUIRE_FALSE(rep.witnesses.empty());
    bool found = false;
    for (const auto& w : rep.witnesses)
        if (w.substitution == std::vector<std::string>{"X2"} && w.elements == std::vector<int>{1})
            found = true;
    CHECK(found); // the lexicographically first falsifying element
    CHECK(rep.dstar.count(1) == 1);
    // and the relativized model still satisfies the conjunction
    RelativizedModel rel = relativize(M, rep.params());
    CHECK(evaluate(rel.model, psi.as_formula()));
    CHECK(rep.dstar.size() <= domain_bound(psi));
}

TEST_CASE("domain bound formula on pinned instances") {
    // |V0|=2, |V1|=1, l=1, no type-(III) conjuncts: 2 + 0 + 2 = 4
    NormalizedConjunction a =
        conj_of({enum_eq({v0("x")}, v1("X")), mem01(v0("y"), v1("X"))});
    CHECK(domain_bound(a) == 4);

    // |V0|=1, |V1|=0: clamps at 1
    NormalizedConjunction b = conj_of({eq0(v0("x"), v0("x"))});
    CHECK(domain_bound(b) == 1);

    // one level-1 universal (m=1) holding one inner level-0 universal (n=2),
    // |Phi|=1, |V1|=2, l=1, |V0|=0: 0 + 1 + 4 + 2*2*1 = 9
    auto inner = mk_forall0({v0("z1"), v0("z2")},
                            mk_implies(mk_and(mem01(v0("z1"), v1("Z")), mem01(v0("z2"), v1("Z"))),
                                       eq0(v0("z1"), v0("z2"))));
    auto lit3 = mk_forall1({v1("Z")}, inner);
    NormalizedConjunction c = conj_of({lit3, eq1(v1("X1"), v1("X2"))});
    CHECK(domain_bound(c) == 9);
}

TEST_CASE("universe reports keep the distinguishing-set bound") {
    Rng rng(53);
    for (int iter = 0; iter < 100; ++iter) {
        int m = pick(rng, 2, 3);
        VariableSets vars;
        vars.v1 = {v1("X1"), v1("X2")};
        vars.v0 = {v0("x1")};
        Interpretation M = random_model(rng, m, vars);
        NormalizedConjunction psi = conj_of(
            {mem01(v0("x1"), v1("X1")), eq1(v1("X2"), v1("X2"))});
        if (!evaluate(M, psi.as_formula()))
            continue;
        UniverseReport rep = build_universe(M, psi);
        CHECK(rep.d0.size() + 1 <= std::max<std::size_t>(2, 1) + 0 + 1); // |D0| <= |V1|-1
        CHECK(rep.d0.size() <= 1);
        CHECK(rep.dstar.size() <= domain_bound(psi));
    }
}
