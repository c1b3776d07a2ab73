#include <doctest.h>

#include <bit>

#include "helpers.hpp"
#include "oracles.hpp"
#include "stratisat/encoders.hpp"
#include "stratisat/errors.hpp"
#include "stratisat/normalize.hpp"
#include "stratisat/parser.hpp"

using namespace ts;
using namespace stratisat;

namespace {

const Variable A = v2("A");
const Variable X = v1("X");
const Variable Y1 = v1("Y1");
const Variable Y2 = v1("Y2");

// Exhaustively checks that the builder's formula holds exactly when the
// result variable carries the oracle value, over every assignment of the
// argument variables (and every candidate result value) at domain size m.
void check_level1_builder(const FormulaPtr& f, const std::string& result,
                          const std::vector<std::string>& args, int m,
                          const std::function<std::set<Mask>(const std::vector<Mask>&)>& oracle) {
    std::vector<Mask> values(args.size(), 0);
    for (;;) {
        Interpretation M;
        M.m = m;
        for (std::size_t i = 0; i < args.size(); ++i)
            M.assign1[args[i]] = values[i];
        std::set<Mask> expected = oracle(values);
        // completeness: the oracle value satisfies the formula
        M.assign2[result] = expected;
        CHECK_MESSAGE(evaluate(M, f), render_formula(f));
        // soundness: flipping any single subset in or out falsifies it
        for (Mask flip = 0; flip <= full_mask(m); ++flip) {
            std::set<Mask> tweaked = expected;
            if (tweaked.count(flip))
                tweaked.erase(flip);
            else
                tweaked.insert(flip);
            M.assign2[result] = tweaked;
            CHECK_FALSE(evaluate(M, f));
        }
        std::size_t k = 0;
        while (k < values.size() && ++values[k] > full_mask(m)) {
            values[k] = 0;
            ++k;
        }
        if (k == values.size())
            return;
    }
}

// Same idea one level down: the level-0 builders pin a sort-1 result.
void check_level0_builder(const FormulaPtr& f, const std::string& result,
                          const std::vector<std::string>& args, int m,
                          const std::function<Mask(const std::vector<Mask>&)>& oracle) {
    std::vector<Mask> values(args.size(), 0);
    for (;;) {
        Interpretation M;
        M.m = m;
        for (std::size_t i = 0; i < args.size(); ++i)
            M.assign1[args[i]] = values[i];
        Mask expected = oracle(values);
        for (Mask candidate = 0; candidate <= full_mask(m); ++candidate) {
            M.assign1[result] = candidate;
            CHECK(evaluate(M, f) == (candidate == expected));
        }
        std::size_t k = 0;
        while (k < values.size() && ++values[k] > full_mask(m)) {
            values[k] = 0;
            ++k;
        }
        if (k == values.size())
            return;
    }
}

} // namespace

TEST_CASE("level-0 boolean formers against bitwise oracles") {
    for (int m = 1; m <= 3; ++m) {
        check_level0_builder(build_empty0(X), "X", {}, m, [&](const auto&) { return Mask{0}; });
        check_level0_builder(build_universe0(X), "X", {}, m,
                             [&](const auto&) { return full_mask(m); });
        check_level0_builder(build_complement0(X, Y1), "X", {"Y1"}, m,
                             [&](const std::vector<Mask>& v) { return ~v[0] & full_mask(m); });
        check_level0_builder(build_union0(X, Y1, Y2), "X", {"Y1", "Y2"}, m,
                             [&](const std::vector<Mask>& v) { return v[0] | v[1]; });
        check_level0_builder(build_intersection0(X, Y1, Y2), "X", {"Y1", "Y2"}, m,
                             [&](const std::vector<Mask>& v) { return v[0] & v[1]; });
        check_level0_builder(build_difference0(X, Y1, Y2), "X", {"Y1", "Y2"}, m,
                             [&](const std::vector<Mask>& v) { return v[0] & ~v[1]; });
    }
}

TEST_CASE("argument validation") {
    CHECK_THROWS_AS(build_union0(X, X, Y1), WellFormednessError);
    CHECK_THROWS_AS(build_pow(A, v2("B")), WellFormednessError); // sort mismatch
    CHECK_THROWS_AS(build_cardinality(CardinalityKind::AtMost, X, -1), WellFormednessError);
    CHECK_THROWS_AS(build_enumeration1(A, {}), WellFormednessError);
}

TEST_CASE("cardinality shapes") {
    FormulaPtr zkey = build_cardinality(CardinalityKind::AtMost, v1("Z"), 1);
    CHECK(render_formula(zkey) ==
          "forall z1 z2 . z1 in Z & z2 in Z -> z1 = z2");
    FormulaPtr ge0 = build_cardinality(CardinalityKind::AtLeast, v1("Z"), 0);
    CHECK(structurally_equal(ge0, eq1(v1("Z"), v1("Z"))));
}

TEST_CASE("cardinality semantics over every subset") {
    for (int m = 1; m <= 3; ++m) {
        for (int h = 0; h <= 3; ++h) {
            auto le = build_cardinality(CardinalityKind::AtMost, v1("Z"), h);
            auto lt = build_cardinality(CardinalityKind::LessThan, v1("Z"), h);
            auto ge = build_cardinality(CardinalityKind::AtLeast, v1("Z"), h);
            auto eq = build_cardinality(CardinalityKind::Exactly, v1("Z"), h);
            for (Mask s = 0; s <= full_mask(m); ++s) {
                Interpretation M;
                M.m = m;
                M.assign1["Z"] = s;
                int size = std::popcount(s);
                CHECK(evaluate(M, le) == (size <= h));
                CHECK(evaluate(M, lt) == (size < h));
                CHECK(evaluate(M, ge) == (size >= h));
                CHECK(evaluate(M, eq) == (size == h));
            }
        }
    }
}

TEST_CASE("level-1 boolean formers against set oracles") {
    Variable B1 = v2("B1"), B2 = v2("B2");
    for (int m = 1; m <= 2; ++m) {
        // boolean compositions need concrete collections; check against
        // randomly drawn operands instead of the full double exponent
        Rng rng(71);
        for (int iter = 0; iter < 40; ++iter) {
            VariableSets vars;
            vars.v2 = {B1, B2};
            Interpretation M = random_model(rng, m, vars);
            const auto& b1 = M.assign2.at("B1");
            const auto& b2 = M.assign2.at("B2");
            std::set<Mask> all;
            for (Mask s = 0; s <= full_mask(m); ++s)
                all.insert(s);

            auto check = [&](const FormulaPtr& f, std::set<Mask> expected) {
                Interpretation N = M;
                N.assign2["A"] = expected;
                CHECK(evaluate(N, f));
                for (Mask flip = 0; flip <= full_mask(m); ++flip) {
                    std::set<Mask> tweaked = expected;
                    if (tweaked.count(flip))
                        tweaked.erase(flip);
                    else
                        tweaked.insert(flip);
                    N.assign2["A"] = tweaked;
                    CHECK_FALSE(evaluate(N, f));
                }
            };
            check(build_empty1(A), {});
            check(build_universe1(A), all);
            std::set<Mask> compl_b1;
            for (Mask s : all)
                if (!b1.count(s))
                    compl_b1.insert(s);
            check(build_complement1(A, B1), compl_b1);
            std::set<Mask> uni = b1;
            uni.insert(b2.begin(), b2.end());
            check(build_union1(A, B1, B2), uni);
            std::set<Mask> inter;
            for (Mask s : b1)
                if (b2.count(s))
                    inter.insert(s);
            check(build_intersection1(A, B1, B2), inter);
            std::set<Mask> diff;
            for (Mask s : b1)
                if (!b2.count(s))
                    diff.insert(s);
            check(build_difference1(A, B1, B2), diff);
        }
    }
}

TEST_CASE("collection enumeration former") {
    for (int m = 1; m <= 3; ++m)
        check_level1_builder(build_enumeration1(A, {Y1, Y2}), "A", {"Y1", "Y2"}, m,
                             [](const std::vector<Mask>& v) {
                                 return std::set<Mask>{v[0], v[1]};
                             });
}

TEST_CASE("power collection variants against oracles") {
    for (int m = 1; m <= 3; ++m) {
        check_level1_builder(build_pow(A, X), "A", {"X"}, m,
                             [](const std::vector<Mask>& v) { return oracle_pow(v[0]); });
        for (int h = 0; h <= 2; ++h) {
            check_level1_builder(build_pow_atmost(A, X, h), "A", {"X"}, m,
                                 [&](const std::vector<Mask>& v) {
                                     return oracle_pow_atmost(v[0], h);
                                 });
            check_level1_builder(build_pow_exactly(A, X, h), "A", {"X"}, m,
                                 [&](const std::vector<Mask>& v) {
                                     return oracle_pow_exactly(v[0], h);
                                 });
            check_level1_builder(build_pow_atleast(A, X, h), "A", {"X"}, m,
                                 [&](const std::vector<Mask>& v) {
                                     return oracle_pow_atleast(v[0], h);
                                 });
            check_level1_builder(build_pow_lessthan(A, X, h), "A", {"X"}, m,
                                 [&](const std::vector<Mask>& v) {
                                     return oracle_pow_atmost(v[0], h);
                                 });
        }
    }
}

TEST_CASE("pow* against its oracle") {
    for (int m = 1; m <= 3; ++m) {
        check_level1_builder(build_pow_star(A, {X}), "A", {"X"}, m,
                             [&](const std::vector<Mask>& v) { return oracle_pow_star(v, m); });
        check_level1_builder(build_pow_star(A, {Y1, Y2}), "A", {"Y1", "Y2"}, m,
                             [&](const std::vector<Mask>& v) { return oracle_pow_star(v, m); });
    }
}

TEST_CASE("pow* literal examples") {
    CHECK(oracle_pow_star({0b1}, 1) == std::set<Mask>{0b1});
    CHECK(oracle_pow_star({0b01, 0b10}, 2) == std::set<Mask>{0b11});
}

TEST_CASE("unordered product oracle basics") {
    CHECK(ucp_oracle({0b01, 0b10}) == std::set<Mask>{0b11});
    CHECK(ucp_oracle({0b11, 0b10}) == std::set<Mask>{0b11, 0b10});
    CHECK(ucp_oracle({0b11, 0b11}) == std::set<Mask>{0b01, 0b10, 0b11});
    CHECK(ucp_oracle({0b00, 0b11}).empty());
}

TEST_CASE("enumeration-based product encoding matches the oracle") {
    for (int m = 1; m <= 3; ++m) {
        check_level1_builder(build_ucp_enum(A, {X}), "A", {"X"}, m,
                             [](const std::vector<Mask>& v) { return ucp_oracle(v); });
        check_level1_builder(build_ucp_enum(A, {Y1, Y2}), "A", {"Y1", "Y2"}, m,
                             [](const std::vector<Mask>& v) { return ucp_oracle(v); });
    }
}

TEST_CASE("partition-based product encoding matches the oracle") {
    for (int m = 1; m <= 3; ++m)
        check_level1_builder(build_ucp_partition(A, {Y1, Y2}), "A", {"Y1", "Y2"}, m,
                             [](const std::vector<Mask>& v) { return ucp_oracle(v); });
}

TEST_CASE("product encodings for the special cases") {
    // disjoint arguments: the dedicated encoding matches the oracle
    for (int m = 2; m <= 3; ++m) {
        auto f = build_ucp_disjoint(A, {Y1, Y2});
        std::vector<Mask> v{0b01, 0b10};
        Interpretation M;
        M.m = m;
        M.assign1["Y1"] = v[0];
        M.assign1["Y2"] = v[1];
        M.assign2["A"] = ucp_oracle(v);
        CHECK(evaluate(M, f));
    }
    // identical arguments
    for (int m = 1; m <= 3; ++m)
        for (int n = 1; n <= 3; ++n) {
            auto f = build_ucp_same(A, X, n);
            for (Mask s = 0; s <= full_mask(m); ++s) {
                Interpretation M;
                M.m = m;
                M.assign1["X"] = s;
                M.assign2["A"] = ucp_oracle(std::vector<Mask>(n, s));
                CHECK(evaluate(M, f));
            }
        }
}

TEST_CASE("violating the disjointness side condition breaks the encoding") {
    // overlapping singletons: the oracle yields {{0}}, while the encoding
    // (whose witnesses need not be distinct without disjointness) pins
    // exactly the two-element supersets {0,1}
    auto f = build_ucp_disjoint(A, {Y1, Y2});
    Interpretation M;
    M.m = 2;
    M.assign1["Y1"] = 0b01;
    M.assign1["Y2"] = 0b01;
    M.assign2["A"] = ucp_oracle({0b01, 0b01});
    CHECK_FALSE(evaluate(M, f)); // documented misuse
    M.assign2["A"] = {0b11};
    CHECK(evaluate(M, f));
}

TEST_CASE("every builder output stays inside the fragment") {
    std::vector<FormulaPtr> formulas = {
        build_empty0(X), build_union0(X, Y1, Y2),
        build_cardinality(CardinalityKind::Exactly, v1("Z"), 2),
        build_empty1(A), build_union1(A, v2("B1"), v2("B2")),
        build_enumeration1(A, {Y1, Y2}), build_pow(A, X),
        build_pow_atmost(A, X, 2), build_pow_atleast(A, X, 1),
        build_pow_star(A, {Y1, Y2}),
        build_ucp_enum(A, {Y1, Y2}),
        build_ucp_disjoint(A, {Y1, Y2}),
        build_ucp_same(A, X, 2),
        build_ucp_partition(A, {Y1, Y2}),
    };
    for (const auto& f : formulas) {
        FragmentReport rep = check_fragment(f);
        CHECK_MESSAGE(rep.in_fragment, render_formula(f));
    }
}

TEST_CASE("partition enumeration: counts, order law, determinism") {
    CHECK(partitions(1).size() == 1);
    CHECK(partitions(1)[0].blocks == std::vector<std::vector<int>>{{1}});
    CHECK(bell(3) == 5);
    CHECK(bell(5) == 52);
    auto bells = bell_triangle(7);
    for (int n = 1; n <= 7; ++n)
        CHECK(bell(n) == bells[static_cast<std::size_t>(n)]);
    for (const auto& p : partitions(5)) {
        // blocks ordered by minimum, disjoint, covering
        std::set<int> seen;
        int last_min = 0;
        for (const auto& b : p.blocks) {
            REQUIRE_FALSE(b.empty());
            CHECK(b.front() > last_min);
            last_min = b.front();
            for (int e : b)
                CHECK(seen.insert(e).second);
        }
        CHECK(seen.size() == 5);
    }
    CHECK_THROWS_AS(partitions(0), WellFormednessError);
    CHECK_THROWS_AS(bell(13), WellFormednessError);
}

TEST_CASE("bijection characterization of product membership") {
    // Z in X1 (x) ... (x) Xn iff some partition of {1..n} admits a bijection
    // sigma : Z -> P with i in sigma(x) implying x in Xi.
    Rng rng(72);
    for (int iter = 0; iter < 300; ++iter) {
        int m = pick(rng, 1, 3);
        int n = pick(rng, 1, 3);
        std::uniform_int_distribution<Mask> dist(0, full_mask(m));
        std::vector<Mask> xs;
        for (int i = 0; i < n; ++i)
            xs.push_back(dist(rng));
        std::set<Mask> product = ucp_oracle(xs);
        for (Mask z = 0; z <= full_mask(m); ++z) {
            std::vector<int> elems;
            for (int u = 0; u < m; ++u)
                if ((z >> u) & 1u)
                    elems.push_back(u);
            bool characterized = false;
            for (const Partition& P : partitions(n)) {
                if (P.blocks.size() != elems.size())
                    continue;
                std::vector<int> perm(elems.size());
                for (std::size_t i = 0; i < perm.size(); ++i)
                    perm[i] = static_cast<int>(i);
                do {
                    bool ok = true;
                    for (std::size_t bi = 0; bi < P.blocks.size() && ok; ++bi)
                        for (int i : P.blocks[bi])
                            if (!((xs[static_cast<std::size_t>(i - 1)] >>
                                   elems[static_cast<std::size_t>(perm[bi])]) &
                                  1u)) {
                                ok = false;
                                break;
                            }
                    characterized = characterized || ok;
                } while (!characterized &&
                         std::next_permutation(perm.begin(), perm.end()));
                if (characterized)
                    break;
            }
            CHECK(characterized == (product.count(z) > 0));
        }
    }
}

TEST_CASE("growth report: Bell disjunct counts and affine enumeration length") {
    auto rows = length_report(6);
    REQUIRE(rows.size() == 6);
    const std::uint64_t expected_bell[] = {1, 2, 5, 15, 52, 203};
    for (int n = 1; n <= 6; ++n) {
        CHECK(rows[n - 1].bell == expected_bell[n - 1]);
        CHECK(rows[n - 1].partition_disjuncts == expected_bell[n - 1]);
    }
    // len_enum is affine: constant first differences
    std::size_t diff = rows[1].len_enum - rows[0].len_enum;
    for (std::size_t i = 2; i < rows.size(); ++i)
        CHECK(rows[i].len_enum - rows[i - 1].len_enum == diff);
    // the partition encoding dominates n * B_n
    for (const auto& row : rows)
        CHECK(row.len_partition >= static_cast<std::size_t>(row.n) * row.bell);
}
