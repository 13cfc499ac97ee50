#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "pbcode/design3.hpp"

using namespace pbcode;

TEST_CASE("set sizing for the locality design") {
    CHECK(d3_sizes(10, 3) == std::tuple{4, 4, 2});
    CHECK(d3_sizes(8, 3) == std::tuple{4, 4, 0});
    CHECK(d3_sizes(2, 2) == std::tuple{1, 1, 0});
    CHECK_THROWS_AS(d3_sizes(1, 2), CodeParamError);
}

TEST_CASE("(11,8) single-level grid places group sums on the next substripe") {
    Field f(FieldSpec::gf2ext(8));
    ScalarMdsBase base = make_cauchy_base(f, 8, 3);
    Design3Code d3 = d3_construct(base, 2);
    REQUIRE(d3.code.alpha == 4);
    const int k = 8;

    auto expect = [&](int parity, int sub, std::vector<int> summed, int from_sub) {
        std::vector<FieldElem> row(k * 4, 0);
        for (int j = 0; j < k; ++j) row[(sub - 1) * k + j] = base.parities[parity - 1][j];
        for (int i : summed) row[(from_sub - 1) * k + (i - 1)] = 1;
        return row;
    };
    CHECK(d3.code.row(9, 2) == expect(1, 2, {}, 1));             // first parity stays clean
    CHECK(d3.code.row(10, 2) == expect(2, 2, {1, 2}, 1));        // first group of S1
    CHECK(d3.code.row(11, 2) == expect(3, 2, {3, 4}, 1));        // second group of S1
    CHECK(d3.code.row(10, 3) == expect(2, 3, {5, 6}, 2));        // first group of S2
    CHECK(d3.code.row(11, 3) == expect(3, 3, {7, 8}, 2));
    CHECK(d3.code.row(10, 4) == expect(2, 4, {1, 2}, 3));
    CHECK(verify_mds(d3.code));
}

TEST_CASE("(13,10) two-level grid rides the third set on the first parity") {
    Field f(FieldSpec::gf2ext(8));
    ScalarMdsBase base = make_cauchy_base(f, 10, 3);
    Design3Code d3 = d3_construct(base, 2);
    REQUIRE(d3.code.alpha == 8);
    const int k = 10;
    for (int s = 1; s <= 4; ++s) {
        std::vector<FieldElem> row(k * 8, 0);
        for (int j = 0; j < k; ++j) row[(4 + s - 1) * k + j] = base.parities[0][j];
        row[(s - 1) * k + 8] = 1;  // node 9 of the matching first-half substripe
        row[(s - 1) * k + 9] = 1;  // node 10
        CHECK(d3.code.row(11, 4 + s) == row);
    }
}

TEST_CASE("repair costs and locality match the worked (11,8) and (13,10) examples") {
    Field f(FieldSpec::gf2ext(8));
    {
        Design3Code d3 = d3_construct(make_cauchy_base(f, 8, 3), 2);
        long long sum = 0;
        for (int l = 1; l <= 8; ++l) {
            int c = d3_repair_systematic(d3, l).cost();
            CHECK(c == (l <= 4 ? 20 : 26));
            sum += c;
        }
        CHECK(ratio(sum, 8 * 32) == ratio(23, 32));
    }
    {
        Design3Code d3 = d3_construct(make_cauchy_base(f, 10, 3), 2);
        for (int l = 1; l <= 10; ++l) {
            RepairPlan plan = d3_repair_systematic(d3, l);
            CHECK(plan.cost() == (l <= 4 ? 48 : l <= 8 ? 64 : 48));
            std::set<int> nodes;
            for (auto [node, sub] : plan.reads) nodes.insert(node);
            CHECK(nodes.size() <= 11);
        }
        CHECK(gamma3_sys_measured(10, 3, 2) == ratio(544, 800));
    }
    CHECK(gamma3_sys_measured(8, 3, 2) == ratio(23, 32));
}

TEST_CASE("locality stays at k+1 across a parameter sweep") {
    Field f(FieldSpec::gf2ext(8));
    for (auto [k, r] : {std::pair{4, 2}, std::pair{6, 3}, std::pair{9, 4}, std::pair{12, 3}})
        for (int m1 = 2; m1 <= 3; ++m1) {
            Design3Code d3 = d3_construct(make_cauchy_base(f, k, r), m1);
            for (int l = 1; l <= k; ++l) {
                RepairPlan plan = d3_repair_systematic(d3, l);
                std::set<int> nodes;
                for (auto [node, sub] : plan.reads) nodes.insert(node);
                INFO("k=" << k << " r=" << r << " m1=" << m1 << " l=" << l);
                REQUIRE(plan_validate(d3.code, plan));
                REQUIRE(int(nodes.size()) <= k + 1);
            }
        }
}

TEST_CASE("plans execute correctly on random messages") {
    Field f(FieldSpec::gf2ext(8));
    Design3Code d3 = d3_construct(make_cauchy_base(f, 5, 3), 2);
    std::mt19937 rng(41);
    for (int node = 1; node <= d3.code.n; ++node) {
        RepairPlan plan =
            node <= 5 ? d3_repair_systematic(d3, node) : d3_repair_parity(d3, node);
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<FieldElem> msg(d3.code.message_size());
            for (auto& v : msg) v = rng() % 256;
            REQUIRE(plan_execute(d3.code, msg, plan) == encode(d3.code, msg)[node - 1]);
        }
    }
}

TEST_CASE("forced two-level build with an empty third set is two independent copies") {
    Field f(FieldSpec::gf2ext(8));
    ScalarMdsBase base = make_cauchy_base(f, 8, 3);
    Design3Code one = d3_construct(base, 2);
    Design3Code two = d3_construct(base, 2, true);
    REQUIRE(two.code.alpha == 8);
    const int half_coords = 8 * 4;
    for (int node = 1; node <= 11; ++node)
        for (int s = 1; s <= 4; ++s) {
            auto lo = two.code.row(node, s);
            auto hi = two.code.row(node, 4 + s);
            auto ref = one.code.row(node, s);
            for (int j = 0; j < half_coords; ++j) {
                REQUIRE(lo[j] == ref[j]);
                REQUIRE(hi[half_coords + j] == ref[j]);
                REQUIRE(lo[half_coords + j] == 0);
                REQUIRE(hi[j] == 0);
            }
        }
}

TEST_CASE("single-instance level-1 builds are rejected") {
    Field f(FieldSpec::gf2ext(8));
    CHECK_THROWS_AS(d3_construct(make_cauchy_base(f, 8, 3), 1), CodeParamError);
    CHECK(rational_double(gamma3_sys_measured(2, 2, 2)) <= 1.0);
    CHECK(rational_double(gamma3_sys_measured(2, 2, 2)) > 0.0);
}
