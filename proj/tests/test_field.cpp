#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <random>

#include "pbcode/field.hpp"

using namespace pbcode;

namespace {

// Independent GF(2^8) oracle: log/antilog tables built with shift-and-reduce
// doubling only, no shared code with Field::mul.
struct Gf256Tables {
    std::array<std::uint8_t, 256> log{};
    std::array<std::uint8_t, 255> exp{};

    Gf256Tables() {
        unsigned x = 1;
        for (int i = 0; i < 255; ++i) {
            exp[i] = std::uint8_t(x);
            log[x] = std::uint8_t(i);
            x <<= 1;
            if (x & 0x100) x ^= 0x11D;
        }
    }

    std::uint8_t mul(std::uint8_t a, std::uint8_t b) const {
        if (!a || !b) return 0;
        return exp[(log[a] + log[b]) % 255];
    }
};

}  // namespace

TEST_CASE("gf(2^8) multiply matches the log-table oracle") {
    Field f(FieldSpec::gf2ext(8));
    Gf256Tables oracle;
    CHECK(f.mul(0x02, 0x80) == 0x1D);
    for (unsigned a = 0; a < 256; ++a)
        for (unsigned b = 0; b < 256; ++b)
            REQUIRE(f.mul(a, b) == oracle.mul(std::uint8_t(a), std::uint8_t(b)));
}

TEST_CASE("prime field basics") {
    Field f(FieldSpec::prime(5));
    CHECK(f.mul(3, 4) == 2);
    CHECK(f.add(4, 3) == 2);
    CHECK(f.sub(1, 3) == 3);
    CHECK(f.inv(2) == 3);
    CHECK(f.div(1, 4) == 4);
}

TEST_CASE("fe_op dispatch and additive identity") {
    Field f(FieldSpec::gf2ext(8));
    for (FieldElem a : {0u, 1u, 7u, 200u, 255u}) {
        CHECK(fe_op(f, a, 0, FeOp::Add) == a);
        CHECK(fe_op(f, a, a, FeOp::Sub) == 0);
    }
    CHECK(fe_op(f, 3, 7, FeOp::Mul) == f.mul(3, 7));
    CHECK_THROWS_AS(fe_op(f, 1, 0, FeOp::Div), FieldError);
}

TEST_CASE("in gf(2^w) subtraction equals addition") {
    for (unsigned w : {4u, 8u, 16u}) {
        Field f(FieldSpec::gf2ext(w));
        std::mt19937 rng(w);
        for (int i = 0; i < 200; ++i) {
            FieldElem a = rng() % f.order(), b = rng() % f.order();
            CHECK(f.sub(a, b) == f.add(a, b));
        }
    }
}

TEST_CASE("field axioms hold on random triples") {
    for (FieldSpec spec : {FieldSpec::gf2ext(4), FieldSpec::gf2ext(8), FieldSpec::gf2ext(16),
                           FieldSpec::prime(5), FieldSpec::prime(251)}) {
        Field f(spec);
        std::mt19937 rng(f.order());
        for (int i = 0; i < 300; ++i) {
            FieldElem a = rng() % f.order(), b = rng() % f.order(), c = rng() % f.order();
            REQUIRE(f.mul(a, f.mul(b, c)) == f.mul(f.mul(a, b), c));
            REQUIRE(f.add(a, f.add(b, c)) == f.add(f.add(a, b), c));
            REQUIRE(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
            if (a) REQUIRE(f.mul(a, f.inv(a)) == 1);
            REQUIRE(f.add(a, f.neg(a)) == 0);
        }
    }
}

TEST_CASE("generator has full multiplicative order") {
    for (FieldSpec spec : {FieldSpec::gf2ext(4), FieldSpec::gf2ext(8), FieldSpec::prime(5),
                           FieldSpec::prime(257)}) {
        Field f(spec);
        FieldElem g = f.generator();
        std::uint32_t m = f.order() - 1;
        CHECK(f.pow(g, m) == 1);
        for (std::uint32_t d = 1; d < m; ++d)
            if (m % d == 0) REQUIRE(f.pow(g, d) != 1);
    }
}

TEST_CASE("invalid field specs are rejected") {
    CHECK_THROWS_AS(Field(FieldSpec::gf2ext(5)), FieldError);
    CHECK_THROWS_AS(Field(FieldSpec::prime(6)), FieldError);
    CHECK_THROWS_AS(Field(FieldSpec::prime(1u << 16 | 1)), FieldError);
}
