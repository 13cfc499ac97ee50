#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pbcode {

using FieldElem = std::uint32_t;

struct FieldError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Small finite fields: GF(2^w) for w in {4,8,16} with fixed irreducible
// polynomials (shard files must be bit-stable across builds), or GF(p)
// for prime p < 2^16.
struct FieldSpec {
    enum class Kind { BinaryExt, Prime };
    Kind kind = Kind::BinaryExt;
    unsigned w = 8;  // extension degree, BinaryExt only
    unsigned p = 0;  // modulus, Prime only

    static FieldSpec gf2ext(unsigned w) { return FieldSpec{Kind::BinaryExt, w, 0}; }
    static FieldSpec prime(unsigned p) { return FieldSpec{Kind::Prime, 0, p}; }

    bool operator==(const FieldSpec&) const = default;
};

namespace detail {

inline constexpr std::uint32_t irreducible_poly(unsigned w) {
    switch (w) {
        case 4: return 0x13;      // x^4 + x + 1
        case 8: return 0x11D;     // x^8 + x^4 + x^3 + x^2 + 1
        case 16: return 0x1100B;  // x^16 + x^12 + x^3 + x + 1
        default: return 0;
    }
}

inline bool is_prime_u32(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint32_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace detail

class Field {
public:
    explicit Field(FieldSpec spec) : spec_(spec) {
        if (spec.kind == FieldSpec::Kind::BinaryExt) {
            poly_ = detail::irreducible_poly(spec.w);
            if (poly_ == 0) throw FieldError("unsupported extension degree w=" + std::to_string(spec.w));
            order_ = 1u << spec.w;
        } else {
            if (spec.p >= (1u << 16) || !detail::is_prime_u32(spec.p))
                throw FieldError("modulus must be a prime below 2^16");
            order_ = spec.p;
        }
    }

    const FieldSpec& spec() const { return spec_; }
    std::uint32_t order() const { return order_; }
    bool binary() const { return spec_.kind == FieldSpec::Kind::BinaryExt; }

    FieldElem add(FieldElem a, FieldElem b) const {
        return binary() ? (a ^ b) : (a + b) % order_;
    }
    FieldElem sub(FieldElem a, FieldElem b) const {
        return binary() ? (a ^ b) : (a + order_ - b) % order_;
    }
    FieldElem neg(FieldElem a) const { return sub(0, a); }

    FieldElem mul(FieldElem a, FieldElem b) const {
        if (!binary()) return FieldElem((std::uint64_t(a) * b) % order_);
        // carry-less multiply, then reduce modulo the field polynomial
        std::uint64_t acc = 0;
        std::uint64_t x = a;
        for (std::uint32_t y = b; y; y >>= 1, x <<= 1)
            if (y & 1) acc ^= x;
        for (int bit = 2 * int(spec_.w) - 2; bit >= int(spec_.w); --bit)
            if (acc >> bit & 1) acc ^= std::uint64_t(poly_) << (bit - spec_.w);
        return FieldElem(acc);
    }

    FieldElem pow(FieldElem a, std::uint64_t e) const {
        FieldElem result = 1;
        for (FieldElem base = a; e; e >>= 1) {
            if (e & 1) result = mul(result, base);
            base = mul(base, base);
        }
        return result;
    }

    FieldElem inv(FieldElem a) const {
        if (a == 0) throw FieldError("division by zero");
        return pow(a, order_ - 2);
    }
    FieldElem div(FieldElem a, FieldElem b) const { return mul(a, inv(b)); }

    // Smallest element generating the multiplicative group.
    FieldElem generator() const {
        std::uint32_t m = order_ - 1;
        for (FieldElem g = 2; g < order_; ++g) {
            bool ok = true;
            std::uint32_t rem = m;
            for (std::uint32_t f = 2; f * f <= rem; ++f) {
                if (rem % f) continue;
                if (pow(g, m / f) == 1) { ok = false; break; }
                while (rem % f == 0) rem /= f;
            }
            if (ok && rem > 1 && pow(g, m / rem) == 1) ok = false;
            if (ok) return g;
        }
        throw FieldError("no generator found");  // unreachable for valid fields
    }

private:
    FieldSpec spec_;
    std::uint32_t order_ = 0;
    std::uint32_t poly_ = 0;
};

enum class FeOp { Add, Sub, Mul, Div };

inline FieldElem fe_op(const Field& f, FieldElem a, FieldElem b, FeOp op) {
    switch (op) {
        case FeOp::Add: return f.add(a, b);
        case FeOp::Sub: return f.sub(a, b);
        case FeOp::Mul: return f.mul(a, b);
        case FeOp::Div: return f.div(a, b);
    }
    throw FieldError("bad op");
}

}  // namespace pbcode
