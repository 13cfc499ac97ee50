#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pbcode/field.hpp"
#include "pbcode/mat.hpp"

namespace pbcode {

struct CodeParamError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct DecodeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Systematic scalar MDS base code: node i <= k stores message symbol i,
// parity node k+i stores p_i^T a.
struct ScalarMdsBase {
    Field field;
    int k = 0;
    int r = 0;
    std::vector<std::vector<FieldElem>> parities;  // r vectors of length k

    int n() const { return k + r; }
};

// Coefficient row of node `node` (1-based) over the k message coordinates.
inline std::vector<FieldElem> base_row(const ScalarMdsBase& base, int node) {
    if (node <= base.k) {
        std::vector<FieldElem> row(base.k, 0);
        row[node - 1] = 1;
        return row;
    }
    return base.parities[node - base.k - 1];
}

inline std::vector<FieldElem> base_encode(const ScalarMdsBase& base,
                                          const std::vector<FieldElem>& message) {
    if (int(message.size()) != base.k) throw ShapeMismatch("message length != k");
    std::vector<FieldElem> out(base.n());
    const Field& f = base.field;
    for (int i = 0; i < base.n(); ++i) {
        auto row = base_row(base, i + 1);
        FieldElem acc = 0;
        for (int j = 0; j < base.k; ++j) acc = f.add(acc, f.mul(row[j], message[j]));
        out[i] = acc;
    }
    return out;
}

inline std::vector<FieldElem> base_decode(const ScalarMdsBase& base,
                                          const std::vector<std::pair<int, FieldElem>>& symbols) {
    if (int(symbols.size()) < base.k) throw DecodeError("need at least k symbols");
    std::vector<int> seen;
    Mat a(symbols.size(), base.k);
    Mat b(symbols.size(), 1);
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        auto [node, value] = symbols[i];
        if (node < 1 || node > base.n()) throw DecodeError("node id out of range");
        if (std::find(seen.begin(), seen.end(), node) != seen.end())
            throw DecodeError("duplicate node id");
        seen.push_back(node);
        auto row = base_row(base, node);
        for (int j = 0; j < base.k; ++j) a.at(i, j) = row[j];
        b.at(i, 0) = value;
    }
    auto coeffs = solve_in_span(base.field, a, Mat::identity(base.k));
    if (!coeffs) throw DecodeError("symbols do not determine the message");
    Mat x = mat_mul(base.field, *coeffs, b);
    std::vector<FieldElem> msg(base.k);
    for (int j = 0; j < base.k; ++j) msg[j] = x.at(j, 0);
    return msg;
}

// Exhaustive MDS check: every k-subset of nodes decodes.
inline bool verify_mds_base(const ScalarMdsBase& base) {
    const int n = base.n(), k = base.k;
    std::vector<int> subset(k);
    for (int i = 0; i < k; ++i) subset[i] = i;
    while (true) {
        Mat g(k, k);
        for (int i = 0; i < k; ++i) {
            auto row = base_row(base, subset[i] + 1);
            for (int j = 0; j < k; ++j) g.at(i, j) = row[j];
        }
        if (mat_rank(base.field, g) != std::size_t(k)) return false;
        int pos = k - 1;
        while (pos >= 0 && subset[pos] == n - k + pos) --pos;
        if (pos < 0) break;
        ++subset[pos];
        for (int i = pos + 1; i < k; ++i) subset[i] = subset[i - 1] + 1;
    }
    return true;
}

inline ScalarMdsBase make_cauchy_base(const Field& field, int k, int r) {
    if (k < 1 || r < 1) throw CodeParamError("k and r must be positive");
    if (std::uint32_t(k + r) > field.order()) throw CodeParamError("field too small for n nodes");
    std::vector<FieldElem> y(k), x(r);
    for (int j = 0; j < k; ++j) y[j] = FieldElem(j);
    for (int i = 0; i < r; ++i) x[i] = FieldElem(k + i);
    Mat c = cauchy_matrix(field, x, y);
    ScalarMdsBase base{field, k, r, {}};
    base.parities.resize(r);
    for (int i = 0; i < r; ++i) {
        base.parities[i].resize(k);
        for (int j = 0; j < k; ++j) base.parities[i][j] = c.at(i, j);
    }
    return base;
}

// The (6,4) code with p1 = (1,1,1,1), p2 = (1,2,3,4), read over GF(2^8).
inline ScalarMdsBase make_fig1_base() {
    Field f(FieldSpec::gf2ext(8));
    ScalarMdsBase base{f, 4, 2, {{1, 1, 1, 1}, {1, 2, 3, 4}}};
    if (!verify_mds_base(base)) throw CodeParamError("reference (6,4) base is not MDS");
    return base;
}

// Vector base code with linear systematic repair. Parity node k+j stores
// a^T P_j; for repair of systematic node i every parity passes its data
// times the common matrix Q_i, plus the listed systematic reads.
struct VectorLinearBase {
    Field field;
    int k = 0;
    int r = 0;
    int mu = 0;                                       // symbols per node
    std::vector<Mat> parity_mats;                     // r matrices, k*mu x mu
    std::vector<Mat> repair_mats;                     // k matrices Q_i, mu x q_i
    std::vector<std::vector<std::pair<int, int>>> systematic_reads;
    // systematic_reads[i-1]: (node, symbol) pairs read from systematic helpers
    // during repair of node i (1-based symbol index)

    int n() const { return k + r; }
};

// The (4,2) vector code over GF(5) with optimal systematic repair.
inline VectorLinearBase make_fig6_vector_base() {
    Field f(FieldSpec::prime(5));
    VectorLinearBase vbc{f, 2, 2, 2, {}, {}, {}};
    // message order (a1, b1, a2, b2); columns are the node's two symbols
    Mat p1(4, 2), p2(4, 2);
    // node 3: (3a1+2b1+a2, b1+2a2+3b2)
    p1.at(0, 0) = 3; p1.at(1, 0) = 2; p1.at(2, 0) = 1;
    p1.at(1, 1) = 1; p1.at(2, 1) = 2; p1.at(3, 1) = 3;
    // node 4: (3a1+4b1+2a2, b1+2a2+b2)
    p2.at(0, 0) = 3; p2.at(1, 0) = 4; p2.at(2, 0) = 2;
    p2.at(1, 1) = 1; p2.at(2, 1) = 2; p2.at(3, 1) = 1;
    vbc.parity_mats = {p1, p2};
    Mat q1(2, 1), q2(2, 1);
    q1.at(0, 0) = 1;  // parities pass their first symbol
    q2.at(1, 0) = 1;  // parities pass their second symbol
    vbc.repair_mats = {q1, q2};
    vbc.systematic_reads = {{{2, 1}}, {{1, 2}}};
    return vbc;
}

// Synthetic common-Q base: `mu` independent lanes of a scalar Cauchy code,
// with Q_i = identity (every parity passes its full data). Serves as a
// stand-in for the published common-Q regenerating codes.
inline VectorLinearBase make_common_q_double(const Field& field, int k, int r, int mu = 2) {
    ScalarMdsBase scalar = make_cauchy_base(field, k, r);
    VectorLinearBase vbc{field, k, r, mu, {}, {}, {}};
    for (int j = 0; j < r; ++j) {
        Mat p(k * mu, mu);
        for (int lane = 0; lane < mu; ++lane)
            for (int i = 0; i < k; ++i) p.at(i * mu + lane, lane) = scalar.parities[j][i];
        vbc.parity_mats.push_back(p);
    }
    for (int i = 1; i <= k; ++i) {
        vbc.repair_mats.push_back(Mat::identity(mu));
        std::vector<std::pair<int, int>> reads;
        for (int j = 1; j <= k; ++j) {
            if (j == i) continue;
            for (int s = 1; s <= mu; ++s) reads.emplace_back(j, s);
        }
        vbc.systematic_reads.push_back(std::move(reads));
    }
    return vbc;
}

}  // namespace pbcode
