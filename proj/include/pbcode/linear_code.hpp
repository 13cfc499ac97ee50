#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "pbcode/basecode.hpp"
#include "pbcode/field.hpp"
#include "pbcode/mat.hpp"

namespace pbcode {

// Universal representation of a (piggybacked) code: an n x alpha grid of
// coefficient vectors of length k*alpha. Symbol (node, s) stores the linear
// functional grid-row(node, s) applied to the full message. Message
// substripe s occupies coordinates [(s-1)k, sk); the first k nodes are
// systematic.
struct LinearCode {
    Field field;
    int n = 0;
    int k = 0;
    int alpha = 0;
    Mat grid;  // (n*alpha) x (k*alpha)

    int row_index(int node, int sub) const { return (node - 1) * alpha + (sub - 1); }
    int message_size() const { return k * alpha; }

    std::vector<FieldElem> row(int node, int sub) const {
        std::vector<FieldElem> out(grid.cols);
        int ri = row_index(node, sub);
        for (std::size_t j = 0; j < grid.cols; ++j) out[j] = grid.at(ri, j);
        return out;
    }
};

// Block-diagonal instantiation: substripe s of every node encodes message
// substripe s under the base code.
inline LinearCode instantiate(const ScalarMdsBase& base, int alpha) {
    if (alpha < 1) throw CodeParamError("alpha must be >= 1");
    LinearCode code{base.field, base.n(), base.k, alpha, Mat(base.n() * alpha, base.k * alpha)};
    for (int node = 1; node <= base.n(); ++node) {
        auto row = base_row(base, node);
        for (int s = 1; s <= alpha; ++s)
            for (int j = 0; j < base.k; ++j)
                code.grid.at(code.row_index(node, s), (s - 1) * base.k + j) = row[j];
    }
    return code;
}

// Vector-code instantiation: `alpha_instances` copies of a mu-substripe
// vector code laid out side by side, giving alpha = instances * mu.
// Message coordinate (s-1)k + (i-1) is symbol s of node i, so the
// systematic-row convention is preserved.
inline LinearCode instantiate(const VectorLinearBase& vbc, int alpha_instances) {
    if (alpha_instances < 1) throw CodeParamError("alpha must be >= 1");
    const int mu = vbc.mu, k = vbc.k;
    const int alpha = alpha_instances * mu;
    LinearCode code{vbc.field, vbc.n(), k, alpha, Mat(vbc.n() * alpha, k * alpha)};
    for (int inst = 0; inst < alpha_instances; ++inst) {
        int sub0 = inst * mu;       // substripe offset of this instance
        int coord0 = sub0 * k;      // message coordinate offset
        for (int i = 1; i <= k; ++i)
            for (int s = 1; s <= mu; ++s)
                code.grid.at(code.row_index(i, sub0 + s), coord0 + (s - 1) * k + (i - 1)) = 1;
        for (int j = 0; j < vbc.r; ++j) {
            const Mat& p = vbc.parity_mats[j];
            for (int s = 1; s <= mu; ++s) {
                int ri = code.row_index(k + 1 + j, sub0 + s);
                // P_j is indexed over node-major coordinates (i-1)*mu + (sym-1)
                for (int i = 0; i < k; ++i)
                    for (int sym = 0; sym < mu; ++sym)
                        code.grid.at(ri, coord0 + sym * k + i) = p.at(i * mu + sym, s - 1);
            }
        }
    }
    return code;
}

// One piggyback: coefficient vector `coeffs` (length k*alpha, supported only
// on substripes below `sub`) added onto symbol (node, sub).
struct PiggybackSpec {
    struct Addition {
        int sub = 0;
        int node = 0;
        std::vector<FieldElem> coeffs;
    };
    int alpha = 0;
    std::vector<Addition> additions;
};

struct TriangularityError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline LinearCode apply_piggyback(const LinearCode& code, const PiggybackSpec& spec) {
    if (spec.alpha != code.alpha) throw CodeParamError("spec alpha mismatch");
    LinearCode out = code;
    for (const auto& add : spec.additions) {
        if (add.sub < 2 || add.sub > code.alpha || add.node < 1 || add.node > code.n)
            throw TriangularityError("piggyback target out of range");
        if (int(add.coeffs.size()) != code.message_size())
            throw ShapeMismatch("piggyback coefficient length");
        for (int j = (add.sub - 1) * code.k; j < code.message_size(); ++j)
            if (add.coeffs[j] != 0)
                throw TriangularityError("piggyback references substripe >= target");
        int ri = out.row_index(add.node, add.sub);
        for (int j = 0; j < code.message_size(); ++j)
            out.grid.at(ri, j) = out.field.add(out.grid.at(ri, j), add.coeffs[j]);
    }
    return out;
}

struct NodeTransform {
    int node = 0;
    Mat t;  // invertible alpha x alpha
};

inline LinearCode apply_node_transform(const LinearCode& code, const NodeTransform& nt) {
    if (nt.node < 1 || nt.node > code.n) throw CodeParamError("transform node out of range");
    if (nt.t.rows != std::size_t(code.alpha) || nt.t.cols != std::size_t(code.alpha))
        throw ShapeMismatch("transform must be alpha x alpha");
    if (mat_rank(code.field, nt.t) != std::size_t(code.alpha))
        throw SingularMatrix("node transform is singular");
    LinearCode out = code;
    Mat old_rows(code.alpha, code.message_size());
    for (int s = 1; s <= code.alpha; ++s)
        for (int j = 0; j < code.message_size(); ++j)
            old_rows.at(s - 1, j) = code.grid.at(code.row_index(nt.node, s), j);
    Mat new_rows = mat_mul(code.field, nt.t, old_rows);
    for (int s = 1; s <= code.alpha; ++s)
        for (int j = 0; j < code.message_size(); ++j)
            out.grid.at(out.row_index(nt.node, s), j) = new_rows.at(s - 1, j);
    return out;
}

inline std::vector<std::vector<FieldElem>> encode(const LinearCode& code,
                                                  const std::vector<FieldElem>& message) {
    if (int(message.size()) != code.message_size()) throw ShapeMismatch("message length");
    std::vector<std::vector<FieldElem>> out(code.n, std::vector<FieldElem>(code.alpha, 0));
    const Field& f = code.field;
    for (int node = 1; node <= code.n; ++node)
        for (int s = 1; s <= code.alpha; ++s) {
            int ri = code.row_index(node, s);
            FieldElem acc = 0;
            for (int j = 0; j < code.message_size(); ++j)
                acc = f.add(acc, f.mul(code.grid.at(ri, j), message[j]));
            out[node - 1][s - 1] = acc;
        }
    return out;
}

inline bool can_decode(const LinearCode& code, const std::vector<int>& nodes) {
    Mat m(nodes.size() * code.alpha, code.message_size());
    std::size_t row = 0;
    for (int node : nodes) {
        if (node < 1 || node > code.n) throw CodeParamError("node out of range");
        for (int s = 1; s <= code.alpha; ++s, ++row)
            for (int j = 0; j < code.message_size(); ++j)
                m.at(row, j) = code.grid.at(code.row_index(node, s), j);
    }
    return mat_rank(code.field, m) == std::size_t(code.message_size());
}

namespace detail {

template <typename Fn>
inline bool for_each_k_subset(int n, int k, Fn&& fn) {
    std::vector<int> subset(k);
    for (int i = 0; i < k; ++i) subset[i] = i + 1;
    while (true) {
        if (!fn(subset)) return false;
        int pos = k - 1;
        while (pos >= 0 && subset[pos] == n - k + pos + 1) --pos;
        if (pos < 0) return true;
        ++subset[pos];
        for (int i = pos + 1; i < k; ++i) subset[i] = subset[i - 1] + 1;
    }
}

inline std::uint64_t binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * std::uint64_t(n - k + i) / std::uint64_t(i);
    return r;
}

}  // namespace detail

struct CombinatorialBoundExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline bool verify_mds(const LinearCode& code, std::uint64_t subset_bound = 1000000) {
    if (detail::binom(code.n, code.k) > subset_bound)
        throw CombinatorialBoundExceeded("too many k-subsets for exhaustive check");
    return detail::for_each_k_subset(code.n, code.k,
                                     [&](const std::vector<int>& s) { return can_decode(code, s); });
}

// Observable consequence of the information-preservation theorem: every node
// set decodable under the plain instantiation stays decodable after
// piggybacking and node transforms. For MDS bases the k-subsets suffice
// (supersets only add rows).
inline bool theorem1_check(const LinearCode& plain, const LinearCode& piggybacked,
                           std::uint64_t subset_bound = 1000000) {
    if (plain.n != piggybacked.n || plain.k != piggybacked.k || plain.alpha != piggybacked.alpha)
        throw CodeParamError("theorem1_check shape mismatch");
    if (detail::binom(plain.n, plain.k) > subset_bound)
        throw CombinatorialBoundExceeded("too many k-subsets for exhaustive check");
    return detail::for_each_k_subset(plain.n, plain.k, [&](const std::vector<int>& s) {
        return !can_decode(plain, s) || can_decode(piggybacked, s);
    });
}

// Sequential decode of a piggybacked (untransformed) code: decode substripe 1
// with the base code, subtract the now-known piggybacks, decode substripe 2,
// and so on.
inline std::vector<FieldElem> sequential_decode(const ScalarMdsBase& base,
                                                const PiggybackSpec& spec,
                                                const std::vector<int>& nodes,
                                                const std::vector<std::vector<FieldElem>>& symbols) {
    const Field& f = base.field;
    const int k = base.k, alpha = spec.alpha;
    std::vector<FieldElem> message(k * alpha, 0);
    for (int s = 1; s <= alpha; ++s) {
        std::vector<std::pair<int, FieldElem>> column;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            FieldElem value = symbols[i][s - 1];
            for (const auto& add : spec.additions) {
                if (add.sub != s || add.node != nodes[i]) continue;
                FieldElem pb = 0;
                for (int j = 0; j < (s - 1) * k; ++j)
                    pb = f.add(pb, f.mul(add.coeffs[j], message[j]));
                value = f.sub(value, pb);
            }
            column.emplace_back(nodes[i], value);
        }
        auto sub_msg = base_decode(base, column);
        for (int j = 0; j < k; ++j) message[(s - 1) * k + j] = sub_msg[j];
    }
    return message;
}

// One line per (node, substripe): the k*alpha coefficients in hex.
inline std::string dump_grid(const LinearCode& code) {
    std::string out;
    char buf[32];
    for (int node = 1; node <= code.n; ++node)
        for (int s = 1; s <= code.alpha; ++s) {
            std::snprintf(buf, sizeof buf, "n%02d.s%02d:", node, s);
            out += buf;
            for (int j = 0; j < code.message_size(); ++j) {
                std::snprintf(buf, sizeof buf, " %04x", code.grid.at(code.row_index(node, s), j));
                out += buf;
            }
            out += '\n';
        }
    return out;
}

}  // namespace pbcode
