#pragma once

#include <algorithm>
#include <tuple>
#include <utility>
#include <vector>

#include "pbcode/basecode.hpp"
#include "pbcode/engine.hpp"
#include "pbcode/linear_code.hpp"
#include "pbcode/rational.hpp"
#include "pbcode/repair_plan.hpp"

namespace pbcode {

// (2r-3)m-instance piggybacking. Each instance: parities 2..r stay plain on
// the first r-2 substripes, carry masked power-combinations of the first r-1
// substripes on the last r-2, and a node-local subtraction folds them into
// substripe r-1. Weights are generator powers so they stay distinct in
// characteristic 2.
struct Design2Params {
    int k = 0, r = 0, m = 0;
    int t_l = 0, t_h = 0, t = 0;
    std::vector<FieldElem> weights;  // w_2..w_r

    int sub_per_inst() const { return 2 * r - 3; }
    // sets 1..r-1, contiguous; the first t sets have size t_h
    int set_size(int set) const { return set <= t ? t_h : t_l; }
    int set_begin(int set) const {
        int big = std::min(set - 1, t);
        return big * t_h + (set - 1 - big) * t_l + 1;
    }
    int set_end(int set) const { return set_begin(set) + set_size(set) - 1; }
    int set_of(int node) const {
        for (int set = 1; set <= r - 1; ++set)
            if (node <= set_end(set)) return set;
        return r - 1;
    }
    // the set whose mask survives in parity k+i's folded substripe
    int sigma(int i) const { return r + 1 - i; }
    // substripe (within instance) of parity k+i carrying the set-j mask
    int mask_pos(int i, int j) const {
        if (j == sigma(i)) return r - 1;
        int d = 0;
        for (int s = 1; s <= r - 1; ++s) {
            if (s == sigma(i)) continue;
            ++d;
            if (s == j) return r - 1 + d;
        }
        throw CodeParamError("mask set out of range");
    }
};

inline std::tuple<int, int, int> d2_sizes(int k, int r) {
    if (r < 3) throw CodeParamError("design 2 needs r >= 3");
    if (k < r - 1) throw CodeParamError("design 2 needs k >= r-1");
    int t_l = k / (r - 1);
    int t_h = (k + r - 2) / (r - 1);
    return {t_l, t_h, k - (r - 1) * t_l};
}

struct Design2Code {
    ScalarMdsBase base;
    Design2Params params;
    LinearCode code;
    std::vector<SlotAssignment> slots;
};

namespace detail {

inline std::vector<FieldElem> d2_mask(const ScalarMdsBase& base, const Design2Params& prm,
                                      int i, int set) {
    std::vector<FieldElem> q(base.k, 0);
    for (int node = prm.set_begin(set); node <= prm.set_end(set); ++node)
        q[node - 1] = base.parities[i - 1][node - 1];
    return q;
}

inline RepairPlan d2_plan_systematic(const LinearCode& code, const Design2Params& prm, int l) {
    if (l < 1 || l > prm.k) throw PlanError("systematic node out of range");
    const int k = prm.k, r = prm.r, spi = prm.sub_per_inst();
    int set = prm.set_of(l);
    std::vector<std::pair<int, int>> reads;
    for (int inst = 0; inst < prm.m; ++inst) {
        int sub0 = inst * spi;
        for (int s = r; s <= spi; ++s) {
            for (int node = 1; node <= k; ++node)
                if (node != l) reads.emplace_back(node, sub0 + s);
            reads.emplace_back(k + 1, sub0 + s);
        }
        for (int i = 2; i <= r; ++i)
            reads.emplace_back(k + i, sub0 + prm.mask_pos(i, set));
        for (int node = prm.set_begin(set); node <= prm.set_end(set); ++node)
            if (node != l)
                for (int s = 1; s <= r - 1; ++s) reads.emplace_back(node, sub0 + s);
    }
    auto plan = make_plan(code, l, std::move(reads));
    if (!plan) throw PlanError("design-2 systematic plan does not span");
    return *plan;
}

}  // namespace detail

inline Design2Code d2_construct(const ScalarMdsBase& base, int m) {
    if (m < 1) throw CodeParamError("m must be >= 1");
    const int k = base.k, r = base.r;
    auto [t_l, t_h, t] = d2_sizes(k, r);
    Design2Params prm{k, r, m, t_l, t_h, t, {}};
    const Field& f = base.field;
    FieldElem g = f.generator();
    for (int i = 2; i <= r; ++i) prm.weights.push_back(f.pow(g, i - 2));
    {  // distinct weights make the recovered combinations a Vandermonde system
        Mat v(r - 1, r - 1);
        for (int i = 0; i < r - 1; ++i)
            for (int e = 0; e < r - 1; ++e) v.at(i, e) = f.pow(prm.weights[i], e);
        if (mat_rank(f, v) != std::size_t(r - 1))
            throw CodeParamError("field too small for distinct repair weights");
    }
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < k; ++j)
            if (base.parities[i][j] == 0)
                throw CodeParamError("design 2 needs all-nonzero parity vectors");

    const int spi = prm.sub_per_inst(), alpha = spi * m;
    LinearCode code = instantiate(base, alpha);
    PiggybackSpec spec{alpha, {}};
    for (int inst = 0; inst < m; ++inst) {
        int sub0 = inst * spi;
        for (int i = 2; i <= r; ++i) {
            FieldElem w = prm.weights[i - 2];
            // each non-surviving mask j contributes its full power combination
            // on the substripe that carries it and the substripe-(r-2)
            // truncation on the folded substripe r-1, so the subtraction
            // transform leaves q_{i,sigma}^T a_{r-1} - sum of plain parities
            for (int j = 1; j <= r - 1; ++j) {
                if (j == prm.sigma(i)) continue;
                auto q = detail::d2_mask(base, prm, i, j);
                for (int top : {r - 1, r - 2}) {
                    int pos = top == r - 1 ? prm.mask_pos(i, j) : r - 1;
                    std::vector<FieldElem> coeffs(k * alpha, 0);
                    for (int s = 1; s <= top; ++s) {
                        FieldElem ws = code.field.pow(w, r - 1 - s);
                        for (int node = 0; node < k; ++node)
                            coeffs[(sub0 + s - 1) * k + node] = code.field.mul(ws, q[node]);
                    }
                    spec.additions.push_back({sub0 + pos, k + i, std::move(coeffs)});
                }
            }
        }
    }
    code = apply_piggyback(code, spec);

    for (int i = 2; i <= r; ++i) {
        Mat t_mat = Mat::identity(alpha);
        for (int inst = 0; inst < m; ++inst) {
            int sub0 = inst * spi;
            for (int s = r; s <= spi; ++s)
                t_mat.at(sub0 + r - 2, sub0 + s - 1) = code.field.neg(1);
        }
        code = apply_node_transform(code, NodeTransform{k + i, t_mat});
    }

    auto planner = [prm](const LinearCode& c, int l) {
        return detail::d2_plan_systematic(c, prm, l);
    };
    PassResult passed = parity_piggyback_pass(code, planner);
    return Design2Code{base, prm, std::move(passed.code), std::move(passed.assignments)};
}

inline RepairPlan d2_repair_systematic(const Design2Code& d2, int l) {
    return detail::d2_plan_systematic(d2.code, d2.params, l);
}

inline RepairPlan d2_repair_parity(const Design2Code& d2, int j) {
    return parity_plan_via_slots(d2.code, j, d2.slots);
}

inline Rational gamma2_sys(int k, int r) {
    auto [t_l, t_h, t] = d2_sizes(k, r);
    long long num = (long long)(r - 2) * k * k +
                    (long long)(r - 1) *
                        ((long long)t * t_h * t_h + (long long)(r - 1 - t) * t_l * t_l);
    return ratio(num, (long long)(2 * r - 3) * k * k);
}

}  // namespace pbcode
