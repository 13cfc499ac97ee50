#pragma once

#include <utility>
#include <vector>

#include "pbcode/basecode.hpp"
#include "pbcode/engine.hpp"
#include "pbcode/linear_code.hpp"
#include "pbcode/rational.hpp"
#include "pbcode/repair_plan.hpp"

namespace pbcode {

// Two-instance piggybacking with r contiguous systematic sets; the last
// parity is transformed so its odd symbol becomes v_r^T a - p_r^T b.
struct Design1Params {
    int k = 0, r = 0, m = 0;
    int t = 0, t_r = 0;

    // set ids are 1..r; contiguous ascending ranges of sizes t,..,t,t_r
    int set_of(int node) const {
        int idx = (node - 1) / t + 1;
        return idx > r ? r : idx;
    }
    int set_size(int set) const { return set < r ? t : t_r; }
    int set_begin(int set) const { return (set - 1) * t + 1; }
    int set_end(int set) const { return set < r ? set * t : k; }
};

inline std::pair<int, int> d1_sizes(int k, int r) {
    if (r < 2 || k < r) throw CodeParamError("design 1 needs r >= 2 and k >= r");
    int t = (2 * k + r - 2 + (2 * r - 1)) / (2 * r);  // ceil(k/r + (r-2)/(2r))
    // the sizing formula can leave the last set empty; shrink t until it isn't
    while (k - (r - 1) * t < 1) --t;
    return {t, k - (r - 1) * t};
}

struct Design1Code {
    ScalarMdsBase base;
    Design1Params params;
    LinearCode code;
    std::vector<SlotAssignment> slots;
};

namespace detail {

// q-vector of design 1: p_r masked to one systematic set.
inline std::vector<FieldElem> d1_mask(const ScalarMdsBase& base, const Design1Params& prm,
                                      int set) {
    std::vector<FieldElem> q(base.k, 0);
    for (int j = prm.set_begin(set); j <= prm.set_end(set); ++j)
        q[j - 1] = base.parities[base.r - 1][j - 1];
    return q;
}

inline RepairPlan d1_plan_systematic(const LinearCode& code, const Design1Params& prm, int l) {
    if (l < 1 || l > prm.k) throw PlanError("systematic node out of range");
    const int k = prm.k, r = prm.r;
    int set = prm.set_of(l);
    std::vector<std::pair<int, int>> reads;
    for (int pair = 0; pair < prm.m; ++pair) {
        int odd = 2 * pair + 1, even = odd + 1;
        for (int node = 1; node <= k; ++node)
            if (node != l) reads.emplace_back(node, even);
        reads.emplace_back(k + 1, even);
        if (set < r) {
            reads.emplace_back(k + set + 1, even);  // carries the set's piggyback
        } else {
            reads.emplace_back(k + r, odd);
            for (int i = 2; i <= r - 1; ++i) reads.emplace_back(k + i, even);
        }
        for (int node = prm.set_begin(set); node <= prm.set_end(set); ++node)
            if (node != l) reads.emplace_back(node, odd);
    }
    auto plan = make_plan(code, l, std::move(reads));
    if (!plan) throw PlanError("design-1 systematic plan does not span");
    return *plan;
}

}  // namespace detail

inline Design1Code d1_construct(const ScalarMdsBase& base, int m) {
    if (m < 1) throw CodeParamError("m must be >= 1");
    auto [t, t_r] = d1_sizes(base.k, base.r);
    Design1Params prm{base.k, base.r, m, t, t_r};
    const int k = base.k, r = base.r, alpha = 2 * m;

    LinearCode code = instantiate(base, alpha);
    PiggybackSpec spec{alpha, {}};
    for (int pair = 0; pair < m; ++pair) {
        int odd = 2 * pair + 1, even = odd + 1;
        for (int i = 2; i <= r; ++i) {
            auto q = detail::d1_mask(base, prm, i - 1);
            std::vector<FieldElem> coeffs(k * alpha, 0);
            for (int j = 0; j < k; ++j) coeffs[(odd - 1) * k + j] = q[j];
            spec.additions.push_back({even, k + i, std::move(coeffs)});
        }
    }
    code = apply_piggyback(code, spec);

    // node k+r: per pair, odd symbol <- odd - even
    Mat t_mat = Mat::identity(alpha);
    for (int pair = 0; pair < m; ++pair)
        t_mat.at(2 * pair, 2 * pair + 1) = base.field.neg(1);
    code = apply_node_transform(code, NodeTransform{k + r, t_mat});

    auto planner = [prm](const LinearCode& c, int l) {
        return detail::d1_plan_systematic(c, prm, l);
    };
    PassResult passed = parity_piggyback_pass(code, planner);
    return Design1Code{base, prm, std::move(passed.code), std::move(passed.assignments)};
}

inline RepairPlan d1_repair_systematic(const Design1Code& d1, int l) {
    return detail::d1_plan_systematic(d1.code, d1.params, l);
}

inline RepairPlan d1_repair_parity(const Design1Code& d1, int j) {
    return parity_plan_via_slots(d1.code, j, d1.slots);
}

inline Rational gamma1_sys(int k, int r) {
    auto [t, t_r] = d1_sizes(k, r);
    long long num = (long long)(k - t_r) * (k + t) + (long long)t_r * (k + t_r + r - 2);
    return ratio(num, 2LL * k * k);
}

inline Rational gamma1_par(int k, int r, int m) {
    // [2k + (r-1)((1+1/m)k + (1-1/m)(r-1))] / (2kr)
    Rational inner = Rational(k) * (Rational(1) + ratio(1, m)) +
                     Rational(r - 1) * (Rational(1) - ratio(1, m));
    return (Rational(2 * k) + Rational(r - 1) * inner) / Rational(2LL * k * r);
}

}  // namespace pbcode
