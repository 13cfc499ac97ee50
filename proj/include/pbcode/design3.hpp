#pragma once

#include <algorithm>
#include <tuple>
#include <utility>
#include <vector>

#include "pbcode/basecode.hpp"
#include "pbcode/linear_code.hpp"
#include "pbcode/rational.hpp"
#include "pbcode/repair_plan.hpp"

namespace pbcode {

// Locality-(k+1) piggybacking. Level 1 spans 2*m1 substripes: group g of S1
// is piggybacked onto parity k+1+g at the following (even) substripe, group
// g of S2 onto the following odd substripe. When t3 > 0 two level-1 halves
// run side by side and S3's first-half symbols ride on the first parity's
// second-half symbols.
struct Design3Params {
    int k = 0, r = 0, m1 = 0;
    int t1 = 0, t2 = 0, t3 = 0;
    bool two_level = false;

    int half_subs() const { return 2 * m1; }
    int alpha() const { return (two_level ? 2 : 1) * half_subs(); }
    // which of S1/S2/S3 holds node l
    int set_of(int l) const { return l <= t1 ? 1 : (l <= t1 + t2 ? 2 : 3); }

    // contiguous near-equal split of a size-`count` set starting at `first`
    // into r-1 groups; returns [begin, end] of group g (1-based), empty as
    // begin > end
    std::pair<int, int> group_range(int first, int count, int g) const {
        int q = count / (r - 1), rem = count % (r - 1);
        int before = (g - 1) * q + std::min(g - 1, rem);
        int size = q + (g - 1 < rem ? 1 : 0);
        return {first + before, first + before + size - 1};
    }
    std::pair<int, int> s1_group(int g) const { return group_range(1, t1, g); }
    std::pair<int, int> s2_group(int g) const { return group_range(t1 + 1, t2, g); }
    // group id of node l within its set (sets 1 and 2 only)
    int group_of(int l) const {
        for (int g = 1; g <= r - 1; ++g) {
            auto [b, e] = set_of(l) == 1 ? s1_group(g) : s2_group(g);
            if (l >= b && l <= e) return g;
        }
        throw CodeParamError("node has no group");
    }
};

inline std::tuple<int, int, int> d3_sizes(int k, int r) {
    if (k < 2 || r < 2) throw CodeParamError("design 3 needs k >= 2 and r >= 2");
    int t1 = (k * (r - 1) + 2 * r - 2) / (2 * r - 1);  // ceil(k(r-1)/(2r-1))
    t1 = std::min(t1, k / 2);
    return {t1, t1, k - 2 * t1};
}

struct Design3Code {
    ScalarMdsBase base;
    Design3Params params;
    LinearCode code;
};

inline Design3Code d3_construct(const ScalarMdsBase& base, int m1, bool force_two_level = false) {
    if (m1 < 2) throw CodeParamError("design 3 needs m1 >= 2");
    auto [t1, t2, t3] = d3_sizes(base.k, base.r);
    Design3Params prm{base.k, base.r, m1, t1, t2, t3, t3 > 0 || force_two_level};
    const int k = base.k, alpha = prm.alpha(), hs = prm.half_subs();

    LinearCode code = instantiate(base, alpha);
    PiggybackSpec spec{alpha, {}};
    auto add_sum = [&](int node, int sub, int from_sub, int begin, int end) {
        if (begin > end) return;
        std::vector<FieldElem> coeffs(k * alpha, 0);
        for (int i = begin; i <= end; ++i) coeffs[(from_sub - 1) * k + (i - 1)] = 1;
        spec.additions.push_back({sub, node, std::move(coeffs)});
    };
    for (int half = 0; half < (prm.two_level ? 2 : 1); ++half) {
        int sub0 = half * hs;
        for (int g = 1; g <= base.r - 1; ++g) {
            auto [b1, e1] = prm.s1_group(g);
            auto [b2, e2] = prm.s2_group(g);
            for (int s = 2; s <= hs; s += 2) add_sum(k + 1 + g, sub0 + s, sub0 + s - 1, b1, e1);
            for (int s = 3; s <= hs; s += 2) add_sum(k + 1 + g, sub0 + s, sub0 + s - 1, b2, e2);
        }
    }
    if (prm.two_level && t3 > 0)
        for (int s = 1; s <= hs; ++s) add_sum(k + 1, hs + s, s, t1 + t2 + 1, k);
    code = apply_piggyback(code, spec);
    return Design3Code{base, prm, std::move(code)};
}

inline RepairPlan d3_repair_systematic(const Design3Code& d3, int l) {
    const Design3Params& prm = d3.params;
    const int k = prm.k, hs = prm.half_subs();
    if (l < 1 || l > k) throw PlanError("systematic node out of range");
    std::vector<std::pair<int, int>> reads;
    int set = prm.set_of(l);
    if (set == 3) {
        // decode the second half from parity 2, then unwind the first-parity
        // piggybacks using the S3 mates
        for (int s = hs + 1; s <= 2 * hs; ++s) {
            for (int node = 1; node <= k; ++node)
                if (node != l) reads.emplace_back(node, s);
            reads.emplace_back(k + 2, s);
            reads.emplace_back(k + 1, s);
            for (int node = prm.t1 + prm.t2 + 1; node <= k; ++node)
                if (node != l) reads.emplace_back(node, s - hs);
        }
    } else {
        int g = prm.group_of(l);
        auto [gb, ge] = set == 1 ? prm.s1_group(g) : prm.s2_group(g);
        for (int half = 0; half < (prm.two_level ? 2 : 1); ++half) {
            int sub0 = half * hs;
            if (set == 1) {
                for (int s = 2; s <= hs; s += 2) {
                    for (int node = 1; node <= k; ++node)
                        if (node != l) reads.emplace_back(node, sub0 + s);
                    reads.emplace_back(k + 1, sub0 + s);
                    reads.emplace_back(k + 1 + g, sub0 + s);
                    for (int node = gb; node <= ge; ++node)
                        if (node != l) reads.emplace_back(node, sub0 + s - 1);
                }
            } else {
                for (int s = 1; s <= hs; s += 2) {
                    for (int node = 1; node <= k; ++node)
                        if (node != l) reads.emplace_back(node, sub0 + s);
                    reads.emplace_back(k + 1, sub0 + s);
                }
                for (int s = 2; s <= hs - 2; s += 2) {
                    reads.emplace_back(k + 1 + g, sub0 + s + 1);
                    for (int node = gb; node <= ge; ++node)
                        if (node != l) reads.emplace_back(node, sub0 + s);
                }
                // the last even substripe is piggybacked nowhere; decode it
                // through the group's own parity, whose piggyback there comes
                // from an already-decoded odd substripe (parity 1's
                // second-half symbols depend on undecoded even first-half
                // symbols, and any other parity would break the k+1 locality)
                for (int node = 1; node <= k; ++node)
                    if (node != l) reads.emplace_back(node, sub0 + hs);
                reads.emplace_back(k + 1 + g, sub0 + hs);
            }
        }
    }
    auto plan = make_plan(d3.code, l, std::move(reads));
    if (!plan) throw PlanError("design-3 systematic plan does not span");
    return *plan;
}

inline RepairPlan d3_repair_parity(const Design3Code& d3, int j) {
    return full_download_plan(d3.code, j);
}

inline Rational gamma3_sys_measured(int k, int r, int m1) {
    Field f(FieldSpec::gf2ext(8));
    Design3Code d3 = d3_construct(make_cauchy_base(f, k, r), m1);
    long long total = 0;
    for (int l = 1; l <= k; ++l) total += d3_repair_systematic(d3, l).cost();
    return ratio(total, (long long)k * d3.params.alpha() * k);
}

}  // namespace pbcode
