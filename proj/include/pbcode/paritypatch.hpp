#pragma once

#include <utility>
#include <vector>

#include "pbcode/basecode.hpp"
#include "pbcode/linear_code.hpp"
#include "pbcode/rational.hpp"
#include "pbcode/repair_plan.hpp"

namespace pbcode {

// Retrofit of efficient parity repair onto a vector code whose parities all
// pass the same projection Q_i while repairing systematic node i. Two code
// instances run side by side; within each parity group the leader's
// instance-2 symbols absorb the other members' instance-1 symbols.

// Checks R * Q^{(i)}_x == Q^{(i)}_y * S for every systematic i; with common
// Q matrices and R = S = identity this is the condition under which the
// retrofit leaves systematic repair untouched.
inline bool lemma_check(const VectorLinearBase& vbc, int x, int y, const Mat& r_mat,
                        const Mat& s_mat) {
    if (x < 1 || x > vbc.r || y < 1 || y > vbc.r) throw CodeParamError("parity index out of range");
    for (int i = 0; i < vbc.k; ++i) {
        const Mat& q = vbc.repair_mats[i];
        if (mat_mul(vbc.field, r_mat, q) != mat_mul(vbc.field, q, s_mat)) return false;
    }
    return true;
}

// floor(r / sqrt(k+1)), clamped to at least one group
inline int pp_group_count(int k, int r) {
    int g = 1;
    while ((long long)(g + 1) * (g + 1) * (k + 1) <= (long long)r * r) ++g;
    return g;
}

struct ParityPatchCode {
    VectorLinearBase base;
    LinearCode code;
    std::vector<std::vector<int>> groups;  // parity indices 1..r, leader first
};

inline ParityPatchCode pp_construct(const VectorLinearBase& vbc) {
    if (!lemma_check(vbc, 1, vbc.r, Mat::identity(vbc.mu), Mat::identity(vbc.repair_mats[0].cols)))
        throw CodeParamError("base code lacks the common-projection property");
    const int k = vbc.k, r = vbc.r, mu = vbc.mu;
    LinearCode code = instantiate(vbc, 2);

    int g = pp_group_count(k, r);
    std::vector<std::vector<int>> groups(g);
    int q = r / g, rem = r % g, next = 1;
    for (int gi = 0; gi < g; ++gi) {
        int size = q + (gi < rem ? 1 : 0);
        for (int j = 0; j < size; ++j) groups[gi].push_back(next++);
    }

    PiggybackSpec spec{code.alpha, {}};
    for (const auto& group : groups) {
        int leader = group[0];
        for (std::size_t m = 1; m < group.size(); ++m)
            for (int sym = 1; sym <= mu; ++sym) {
                std::vector<FieldElem> coeffs(code.message_size(), 0);
                int src = code.row_index(k + group[m], sym);
                for (int j = 0; j < k * mu; ++j)  // instance-1 coordinates only
                    coeffs[j] = code.grid.at(src, j);
                spec.additions.push_back({mu + sym, k + leader, std::move(coeffs)});
            }
    }
    code = apply_piggyback(code, spec);
    return ParityPatchCode{vbc, std::move(code), std::move(groups)};
}

namespace detail {

inline std::vector<int> projected_symbols(const Mat& q) {
    std::vector<int> rows;
    for (std::size_t i = 0; i < q.rows; ++i)
        for (std::size_t j = 0; j < q.cols; ++j)
            if (q.at(i, j) != 0) {
                rows.push_back(int(i) + 1);
                break;
            }
    return rows;
}

}  // namespace detail

// Base-code systematic repair run once per instance; every parity passes the
// symbols its Q projection touches.
inline RepairPlan pp_repair_systematic(const ParityPatchCode& pp, int i) {
    const int k = pp.base.k, mu = pp.base.mu;
    if (i < 1 || i > k) throw PlanError("systematic node out of range");
    std::vector<std::pair<int, int>> reads;
    auto rows = detail::projected_symbols(pp.base.repair_mats[i - 1]);
    for (int inst = 0; inst < 2; ++inst) {
        int sub0 = inst * mu;
        for (auto [node, sym] : pp.base.systematic_reads[i - 1])
            reads.emplace_back(node, sub0 + sym);
        for (int j = 1; j <= pp.base.r; ++j)
            for (int sym : rows) reads.emplace_back(k + j, sub0 + sym);
    }
    auto plan = make_plan(pp.code, i, std::move(reads));
    if (!plan) throw PlanError("retrofitted systematic plan does not span");
    return *plan;
}

// Group leaders re-download the message; other members decode instance 2
// from the systematic nodes, then peel themselves out of the leader's
// piggybacked symbols.
inline RepairPlan pp_repair_parity(const ParityPatchCode& pp, int j) {
    const int k = pp.base.k, mu = pp.base.mu;
    if (j <= k || j > pp.code.n) throw PlanError("not a parity node");
    int pidx = j - k;
    const std::vector<int>* group = nullptr;
    for (const auto& grp : pp.groups)
        for (int m : grp)
            if (m == pidx) group = &grp;
    if (pidx == (*group)[0] || group->size() == 1) return full_download_plan(pp.code, j);
    std::vector<std::pair<int, int>> reads;
    for (int node = 1; node <= k; ++node)
        for (int sym = 1; sym <= mu; ++sym) reads.emplace_back(node, mu + sym);
    for (int sym = 1; sym <= mu; ++sym) reads.emplace_back(k + (*group)[0], mu + sym);
    for (int m : *group)
        if (m != (*group)[0] && m != pidx)
            for (int sym = 1; sym <= mu; ++sym) reads.emplace_back(k + m, sym);
    auto plan = make_plan(pp.code, j, std::move(reads));
    if (!plan) throw PlanError("retrofitted parity plan does not span");
    return *plan;
}

// Average parity-repair fraction with g equal groups of size r/g, taking r/g
// as an exact rational.
inline Rational pp_avg_parity_read(int k, int r) {
    if (k < 1 || r < 2) throw CodeParamError("need k >= 1 and r >= 2");
    Rational rg = ratio(r, pp_group_count(k, r));
    Rational sq = (rg - 1) * (rg - 1);
    return ratio(1, 2) + (Rational(k) + sq) / (Rational(2 * k) * rg);
}

}  // namespace pbcode
