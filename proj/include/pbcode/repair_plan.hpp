#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "pbcode/linear_code.hpp"
#include "pbcode/mat.hpp"

namespace pbcode {

// The symbols read during one node's repair plus the linear reconstruction.
// Cost = number of reads; repair-by-transfer makes read == download.
struct RepairPlan {
    int failed = 0;
    std::vector<std::pair<int, int>> reads;  // (node, substripe), 1-based
    Mat reconstruction;                      // alpha x reads.size()

    int cost() const { return int(reads.size()); }
};

struct PlanError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline Mat read_rows(const LinearCode& code, const std::vector<std::pair<int, int>>& reads) {
    Mat m(reads.size(), code.message_size());
    for (std::size_t i = 0; i < reads.size(); ++i) {
        auto [node, sub] = reads[i];
        if (node < 1 || node > code.n || sub < 1 || sub > code.alpha)
            throw PlanError("read index out of range");
        for (int j = 0; j < code.message_size(); ++j)
            m.at(i, j) = code.grid.at(code.row_index(node, sub), j);
    }
    return m;
}

inline Mat failed_rows(const LinearCode& code, int failed) {
    Mat m(code.alpha, code.message_size());
    for (int s = 1; s <= code.alpha; ++s)
        for (int j = 0; j < code.message_size(); ++j)
            m.at(s - 1, j) = code.grid.at(code.row_index(failed, s), j);
    return m;
}

}  // namespace detail

// Builds the reconstruction matrix for a read list, or nullopt if the failed
// node's symbols are not in the span of the reads.
inline std::optional<RepairPlan> make_plan(const LinearCode& code, int failed,
                                           std::vector<std::pair<int, int>> reads) {
    for (auto [node, sub] : reads)
        if (node == failed) throw PlanError("plan reads the failed node");
    auto coeffs = solve_in_span(code.field, detail::read_rows(code, reads),
                                detail::failed_rows(code, failed));
    if (!coeffs) return std::nullopt;
    return RepairPlan{failed, std::move(reads), std::move(*coeffs)};
}

inline bool plan_validate(const LinearCode& code, const RepairPlan& plan) {
    for (auto [node, sub] : plan.reads)
        if (node == plan.failed || node < 1 || node > code.n || sub < 1 || sub > code.alpha)
            return false;
    Mat basis = detail::read_rows(code, plan.reads);
    Mat want = detail::failed_rows(code, plan.failed);
    if (plan.reconstruction.rows != std::size_t(code.alpha) ||
        plan.reconstruction.cols != plan.reads.size())
        return false;
    return mat_mul(code.field, plan.reconstruction, basis) == want;
}

// Executes the plan against symbols computed from `message`; returns the
// failed node's alpha symbols.
inline std::vector<FieldElem> plan_execute(const LinearCode& code,
                                           const std::vector<FieldElem>& message,
                                           const RepairPlan& plan) {
    if (!plan_validate(code, plan)) throw PlanError("invalid repair plan");
    const Field& f = code.field;
    Mat values(plan.reads.size(), 1);
    for (std::size_t i = 0; i < plan.reads.size(); ++i) {
        auto [node, sub] = plan.reads[i];
        FieldElem acc = 0;
        for (int j = 0; j < code.message_size(); ++j)
            acc = f.add(acc, f.mul(code.grid.at(code.row_index(node, sub), j), message[j]));
        values.at(i, 0) = acc;
    }
    Mat out = mat_mul(f, plan.reconstruction, values);
    std::vector<FieldElem> symbols(code.alpha);
    for (int s = 0; s < code.alpha; ++s) symbols[s] = out.at(s, 0);
    return symbols;
}

// Trivial fallback: read everything the systematic nodes store.
inline RepairPlan full_download_plan(const LinearCode& code, int failed) {
    std::vector<std::pair<int, int>> reads;
    for (int node = 1; node <= code.k; ++node) {
        if (node == failed) continue;
        for (int s = 1; s <= code.alpha; ++s) reads.emplace_back(node, s);
    }
    if (failed <= code.k)
        throw PlanError("full_download_plan is for parity nodes");
    auto plan = make_plan(code, failed, std::move(reads));
    if (!plan) throw PlanError("systematic nodes do not span the code");
    return *plan;
}

}  // namespace pbcode
