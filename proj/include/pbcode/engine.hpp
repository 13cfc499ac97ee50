#pragma once

#include <algorithm>
#include <functional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pbcode/linear_code.hpp"
#include "pbcode/rational.hpp"
#include "pbcode/repair_plan.hpp"

namespace pbcode {

using SystematicPlanner = std::function<RepairPlan(const LinearCode&, int)>;
using ParityPlanner = std::function<RepairPlan(const LinearCode&, int)>;

// Parity symbols never read by any systematic repair plan.
inline std::vector<std::pair<int, int>> free_slots(const LinearCode& code,
                                                   const SystematicPlanner& planner) {
    std::set<std::pair<int, int>> read;
    for (int l = 1; l <= code.k; ++l)
        for (auto [node, sub] : planner(code, l).reads)
            if (node > code.k) read.insert({node, sub});
    std::vector<std::pair<int, int>> slots;
    for (int node = code.k + 1; node <= code.n; ++node)
        for (int s = 1; s <= code.alpha; ++s)
            if (!read.count({node, s})) slots.emplace_back(node, s);
    return slots;
}

// One parity piggyback placed by the pass: the free slot (k+1, slot_sub)
// now additionally carries the sum of the non-first-parity symbols of
// substripe covered_sub.
struct SlotAssignment {
    int slot_sub = 0;
    int covered_sub = 0;
};

struct PassResult {
    LinearCode code;
    std::vector<SlotAssignment> assignments;
};

// Adds parity piggybacks onto node (k+1)'s free slots. A substripe is a
// coverage target when node (k+1) is read there during systematic repair;
// slots are consumed in ascending substripe order, each taking the earliest
// uncovered target below it. Systematic plans never touch the modified
// symbols, so their reads and costs are unchanged.
inline PassResult parity_piggyback_pass(const LinearCode& code, const SystematicPlanner& planner) {
    auto slots = free_slots(code, planner);
    std::vector<int> node1_slots;
    std::set<int> free_subs;
    for (auto [node, s] : slots)
        if (node == code.k + 1) {
            node1_slots.push_back(s);
            free_subs.insert(s);
        }
    std::sort(node1_slots.begin(), node1_slots.end());

    PassResult out{code, {}};
    std::set<int> covered;
    for (int slot : node1_slots) {
        int target = 0;
        for (int s = 1; s < slot; ++s)
            if (!free_subs.count(s) && !covered.count(s)) { target = s; break; }
        if (!target) continue;
        covered.insert(target);
        out.assignments.push_back({slot, target});
        int ri = out.code.row_index(code.k + 1, slot);
        for (int p = code.k + 2; p <= code.n; ++p) {
            int si = out.code.row_index(p, target);
            for (int j = 0; j < code.message_size(); ++j)
                out.code.grid.at(ri, j) =
                    out.code.field.add(out.code.grid.at(ri, j), out.code.grid.at(si, j));
        }
    }
    return out;
}

// Parity repair exploiting the slots: read the systematic symbols of every
// uncovered substripe, the slot symbols, and the other parities' symbols in
// the covered substripes. Falls back to a full download when the reads do
// not span (node k+1 itself always needs the full message).
inline RepairPlan parity_plan_via_slots(const LinearCode& code, int failed,
                                        const std::vector<SlotAssignment>& assignments) {
    if (failed <= code.k || failed > code.n) throw PlanError("not a parity node");
    if (failed == code.k + 1 || assignments.empty()) return full_download_plan(code, failed);
    std::set<int> covered;
    for (const auto& a : assignments) covered.insert(a.covered_sub);
    std::vector<std::pair<int, int>> reads;
    for (int s = 1; s <= code.alpha; ++s) {
        if (covered.count(s)) continue;
        for (int node = 1; node <= code.k; ++node) reads.emplace_back(node, s);
    }
    for (const auto& a : assignments) reads.emplace_back(code.k + 1, a.slot_sub);
    for (int s : covered)
        for (int p = code.k + 2; p <= code.n; ++p)
            if (p != failed) reads.emplace_back(p, s);
    auto plan = make_plan(code, failed, std::move(reads));
    return plan ? *plan : full_download_plan(code, failed);
}

// Per-node repair costs and averaged read fractions, normalized by the
// message size alpha*k.
struct GammaTable {
    std::vector<int> node_cost;  // index 0 = node 1
    Rational sys_avg{0};
    Rational par_avg{0};
    Rational overall{0};
};

inline GammaTable measure_gamma(const LinearCode& code, const SystematicPlanner& sys_planner,
                                const ParityPlanner& par_planner) {
    GammaTable table;
    long long sys_total = 0, par_total = 0;
    for (int node = 1; node <= code.n; ++node) {
        RepairPlan plan =
            node <= code.k ? sys_planner(code, node) : par_planner(code, node);
        if (!plan_validate(code, plan)) throw PlanError("planner emitted an invalid plan");
        table.node_cost.push_back(plan.cost());
        (node <= code.k ? sys_total : par_total) += plan.cost();
    }
    long long message = (long long)(code.alpha) * code.k;
    table.sys_avg = ratio(sys_total, (long long)(code.k) * message);
    table.par_avg = ratio(par_total, (long long)(code.n - code.k) * message);
    table.overall = ratio(sys_total + par_total, (long long)(code.n) * message);
    return table;
}

struct SweepRow {
    int n = 0, k = 0;
    std::string design;
    int m = 0;
    GammaTable gamma;
};

// Tab-separated table, rationals as num/den plus a decimal column.
inline std::string emit_tables(const std::vector<SweepRow>& rows) {
    std::string out = "n\tk\tdesign\tm\tgamma_sys\tgamma_par\tgamma_all\tgamma_all_dec\n";
    char buf[64];
    for (const auto& row : rows) {
        out += std::to_string(row.n) + '\t' + std::to_string(row.k) + '\t' + row.design + '\t' +
               std::to_string(row.m) + '\t' + rational_str(row.gamma.sys_avg) + '\t' +
               rational_str(row.gamma.par_avg) + '\t' + rational_str(row.gamma.overall) + '\t';
        std::snprintf(buf, sizeof buf, "%.6f\n", rational_double(row.gamma.overall));
        out += buf;
    }
    return out;
}

}  // namespace pbcode
