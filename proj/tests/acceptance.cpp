// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. An optional argument names the CLI binary; when present its
// selftest is run as part of the round-trip criterion.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pbcode/commands.hpp"

using namespace pbcode;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

template <typename Fn>
void criterion(int num, const std::string& what, Fn&& fn) {
    bool ok = false;
    std::string detail;
    try {
        ok = fn();
    } catch (const std::exception& e) {
        detail = std::string(" (") + e.what() + ")";
    }
    if (!ok) ++g_failures;
    std::cout << "CRITERION " << num << ": " << (ok ? "PASS" : "FAIL") << " " << what << detail
              << std::endl;
}

std::vector<FieldElem> random_message(const LinearCode& code, std::mt19937& rng) {
    std::vector<FieldElem> msg(code.message_size());
    for (auto& v : msg) v = rng() % code.field.order();
    return msg;
}

bool plans_execute(const LinearCode& code, const std::function<RepairPlan(int)>& planner,
                   std::mt19937& rng, int trials = 20) {
    for (int node = 1; node <= code.n; ++node) {
        RepairPlan plan = planner(node);
        if (!plan_validate(code, plan)) return false;
        for (int t = 0; t < trials; ++t) {
            auto msg = random_message(code, rng);
            if (plan_execute(code, msg, plan) != encode(code, msg)[node - 1]) return false;
        }
    }
    return true;
}

std::vector<FieldElem> row16(std::initializer_list<FieldElem> v) { return v; }

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";

    criterion(1, "(6,4) two-substripe code matches the reference grid, systematic repair 6/8",
              [] {
                  Design1Code d1 = d1_construct(make_fig1_base(), 1);
                  const LinearCode& c = d1.code;
                  bool ok = c.row(5, 1) == std::vector<FieldElem>{1, 1, 1, 1, 0, 0, 0, 0} &&
                            c.row(5, 2) == std::vector<FieldElem>{0, 0, 0, 0, 1, 1, 1, 1} &&
                            c.row(6, 1) == std::vector<FieldElem>{0, 0, 3, 4, 1, 2, 3, 4} &&
                            c.row(6, 2) == std::vector<FieldElem>{1, 2, 0, 0, 1, 2, 3, 4};
                  for (int i = 1; i <= 4; ++i)
                      for (int s = 1; s <= 2; ++s)
                          for (int j = 0; j < 8; ++j)
                              ok = ok && c.row(i, s)[j] == (j == (s - 1) * 4 + i - 1 ? 1u : 0u);
                  for (int l = 1; l <= 4; ++l)
                      ok = ok && d1_repair_systematic(d1, l).cost() == 6;
                  return ok;
              });

    criterion(2, "four-substripe extension grid, parity repair 16 and 13, average 29/32", [] {
        Design1Code d1 = d1_construct(make_fig1_base(), 2);
        const LinearCode& c = d1.code;
        bool ok =
            c.row(5, 1) == row16({1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}) &&
            c.row(5, 2) == row16({0, 0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0}) &&
            c.row(5, 3) == row16({1, 2, 0, 0, 1, 2, 3, 4, 1, 1, 1, 1, 0, 0, 0, 0}) &&
            c.row(5, 4) == row16({0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1}) &&
            c.row(6, 1) == row16({0, 0, 3, 4, 1, 2, 3, 4, 0, 0, 0, 0, 0, 0, 0, 0}) &&
            c.row(6, 2) == row16({1, 2, 0, 0, 1, 2, 3, 4, 0, 0, 0, 0, 0, 0, 0, 0}) &&
            c.row(6, 3) == row16({0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 3, 4, 1, 2, 3, 4}) &&
            c.row(6, 4) == row16({0, 0, 0, 0, 0, 0, 0, 0, 1, 2, 0, 0, 1, 2, 3, 4});
        ok = ok && d1_repair_parity(d1, 5).cost() == 16 && d1_repair_parity(d1, 6).cost() == 13;
        auto sys = [&d1](const LinearCode&, int l) { return d1_repair_systematic(d1, l); };
        auto par = [&d1](const LinearCode&, int j) { return d1_repair_parity(d1, j); };
        GammaTable g = measure_gamma(d1.code, sys, par);
        return ok && g.par_avg == ratio(29, 32) && g.par_avg == gamma1_par(4, 2, 2);
    });

    criterion(3, "(13,10) masked-combination design: every systematic repair costs 20 of 30", [] {
        Field f(FieldSpec::gf2ext(8));
        Design2Code d2 = d2_construct(make_cauchy_base(f, 10, 3), 1);
        for (int l = 1; l <= 10; ++l)
            if (d2_repair_systematic(d2, l).cost() != 20) return false;
        return true;
    });

    criterion(4, "(11,8) locality design: per-node costs 20 and 26, average 23/32", [] {
        Field f(FieldSpec::gf2ext(8));
        Design3Code d3 = d3_construct(make_cauchy_base(f, 8, 3), 2);
        long long sum = 0;
        for (int l = 1; l <= 8; ++l) {
            int c = d3_repair_systematic(d3, l).cost();
            if (c != (l <= 4 ? 20 : 26)) return false;
            sum += c;
        }
        return ratio(sum, 8 * 32) == ratio(23, 32);
    });

    criterion(5, "(13,10) two-level design: costs 48/64/48, average 544/800, locality <= 11", [] {
        Field f(FieldSpec::gf2ext(8));
        Design3Code d3 = d3_construct(make_cauchy_base(f, 10, 3), 2);
        long long sum = 0;
        for (int l = 1; l <= 10; ++l) {
            RepairPlan plan = d3_repair_systematic(d3, l);
            if (plan.cost() != (l <= 4 ? 48 : l <= 8 ? 64 : 48)) return false;
            std::set<int> nodes;
            for (auto [node, sub] : plan.reads) nodes.insert(node);
            if (int(nodes.size()) > 11) return false;
            sum += plan.cost();
        }
        return ratio(sum, 10 * 80) == ratio(544, 800);
    });

    criterion(6, "GF(5) vector retrofit grid, node-4 repair 6/8, parity average 7/8", [] {
        VectorLinearBase vbc = make_fig6_vector_base();
        ParityPatchCode pp = pp_construct(vbc);
        LinearCode plain = instantiate(vbc, 2);
        bool ok = true;
        for (int node = 1; node <= 4; ++node)
            for (int s = 1; s <= 2; ++s) ok = ok && pp.code.row(node, s) == plain.row(node, s);
        for (int node = 1; node <= 2; ++node)
            for (int s = 3; s <= 4; ++s) ok = ok && pp.code.row(node, s) == plain.row(node, s);
        for (int s = 3; s <= 4; ++s) {
            auto expect = plain.row(3, s);
            auto addend = plain.row(4, s - 2);
            for (std::size_t j = 0; j < expect.size(); ++j)
                expect[j] = pp.code.field.add(expect[j], addend[j]);
            ok = ok && pp.code.row(3, s) == expect;
        }
        ok = ok && pp.code.row(4, 3) == plain.row(4, 3) && pp.code.row(4, 4) == plain.row(4, 4);
        ok = ok && pp_repair_parity(pp, 4).cost() == 6 && pp_repair_parity(pp, 3).cost() == 8;
        ok = ok && pp_repair_systematic(pp, 1).cost() == 6 &&
             pp_repair_systematic(pp, 2).cost() == 6;  // 3 per instance
        long long par_sum = pp_repair_parity(pp, 3).cost() + pp_repair_parity(pp, 4).cost();
        return ok && ratio(par_sum, 2 * 8) == ratio(7, 8);
    });

    criterion(7, "average parity-read closed form equals (2k+2)/(3k) at r=3 for k in 2..20", [] {
        for (int k = 2; k <= 20; ++k) {
            if (pp_group_count(k, 3) != 1) return false;
            if (pp_avg_parity_read(k, 3) != ratio(2 * k + 2, 3 * k)) return false;
        }
        return true;
    });

    criterion(8, "measured sweep matches the closed forms for r in 2..5, k in r..20, m in 1..3",
              [] {
                  Field f(FieldSpec::gf2ext(8));
                  for (int r = 2; r <= 5; ++r)
                      for (int k = r; k <= 20; ++k)
                          for (int m = 1; m <= 3; ++m) {
                              ScalarMdsBase base = make_cauchy_base(f, k, r);
                              Design1Code d1 = d1_construct(base, m);
                              auto sys = [&d1](const LinearCode&, int l) {
                                  return d1_repair_systematic(d1, l);
                              };
                              auto par = [&d1](const LinearCode&, int j) {
                                  return d1_repair_parity(d1, j);
                              };
                              GammaTable g = measure_gamma(d1.code, sys, par);
                              if (g.sys_avg != gamma1_sys(k, r)) return false;
                              if (g.par_avg != gamma1_par(k, r, m)) return false;
                              if (r < 3 || k < 2) continue;  // no valid partition below this
                              Design2Code d2 = d2_construct(base, m);
                              for (int l = 1; l <= k; ++l) {
                                  int unit = (r - 2) * k + (r - 1) * d2.params.set_size(
                                                                d2.params.set_of(l));
                                  if (d2_repair_systematic(d2, l).cost() != m * unit) return false;
                              }
                          }
                  return true;
              });

    criterion(9, "exhaustive decodability, random-spec preservation, plan execution, sweep table",
              [] {
                  Field f(FieldSpec::gf2ext(8));
                  std::mt19937 rng(2026);

                  Design1Code fig1 = d1_construct(make_fig1_base(), 1);
                  Design1Code fig2 = d1_construct(make_fig1_base(), 2);
                  Design2Code d2 = d2_construct(make_cauchy_base(f, 10, 3), 1);
                  Design3Code d3a = d3_construct(make_cauchy_base(f, 8, 3), 2);
                  Design3Code d3b = d3_construct(make_cauchy_base(f, 10, 3), 2);
                  ParityPatchCode pp5 = pp_construct(make_fig6_vector_base());
                  ParityPatchCode pp8 = pp_construct(make_common_q_double(f, 10, 3));
                  for (const LinearCode* c : {&fig1.code, &fig2.code, &d2.code, &d3a.code,
                                              &d3b.code, &pp5.code, &pp8.code})
                      if (!verify_mds(*c)) return false;

                  int checked = 0;
                  while (checked < 100) {
                      int k = 3 + rng() % 3, r = 2 + rng() % 2, alpha = 2 + rng() % 2;
                      LinearCode plain = instantiate(make_cauchy_base(f, k, r), alpha);
                      PiggybackSpec spec{alpha, {}};
                      int adds = 1 + rng() % 4;
                      for (int i = 0; i < adds; ++i) {
                          int sub = 2 + rng() % (alpha - 1);
                          int node = 1 + rng() % plain.n;
                          std::vector<FieldElem> coeffs(plain.message_size(), 0);
                          for (int j = 0; j < (sub - 1) * k; ++j) coeffs[j] = rng() % 256;
                          spec.additions.push_back({sub, node, std::move(coeffs)});
                      }
                      if (!theorem1_check(plain, apply_piggyback(plain, spec))) return false;
                      ++checked;
                  }

                  auto d1p = [&fig2](int n) {
                      return n <= 4 ? d1_repair_systematic(fig2, n) : d1_repair_parity(fig2, n);
                  };
                  auto d2p = [&d2](int n) {
                      return n <= 10 ? d2_repair_systematic(d2, n) : d2_repair_parity(d2, n);
                  };
                  auto d3p = [&d3b](int n) {
                      return n <= 10 ? d3_repair_systematic(d3b, n) : d3_repair_parity(d3b, n);
                  };
                  auto ppp = [&pp5](int n) {
                      return n <= 2 ? pp_repair_systematic(pp5, n) : pp_repair_parity(pp5, n);
                  };
                  if (!plans_execute(fig2.code, d1p, rng)) return false;
                  if (!plans_execute(d2.code, d2p, rng)) return false;
                  if (!plans_execute(d3b.code, d3p, rng)) return false;
                  if (!plans_execute(pp5.code, ppp, rng)) return false;

                  std::ostringstream table;
                  if (cmd_analyze("d1", 4, 6, 2, 2, 1, "gf8", table) != kExitOk) return false;
                  return table.str().rfind("n\tk\tdesign", 0) == 0 &&
                         table.str().find("3/4") != std::string::npos;
              });

    criterion(10, "encode/repair/decode round trip is byte-identical with exact read accounting",
              [&cli] {
                  std::mt19937 rng(64);
                  fs::path root = fs::temp_directory_path() /
                                  ("pbcode_accept_" + std::to_string(rng()));
                  fs::create_directories(root);
                  struct Case {
                      std::string design;
                      int n, k, m;
                  };
                  bool ok = true;
                  for (const Case& c : {Case{"d1", 6, 4, 1}, Case{"d2", 13, 10, 1},
                                        Case{"d3", 13, 10, 2}, Case{"pp", 13, 10, 1}}) {
                      std::vector<std::uint8_t> data(64 * 1024);
                      for (auto& b : data) b = std::uint8_t(rng());
                      fs::path dir = root / c.design;
                      fs::create_directories(dir);
                      write_file_atomic(dir / "in.bin", data);
                      std::ostringstream log;
                      ok = ok && cmd_encode(dir / "in.bin", dir / "shards", c.design, c.n, c.k,
                                            c.m, "gf8", log) == kExitOk;
                      if (!ok) break;
                      fs::remove(dir / "shards" / shard_filename(1));
                      std::ostringstream rep;
                      ok = ok && cmd_repair(dir / "shards", 1, rep) == kExitOk;
                      DeployedCode dc = build_code(c.design, FieldSpec::gf2ext(8), c.n, c.k, c.m);
                      Rational frac = ratio(dc.repair(1).cost(),
                                            (long long)dc.code.alpha * dc.code.k);
                      ok = ok && rep.str().find("fraction " + rational_str(frac)) !=
                                     std::string::npos;
                      for (int node = c.k + 1; node <= c.n; ++node)
                          fs::remove(dir / "shards" / shard_filename(node));
                      ok = ok && cmd_decode(dir / "shards", dir / "out.bin", log) == kExitOk;
                      ok = ok && read_file(dir / "out.bin") == data;
                  }
                  std::error_code ec;
                  fs::remove_all(root, ec);
                  if (ok && !cli.empty())
                      ok = std::system(("'" + cli + "' selftest > /dev/null").c_str()) == 0;
                  return ok;
              });

    std::cout << (g_failures ? "ACCEPTANCE: FAIL" : "ACCEPTANCE: PASS") << " ("
              << (10 - g_failures) << "/10 criteria)" << std::endl;
    return g_failures ? 1 : 0;
}
