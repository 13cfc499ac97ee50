#pragma once

#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "pbcode/engine.hpp"
#include "pbcode/shard.hpp"

namespace pbcode {

inline constexpr int kExitOk = 0;
inline constexpr int kExitParam = 2;
inline constexpr int kExitInsufficient = 3;
inline constexpr int kExitIntegrity = 4;

namespace detail {

template <typename Fn>
inline int run_command(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const CodeParamError& e) {
        err << "error: " << e.what() << '\n';
        return kExitParam;
    } catch (const FieldError& e) {
        err << "error: " << e.what() << '\n';
        return kExitParam;
    } catch (const IntegrityError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIntegrity;
    } catch (const InsufficientData& e) {
        err << "error: " << e.what() << '\n';
        return kExitInsufficient;
    } catch (const ShardError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInsufficient;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitParam;
    }
}

inline Manifest load_manifest(const std::filesystem::path& dir) {
    auto bytes = read_file(dir / "manifest.json");
    return manifest_from_json(nlohmann::json::parse(bytes.begin(), bytes.end()));
}

}  // namespace detail

inline int cmd_encode(const std::filesystem::path& input, const std::filesystem::path& dir,
                      const std::string& design, int n, int k, int m, const std::string& field,
                      std::ostream& out) {
    return detail::run_command(out, [&] {
        Field f(parse_field_name(field));
        DeployedCode dc = build_code(design, f.spec(), n, k, m);
        const LinearCode& code = dc.code;
        int width = symbol_width(f);

        auto data = read_file(input);
        auto padded = pad_to_stripes(data, std::size_t(code.message_size()) * width);
        auto payloads = encode_payloads(code, padded, width);

        Manifest manifest;
        manifest.design = design;
        manifest.field = field;
        manifest.n = n;
        manifest.k = k;
        manifest.alpha = code.alpha;
        manifest.m = m;
        manifest.length = data.size();
        manifest.stripes = padded.size() / (std::size_t(code.message_size()) * width);
        for (const auto& p : payloads) manifest.shard_crc.push_back(crc32(p));

        std::filesystem::create_directories(dir);
        std::uint32_t mhash = manifest_hash(manifest);
        for (int node = 1; node <= n; ++node) write_shard(dir, node, mhash, payloads[node - 1]);
        std::string mjson = manifest_to_json(manifest).dump(2);
        write_file_atomic(dir / "manifest.json",
                          std::vector<std::uint8_t>(mjson.begin(), mjson.end()));
        out << "encoded " << data.size() << " bytes into " << n << " shards, " << manifest.stripes
            << " stripes of " << code.alpha << "x" << k << " symbols\n";
        return kExitOk;
    });
}

inline int cmd_repair(const std::filesystem::path& dir, int lost, std::ostream& out) {
    return detail::run_command(out, [&] {
        Manifest manifest = detail::load_manifest(dir);
        if (lost < 1 || lost > manifest.n) throw CodeParamError("lost node out of range");
        DeployedCode dc = build_code(manifest);
        const LinearCode& code = dc.code;
        int width = symbol_width(code.field);
        std::uint32_t mhash = manifest_hash(manifest);

        RepairPlan plan = dc.repair(lost);
        if (!plan_validate(code, plan)) throw PlanError("repair plan failed validation");

        std::set<int> helper_nodes;
        for (auto [node, sub] : plan.reads) helper_nodes.insert(node);
        std::vector<std::vector<std::uint8_t>> helper(code.n + 1);
        for (int node : helper_nodes) {
            auto path = dir / shard_filename(node);
            if (!std::filesystem::exists(path))
                throw InsufficientData("missing helper shard " + path.string());
            ShardData sd = read_shard(path, mhash);
            if (sd.node != node || crc32(sd.payload) != manifest.shard_crc[node - 1])
                throw IntegrityError("checksum mismatch in " + path.string());
            helper[node] = std::move(sd.payload);
        }

        std::vector<std::uint8_t> payload(manifest.stripes * code.alpha * width);
        detail::parallel_for(manifest.stripes, [&](std::uint64_t st) {
            const Field& f = code.field;
            std::vector<FieldElem> values(plan.reads.size());
            for (std::size_t i = 0; i < plan.reads.size(); ++i) {
                auto [node, sub] = plan.reads[i];
                values[i] = detail::load_symbol(
                    helper[node].data() + (st * code.alpha + sub - 1) * width, width);
            }
            for (int s = 0; s < code.alpha; ++s) {
                FieldElem acc = 0;
                for (std::size_t i = 0; i < values.size(); ++i)
                    acc = f.add(acc, f.mul(plan.reconstruction.at(s, i), values[i]));
                detail::store_symbol(payload.data() + (st * code.alpha + s) * width, acc, width);
            }
        });

        if (crc32(payload) != manifest.shard_crc[lost - 1])
            throw IntegrityError("regenerated shard failed its checksum");
        write_shard(dir, lost, mhash, payload);

        std::uint64_t per_symbol = manifest.stripes * width;
        std::uint64_t total = 0;
        out << "bytes read per helper shard (excluding " << kShardHeaderBytes
            << "-byte headers):\n";
        for (int node : helper_nodes) {
            std::uint64_t syms = 0;
            for (auto [n2, sub] : plan.reads)
                if (n2 == node) ++syms;
            out << "  node " << node << ": " << syms * per_symbol << '\n';
            total += syms * per_symbol;
        }
        Rational frac = ratio(plan.cost(), (long long)code.alpha * code.k);
        out << "total " << total << " of " << per_symbol * code.alpha * code.k
            << " message bytes; fraction " << rational_str(frac) << " = " << std::setprecision(4)
            << rational_double(frac) << '\n';
        return kExitOk;
    });
}

inline int cmd_decode(const std::filesystem::path& dir, const std::filesystem::path& output,
                      std::ostream& out) {
    return detail::run_command(out, [&] {
        Manifest manifest = detail::load_manifest(dir);
        DeployedCode dc = build_code(manifest);
        const LinearCode& code = dc.code;
        int width = symbol_width(code.field);
        std::uint32_t mhash = manifest_hash(manifest);

        std::vector<int> nodes;
        std::vector<std::vector<std::uint8_t>> payloads;
        for (int node = 1; node <= code.n && int(nodes.size()) < code.k; ++node) {
            auto path = dir / shard_filename(node);
            if (!std::filesystem::exists(path)) continue;
            ShardData sd = read_shard(path, mhash);
            if (crc32(sd.payload) != manifest.shard_crc[node - 1])
                throw IntegrityError("checksum mismatch in " + path.string());
            nodes.push_back(node);
            payloads.push_back(std::move(sd.payload));
        }
        if (int(nodes.size()) < code.k)
            throw InsufficientData("need " + std::to_string(code.k) + " shards, found " +
                                   std::to_string(nodes.size()));

        Mat rows(std::size_t(code.k) * code.alpha, code.message_size());
        for (int i = 0; i < code.k; ++i)
            for (int s = 1; s <= code.alpha; ++s)
                for (int j = 0; j < code.message_size(); ++j)
                    rows.at(std::size_t(i) * code.alpha + (s - 1), j) =
                        code.grid.at(code.row_index(nodes[i], s), j);
        auto recon = solve_in_span(code.field, rows, Mat::identity(code.message_size()));
        if (!recon) throw InsufficientData("selected shards do not span the message");

        std::vector<std::uint8_t> padded(manifest.stripes * code.message_size() * width);
        detail::parallel_for(manifest.stripes, [&](std::uint64_t st) {
            const Field& f = code.field;
            std::vector<FieldElem> values(rows.rows);
            for (int i = 0; i < code.k; ++i)
                for (int s = 0; s < code.alpha; ++s)
                    values[std::size_t(i) * code.alpha + s] = detail::load_symbol(
                        payloads[i].data() + (st * code.alpha + s) * width, width);
            for (int j = 0; j < code.message_size(); ++j) {
                FieldElem acc = 0;
                for (std::size_t i = 0; i < values.size(); ++i)
                    acc = f.add(acc, f.mul(recon->at(j, i), values[i]));
                detail::store_symbol(
                    padded.data() + (st * std::size_t(code.message_size()) + j) * width, acc,
                    width);
            }
        });

        if (manifest.length + 8 > padded.size())
            throw IntegrityError("manifest length exceeds decoded data");
        std::uint64_t trailer = 0;
        for (int i = 0; i < 8; ++i)
            trailer |= std::uint64_t(padded[manifest.length + i]) << (8 * i);
        if (trailer != manifest.length)
            throw IntegrityError("length trailer disagrees with manifest");
        padded.resize(manifest.length);
        write_file_atomic(output, padded);
        out << "decoded " << manifest.length << " bytes from " << code.k << " shards\n";
        return kExitOk;
    });
}

inline int cmd_analyze(const std::string& design, int k_lo, int k_hi, int r_lo, int r_hi, int m,
                       const std::string& field, std::ostream& out) {
    return detail::run_command(out, [&] {
        std::vector<SweepRow> rows;
        for (int r = r_lo; r <= r_hi; ++r)
            for (int k = k_lo; k <= k_hi; ++k) {
                std::optional<DeployedCode> dc;
                try {
                    dc = build_code(design, parse_field_name(field), k + r, k, m);
                } catch (const CodeParamError&) {
                    continue;  // parameter combination invalid for this design
                }
                auto planner = [&dc](const LinearCode&, int node) { return dc->repair(node); };
                rows.push_back(
                    {k + r, k, design, m, measure_gamma(dc->code, planner, planner)});
            }
        if (rows.empty()) throw CodeParamError("no valid parameter combinations in range");
        out << emit_tables(rows);
        return kExitOk;
    });
}

inline int cmd_verify(const std::string& design, int n, int k, int m, const std::string& field,
                      std::ostream& out) {
    return detail::run_command(out, [&] {
        Field f(parse_field_name(field));
        DeployedCode dc = build_code(design, f.spec(), n, k, m);
        const LinearCode& code = dc.code;

        bool mds = verify_mds(code);
        out << "mds: " << (mds ? "pass" : "FAIL") << '\n';

        LinearCode plain = design == "pp"
                               ? instantiate(make_common_q_double(f, k, n - k), 2)
                               : instantiate(make_cauchy_base(f, k, n - k), code.alpha);
        bool preserved = theorem1_check(plain, code);
        out << "decodable-set preservation: " << (preserved ? "pass" : "FAIL") << '\n';

        bool plans = true;
        for (int node = 1; node <= code.n; ++node)
            if (!plan_validate(code, dc.repair(node))) plans = false;
        out << "repair plans: " << (plans ? "pass" : "FAIL") << '\n';
        return mds && preserved && plans ? kExitOk : kExitIntegrity;
    });
}

inline int cmd_selftest(std::ostream& out) {
    return detail::run_command(out, [&] {
        int passed = 0, total = 0;
        auto check = [&](const std::string& name, bool ok) {
            ++total;
            if (ok) ++passed;
            out << (ok ? "PASS " : "FAIL ") << name << '\n';
        };

        {  // (6,4) single-pair code: every systematic repair reads 6 of 8
            Design1Code d1 = d1_construct(make_fig1_base(), 1);
            bool ok = true;
            for (int l = 1; l <= 4; ++l) ok = ok && d1_repair_systematic(d1, l).cost() == 6;
            check("(6,4) 2-substripe systematic repair 6/8", ok);
        }
        {  // m=2 extension: parity costs 16 and 13, average 29/32
            Design1Code d1 = d1_construct(make_fig1_base(), 2);
            bool ok = d1_repair_parity(d1, 5).cost() == 16 && d1_repair_parity(d1, 6).cost() == 13;
            auto sys = [&d1](const LinearCode&, int l) { return d1_repair_systematic(d1, l); };
            auto par = [&d1](const LinearCode&, int j) { return d1_repair_parity(d1, j); };
            GammaTable g = measure_gamma(d1.code, sys, par);
            ok = ok && g.par_avg == ratio(29, 32) && g.par_avg == gamma1_par(4, 2, 2);
            check("(6,4) 4-substripe parity repair 16+13, avg 29/32", ok);
        }
        {  // (13,10) masked-combination design: every systematic cost 20 of 30
            Field f(FieldSpec::gf2ext(8));
            Design2Code d2 = d2_construct(make_cauchy_base(f, 10, 3), 1);
            bool ok = true;
            for (int l = 1; l <= 10; ++l) ok = ok && d2_repair_systematic(d2, l).cost() == 20;
            check("(13,10) 3-substripe systematic repair 20/30", ok);
        }
        {  // (11,8) locality design: costs 20/26, average 23/32
            Field f(FieldSpec::gf2ext(8));
            Design3Code d3 = d3_construct(make_cauchy_base(f, 8, 3), 2);
            long long sum = 0;
            bool ok = true;
            for (int l = 1; l <= 8; ++l) {
                int c = d3_repair_systematic(d3, l).cost();
                ok = ok && c == (l <= 4 ? 20 : 26);
                sum += c;
            }
            ok = ok && ratio(sum, 8 * 32) == ratio(23, 32);
            check("(11,8) locality design repair 20/26, avg 23/32", ok);
        }
        {  // (13,10) two-level: 48/64/48, average 544/800, locality <= 11
            Field f(FieldSpec::gf2ext(8));
            Design3Code d3 = d3_construct(make_cauchy_base(f, 10, 3), 2);
            long long sum = 0;
            bool ok = true;
            for (int l = 1; l <= 10; ++l) {
                RepairPlan plan = d3_repair_systematic(d3, l);
                int want = l <= 4 ? 48 : (l <= 8 ? 64 : 48);
                ok = ok && plan.cost() == want;
                std::set<int> nodes;
                for (auto [node, sub] : plan.reads) nodes.insert(node);
                ok = ok && int(nodes.size()) <= 11;
                sum += plan.cost();
            }
            ok = ok && ratio(sum, 10 * 80) == ratio(544, 800);
            check("(13,10) two-level repair 48/64/48, avg 544/800", ok);
        }
        {  // GF(5) vector retrofit: node-4 repair 6 of 8, systematic unchanged
            ParityPatchCode pp = pp_construct(make_fig6_vector_base());
            bool ok = pp_repair_parity(pp, 4).cost() == 6 &&
                      pp_repair_parity(pp, 3).cost() == 8 &&
                      pp_repair_systematic(pp, 1).cost() == 6 &&
                      pp_repair_systematic(pp, 2).cost() == 6;
            long long par_sum = pp_repair_parity(pp, 3).cost() + pp_repair_parity(pp, 4).cost();
            ok = ok && ratio(par_sum, 2 * 8) == ratio(7, 8);
            check("(4,2) GF(5) parity retrofit repair 6/8, avg 7/8", ok);
        }

        out << (passed == total ? "PASS " : "FAIL ") << passed << "/" << total
            << " golden examples\n";
        return passed == total ? kExitOk : kExitIntegrity;
    });
}

}  // namespace pbcode
