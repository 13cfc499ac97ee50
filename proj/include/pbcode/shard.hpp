#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pbcode/basecode.hpp"
#include "pbcode/design1.hpp"
#include "pbcode/design2.hpp"
#include "pbcode/design3.hpp"
#include "pbcode/linear_code.hpp"
#include "pbcode/paritypatch.hpp"
#include "pbcode/repair_plan.hpp"

namespace pbcode {

struct ShardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IntegrityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InsufficientData : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::uint32_t crc32(const std::uint8_t* data, std::size_t len, std::uint32_t seed = 0) {
    static const auto table = [] {
        std::array<std::uint32_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int b = 0; b < 8; ++b) c = (c >> 1) ^ (c & 1 ? 0xEDB88320u : 0);
            t[i] = c;
        }
        return t;
    }();
    std::uint32_t c = ~seed;
    for (std::size_t i = 0; i < len; ++i) c = table[(c ^ data[i]) & 0xFF] ^ (c >> 8);
    return ~c;
}

inline std::uint32_t crc32(const std::vector<std::uint8_t>& data) {
    return crc32(data.data(), data.size());
}

struct Manifest {
    int version = 1;
    std::string design;  // base | d1 | d2 | d3 | pp
    std::string field;   // gf8 | gf16
    int n = 0, k = 0, alpha = 0, m = 1;
    std::uint64_t length = 0;   // original file size in bytes
    std::uint64_t stripes = 0;
    std::uint64_t seed = 0;     // reserved for randomized bases
    std::vector<std::uint32_t> shard_crc;
};

inline nlohmann::json manifest_to_json(const Manifest& m) {
    return nlohmann::json{{"version", m.version}, {"design", m.design}, {"field", m.field},
                          {"n", m.n},             {"k", m.k},           {"alpha", m.alpha},
                          {"m", m.m},             {"length", m.length}, {"stripes", m.stripes},
                          {"seed", m.seed},       {"shard_crc", m.shard_crc}};
}

inline Manifest manifest_from_json(const nlohmann::json& j) {
    Manifest m;
    m.version = j.at("version").get<int>();
    m.design = j.at("design").get<std::string>();
    m.field = j.at("field").get<std::string>();
    m.n = j.at("n").get<int>();
    m.k = j.at("k").get<int>();
    m.alpha = j.at("alpha").get<int>();
    m.m = j.at("m").get<int>();
    m.length = j.at("length").get<std::uint64_t>();
    m.stripes = j.at("stripes").get<std::uint64_t>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.shard_crc = j.at("shard_crc").get<std::vector<std::uint32_t>>();
    return m;
}

// Hash over the grid-determining parameters only (not the per-shard CRCs),
// so the value is stable from encode time through repair.
inline std::uint32_t manifest_hash(const Manifest& m) {
    Manifest bare = m;
    bare.shard_crc.clear();
    std::string s = manifest_to_json(bare).dump();
    return crc32(reinterpret_cast<const std::uint8_t*>(s.data()), s.size());
}

inline FieldSpec parse_field_name(const std::string& name) {
    if (name == "gf8") return FieldSpec::gf2ext(8);
    if (name == "gf16") return FieldSpec::gf2ext(16);
    throw CodeParamError("unknown field '" + name + "' (use gf8 or gf16)");
}

// A constructed code plus its repair planner, rebuilt deterministically from
// manifest parameters.
struct DeployedCode {
    LinearCode code;
    std::function<RepairPlan(int)> repair;  // any node, 1-based
};

inline DeployedCode build_code(const std::string& design, const FieldSpec& fspec, int n, int k,
                               int m) {
    Field f(fspec);
    int r = n - k;
    if (r < 1 || k < 1) throw CodeParamError("need n > k >= 1");
    if (design == "base") {
        auto code = instantiate(make_cauchy_base(f, k, r), 1);
        auto repair = [code](int node) {
            if (node <= code.k) {
                std::vector<std::pair<int, int>> reads;
                for (int i = 1; i <= code.k + 1; ++i)
                    if (i != node) reads.emplace_back(i, 1);
                auto plan = make_plan(code, node, std::move(reads));
                if (!plan) throw PlanError("base repair does not span");
                return *plan;
            }
            return full_download_plan(code, node);
        };
        return DeployedCode{code, repair};
    }
    if (design == "d1") {
        auto d1 = std::make_shared<Design1Code>(d1_construct(make_cauchy_base(f, k, r), m));
        auto repair = [d1](int node) {
            return node <= d1->params.k ? d1_repair_systematic(*d1, node)
                                        : d1_repair_parity(*d1, node);
        };
        return DeployedCode{d1->code, repair};
    }
    if (design == "d2") {
        auto d2 = std::make_shared<Design2Code>(d2_construct(make_cauchy_base(f, k, r), m));
        auto repair = [d2](int node) {
            return node <= d2->params.k ? d2_repair_systematic(*d2, node)
                                        : d2_repair_parity(*d2, node);
        };
        return DeployedCode{d2->code, repair};
    }
    if (design == "d3") {
        auto d3 = std::make_shared<Design3Code>(d3_construct(make_cauchy_base(f, k, r), m));
        auto repair = [d3](int node) {
            return node <= d3->params.k ? d3_repair_systematic(*d3, node)
                                        : d3_repair_parity(*d3, node);
        };
        return DeployedCode{d3->code, repair};
    }
    if (design == "pp") {
        auto pp = std::make_shared<ParityPatchCode>(pp_construct(make_common_q_double(f, k, r)));
        auto repair = [pp](int node) {
            return node <= pp->base.k ? pp_repair_systematic(*pp, node)
                                      : pp_repair_parity(*pp, node);
        };
        return DeployedCode{pp->code, repair};
    }
    throw CodeParamError("unknown design '" + design + "'");
}

inline DeployedCode build_code(const Manifest& m) {
    return build_code(m.design, parse_field_name(m.field), m.n, m.k, m.m);
}

inline int symbol_width(const Field& f) { return f.order() > 256 ? 2 : 1; }

inline int thread_count() {
    if (const char* env = std::getenv("PBCODE_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? int(hw) : 1;
}

namespace detail {

template <typename Fn>
inline void parallel_for(std::uint64_t count, Fn&& fn) {
    int threads = std::min<std::uint64_t>(thread_count(), count ? count : 1);
    if (threads <= 1) {
        for (std::uint64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            for (std::uint64_t i = t; i < count; i += threads) fn(i);
        });
    for (auto& th : pool) th.join();
}

inline FieldElem load_symbol(const std::uint8_t* p, int width) {
    FieldElem v = p[0];
    if (width == 2) v |= FieldElem(p[1]) << 8;
    return v;
}

inline void store_symbol(std::uint8_t* p, FieldElem v, int width) {
    p[0] = std::uint8_t(v & 0xFF);
    if (width == 2) p[1] = std::uint8_t(v >> 8 & 0xFF);
}

inline void store_u32(std::uint8_t* p, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) p[i] = std::uint8_t(v >> (8 * i) & 0xFF);
}

inline std::uint32_t load_u32(const std::uint8_t* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(p[i]) << (8 * i);
    return v;
}

}  // namespace detail

// Original bytes plus an 8-byte little-endian length trailer, zero-padded to
// whole stripes.
inline std::vector<std::uint8_t> pad_to_stripes(const std::vector<std::uint8_t>& data,
                                                std::size_t stripe_bytes) {
    std::vector<std::uint8_t> padded = data;
    std::uint64_t len = data.size();
    for (int i = 0; i < 8; ++i) padded.push_back(std::uint8_t(len >> (8 * i) & 0xFF));
    while (padded.size() % stripe_bytes) padded.push_back(0);
    return padded;
}

// Per-node payloads: for each stripe, the node's alpha symbols.
inline std::vector<std::vector<std::uint8_t>> encode_payloads(const LinearCode& code,
                                                              const std::vector<std::uint8_t>& padded,
                                                              int width) {
    const std::size_t stripe_bytes = std::size_t(code.message_size()) * width;
    const std::uint64_t stripes = padded.size() / stripe_bytes;
    std::vector<std::vector<std::uint8_t>> payloads(
        code.n, std::vector<std::uint8_t>(stripes * code.alpha * width));
    detail::parallel_for(stripes, [&](std::uint64_t st) {
        std::vector<FieldElem> message(code.message_size());
        const std::uint8_t* src = padded.data() + st * stripe_bytes;
        for (int j = 0; j < code.message_size(); ++j)
            message[j] = detail::load_symbol(src + std::size_t(j) * width, width);
        auto symbols = encode(code, message);
        for (int node = 0; node < code.n; ++node)
            for (int s = 0; s < code.alpha; ++s)
                detail::store_symbol(
                    payloads[node].data() + (st * code.alpha + s) * width, symbols[node][s], width);
    });
    return payloads;
}

inline constexpr char kShardMagic[4] = {'P', 'B', 'C', '1'};
inline constexpr std::size_t kShardHeaderBytes = 12;

inline std::string shard_filename(int node) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "shard_%02d.pbc", node);
    return buf;
}

inline void write_file_atomic(const std::filesystem::path& path,
                              const std::vector<std::uint8_t>& bytes) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ShardError("cannot write " + tmp.string());
        out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
        if (!out) throw ShardError("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ShardError("cannot read " + path.string());
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                     std::istreambuf_iterator<char>());
}

inline void write_shard(const std::filesystem::path& dir, int node, std::uint32_t mhash,
                        const std::vector<std::uint8_t>& payload) {
    std::vector<std::uint8_t> bytes(kShardHeaderBytes + payload.size());
    std::copy(std::begin(kShardMagic), std::end(kShardMagic), bytes.begin());
    detail::store_u32(bytes.data() + 4, mhash);
    detail::store_u32(bytes.data() + 8, std::uint32_t(node));
    std::copy(payload.begin(), payload.end(), bytes.begin() + kShardHeaderBytes);
    write_file_atomic(dir / shard_filename(node), bytes);
}

struct ShardData {
    int node = 0;
    std::vector<std::uint8_t> payload;
};

inline ShardData read_shard(const std::filesystem::path& path, std::uint32_t expect_hash) {
    auto bytes = read_file(path);
    if (bytes.size() < kShardHeaderBytes || !std::equal(std::begin(kShardMagic),
                                                        std::end(kShardMagic), bytes.begin()))
        throw IntegrityError("bad shard header in " + path.string());
    if (detail::load_u32(bytes.data() + 4) != expect_hash)
        throw IntegrityError("shard " + path.string() + " belongs to a different manifest");
    ShardData sd;
    sd.node = int(detail::load_u32(bytes.data() + 8));
    sd.payload.assign(bytes.begin() + kShardHeaderBytes, bytes.end());
    return sd;
}

}  // namespace pbcode
