#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pbcode/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"piggybacked erasure-coding shard store"};
    app.require_subcommand(1);

    std::string input, output, design = "d1", field = "gf8", dir = ".";
    int n = 14, k = 10, m = 1, lost = 0;
    int k_lo = 10, k_hi = 10, r_lo = 2, r_hi = 4;

    auto* enc = app.add_subcommand("encode", "encode a file into n shards");
    enc->add_option("file", input, "input file")->required();
    enc->add_option("--out", dir, "shard directory")->required();
    enc->add_option("--design", design, "base|d1|d2|d3|pp");
    enc->add_option("--n", n, "total nodes");
    enc->add_option("--k", k, "data nodes");
    enc->add_option("--m", m, "instance count");
    enc->add_option("--field", field, "gf8|gf16");

    auto* rep = app.add_subcommand("repair", "regenerate a lost shard");
    rep->add_option("dir", dir, "shard directory")->required();
    rep->add_option("--lost", lost, "node index of the lost shard")->required();

    auto* dec = app.add_subcommand("decode", "restore the original file");
    dec->add_option("dir", dir, "shard directory")->required();
    dec->add_option("--out", output, "output file")->required();

    auto* ana = app.add_subcommand("analyze", "emit repair-fraction tables");
    ana->add_option("--design", design, "base|d1|d2|d3|pp");
    ana->add_option("--k-min", k_lo, "smallest k");
    ana->add_option("--k-max", k_hi, "largest k");
    ana->add_option("--r-min", r_lo, "smallest r");
    ana->add_option("--r-max", r_hi, "largest r");
    ana->add_option("--m", m, "instance count");
    ana->add_option("--field", field, "gf8|gf16");

    auto* ver = app.add_subcommand("verify", "check code properties");
    ver->add_option("--design", design, "base|d1|d2|d3|pp");
    ver->add_option("--n", n, "total nodes");
    ver->add_option("--k", k, "data nodes");
    ver->add_option("--m", m, "instance count");
    ver->add_option("--field", field, "gf8|gf16");

    app.add_subcommand("selftest", "run the built-in golden examples");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : pbcode::kExitParam;
    }

    if (enc->parsed())
        return pbcode::cmd_encode(input, dir, design, n, k, m, field, std::cout);
    if (rep->parsed()) return pbcode::cmd_repair(dir, lost, std::cout);
    if (dec->parsed()) return pbcode::cmd_decode(dir, output, std::cout);
    if (ana->parsed())
        return pbcode::cmd_analyze(design, k_lo, k_hi, r_lo, r_hi, m, field, std::cout);
    if (ver->parsed()) return pbcode::cmd_verify(design, n, k, m, field, std::cout);
    return pbcode::cmd_selftest(std::cout);
}
