#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "sovlab/gl12.hpp"
#include "sovlab/harness/commands.hpp"

using namespace sovlab;
using namespace sovlab::harness;
namespace fs = std::filesystem;

namespace {

std::string round_trip(const std::string& text) { return serialize(parse_config(text)); }

fs::path scratch_dir(const std::string& name) {
    const auto d = fs::temp_directory_path() / ("sovlab_harness_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

int run_cli(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " " + std::string(SOVLAB_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("config round trip is byte-identical") {
    const RunConfig defaults;
    const std::string s0 = serialize(defaults);
    CHECK(round_trip(s0) == s0);
    CHECK(round_trip(round_trip(s0)) == s0);

    const std::string resolved = serialize(resolve(defaults));
    CHECK(round_trip(resolved) == resolved);

    RunConfig c;
    c.sites = 3;
    c.eta = cplx(0.1, -1.0 / 3.0);
    c.xi = {0.0, cplx(1e-17, 2.5), cplx(-0.0, 0.7)};
    c.twist.kind = "eigenvalues";
    c.twist.values = {0.0, cplx(0.3, 0.1), cplx(-1.0, 0.2)};
    c.twist.similarity = Mat::Identity(3, 3);
    c.source.kind = "explicit";
    c.source.sites = {{1.0, cplx(0.0, 1.0), 2.0}};
    c.tol.residual = 3e-9;
    c.seed = 18446744073709551615ull;
    const std::string s1 = serialize(c);
    CHECK(round_trip(s1) == s1);

    RunConfig h;
    h.model.kind = "hubbard";
    h.model.branch = "shifted";
    h.twist.kind = "hubbard";
    h.twist.family = 3;
    h.twist.beta = cplx(0.2, -0.4);
    const std::string s2 = serialize(h);
    CHECK(round_trip(s2) == s2);
}

TEST_CASE("defaults are recorded explicitly") {
    const auto c = parse_config(R"({"sites": 1})");
    const auto j = json::parse(serialize(c));
    for (const char* k : {"model", "sites", "eta", "xi", "twist", "source", "samples", "tolerances", "method", "seed", "output"})
        CHECK(j.contains(k));
    CHECK(j["tolerances"]["residual"].get<double>() == 1e-8);
    CHECK(j["tolerances"]["exact"].get<double>() == 1e-12);
    CHECK(j["twist"]["kind"] == "random");
}

TEST_CASE("config diagnostics name the field or line") {
    auto message = [](const std::string& text) {
        try {
            parse_config(text);
        } catch (const configuration_error& e) {
            return std::string(e.what());
        }
        return std::string("accepted");
    };
    CHECK(message(R"({"sites": 2, "bogus": 1})").find("'bogus'") != std::string::npos);
    CHECK(message(R"({"twist": {"kind": "eigenvalues", "values": [[1,0],[2]]}})").find("twist.values[1]") != std::string::npos);
    CHECK(message(R"({"model": {"kind": "gl", "m": "one"}})").find("model.m") != std::string::npos);
    CHECK(message(R"({"method": "magic"})").find("method") != std::string::npos);
    CHECK(message("{\n  \"sites\": 2,\n  \"eta\": [1, 0]\n  \"xi\": null\n}").find("line 4") != std::string::npos);
    CHECK(message(R"({"sites": 2, "xi": [[0, 0]]})").find("'xi'") != std::string::npos);
    CHECK(message(R"({"tolerances": {"residual": -1}})").find("tolerances.residual") != std::string::npos);
}

TEST_CASE("resolve draws once and is idempotent") {
    RunConfig c;
    c.seed = 42;
    const auto r1 = resolve(c), r2 = resolve(c);
    CHECK(serialize(r1) == serialize(r2));
    CHECK(serialize(resolve(r1)) == serialize(r1));
    CHECK(r1.eta.has_value());
    CHECK(r1.xi.size() == 2);
    CHECK(r1.twist.kind == "eigenvalues");
    CHECK(static_cast<int>(r1.samples.points.size()) == r1.samples.count);
    c.seed = 43;
    CHECK(serialize(resolve(c)) != serialize(r1));

    RunConfig k;
    k.twist.khat = true;
    CHECK(resolve(k).twist.values[0] == cplx(0.0));
    CHECK(is_khat(build_chain(resolve(k))));

    RunConfig h;
    h.model.kind = "hubbard";
    h.twist.family = 2;
    const auto rh = resolve(h);
    CHECK(rh.twist.kind == "hubbard");
    CHECK(rh.eta->real() == 0.0);
    CHECK_NOTHROW(build_hubbard(rh));
}

TEST_CASE("CSV formatting") {
    CHECK(format_complex(cplx(1.5, -0.25)) == "1.5-0.25j");
    CHECK(format_complex(cplx(-2.0, 0.0)) == "-2+0j");
    Table t{"t", {"a", "b,c"}, {{std::string("x\"y"), cplx(0.0, 1.0)}, {long(3), true}}};
    CHECK(t.csv() == "a,\"b,c\"\n\"x\"\"y\",0+1j\n3,true\n");
}

TEST_CASE("report verdicts and exit codes") {
    Report r;
    r.at_most("a", 1e-13, 1e-12);
    r.at_least("b", 2.0, 1.0);
    CHECK(r.exit_code() == exit_pass);
    r.at_most("c", std::nan(""), 1.0);
    CHECK(r.exit_code() == exit_residual);
    r.incomplete = true;
    CHECK(r.exit_code() == exit_incomplete);
    CHECK(r.to_json()["verdict"] == "incomplete");
}

TEST_CASE("verify targets") {
    RunConfig c;
    c.samples.count = 6;
    const auto ybe = cmd_verify(c, VerifyTarget::ybe);
    CHECK(ybe.exit_code() == exit_pass);
    CHECK(ybe.find("ybe")->value < 1e-12);
    CHECK(ybe.tables.at(0).rows.size() == 6);

    const auto ib = cmd_verify(c, VerifyTarget::inner_boundary);
    CHECK(ib.exit_code() == exit_pass);
    CHECK(ib.find("inner_boundary")->value < 1e-8);

    c.samples.count = 2;
    const auto fu = cmd_verify(c, VerifyTarget::fusion);
    CHECK(fu.exit_code() == exit_pass);

    RunConfig h;
    h.model.kind = "hubbard";
    h.samples.count = 3;
    CHECK(cmd_verify(h, VerifyTarget::shastry).exit_code() == exit_pass);
    CHECK_THROWS_AS(cmd_verify(h, VerifyTarget::ybe), configuration_error);

    // λ + μ = π sits on the sin(λ + μ) pole
    h.samples.points = {cplx(0.4, 0.1), cplx(M_PI - 0.4, -0.1), cplx(0.2, 0.3)};
    try {
        cmd_verify(h, VerifyTarget::shastry);
        FAIL("pole not reported");
    } catch (const evaluation_error& e) {
        CHECK(std::string(e.what()).find("(lambda, mu)") != std::string::npos);
    }
}

TEST_CASE("spectrum reports are deterministic and complete") {
    RunConfig c;
    c.seed = 9;
    const auto a = cmd_spectrum(c), b = cmd_spectrum(c);
    CHECK(a.exit_code() == exit_pass);
    CHECK(a.to_json(false).dump() == b.to_json(false).dump());
    CHECK(a.tables.at(0).rows.size() >= 9);
    CHECK(a.summary["accepted"].get<long>() == 9);

    RunConfig k;
    k.seed = 10;
    k.twist.khat = true;
    k.method = "cubic";
    const auto r = cmd_spectrum(k);
    CHECK(r.exit_code() == exit_pass);
    const Table* qsc = nullptr;
    for (const auto& t : r.tables)
        if (t.name == "qsc") qsc = &t;
    REQUIRE(qsc != nullptr);
    CHECK(qsc->rows.size() == 9);
    CHECK(r.find("bethe_admissible")->pass);

    RunConfig bad = c;
    bad.model.n = 1;
    CHECK_THROWS_AS(cmd_spectrum(bad), configuration_error);
}

TEST_CASE("two-site reproduction") {
    const auto r = cmd_reproduce_appendix_b(appendix_b_config());
    CHECK(r.exit_code() == exit_pass);
    CHECK(r.summary["max_mismatch"].get<double>() < 1e-9);
    CHECK(r.tables.at(0).rows.size() == 9);
    auto c = appendix_b_config();
    c.xi[0] = 0.1;
    CHECK_THROWS_AS(cmd_reproduce_appendix_b(c), configuration_error);
}

TEST_CASE("sov-rank, qsc and hubbard commands") {
    RunConfig c;
    c.seed = 3;
    CHECK(cmd_sov_rank(c).exit_code() == exit_pass);
    auto degenerate = c;
    degenerate.twist.kind = "eigenvalues";
    degenerate.twist.values = {1.0, cplx(0.5, 0.5), cplx(0.5, 0.5)};
    CHECK(cmd_sov_rank(degenerate).exit_code() == exit_residual);

    const auto naba = cmd_qsc(c);
    CHECK(naba.exit_code() == exit_pass);
    CHECK(naba.summary["mode"] == "nested_bethe_sector_1_1");

    RunConfig h;
    h.model.kind = "hubbard";
    h.twist.family = 2;
    h.samples.count = 3;
    const auto hr = cmd_hubbard(h);
    CHECK(hr.exit_code() == exit_pass);
    CHECK(hr.summary["sov_certificate"] == "basis");
    h.twist.family = 4;
    CHECK_THROWS_AS(cmd_sov_rank(h), parameter_error);
    CHECK(cmd_hubbard(h).summary["sov_certificate"].get<std::string>().rfind("rejected", 0) == 0);
}

TEST_CASE("report layout on disk") {
    const auto out = scratch_dir("layout");
    RunConfig c;
    c.samples.count = 3;
    const auto r = cmd_verify(c, VerifyTarget::ybe);
    const auto d1 = write_report(r, out);
    const auto d2 = write_report(r, out);
    CHECK(d1 != d2);
    for (const auto& d : {d1, d2}) {
        CHECK(fs::exists(d / "config.json"));
        CHECK(fs::exists(d / "report.json"));
        CHECK(fs::exists(d / "tables" / "ybe.csv"));
    }
    const auto cfg = parse_config(slurp(d1 / "config.json"));
    CHECK(serialize(cfg) == slurp(d1 / "config.json"));
    // the persisted config replays the run
    CHECK(cmd_verify(cfg, VerifyTarget::ybe).to_json(false).dump() == r.to_json(false).dump());
    CHECK(slurp(d1 / "tables" / "ybe.csv").rfind("sample,lambda,mu,residual\n", 0) == 0);
    fs::remove_all(out);
}

TEST_CASE("command-line exit codes") {
    const auto out = scratch_dir("cli");
    const std::string o = " --out " + out.string();
    CHECK(run_cli("verify ybe" + o) == 0);
    CHECK(run_cli("--no-write verify inner-boundary --seed 5") == 0);
    CHECK(run_cli("--no-write verify nonsense") == 2);
    CHECK(run_cli("--no-write spectrum --method bogus") == 2);
    {
        std::ofstream(out / "bad.json") << "{\"sites\": 2,\n \"eta\": [1 0]}";
        CHECK(run_cli("--no-write spectrum --config " + (out / "bad.json").string()) == 2);
    }
    {
        std::ofstream(out / "deg.json") << R"({"twist": {"kind": "eigenvalues", "values": [[1,0],[0.5,0.5],[0.5,0.5]]}})";
        CHECK(run_cli("--no-write sov-rank --config " + (out / "deg.json").string()) == 1);
    }
    {
        std::ofstream(out / "big.json") << R"({"model": {"kind": "hubbard"}, "sites": 5, "samples": {"count": 2}})";
        CHECK(run_cli("--no-write hubbard --config " + (out / "big.json").string()) == 3);
    }
    CHECK(run_cli("--no-write reproduce-appendix-b") == 0);
    CHECK(run_cli("--no-write verify ybe", "SOVLAB_SEED=notanumber") == 2);
    fs::remove_all(out);
}
