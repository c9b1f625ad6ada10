// One line per acceptance criterion; nonzero exit if any criterion fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "sovlab/fusion.hpp"
#include "sovlab/gl12.hpp"
#include "sovlab/harness/commands.hpp"

using namespace sovlab;
using namespace sovlab::harness;

namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " FAILED[" << what << "]";
        }
    }
    // Every check of the report must pass and the run must be complete.
    void require_report(const Report& r, const std::string& label) {
        if (r.incomplete) require(false, label + ": incomplete");
        for (const auto& c : r.checks)
            if (!c.pass) require(false, label + ": " + c.name + "=" + sci(c.value));
    }
};

double check_value(const Report& r, const std::string& name) {
    const auto* c = r.find(name);
    return c ? c->value : std::numeric_limits<double>::quiet_NaN();
}

RunConfig gl_config(int m, int n, int sites, std::uint64_t seed, bool khat = false) {
    RunConfig c;
    c.model.m = m;
    c.model.n = n;
    c.sites = sites;
    c.seed = seed;
    c.twist.khat = khat;
    return c;
}

RunConfig hubbard_config(int sites, int family, std::uint64_t seed, int samples) {
    RunConfig c;
    c.model.kind = "hubbard";
    c.sites = sites;
    c.seed = seed;
    c.twist.family = family;
    c.samples.count = samples;
    return c;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome c1_ybe() {
    Outcome o;
    double worst_res = 0;
    std::uint64_t seed = 101;
    for (auto [m, n] : {std::pair{1, 1}, {1, 2}, {2, 1}, {2, 2}}) {
        auto c = gl_config(m, n, 1, seed++);
        c.samples.count = 20;
        const auto r = cmd_verify(c, VerifyTarget::ybe);
        o.require_report(r, "(" + std::to_string(m) + "|" + std::to_string(n) + ")");
        worst_res = std::max(worst_res, check_value(r, "ybe"));
    }
    o.detail << "graded YBE, 4 signatures x 20 pairs: max " << sci(worst_res) << " (< 1e-12)";
    return o;
}

Outcome c2_two_site() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = cmd_reproduce_appendix_b(appendix_b_config());
    const double secs = seconds_since(t0);
    o.require_report(r, "reproduction");
    const double mis = r.summary["max_mismatch"].get<double>();
    o.require(mis < 1e-9, "mismatch");
    o.require(secs < 5.0, "runtime");
    // first pair written out by hand
    const cplx k1 = 1.3, eta(0.7, 0.2), xi2(1.1, -0.3);
    const auto f = two_site_closed_forms(k1, cplx(-0.8, 0.5), cplx(0.0, 2.1), eta, xi2);
    const double first = std::max(std::abs(f.pairs[0].first - k1 * eta * (eta + xi2)), std::abs(f.pairs[0].second - k1 * eta * (eta - xi2)));
    o.require(first < 1e-14, "first pair");
    o.detail << "two-site closed forms, 9 pairs and polynomials: max mismatch " << sci(mis) << " (< 1e-9), " << secs
             << " s (< 5 s)";
    return o;
}

Outcome c3_completeness() {
    Outcome o;
    double worst_match = 0, n3_secs = 0;
    std::uint64_t seed = 301;
    for (int n : {1, 2, 3})
        for (int draw = 0; draw < 3; ++draw) {
            auto c = gl_config(1, 2, n, seed++);
            c.method = "homotopy";
            const auto t0 = std::chrono::steady_clock::now();
            const auto r = cmd_spectrum(c);
            const double secs = seconds_since(t0);
            if (n == 3) n3_secs = std::max(n3_secs, secs);
            o.require_report(r, "N=" + std::to_string(n) + " draw " + std::to_string(draw));
            o.require(r.summary["accepted"].get<long>() == r.summary["expected"].get<long>(), "count");
            worst_match = std::max(worst_match, check_value(r, "diagonalization_match"));
        }
    o.require(n3_secs < 120.0, "N=3 runtime");
    o.detail << "closure + null-out, N=1,2,3 x 3 draws: 3^N accepted each, match " << sci(worst_match)
             << " (< 1e-7), slowest N=3 run " << n3_secs << " s (< 120 s)";
    return o;
}

Outcome c4_khat_cubic() {
    Outcome o;
    double worst_t3 = 0, worst_eig = 0, worst_match = 0;
    std::uint64_t seed = 401;
    for (int n : {1, 2, 3}) {
        auto c = gl_config(1, 2, n, seed++, true);
        c.method = "cubic";
        c.samples.count = 5;
        const auto r = cmd_spectrum(c);
        o.require_report(r, "N=" + std::to_string(n));
        worst_eig = std::max(worst_eig, check_value(r, "eigenvector_residual"));
        worst_match = std::max(worst_match, check_value(r, "diagonalization_match"));
        const auto rc = resolve(c);
        TransferTower tower(build_chain(rc));
        for (const auto& z : rc.samples.points) worst_t3 = std::max(worst_t3, max_abs(tower.column(3, z)));
    }
    o.require(worst_t3 < 1e-10, "T3 norm");
    o.detail << "cubic system for K-hat, N=1,2,3: match " << sci(worst_match) << " (< 1e-7), |T3| " << sci(worst_t3)
             << " (< 1e-10), eigenvector residual " << sci(worst_eig) << " (< 1e-7)";
    return o;
}

std::vector<Report> khat_qsc_reports() {
    std::vector<Report> out;
    std::uint64_t seed = 501;
    for (int n : {1, 2, 3}) out.push_back(cmd_qsc(gl_config(1, 2, n, seed++, true)));
    return out;
}

Outcome c5_qsc(const std::vector<Report>& reps) {
    Outcome o;
    double res = 0, wave = 0;
    o.require(reps.size() == 3, "N=1,2,3 runs");
    for (const auto& r : reps) {
        for (const char* k : {"qsc_polynomial_found", "qsc_degree_at_most_sites", "qsc_residual", "qsc_wavefunction", "sov_coordinates"}) {
            const auto* c = r.find(k);
            o.require(c && c->pass, k);
        }
        res = std::max(res, check_value(r, "qsc_residual"));
        wave = std::max(wave, check_value(r, "qsc_wavefunction"));
    }
    o.detail << "spectral curve for every K-hat eigenvalue, N=1,2,3: residual " << sci(res) << " (< 1e-8), wavefunction "
             << sci(wave) << " (< 1e-7)";
    return o;
}

Outcome c6_bethe(const std::vector<Report>& reps) {
    Outcome o;
    double bae = 0;
    std::ostringstream counts;
    o.require(reps.size() == 3, "N=1,2,3 runs");
    for (const auto& r : reps) {
        for (const char* k : {"bethe_equations", "bethe_admissible", "bethe_roots_distinct", "bethe_solution_count"}) {
            const auto* c = r.find(k);
            o.require(c && c->pass, k);
        }
        bae = std::max(bae, check_value(r, "bethe_equations"));
        counts << (counts.str().empty() ? "" : ",") << r.summary["distinct_bethe_solutions"].get<long>();
    }
    o.detail << "Bethe roots from the spectral curve: BAE " << sci(bae) << " (< 1e-8), distinct solutions " << counts.str()
             << " (3,9,27)";
    return o;
}

Outcome c7_sov() {
    Outcome o;
    double worst_ratio = 1.0;
    std::uint64_t seed = 701;
    for (bool khat : {false, true})
        for (int n : {1, 2, 3}) {
            const auto r = cmd_sov_rank(gl_config(1, 2, n, seed++, khat));
            o.require_report(r, std::string(khat ? "khat" : "invertible") + " N=" + std::to_string(n));
            worst_ratio = std::min(worst_ratio, check_value(r, "sigma_ratio"));
        }
    auto base = gl_config(1, 2, 2, 777);
    base.twist.kind = "eigenvalues";
    base.twist.values = {cplx(1.1, 0.0), cplx(-0.6, 0.4), cplx(0.9, -0.3)};
    auto degen = base;
    degen.twist.values[2] = degen.twist.values[1];
    const double generic = cmd_sov_rank(base).summary["det_abs"].get<double>();
    const double degenerate = cmd_sov_rank(degen).summary["det_abs"].get<double>();
    const double drop = degenerate / generic;
    o.require(drop < 1e-10, "degenerate determinant");
    o.detail << "SoV basis for (1|2), N<=3, invertible and K-hat: min sigma ratio " << sci(worst_ratio)
             << " (> 1e-8); k2=k3 determinant drop " << sci(drop) << " (< 1e-10)";
    return o;
}

Outcome c8_fusion() {
    Outcome o;
    double worst_res = 0, chr = 0;
    std::uint64_t seed = 801;
    for (int n : {1, 2}) {
        auto c = gl_config(1, 2, n, seed++);
        c.samples.count = 4;
        const auto f = cmd_verify(c, VerifyTarget::fusion);
        const auto ib = cmd_verify(c, VerifyTarget::inner_boundary);
        o.require_report(f, "fusion N=" + std::to_string(n));
        o.require_report(ib, "inner boundary N=" + std::to_string(n));
        for (const char* k : {"projector_vs_interpolation_column", "projector_vs_interpolation_row", "bilinear_identity", "br_two_forms"}) {
            o.require(f.find(k) != nullptr, k);
            worst_res = std::max(worst_res, check_value(f, k));
        }
        worst_res = std::max(worst_res, check_value(ib, "inner_boundary"));
        chr = std::max(chr, check_value(f, "character_relation"));
    }
    o.detail << "projector vs interpolation, bilinear, inner boundary, BR forms: max " << sci(worst_res)
             << " (< 1e-8); character relation " << sci(chr) << " (< 1e-12)";
    return o;
}

Outcome c9_naba() {
    Outcome o;
    const auto r = cmd_qsc(gl_config(1, 2, 2, 901));
    o.require_report(r, "N=2");
    o.require(r.summary["mode"] == "nested_bethe_sector_1_1", "mode");
    double worst_res = 0;
    for (const char* k : {"bethe_equations", "naba_closure", "naba_null_out", "naba_t2_match", "naba_t3_match"})
        worst_res = std::max(worst_res, check_value(r, k));
    o.detail << "nested Bethe t1 for converged sector (1,1) roots, N=2: closure, null-out, t2/t3 max " << sci(worst_res)
             << " (< 1e-8)";
    return o;
}

Outcome c10_isospectral(const std::vector<Report>& reps) {
    Outcome o;
    double worst_res = 0;
    int runs = 0;
    for (const auto& r : reps) {
        const auto* c = r.find("gl3_isospectrality");
        if (!c) continue;
        ++runs;
        o.require(c->pass, "isospectrality");
        worst_res = std::max(worst_res, c->value);
    }
    o.require(runs == 2, "N=1,2 runs");
    o.detail << "gl(1|2) K-hat at eta vs gl(3) -K-hat at -eta, N=1,2, 3 probes: " << sci(worst_res) << " (< 1e-8)";
    return o;
}

Outcome c11_hubbard() {
    Outcome o;
    auto sh = hubbard_config(1, 1, 1101, 10);
    const auto s = cmd_verify(sh, VerifyTarget::shastry);
    o.require_report(s, "shastry");
    double comm = 0;
    std::uint64_t seed = 1102;
    for (int family : {1, 2, 3})
        for (int n : {1, 2}) {
            const auto r = cmd_hubbard(hubbard_config(n, family, seed++, 6));
            o.require_report(r, "family " + std::to_string(family) + " N=" + std::to_string(n));
            o.require(r.find("sov_sigma_ratio") != nullptr, "certificate");
            if (n == 2) comm = std::max(comm, check_value(r, "transfer_commutation"));
        }
    bool rejected = false;
    try {
        cmd_sov_rank(hubbard_config(2, 4, 1120, 6));
    } catch (const parameter_error&) {
        rejected = true;
    }
    o.require(rejected, "family 4 rejection");
    o.detail << "Shastry: regularity " << sci(check_value(s, "regularity")) << " (< 1e-12), YBE "
             << sci(check_value(s, "shastry_ybe")) << ", unitarity " << sci(check_value(s, "unitarity"))
             << " (< 1e-10); commutation N=2 " << sci(comm) << " (< 1e-9); certificate families 1-3 pass, 4 "
             << (rejected ? "rejected" : "NOT rejected");
    return o;
}

}  // namespace

int main() {
    int failures = 0;
    auto run = [&](int id, const std::function<Outcome()>& fn) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "exception: " << e.what();
        }
        failures += !o.pass;
        char secs[32];
        std::snprintf(secs, sizeof secs, "%.1f", seconds_since(t0));
        std::cout << "criterion " << id << (id < 10 ? "  " : " ") << (o.pass ? "PASS" : "FAIL") << "  " << o.detail.str()
                  << " [" << secs << " s]" << std::endl;
    };
    run(1, c1_ybe);
    run(2, c2_two_site);
    run(3, c3_completeness);
    run(4, c4_khat_cubic);
    std::vector<Report> qsc;
    try {
        qsc = khat_qsc_reports();
    } catch (const std::exception& e) {
        std::cout << "spectral curve runs failed: " << e.what() << std::endl;
    }
    run(5, [&] { return c5_qsc(qsc); });
    run(6, [&] { return c6_bethe(qsc); });
    run(7, c7_sov);
    run(8, c8_fusion);
    run(9, c9_naba);
    run(10, [&] { return c10_isospectral(qsc); });
    run(11, c11_hubbard);
    std::cout << (failures ? "FAILED " : "ALL PASSED ") << 11 - failures << "/11" << std::endl;
    return failures ? 1 : 0;
}
