#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sovlab/hubbard.hpp"
#include "sovlab/sov_basis.hpp"

namespace sovlab::harness {

using json = nlohmann::ordered_json;

struct ModelSpec {
    std::string kind = "gl";        // gl | hubbard
    int m = 1, n = 2;               // gl only
    std::string branch = "principal";   // hubbard only
};

struct TwistSpec {
    std::string kind = "random";    // random | eigenvalues | matrix | hubbard
    bool khat = false;              // random gl: zero even eigenvalue
    std::vector<cplx> values;       // eigenvalues
    std::optional<Mat> similarity;  // eigenvalues: K = S diag(values) S⁻¹
    Mat entries;                    // matrix
    int family = 1;                 // hubbard and random hubbard
    cplx alpha = 1.0, beta = 1.0, gamma = 1.0;
};

struct SourceSpec {
    std::string kind = "default";   // default | explicit
    std::vector<std::vector<cplx>> sites;   // one row, or one per site
};

struct SampleSpec {
    int count = 20;
    std::vector<cplx> points;       // empty until drawn
};

struct Tolerances {
    double residual = 1e-8;         // functional and operator identities
    double exact = 1e-12;           // YBE, regularity, character relation
    double shastry = 1e-10;
    double commutation = 1e-9;
    double match = 1e-7;            // spectrum matching, eigenvector and wavefunction residuals
    double closed_form = 1e-9;
    double rank = 1e-8;             // σ_min/σ_max floor
    double cluster = 1e-6;
};

struct RunConfig {
    ModelSpec model;
    int sites = 2;
    std::optional<cplx> eta;        // drawn when absent
    std::vector<cplx> xi;           // drawn when empty
    TwistSpec twist;
    SourceSpec source;
    SampleSpec samples;
    Tolerances tol;
    std::string method = "newton";
    std::uint64_t seed = 1;
    std::string output = "runs";

    bool is_hubbard() const { return model.kind == "hubbard"; }
};

// Strict: unknown keys and type mismatches raise configuration_error naming the field.
RunConfig config_from_json(const json& j);
json config_to_json(const RunConfig& c);

// Parse errors carry the line and column of the offending text.
RunConfig parse_config(const std::string& text, bool* has_seed = nullptr);
RunConfig load_config(const std::filesystem::path& path, bool* has_seed = nullptr);
std::string serialize(const RunConfig& c);

// Replaces every random field (η, ξ, twist, sample points) by explicit values drawn
// from a generator seeded with c.seed. Idempotent on resolved configs.
RunConfig resolve(const RunConfig& c);

ChainParams build_chain(const RunConfig& resolved);
SourceCovector build_source(const RunConfig& resolved, const ChainParams& p);
HubbardParams build_hubbard(const RunConfig& resolved);
std::vector<cplx> build_hubbard_source(const RunConfig& resolved);

json complex_to_json(cplx z);
cplx complex_from_json(const json& j, const std::string& field);

}  // namespace sovlab::harness
