#include "sovlab/harness/config.hpp"

#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "sovlab/poly.hpp"

namespace sovlab::harness {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw configuration_error("field '" + field + "': " + what);
}

void allow_keys(const json& j, const std::string& field, std::initializer_list<const char*> keys) {
    if (!j.is_object()) fail(field.empty() ? "<root>" : field, "expected an object");
    const std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [k, v] : j.items())
        if (!ok.count(k)) fail(field.empty() ? k : field + "." + k, "unknown key");
}

std::string join(const std::string& a, const std::string& b) { return a.empty() ? b : a + "." + b; }

template <class T>
T get_number(const json& j, const std::string& field) {
    if constexpr (std::is_same_v<T, double>) {
        if (!j.is_number()) fail(field, "expected a number");
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
        if (!j.is_number_unsigned()) fail(field, "expected a non-negative integer");
    } else {
        if (!j.is_number_integer()) fail(field, "expected an integer");
    }
    return j.get<T>();
}

std::string get_string(const json& j, const std::string& field, std::initializer_list<const char*> choices) {
    if (!j.is_string()) fail(field, "expected a string");
    const auto s = j.get<std::string>();
    if (choices.size() == 0) return s;
    for (const char* c : choices)
        if (s == c) return s;
    std::string list;
    for (const char* c : choices) list += std::string(list.empty() ? "" : ", ") + c;
    fail(field, "'" + s + "' is not one of " + list);
}

std::vector<cplx> complex_list(const json& j, const std::string& field) {
    if (!j.is_array()) fail(field, "expected a list of [re, im]");
    std::vector<cplx> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(complex_from_json(j[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

json complex_list_to_json(const std::vector<cplx>& v) {
    json a = json::array();
    for (const auto& z : v) a.push_back(complex_to_json(z));
    return a;
}

Mat matrix_from_json(const json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) fail(field, "expected a non-empty list of rows");
    const auto rows = j.size();
    Mat m(rows, rows);
    for (std::size_t r = 0; r < rows; ++r) {
        const auto row = complex_list(j[r], field + "[" + std::to_string(r) + "]");
        if (row.size() != rows) fail(field + "[" + std::to_string(r) + "]", "matrix must be square");
        for (std::size_t c = 0; c < rows; ++c) m(r, c) = row[c];
    }
    return m;
}

json matrix_to_json(const Mat& m) {
    json a = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
        a.push_back(row);
    }
    return a;
}

struct Draw {
    std::mt19937_64 gen;
    explicit Draw(std::uint64_t seed) : gen(seed) {}
    double u(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
    cplx c(double r) { return {u(-r, r), u(-r, r)}; }
};

bool near_lattice(cplx z, const std::vector<cplx>& xi, cplx eta, int window, double dist) {
    for (const auto& x : xi)
        for (int k = -window; k <= window; ++k)
            if (std::abs(z - x - double(k) * eta) < dist) return true;
    return false;
}

}  // namespace

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) fail(field, "expected [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

RunConfig config_from_json(const json& j) {
    allow_keys(j, "", {"model", "sites", "eta", "xi", "twist", "source", "samples", "tolerances", "method", "seed", "output"});
    RunConfig c;
    if (j.contains("model")) {
        const auto& m = j["model"];
        if (!m.is_object() || !m.contains("kind")) fail("model", "expected an object with 'kind'");
        c.model.kind = get_string(m["kind"], "model.kind", {"gl", "hubbard"});
        if (c.model.kind == "gl") {
            allow_keys(m, "model", {"kind", "m", "n"});
            if (m.contains("m")) c.model.m = get_number<int>(m["m"], "model.m");
            if (m.contains("n")) c.model.n = get_number<int>(m["n"], "model.n");
            if (c.model.m < 0 || c.model.n < 0 || c.model.m + c.model.n < 1) fail("model", "need m, n >= 0 and m + n >= 1");
        } else {
            allow_keys(m, "model", {"kind", "branch"});
            if (m.contains("branch")) c.model.branch = get_string(m["branch"], "model.branch", {"principal", "shifted"});
        }
    }
    if (j.contains("sites")) c.sites = get_number<int>(j["sites"], "sites");
    if (c.sites < 1) fail("sites", "must be at least 1");
    if (j.contains("eta") && !j["eta"].is_null()) c.eta = complex_from_json(j["eta"], "eta");
    if (j.contains("xi") && !j["xi"].is_null()) {
        c.xi = complex_list(j["xi"], "xi");
        if (static_cast<int>(c.xi.size()) != c.sites) fail("xi", "expected one inhomogeneity per site");
    }
    if (j.contains("twist")) {
        const auto& t = j["twist"];
        if (!t.is_object() || !t.contains("kind")) fail("twist", "expected an object with 'kind'");
        c.twist.kind = get_string(t["kind"], "twist.kind", {"random", "eigenvalues", "matrix", "hubbard"});
        if (c.twist.kind == "random") {
            allow_keys(t, "twist", {"kind", "khat", "family"});
            if (t.contains("khat")) {
                if (!t["khat"].is_boolean()) fail("twist.khat", "expected true or false");
                c.twist.khat = t["khat"].get<bool>();
            }
            if (t.contains("family")) c.twist.family = get_number<int>(t["family"], "twist.family");
        } else if (c.twist.kind == "eigenvalues") {
            allow_keys(t, "twist", {"kind", "values", "similarity"});
            if (!t.contains("values")) fail("twist.values", "required");
            c.twist.values = complex_list(t["values"], "twist.values");
            if (t.contains("similarity") && !t["similarity"].is_null())
                c.twist.similarity = matrix_from_json(t["similarity"], "twist.similarity");
        } else if (c.twist.kind == "matrix") {
            allow_keys(t, "twist", {"kind", "entries"});
            if (!t.contains("entries")) fail("twist.entries", "required");
            c.twist.entries = matrix_from_json(t["entries"], "twist.entries");
        } else {
            allow_keys(t, "twist", {"kind", "family", "alpha", "beta", "gamma"});
            if (t.contains("family")) c.twist.family = get_number<int>(t["family"], "twist.family");
            if (t.contains("alpha")) c.twist.alpha = complex_from_json(t["alpha"], "twist.alpha");
            if (t.contains("beta")) c.twist.beta = complex_from_json(t["beta"], "twist.beta");
            if (t.contains("gamma")) c.twist.gamma = complex_from_json(t["gamma"], "twist.gamma");
        }
        if (c.twist.family < 1 || c.twist.family > 4) fail("twist.family", "must be 1..4");
    }
    if (j.contains("source")) {
        const auto& s = j["source"];
        if (!s.is_object() || !s.contains("kind")) fail("source", "expected an object with 'kind'");
        c.source.kind = get_string(s["kind"], "source.kind", {"default", "explicit"});
        if (c.source.kind == "explicit") {
            allow_keys(s, "source", {"kind", "sites"});
            if (!s.contains("sites") || !s["sites"].is_array() || s["sites"].empty()) fail("source.sites", "expected a list of rows");
            for (std::size_t i = 0; i < s["sites"].size(); ++i)
                c.source.sites.push_back(complex_list(s["sites"][i], "source.sites[" + std::to_string(i) + "]"));
        } else {
            allow_keys(s, "source", {"kind"});
        }
    }
    if (j.contains("samples")) {
        const auto& s = j["samples"];
        allow_keys(s, "samples", {"count", "points"});
        if (s.contains("count")) c.samples.count = get_number<int>(s["count"], "samples.count");
        if (c.samples.count < 1) fail("samples.count", "must be at least 1");
        if (s.contains("points") && !s["points"].is_null()) {
            c.samples.points = complex_list(s["points"], "samples.points");
            if (static_cast<int>(c.samples.points.size()) != c.samples.count) fail("samples.points", "length must equal samples.count");
        }
    }
    if (j.contains("tolerances")) {
        const auto& t = j["tolerances"];
        allow_keys(t, "tolerances",
                   {"residual", "exact", "shastry", "commutation", "match", "closed_form", "rank", "cluster"});
        auto rd = [&](const char* k, double& dst) {
            if (!t.contains(k)) return;
            dst = get_number<double>(t[k], join("tolerances", k));
            if (!(dst > 0.0)) fail(join("tolerances", k), "must be positive");
        };
        rd("residual", c.tol.residual);
        rd("exact", c.tol.exact);
        rd("shastry", c.tol.shastry);
        rd("commutation", c.tol.commutation);
        rd("match", c.tol.match);
        rd("closed_form", c.tol.closed_form);
        rd("rank", c.tol.rank);
        rd("cluster", c.tol.cluster);
    }
    if (j.contains("method")) c.method = get_string(j["method"], "method", {"diag", "newton", "cubic", "homotopy"});
    if (j.contains("seed")) c.seed = get_number<std::uint64_t>(j["seed"], "seed");
    if (j.contains("output")) c.output = get_string(j["output"], "output", {});
    return c;
}

json config_to_json(const RunConfig& c) {
    json j;
    json m;
    m["kind"] = c.model.kind;
    if (c.model.kind == "gl") {
        m["m"] = c.model.m;
        m["n"] = c.model.n;
    } else {
        m["branch"] = c.model.branch;
    }
    j["model"] = m;
    j["sites"] = c.sites;
    j["eta"] = c.eta ? complex_to_json(*c.eta) : json(nullptr);
    j["xi"] = c.xi.empty() ? json(nullptr) : complex_list_to_json(c.xi);
    json t;
    t["kind"] = c.twist.kind;
    if (c.twist.kind == "random") {
        t["khat"] = c.twist.khat;
        t["family"] = c.twist.family;
    } else if (c.twist.kind == "eigenvalues") {
        t["values"] = complex_list_to_json(c.twist.values);
        t["similarity"] = c.twist.similarity ? matrix_to_json(*c.twist.similarity) : json(nullptr);
    } else if (c.twist.kind == "matrix") {
        t["entries"] = matrix_to_json(c.twist.entries);
    } else {
        t["family"] = c.twist.family;
        t["alpha"] = complex_to_json(c.twist.alpha);
        t["beta"] = complex_to_json(c.twist.beta);
        t["gamma"] = complex_to_json(c.twist.gamma);
    }
    j["twist"] = t;
    json s;
    s["kind"] = c.source.kind;
    if (c.source.kind == "explicit") {
        json rows = json::array();
        for (const auto& r : c.source.sites) rows.push_back(complex_list_to_json(r));
        s["sites"] = rows;
    }
    j["source"] = s;
    j["samples"] = {{"count", c.samples.count},
                    {"points", c.samples.points.empty() ? json(nullptr) : complex_list_to_json(c.samples.points)}};
    j["tolerances"] = {{"residual", c.tol.residual}, {"exact", c.tol.exact},           {"shastry", c.tol.shastry},
                       {"commutation", c.tol.commutation}, {"match", c.tol.match},   {"closed_form", c.tol.closed_form},
                       {"rank", c.tol.rank},               {"cluster", c.tol.cluster}};
    j["method"] = c.method;
    j["seed"] = c.seed;
    j["output"] = c.output;
    return j;
}

RunConfig parse_config(const std::string& text, bool* has_seed) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw configuration_error(std::string("malformed JSON: ") + e.what());
    }
    if (has_seed) *has_seed = j.is_object() && j.contains("seed");
    return config_from_json(j);
}

RunConfig load_config(const std::filesystem::path& path, bool* has_seed) {
    std::ifstream in(path);
    if (!in) throw configuration_error("cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), has_seed);
}

std::string serialize(const RunConfig& c) { return config_to_json(c).dump(2) + "\n"; }

RunConfig resolve(const RunConfig& in) {
    RunConfig c = in;
    Draw r(c.seed);
    const bool hub = c.is_hubbard();
    if (!c.eta) c.eta = hub ? eta_from_coupling(r.u(0.3, 1.2)) : r.c(0.8);
    const cplx eta = *c.eta;
    if (c.xi.empty()) {
        for (int guard = 0; static_cast<int>(c.xi.size()) < c.sites; ++guard) {
            if (guard > 10000) throw parameter_error("could not draw separated inhomogeneities");
            const cplx z = r.c(hub ? 0.7 : 1.0);
            bool bad;
            if (hub) {
                bad = std::abs(std::sin(2.0 * z)) < 0.2;
                for (const auto& x : c.xi) bad = bad || std::abs(std::sin(z - x)) < 0.2 || std::abs(std::sin(z + x)) < 0.2;
            } else {
                bad = near_lattice(z, c.xi, eta, 3, 0.1 * std::abs(eta));
            }
            if (!bad) c.xi.push_back(z);
        }
    }
    if (c.twist.kind == "random") {
        if (hub) {
            TwistSpec t;
            t.kind = "hubbard";
            t.family = c.twist.family;
            for (int guard = 0;; ++guard) {
                if (guard > 1000) throw parameter_error("could not draw a simple hubbard twist");
                t.alpha = r.c(1.5);
                t.beta = r.c(1.5);
                t.gamma = r.c(1.5);
                if (std::abs(t.alpha) < 0.3) continue;
                const auto sp = hubbard_twist_spectrum(t.family, t.alpha, t.beta, t.gamma);
                if (t.family == 4 || min_pairwise_distance(sp.eigenvalues) > 0.2) break;
            }
            c.twist = t;
        } else {
            const int m = c.model.m, n = c.model.n, d = m + n;
            TwistSpec t;
            t.kind = "eigenvalues";
            for (int guard = 0;; ++guard) {
                if (guard > 1000) throw parameter_error("could not draw a simple twist");
                t.values.clear();
                for (int i = 0; i < d; ++i) t.values.push_back(r.c(1.5));
                if (c.twist.khat && m > 0) t.values[0] = 0.0;
                bool ok = min_pairwise_distance(t.values) > 0.3;
                for (int i = (c.twist.khat && m > 0) ? 1 : 0; i < d; ++i) ok = ok && std::abs(t.values[i]) > 0.3;
                if (ok) break;
            }
            Mat s = Mat::Identity(d, d);
            for (int i = 0; i < d; ++i)
                for (int k = 0; k < d; ++k)
                    if ((i < m) == (k < m)) s(i, k) += 0.4 * r.c(1.0);
            t.similarity = s;
            c.twist = t;
        }
    }
    if (c.samples.points.empty()) {
        for (int guard = 0; static_cast<int>(c.samples.points.size()) < c.samples.count; ++guard) {
            if (guard > 100000) throw parameter_error("could not draw sample points");
            const cplx z = r.c(1.0);
            bool bad;
            if (hub) {
                bad = std::abs(std::sin(2.0 * z)) < 0.1;
                for (const auto& x : c.xi) bad = bad || std::abs(std::sin(z + x)) < 0.1;
                for (const auto& s : c.samples.points) bad = bad || std::abs(std::sin(z + s)) < 0.1;
            } else {
                bad = near_lattice(z, c.xi, eta, 3, 0.1 * std::abs(eta));
            }
            if (!bad) c.samples.points.push_back(z);
        }
    }
    return c;
}

ChainParams build_chain(const RunConfig& c) {
    if (c.is_hubbard()) throw configuration_error("field 'model.kind': command needs a gl model");
    if (!c.eta || static_cast<int>(c.xi.size()) != c.sites) throw configuration_error("config not resolved");
    const GradingSignature sig(c.model.m, c.model.n);
    const int d = sig.dim();
    Mat k;
    if (c.twist.kind == "eigenvalues") {
        if (static_cast<int>(c.twist.values.size()) != d) fail("twist.values", "expected " + std::to_string(d) + " eigenvalues");
        k = Mat::Zero(d, d);
        for (int i = 0; i < d; ++i) k(i, i) = c.twist.values[i];
        if (c.twist.similarity) {
            const Mat& s = *c.twist.similarity;
            if (s.rows() != d) fail("twist.similarity", "expected a " + std::to_string(d) + "x" + std::to_string(d) + " matrix");
            Eigen::FullPivLU<Mat> lu(s);
            if (!lu.isInvertible()) fail("twist.similarity", "matrix is singular");
            k = s * k * lu.inverse();
        }
    } else if (c.twist.kind == "matrix") {
        if (c.twist.entries.rows() != d) fail("twist.entries", "expected a " + std::to_string(d) + "x" + std::to_string(d) + " matrix");
        k = c.twist.entries;
    } else {
        fail("twist.kind", "'" + c.twist.kind + "' does not apply to gl models");
    }
    TwistMatrix tw;
    try {
        tw = validate_twist(k, sig);
    } catch (const std::exception& e) {
        fail("twist", e.what());
    }
    auto p = make_chain(sig, *c.eta, c.xi, tw);
    check_inhomogeneities(p, 3);
    return p;
}

SourceCovector build_source(const RunConfig& c, const ChainParams& p) {
    if (c.source.kind == "default") return default_source_covector(p);
    const auto& rows = c.source.sites;
    if (rows.size() != 1 && static_cast<int>(rows.size()) != p.sites)
        fail("source.sites", "expected one row or one row per site");
    SourceCovector s;
    for (int a = 0; a < p.sites; ++a) {
        const auto& row = rows.size() == 1 ? rows[0] : rows[a];
        if (static_cast<int>(row.size()) != p.dim()) fail("source.sites", "row length must equal the local dimension");
        RowVec v(p.dim());
        for (int i = 0; i < p.dim(); ++i) v(i) = row[i];
        s.sites.push_back(v);
    }
    return s;
}

HubbardParams build_hubbard(const RunConfig& c) {
    if (!c.is_hubbard()) throw configuration_error("field 'model.kind': command needs the hubbard model");
    if (!c.eta || static_cast<int>(c.xi.size()) != c.sites) throw configuration_error("config not resolved");
    if (c.twist.kind != "hubbard") fail("twist.kind", "hubbard model needs a 'hubbard' or 'random' twist");
    HubbardParams p;
    p.sites = c.sites;
    p.eta = *c.eta;
    p.xi = c.xi;
    p.family = c.twist.family;
    p.alpha = c.twist.alpha;
    p.beta = c.twist.beta;
    p.gamma = c.twist.gamma;
    p.branch = c.model.branch == "shifted" ? HBranch::shifted : HBranch::principal;
    validate_hubbard(p);
    return p;
}

std::vector<cplx> build_hubbard_source(const RunConfig& c) {
    if (c.source.kind == "default") return {1.0, 1.0, 1.0, 1.0};
    if (c.source.sites.size() != 1 || c.source.sites[0].size() != 4) fail("source.sites", "hubbard source is one row (x, y, z, w)");
    return c.source.sites[0];
}

}  // namespace sovlab::harness
