#include "sovlab/harness/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

namespace sovlab::harness {

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string short_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string cell_text(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>) {
                if (v.find_first_of(",\"\n") == std::string::npos) return v;
                std::string q = "\"";
                for (char ch : v) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
                return q + "\"";
            } else if constexpr (std::is_same_v<T, long>) {
                return std::to_string(v);
            } else if constexpr (std::is_same_v<T, double>) {
                return format_double(v);
            } else if constexpr (std::is_same_v<T, cplx>) {
                return format_complex(v);
            } else {
                return v ? "true" : "false";
            }
        },
        c);
}

json cell_json(const Cell& c) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, cplx>) return complex_to_json(v);
            else return json(v);
        },
        c);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
}

}  // namespace

std::string format_complex(cplx z) {
    char buf[80];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gj", z.real(), z.imag());
    return buf;
}

std::string Table::csv() const {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + cell_text(Cell(header[i]));
    out += "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell_text(row[i]);
        out += "\n";
    }
    return out;
}

json Table::to_json() const {
    json rs = json::array();
    for (const auto& row : rows) {
        json r = json::array();
        for (const auto& c : row) r.push_back(cell_json(c));
        rs.push_back(r);
    }
    return {{"name", name}, {"header", header}, {"rows", rs}};
}

const Check& Report::at_most(const std::string& name, double value, double bound) {
    checks.push_back({name, value, bound, "<=", value <= bound});
    return checks.back();
}

const Check& Report::at_least(const std::string& name, double value, double bound) {
    checks.push_back({name, value, bound, ">=", value >= bound});
    return checks.back();
}

const Check& Report::flag(const std::string& name, bool ok) {
    checks.push_back({name, ok ? 1.0 : 0.0, 1.0, "flag", ok});
    return checks.back();
}

bool Report::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

int Report::exit_code() const {
    if (incomplete) return exit_incomplete;
    return all_pass() ? exit_pass : exit_residual;
}

const Check* Report::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

double Report::total_ms() const {
    double t = 0;
    for (const auto& [k, v] : timings_ms) t += v;
    return t;
}

json Report::to_json(bool with_timings) const {
    json j;
    j["command"] = command;
    j["config"] = config;
    json cs = json::array();
    for (const auto& c : checks)
        cs.push_back({{"name", c.name}, {"value", c.value}, {"relation", c.relation}, {"bound", c.bound}, {"pass", c.pass}});
    j["checks"] = cs;
    j["summary"] = summary;
    json ts = json::array();
    for (const auto& t : tables) ts.push_back(t.to_json());
    j["tables"] = ts;
    j["notes"] = notes;
    j["incomplete"] = incomplete;
    j["verdict"] = exit_code() == exit_pass ? "pass" : (incomplete ? "incomplete" : "fail");
    j["exit_code"] = exit_code();
    if (with_timings) {
        json tm = json::object();
        for (const auto& [k, v] : timings_ms) tm[k] = v;
        j["timings"] = tm;
    }
    return j;
}

std::string run_id(const Report& r) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y%m%dT%H%M%SZ", &tm);
    char hash[17];
    std::snprintf(hash, sizeof hash, "%08llx",
                  static_cast<unsigned long long>(fnv1a(r.command + r.config.dump()) & 0xffffffffull));
    return std::string(stamp) + "-" + hash;
}

std::filesystem::path write_report(const Report& r, const std::filesystem::path& out) {
    namespace fs = std::filesystem;
    const std::string base = run_id(r);
    fs::path dir = out / base;
    for (int k = 2; fs::exists(dir); ++k) dir = out / (base + "-" + std::to_string(k));
    fs::create_directories(dir / "tables");
    write_file(dir / "config.json", r.config.dump(2) + "\n");
    write_file(dir / "report.json", r.to_json().dump(2) + "\n");
    for (const auto& t : r.tables) write_file(dir / "tables" / (t.name + ".csv"), t.csv());
    return dir;
}

std::string text_summary(const Report& r) {
    std::ostringstream os;
    for (const auto& c : r.checks) {
        os << (c.pass ? "pass " : "FAIL ") << c.name;
        if (c.relation == "flag") os << "\n";
        else os << "  " << short_double(c.value) << " " << c.relation << " " << short_double(c.bound) << "\n";
    }
    for (const auto& n : r.notes) os << "note " << n << "\n";
    os << "verdict " << (r.exit_code() == exit_pass ? "pass" : (r.incomplete ? "incomplete" : "fail")) << " (exit "
       << r.exit_code() << ")\n";
    return os.str();
}

}  // namespace sovlab::harness
