#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "sovlab/harness/config.hpp"

namespace sovlab::harness {

enum ExitCode : int { exit_pass = 0, exit_residual = 1, exit_config = 2, exit_incomplete = 3 };

// "re+imj" with round-trip precision.
std::string format_complex(cplx z);

using Cell = std::variant<std::string, long, double, cplx, bool>;

struct Table {
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;

    std::string csv() const;
    json to_json() const;
};

struct Check {
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    std::string relation;   // "<=", ">=" or "flag"
    bool pass = false;
};

struct Report {
    std::string command;
    json config;
    std::vector<Check> checks;
    std::vector<Table> tables;
    json summary = json::object();
    std::vector<std::pair<std::string, double>> timings_ms;
    std::vector<std::string> notes;
    bool incomplete = false;

    // Records value ≤ bound (NaN fails).
    const Check& at_most(const std::string& name, double value, double bound);
    const Check& at_least(const std::string& name, double value, double bound);
    const Check& flag(const std::string& name, bool ok);

    bool all_pass() const;
    int exit_code() const;
    const Check* find(const std::string& name) const;
    double total_ms() const;

    // Timings live under "timings" only; everything else is deterministic.
    json to_json(bool with_timings = true) const;
};

// <out>/<run-id>/{config.json, report.json, tables/*.csv}; never overwrites.
std::filesystem::path write_report(const Report& r, const std::filesystem::path& out);
std::string run_id(const Report& r);

// One line per check plus the verdict.
std::string text_summary(const Report& r);

}  // namespace sovlab::harness
