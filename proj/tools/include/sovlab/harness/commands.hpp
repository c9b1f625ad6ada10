#pragma once

#include <string>

#include "sovlab/harness/report.hpp"

namespace sovlab::harness {

enum class VerifyTarget { ybe, fusion, inner_boundary, shastry };

VerifyTarget verify_target_from_string(const std::string& s);
const char* to_string(VerifyTarget t);

// Every command resolves its config first and records the resolved form in the report.
Report cmd_verify(const RunConfig& config, VerifyTarget target);
Report cmd_spectrum(const RunConfig& config);
Report cmd_sov_rank(const RunConfig& config);
Report cmd_qsc(const RunConfig& config);
Report cmd_hubbard(const RunConfig& config);
Report cmd_reproduce_appendix_b(const RunConfig& config);

// Default for reproduce-appendix-b: η = 0.7+0.2i, ξ = (0, 1.1−0.3i), k = (1.3, −0.8+0.5i, 2.1i).
RunConfig appendix_b_config();
// Default config of a subcommand run without --config.
RunConfig default_config(const std::string& command);

}  // namespace sovlab::harness
