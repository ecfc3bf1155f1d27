#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "pencil_lab/config.hpp"
#include "pencil_lab/errors.hpp"

namespace pencil_lab {

using Json = nlohmann::ordered_json;

struct CommandResult {
  Json report;
  ExitCode exit_code = ExitCode::kOk;
  std::string summary;  // human-readable text for stdout
};

/// Rank-2 (1D), rank-3 (n=2) and rank-4 (n<=3) criteria as applicable.
/// Exit 2 when no criterion is satisfied.
CommandResult cmd_criteria(const RunConfig& config);

/// Stability study, eigenvalue table and the eigenfunction of the top
/// certified pair. Exit 2 when nothing is certified.
CommandResult cmd_pencil(const RunConfig& config);

/// One extrapolated report per word (config.words, default {"A"}).
CommandResult cmd_traces(const RunConfig& config);

/// Tr A_gamma^ell against gamma^{-ell/(m+1)} Tr A^ell at the largest size and
/// extrapolated over the sweep.
CommandResult cmd_scaling(const RunConfig& config);

/// Schatten membership table {M, k, l, n, p, member, p_min} for a variant:
/// A, B, A_half, L, P, B^3, A^2, Aw:<ell>, Bw:<ell>.
CommandResult cmd_schatten(int n, int m, const std::string& variant);

/// Runs the acceptance suite. Exit 0 iff every gating criterion passes.
CommandResult cmd_accept(bool quick, bool slow, const std::vector<int>& only, std::ostream* log);

/// Writes the eigenvalue table (lambda_re, lambda_im, residual, size,
/// certified, drift) and the eigenfunction grid as CSV files in `dir`.
void write_pencil_csv(const Json& pencil_report, const std::string& dir);

/// Adds the "timestamp" field (UTC, ISO 8601) used by every report.
void stamp(Json& report);

}  // namespace pencil_lab
