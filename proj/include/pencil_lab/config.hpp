#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pencil_lab/operators.hpp"

namespace pencil_lab {

struct Preset {
  std::string name;
  std::string description;
  bool slow = false;          // n = 3; needs --slow
  bool experimental = false;  // non-elliptic
};

/// Presets shipped with the tool, in display order.
const std::vector<Preset>& shipped_presets();

/// Builds the problem of a preset name: monomial:m, weighted:m:ell,
/// radial:n:k, saddle:k.
ProblemSpec preset_problem(const std::string& name);

/// Sweep used when the config names none: 1D {100,200,400}, 2D {24,32,40},
/// 3D {12,16,20}. The quick tier halves every size.
std::vector<int> default_sizes(int dimension, bool quick = false);

struct RunConfig {
  std::string problem_name;  // preset name, or "custom" for a literal polynomial
  ProblemSpec problem{HomogeneousPolynomial::monomial(2), std::nullopt, std::nullopt};
  std::vector<int> sizes;
  double residual_tol = 1e-6;
  double verdict_factor = 5.0;
  bool slow = false;
  bool serial = false;
  bool quick = false;

  // traces
  std::vector<std::string> words;
  // scaling
  double gamma = 2.0;
  int ell_exp = 1;
  ScalingMode scaling_mode = ScalingMode::kIsospectral;
  // schatten
  std::string schatten_variant = "A";
  std::optional<int> schatten_n;
  std::optional<int> schatten_m;

  std::optional<std::string> json_path;
  std::optional<std::string> csv_dir;
};

/// Reads a TOML run configuration. Unknown keys and type mismatches raise
/// InputError, as does an unreadable or malformed file.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& toml_text, const std::string& source = "<string>");

/// Replaces the problem by a preset (keeping sizes if already set).
void apply_preset(RunConfig& config, const std::string& preset);

/// Parses "a,b,c" into a size list.
std::vector<int> parse_sizes(const std::string& text);

/// Fills defaults and enforces: sizes strictly increasing and positive, at
/// least 2 sizes, total_dim cap, 3D only with slow, tolerances positive.
void finalize(RunConfig& config);

}  // namespace pencil_lab
