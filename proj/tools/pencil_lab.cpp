// pencil-lab: trace criteria, pencil spectra and Schatten tables for
// -Delta + P^2 type problems.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pencil_lab/commands.hpp"
#include "pencil_lab/config.hpp"
#include "pencil_lab/errors.hpp"
#include "pencil_lab/parallel.hpp"

using namespace pencil_lab;

namespace {

struct CommonOptions {
  std::string config_path;
  std::string preset;
  std::string sizes;
  std::string json_path;
  std::string csv_dir;
  double tol = 0.0;
  bool slow = false;
  bool serial = false;
  bool quick = false;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "TOML run configuration");
  cmd->add_option("--preset", o.preset, "Preset problem (see `pencil-lab presets`)");
  cmd->add_option("--sizes", o.sizes, "Comma-separated sizes per axis, strictly increasing");
  cmd->add_option("--json", o.json_path, "Write the JSON report to this file ('-' for stdout)");
  cmd->add_option("--tol", o.tol, "Residual tolerance for pencil eigenpairs");
  cmd->add_flag("--slow", o.slow, "Allow three-dimensional problems");
  cmd->add_flag("--serial", o.serial, "Run the size sweep on one thread");
  cmd->add_flag("--quick", o.quick, "Halve the default sizes");
}

RunConfig build_config(const CommonOptions& o) {
  RunConfig config = o.config_path.empty() ? RunConfig{} : load_config(o.config_path);
  if (!o.preset.empty()) apply_preset(config, o.preset);
  else if (o.config_path.empty()) apply_preset(config, "monomial:2");
  if (!o.sizes.empty()) config.sizes = parse_sizes(o.sizes);
  if (!o.json_path.empty()) config.json_path = o.json_path;
  if (!o.csv_dir.empty()) config.csv_dir = o.csv_dir;
  if (o.tol != 0.0) config.residual_tol = o.tol;
  config.slow = config.slow || o.slow;
  config.serial = config.serial || o.serial;
  config.quick = config.quick || o.quick;
  return config;
}

void emit(const CommandResult& result, const std::optional<std::string>& json_path) {
  if (json_path && *json_path == "-") {
    std::cout << result.report.dump(2) << "\n";
    return;
  }
  std::cout << result.summary;
  if (json_path) {
    std::ofstream os(*json_path);
    if (!os) throw InputError("cannot write " + *json_path);
    os << result.report.dump(2) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trace criteria and pencil spectra for -Delta + P^2 problems"};
  app.require_subcommand(1);

  CommonOptions common;
  std::vector<std::string> words;
  double gamma = 0.0;
  int ell_exp = 0;
  std::string mode;
  int schatten_n = 1, schatten_m = 2;
  std::string variant = "A";
  bool accept_quick = false, accept_slow = false;
  std::vector<int> only;

  auto* criteria = app.add_subcommand("criteria", "Rank-2/3/4 trace criteria with verdicts");
  add_common(criteria, common);

  auto* pencil = app.add_subcommand("pencil", "Certified pencil eigenvalues and one eigenfunction");
  add_common(pencil, common);
  pencil->add_option("--csv-dir", common.csv_dir, "Also write eigenvalues.csv and eigenfunction.csv here");

  auto* traces = app.add_subcommand("traces", "Extrapolated traces of operator words");
  add_common(traces, common);
  traces->add_option("--word", words, "Word such as \"B*B*A\" or \"A^2\" (repeatable)");

  auto* scaling = app.add_subcommand("scaling", "Scaling identity Tr A_gamma^l = gamma^(-l/(m+1)) Tr A^l");
  add_common(scaling, common);
  scaling->add_option("--gamma", gamma, "Scale factor gamma > 0");
  scaling->add_option("--ell-exp", ell_exp, "Power l >= 1");
  scaling->add_option("--mode", mode, "isospectral or fixed-basis");

  auto* schatten = app.add_subcommand("schatten", "Schatten membership table of one operator");
  auto* n_opt = schatten->add_option("--n", schatten_n, "Dimension");
  auto* m_opt = schatten->add_option("--m", schatten_m, "Degree of P");
  auto* variant_opt = schatten->add_option("--variant", variant, "A, B, A_half, L, P, B^3, A^2, Aw:<ell>, Bw:<ell>");
  schatten->add_option("--config", common.config_path, "TOML file with a [schatten] table");
  schatten->add_option("--json", common.json_path, "Write the JSON report to this file ('-' for stdout)");

  auto* accept = app.add_subcommand("accept", "Run the acceptance suite");
  accept->add_flag("--quick", accept_quick, "Smaller sizes and looser convergence tolerances");
  accept->add_flag("--slow", accept_slow, "Add the three-dimensional run");
  accept->add_option("--only", only, "Criterion ids to run");
  accept->add_option("--json", common.json_path, "Write the JSON report to this file ('-' for stdout)");

  auto* presets = app.add_subcommand("presets", "List the shipped presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::kInvalidInput);
  }

  try {
    if (presets->parsed()) {
      for (const auto& p : shipped_presets()) {
        std::cout << p.name << "  " << p.description;
        if (p.slow) std::cout << "  [needs --slow]";
        if (p.experimental) std::cout << "  [experimental]";
        std::cout << "\n";
      }
      return 0;
    }

    std::optional<std::string> json_path;
    if (!common.json_path.empty()) json_path = common.json_path;

    if (schatten->parsed()) {
      if (!common.config_path.empty()) {
        const auto config = load_config(common.config_path);
        if (!n_opt->count() && config.schatten_n) schatten_n = *config.schatten_n;
        if (!m_opt->count() && config.schatten_m) schatten_m = *config.schatten_m;
        if (!variant_opt->count()) variant = config.schatten_variant;
      } else if (!n_opt->count() || !m_opt->count()) {
        throw InputError("schatten needs --n and --m (or a config with a [schatten] table)");
      }
      const auto result = cmd_schatten(schatten_n, schatten_m, variant);
      emit(result, json_path);
      return static_cast<int>(result.exit_code);
    }
    if (accept->parsed()) {
      const auto result = cmd_accept(accept_quick, accept_slow, only,
                                     json_path && *json_path == "-" ? &std::cerr : &std::cout);
      emit(result, json_path);
      return static_cast<int>(result.exit_code);
    }

    RunConfig config = build_config(common);
    if (!words.empty()) config.words = words;
    if (gamma != 0.0) config.gamma = gamma;
    if (ell_exp != 0) config.ell_exp = ell_exp;
    if (!mode.empty()) config.scaling_mode = parse_scaling_mode(mode);
    finalize(config);
    set_serial(config.serial);

    CommandResult result;
    if (criteria->parsed()) result = cmd_criteria(config);
    else if (pencil->parsed()) result = cmd_pencil(config);
    else if (traces->parsed()) result = cmd_traces(config);
    else result = cmd_scaling(config);

    emit(result, config.json_path);
    if (pencil->parsed() && config.csv_dir) write_pencil_csv(result.report, *config.csv_dir);
    return static_cast<int>(result.exit_code);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kNumericFailure);
  }
}
