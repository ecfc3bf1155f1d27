#include "pencil_lab/commands.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "pencil_lab/acceptance.hpp"
#include "pencil_lab/pencil.hpp"
#include "pencil_lab/symbolcalc.hpp"
#include "pencil_lab/traces.hpp"

namespace pencil_lab {

namespace {

Json problem_json(const RunConfig& config) {
  const auto& p = config.problem;
  Json j;
  j["name"] = config.problem_name.empty() ? "custom" : config.problem_name;
  j["polynomial"] = to_string(p.poly);
  j["n"] = p.dimension();
  j["m"] = p.degree();
  j["ell"] = p.ell ? Json(*p.ell) : Json(nullptr);
  j["alpha"] = p.alpha ? Json(*p.alpha) : Json(nullptr);
  return j;
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json report_json(const TraceReport& r) {
  Json j;
  j["word"] = r.word;
  j["sizes"] = r.sizes;
  j["values"] = r.values;
  j["extrapolated"] = r.extrapolated;
  j["error"] = r.error_estimate;
  j["model"] = r.model;
  j["rate"] = optional_json(r.rate);
  j["fitted"] = r.fitted;
  return j;
}

std::string fmt(double v, int precision = 6) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

Json command_header(const char* name, const RunConfig& config) {
  Json j;
  j["command"] = name;
  j["problem"] = problem_json(config);
  j["sizes"] = config.sizes;
  return j;
}

std::vector<std::vector<double>> eigenfunction_grid(int dimension, double radius) {
  std::vector<std::vector<double>> grid;
  if (dimension == 1) {
    const int points = 201;
    for (int i = 0; i < points; ++i) grid.push_back({-radius + 2.0 * radius * i / (points - 1)});
    return grid;
  }
  // Two-dimensional slice (x3 = 0 in three dimensions).
  const int points = 41;
  for (int i = 0; i < points; ++i) {
    for (int j = 0; j < points; ++j) {
      std::vector<double> x = {-radius + 2.0 * radius * i / (points - 1),
                               -radius + 2.0 * radius * j / (points - 1)};
      if (dimension == 3) x.push_back(0.0);
      grid.push_back(std::move(x));
    }
  }
  return grid;
}

}  // namespace

void stamp(Json& report) {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  report["timestamp"] = os.str();
}

CommandResult cmd_criteria(const RunConfig& config) {
  const int n = config.problem.dimension();
  std::vector<int> ranks;
  if (n == 1) ranks = {2, 4};
  if (n == 2) ranks = {3, 4};
  if (n == 3) ranks = {4};

  CommandResult out;
  out.report = command_header("criteria", config);
  Json list = Json::array();
  std::ostringstream text;
  text << config.problem.describe() << ", sizes";
  for (int s : config.sizes) text << ' ' << s;
  text << "\n";
  bool any = false;
  for (int rank : ranks) {
    const auto r = evaluate_criterion(rank, config.problem, config.sizes, config.verdict_factor);
    Json j;
    j["criterion"] = "rank" + std::to_string(rank);
    j["expression"] = r.report.word;
    j["value"] = r.report.extrapolated;
    j["error"] = r.report.error_estimate;
    j["hypothesis_ok"] = r.hypothesis_ok;
    j["traces_defined"] = r.traces_defined;
    j["verdict"] = r.verdict;
    j["warnings"] = r.warnings;
    j["report"] = report_json(r.report);
    list.push_back(std::move(j));
    any = any || r.satisfied();
    text << "rank-" << rank << "  " << r.report.word << " = " << fmt(r.report.extrapolated)
         << " +- " << fmt(r.report.error_estimate, 3) << "  [" << r.verdict << "]\n";
    for (const auto& w : r.warnings) text << "        warning: " << w << "\n";
  }
  out.report["criteria"] = std::move(list);
  out.exit_code = any ? ExitCode::kOk : ExitCode::kInconclusive;
  out.summary = text.str();
  stamp(out.report);
  return out;
}

CommandResult cmd_pencil(const RunConfig& config) {
  const auto study = stability_study(config.problem, config.sizes, config.residual_tol);
  CommandResult out;
  out.report = command_header("pencil", config);
  out.report["residual_tol"] = config.residual_tol;
  Json counts = Json::array();
  for (std::size_t i = 0; i < study.sizes.size(); ++i) {
    counts.push_back({{"size", study.sizes[i]}, {"validated", study.validated[i].size()}});
  }
  out.report["validated_per_size"] = std::move(counts);
  Json table = Json::array();
  for (const auto& e : study.entries) {
    Json row;
    row["lambda_re"] = e.lambda.real();
    row["lambda_im"] = e.lambda.imag();
    row["residual"] = e.residual;
    row["size"] = study.sizes.back();
    row["certified"] = e.certified;
    row["drift"] = optional_json(e.drift);
    row["error_bound"] = e.error_bound;
    table.push_back(std::move(row));
  }
  out.report["eigenvalues"] = std::move(table);
  out.report["certified_count"] = study.certified_count();

  std::ostringstream text;
  text << config.problem.describe() << ": " << study.certified_count() << " certified of "
       << study.entries.size() << " validated at size " << study.sizes.back() << "\n";
  const auto* top = study.top_certified();
  if (top) {
    const auto& pair = study.validated.back()[top->pair_index];
    const double turning = std::pow(std::abs(top->lambda), 1.0 / config.problem.degree());
    const double radius = 3.0 * std::max(1.0, turning);
    const auto f = recover_physical_eigenfunction(
        pair, *study.largest, eigenfunction_grid(config.problem.dimension(), radius));
    Json ef;
    ef["lambda_re"] = top->lambda.real();
    ef["lambda_im"] = top->lambda.imag();
    ef["direct_residual"] = f.direct_residual;
    ef["tail_fraction"] = f.tail_fraction;
    Json samples = Json::array();
    for (std::size_t i = 0; i < f.grid.size(); ++i) {
      samples.push_back({{"x", f.grid[i]}, {"re", f.samples[i].real()}, {"im", f.samples[i].imag()}});
    }
    ef["grid"] = std::move(samples);
    out.report["eigenfunction"] = std::move(ef);
    int shown = 0;
    for (const auto& e : study.entries) {
      if (!e.certified) continue;
      if (++shown > 10) break;
      text << "  lambda = " << fmt(e.lambda.real(), 10) << (e.lambda.imag() < 0 ? " - " : " + ")
           << fmt(std::abs(e.lambda.imag()), 10) << "i   residual " << fmt(e.residual, 2)
           << "   drift " << fmt(e.drift.value_or(0.0), 2) << "\n";
    }
    text << "  eigenfunction of the first: direct residual " << fmt(f.direct_residual, 3)
         << ", coefficient tail " << fmt(f.tail_fraction, 3) << "\n";
    out.exit_code = ExitCode::kOk;
  } else {
    out.report["eigenfunction"] = nullptr;
    out.exit_code = ExitCode::kInconclusive;
  }
  out.summary = text.str();
  stamp(out.report);
  return out;
}

CommandResult cmd_traces(const RunConfig& config) {
  const std::vector<std::string> words = config.words.empty() ? std::vector<std::string>{"A"} : config.words;
  std::vector<TraceExpression> expressions;
  for (const auto& w : words) expressions.push_back({w, {{1.0, parse_word(w)}}});
  const auto reports = sweep(config.problem, config.sizes, expressions);
  CommandResult out;
  out.report = command_header("traces", config);
  Json list = Json::array();
  std::ostringstream text;
  text << config.problem.describe() << "\n";
  for (const auto& r : reports) {
    Json j = report_json(r);
    j["verdict"] = r.fitted ? "converged" : "no-fit";
    list.push_back(std::move(j));
    text << "Tr(" << r.word << ") -> " << fmt(r.extrapolated, 10) << " +- " << fmt(r.error_estimate, 3)
         << "  [" << r.model << "]\n";
  }
  out.report["traces"] = std::move(list);
  out.summary = text.str();
  stamp(out.report);
  return out;
}

CommandResult cmd_scaling(const RunConfig& config) {
  ProblemSpec spec = config.problem;
  spec.ell.reset();
  const Discretization problem(spec, config.sizes.back());
  const auto raw = scaling_identity_check(problem, config.ell_exp, config.gamma, config.scaling_mode);
  CommandResult out;
  out.report = command_header("scaling", config);
  out.report["gamma"] = config.gamma;
  out.report["ell"] = config.ell_exp;
  out.report["mode"] = to_string(config.scaling_mode);
  out.report["size"] = config.sizes.back();
  out.report["lhs"] = raw.lhs;
  out.report["rhs"] = raw.rhs;
  out.report["rel_error"] = raw.rel_error;
  std::ostringstream text;
  text << "Tr A_gamma^" << config.ell_exp << " = " << fmt(raw.lhs, 12) << ", gamma^(-ell/(m+1)) Tr A^"
       << config.ell_exp << " = " << fmt(raw.rhs, 12) << ", rel error " << fmt(raw.rel_error, 3)
       << " (" << to_string(config.scaling_mode) << ", size " << config.sizes.back() << ")\n";
  if (config.sizes.size() >= 3) {
    const auto swept = scaling_identity_sweep(spec, config.sizes, config.ell_exp, config.gamma,
                                              config.scaling_mode);
    out.report["extrapolated"] = {{"lhs", swept.lhs}, {"rhs", swept.rhs}, {"rel_error", swept.rel_error}};
    text << "extrapolated over the sweep: rel error " << fmt(swept.rel_error, 3) << "\n";
  } else {
    out.report["extrapolated"] = nullptr;
  }
  out.summary = text.str();
  stamp(out.report);
  return out;
}

CommandResult cmd_schatten(int n, int m, const std::string& variant) {
  if (n < 1 || n > 3) throw InputError("schatten: n must be 1, 2 or 3");
  if (m < 1) throw InputError("schatten: m must be >= 1");
  double order = 0.0;
  const auto colon = variant.find(':');
  const std::string head = variant.substr(0, colon);
  std::optional<int> ell;
  if (colon != std::string::npos) {
    try {
      ell = std::stoi(variant.substr(colon + 1));
    } catch (const std::exception&) {
      throw InputError("schatten: cannot read ell in variant '" + variant + "'");
    }
    if (*ell < 0 || *ell >= m) throw InputError("schatten: weighted variants need 0 <= ell < m");
    if (n != 1) throw InputError("schatten: weighted variants are one-dimensional");
  }
  if (head == "A" && !ell) order = -2.0;
  else if (head == "B" && !ell) order = -1.0;
  else if ((head == "A_half" || head == "Ah") && !ell) order = -1.0;
  else if (head == "L" && !ell) order = 2.0;
  else if (head == "P" && !ell) order = 1.0;
  else if (head == "B^3" && !ell) order = -3.0;
  else if (head == "A^2" && !ell) order = -4.0;
  else if (head == "Aw" && ell) order = -2.0 + 2.0 * *ell / m;
  else if (head == "Bw" && ell) order = -1.0 + static_cast<double>(*ell) / m;
  else {
    throw InputError("schatten: unknown variant '" + variant +
                     "' (A, B, A_half, L, P, B^3, A^2, Aw:<ell>, Bw:<ell>)");
  }
  const auto cls = operator_class(order, m, n);
  const auto p_min = min_schatten_index(cls);
  CommandResult out;
  out.report["command"] = "schatten";
  out.report["variant"] = variant;
  Json rows = Json::array();
  std::ostringstream text;
  text << "variant " << variant << ": M = " << fmt(order) << ", k = " << fmt(cls.x_weight)
       << ", l = 1, n = " << n << ", p_min = " << (p_min ? fmt(*p_min) : std::string("none")) << "\n";
  for (double p : {1.0, 2.0, 3.0, 4.0}) {
    const bool member = schatten_member(cls, p);
    rows.push_back({{"M", cls.order},
                    {"k", cls.x_weight},
                    {"l", cls.xi_weight},
                    {"n", n},
                    {"p", p},
                    {"member", member},
                    {"p_min", optional_json(p_min)}});
    text << "  p = " << p << ": " << (member ? "member" : "not a member") << "\n";
  }
  out.report["table"] = std::move(rows);
  out.summary = text.str();
  stamp(out.report);
  return out;
}

CommandResult cmd_accept(bool quick, bool slow, const std::vector<int>& only, std::ostream* log) {
  AcceptanceOptions options;
  options.tier = quick ? Tier::kQuick : Tier::kFull;
  options.slow = slow;
  options.only = only;
  options.log = log;
  const auto outcomes = run_acceptance(options);
  CommandResult out;
  out.report["command"] = "accept";
  out.report["tier"] = quick ? "quick" : "full";
  Json list = Json::array();
  for (const auto& o : outcomes) {
    list.push_back({{"id", o.id},
                    {"title", o.title},
                    {"passed", o.passed},
                    {"gating", o.gating},
                    {"seconds", o.seconds},
                    {"details", o.details}});
  }
  out.report["criteria"] = std::move(list);
  const bool ok = all_passed(outcomes);
  out.report["passed"] = ok;
  out.exit_code = ok ? ExitCode::kOk : ExitCode::kNumericFailure;
  out.summary = ok ? "all acceptance criteria passed\n" : "some acceptance criteria failed\n";
  stamp(out.report);
  return out;
}

void write_pencil_csv(const Json& report, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const auto path = std::filesystem::path(dir);
  {
    std::ofstream os(path / "eigenvalues.csv");
    if (!os) throw InputError("cannot write to " + dir);
    os << std::setprecision(17);
    os << "lambda_re,lambda_im,residual,size,certified,drift\n";
    for (const auto& row : report.at("eigenvalues")) {
      os << row.at("lambda_re").get<double>() << ',' << row.at("lambda_im").get<double>() << ','
         << row.at("residual").get<double>() << ',' << row.at("size").get<int>() << ','
         << (row.at("certified").get<bool>() ? 1 : 0) << ',';
      if (!row.at("drift").is_null()) os << row.at("drift").get<double>();
      os << '\n';
    }
  }
  const auto& ef = report.at("eigenfunction");
  if (ef.is_null()) return;
  std::ofstream os(path / "eigenfunction.csv");
  os << std::setprecision(17);
  const auto& grid = ef.at("grid");
  const std::size_t dims = grid.empty() ? 1 : grid.front().at("x").size();
  if (dims == 1) {
    os << "t,re,im\n";
  } else {
    for (std::size_t a = 0; a < dims; ++a) os << 'x' << a + 1 << ',';
    os << "re,im\n";
  }
  for (const auto& s : grid) {
    for (const auto& x : s.at("x")) os << x.get<double>() << ',';
    os << s.at("re").get<double>() << ',' << s.at("im").get<double>() << '\n';
  }
}

}  // namespace pencil_lab
