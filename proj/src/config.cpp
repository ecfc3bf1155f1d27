#include "pencil_lab/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "pencil_lab/errors.hpp"

namespace pencil_lab {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, sep)) out.push_back(item);
  return out;
}

int parse_int(const std::string& text, const std::string& context) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw InputError("expected an integer in '" + context + "', got '" + text + "'");
  }
}

void check_keys(const toml::table& table, const std::string& where,
                const std::set<std::string>& allowed) {
  for (const auto& [key, value] : table) {
    if (!allowed.count(std::string(key.str()))) {
      throw InputError("unknown key '" + std::string(key.str()) + "' in [" + where + "]");
    }
  }
}

const toml::table* section(const toml::table& root, const std::string& name) {
  const auto* node = root.get(name);
  if (!node) return nullptr;
  const auto* table = node->as_table();
  if (!table) throw InputError("'" + name + "' must be a table");
  return table;
}

template <typename T>
std::optional<T> get(const toml::table& table, const std::string& key, const std::string& where) {
  const auto* node = table.get(key);
  if (!node) return std::nullopt;
  if constexpr (std::is_same_v<T, double>) {
    if (auto v = node->value<double>()) return *v;  // integers convert too
  } else if constexpr (std::is_same_v<T, int>) {
    if (auto v = node->as_integer()) return static_cast<int>(v->get());
  } else if constexpr (std::is_same_v<T, bool>) {
    if (auto v = node->as_boolean()) return v->get();
  } else {
    if (auto v = node->as_string()) return v->get();
  }
  throw InputError("key '" + key + "' in [" + where + "] has the wrong type");
}

std::vector<int> int_array(const toml::table& table, const std::string& key, const std::string& where) {
  const auto* arr = table.get_as<toml::array>(key);
  if (!arr) throw InputError("key '" + key + "' in [" + where + "] must be an array of integers");
  std::vector<int> out;
  for (const auto& node : *arr) {
    const auto* v = node.as_integer();
    if (!v) throw InputError("key '" + key + "' in [" + where + "] must hold integers only");
    out.push_back(static_cast<int>(v->get()));
  }
  return out;
}

HomogeneousPolynomial literal_polynomial(const toml::array& terms, std::optional<int> dimension) {
  std::map<MultiIndex, double> map;
  std::optional<int> n = dimension;
  for (const auto& node : terms) {
    const auto* term = node.as_table();
    if (!term) throw InputError("each polynomial term must be a table {exponents, coeff}");
    check_keys(*term, "problem.polynomial", {"exponents", "coeff"});
    const auto exponents = int_array(*term, "exponents", "problem.polynomial");
    const auto coeff = get<double>(*term, "coeff", "problem.polynomial");
    if (!coeff) throw InputError("polynomial term without 'coeff'");
    if (!n) n = static_cast<int>(exponents.size());
    if (static_cast<int>(exponents.size()) != *n) {
      throw InputError("polynomial term has " + std::to_string(exponents.size()) +
                       " exponents, expected " + std::to_string(*n));
    }
    map[exponents] += *coeff;
  }
  if (!n) throw InputError("polynomial literal needs at least one term");
  return HomogeneousPolynomial(*n, std::move(map));
}

}  // namespace

const std::vector<Preset>& shipped_presets() {
  static const std::vector<Preset> presets = {
      {"monomial:2", "P = t^2", false, false},
      {"monomial:3", "P = t^3", false, false},
      {"monomial:4", "P = t^4", false, false},
      {"monomial:5", "P = t^5", false, false},
      {"monomial:6", "P = t^6", false, false},
      {"weighted:5:1", "weighted pencil, m = 5, ell = 1", false, false},
      {"weighted:7:2", "weighted pencil, m = 7, ell = 2", false, false},
      {"radial:2:2", "P = (x1^2 + x2^2)^2", false, false},
      {"radial:2:3", "P = (x1^2 + x2^2)^3", false, false},
      {"radial:3:3", "P = (x1^2 + x2^2 + x3^2)^3", true, false},
      {"saddle:2", "P = x1 x2 (x1^2 + x2^2)^2, not elliptic", false, true},
  };
  return presets;
}

ProblemSpec preset_problem(const std::string& name) {
  const auto parts = split(name, ':');
  if (!parts.empty() && parts[0] == "weighted") {
    if (parts.size() != 3) throw InputError("preset 'weighted' expects weighted:m:ell");
    const int m = parse_int(parts[1], name);
    const int ell = parse_int(parts[2], name);
    if (m < 1) throw InputError("weighted preset needs m >= 1");
    ProblemSpec spec{HomogeneousPolynomial::monomial(m), ell, std::nullopt};
    validate(spec);
    return spec;
  }
  return ProblemSpec{parse_polynomial_preset(name), std::nullopt, std::nullopt};
}

std::vector<int> default_sizes(int dimension, bool quick) {
  std::vector<int> sizes;
  switch (dimension) {
    case 1: sizes = {100, 200, 400}; break;
    case 2: sizes = {24, 32, 40}; break;
    case 3: sizes = {12, 16, 20}; break;
    default: throw InputError("dimension must be 1, 2 or 3");
  }
  if (quick) {
    for (int& s : sizes) s /= 2;
  }
  return sizes;
}

void apply_preset(RunConfig& config, const std::string& preset) {
  config.problem = preset_problem(preset);
  config.problem_name = preset;
}

std::vector<int> parse_sizes(const std::string& text) {
  std::vector<int> out;
  for (const auto& part : split(text, ',')) {
    if (part.empty()) throw InputError("empty entry in size list '" + text + "'");
    out.push_back(parse_int(part, text));
  }
  if (out.empty()) throw InputError("empty size list");
  return out;
}

RunConfig parse_config(const std::string& toml_text, const std::string& source) {
  toml::table root;
  try {
    root = toml::parse(toml_text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "cannot parse config " << source << ": " << e.description() << " (line "
       << e.source().begin.line << ")";
    throw InputError(os.str());
  }
  check_keys(root, "root", {"problem", "sweep", "tolerances", "traces", "scaling", "schatten",
                            "output", "run"});
  RunConfig cfg;

  if (const auto* p = section(root, "problem")) {
    check_keys(*p, "problem", {"preset", "polynomial", "dimension", "degree", "ell", "alpha"});
    const auto preset = get<std::string>(*p, "preset", "problem");
    const auto* literal = p->get("polynomial");
    if (preset && literal) throw InputError("[problem] takes either 'preset' or 'polynomial', not both");
    if (!preset && !literal) throw InputError("[problem] needs 'preset' or 'polynomial'");
    const auto dimension = get<int>(*p, "dimension", "problem");
    if (preset) {
      apply_preset(cfg, *preset);
    } else {
      const auto* arr = literal->as_array();
      if (!arr) throw InputError("'polynomial' must be an array of {exponents, coeff} tables");
      cfg.problem = ProblemSpec{literal_polynomial(*arr, dimension), std::nullopt, std::nullopt};
      cfg.problem_name = "custom";
    }
    if (dimension && *dimension != cfg.problem.dimension()) {
      throw InputError("[problem] dimension " + std::to_string(*dimension) +
                       " does not match the polynomial (n = " +
                       std::to_string(cfg.problem.dimension()) + ")");
    }
    if (const auto degree = get<int>(*p, "degree", "problem");
        degree && *degree != cfg.problem.degree()) {
      throw InputError("[problem] degree " + std::to_string(*degree) +
                       " does not match the polynomial (m = " +
                       std::to_string(cfg.problem.degree()) + ")");
    }
    if (const auto ell = get<int>(*p, "ell", "problem")) {
      if (cfg.problem.ell && *cfg.problem.ell != *ell) {
        throw InputError("[problem] ell conflicts with the preset");
      }
      cfg.problem.ell = *ell;
    }
    if (const auto alpha = get<double>(*p, "alpha", "problem")) cfg.problem.alpha = *alpha;
    validate(cfg.problem);
  } else {
    cfg.problem_name = "monomial:2";
  }

  if (const auto* s = section(root, "sweep")) {
    check_keys(*s, "sweep", {"sizes"});
    if (s->get("sizes")) cfg.sizes = int_array(*s, "sizes", "sweep");
  }
  if (const auto* t = section(root, "tolerances")) {
    check_keys(*t, "tolerances", {"residual_tol", "verdict_factor"});
    if (auto v = get<double>(*t, "residual_tol", "tolerances")) cfg.residual_tol = *v;
    if (auto v = get<double>(*t, "verdict_factor", "tolerances")) cfg.verdict_factor = *v;
  }
  if (const auto* t = section(root, "traces")) {
    check_keys(*t, "traces", {"words"});
    if (const auto* arr = t->get_as<toml::array>("words")) {
      for (const auto& node : *arr) {
        const auto* w = node.as_string();
        if (!w) throw InputError("[traces] words must be strings");
        cfg.words.push_back(w->get());
      }
    } else if (t->get("words")) {
      throw InputError("[traces] words must be an array of strings");
    }
  }
  if (const auto* s = section(root, "scaling")) {
    check_keys(*s, "scaling", {"gamma", "ell", "mode"});
    if (auto v = get<double>(*s, "gamma", "scaling")) cfg.gamma = *v;
    if (auto v = get<int>(*s, "ell", "scaling")) cfg.ell_exp = *v;
    if (auto v = get<std::string>(*s, "mode", "scaling")) cfg.scaling_mode = parse_scaling_mode(*v);
  }
  if (const auto* s = section(root, "schatten")) {
    check_keys(*s, "schatten", {"n", "m", "variant"});
    cfg.schatten_n = get<int>(*s, "n", "schatten");
    cfg.schatten_m = get<int>(*s, "m", "schatten");
    if (auto v = get<std::string>(*s, "variant", "schatten")) cfg.schatten_variant = *v;
  }
  if (const auto* o = section(root, "output")) {
    check_keys(*o, "output", {"json", "csv_dir"});
    cfg.json_path = get<std::string>(*o, "json", "output");
    cfg.csv_dir = get<std::string>(*o, "csv_dir", "output");
  }
  if (const auto* r = section(root, "run")) {
    check_keys(*r, "run", {"serial", "slow", "quick"});
    if (auto v = get<bool>(*r, "serial", "run")) cfg.serial = *v;
    if (auto v = get<bool>(*r, "slow", "run")) cfg.slow = *v;
    if (auto v = get<bool>(*r, "quick", "run")) cfg.quick = *v;
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

void finalize(RunConfig& config) {
  validate(config.problem);
  const int n = config.problem.dimension();
  if (n == 3 && !config.slow) {
    throw InputError("three-dimensional problems are slow; pass --slow to run them");
  }
  if (config.sizes.empty()) config.sizes = default_sizes(n, config.quick);
  if (config.sizes.size() < 2) throw InputError("a sweep needs at least 2 sizes");
  for (std::size_t i = 0; i < config.sizes.size(); ++i) {
    if (config.sizes[i] < 1) throw InputError("sizes must be positive");
    if (i > 0 && config.sizes[i] <= config.sizes[i - 1]) {
      throw InputError("sizes must be strictly increasing");
    }
  }
  const double total = std::pow(static_cast<double>(config.sizes.back()), n);
  if (total > kMaxTensorDim) {
    throw InputError("largest size gives " + std::to_string(static_cast<long long>(total)) +
                     " basis functions, above the cap of " + std::to_string(kMaxTensorDim));
  }
  if (!(config.residual_tol > 0.0)) throw InputError("residual_tol must be positive");
  if (!(config.verdict_factor > 0.0)) throw InputError("verdict_factor must be positive");
  if (!(config.gamma > 0.0)) throw InputError("gamma must be positive");
  if (config.ell_exp < 1) throw InputError("scaling ell must be >= 1");
}

}  // namespace pencil_lab
