// Sectioned key=value run configuration: parsing, validation, serialization.
//
// Grammar: `[section]` headers, `key = value` lines, `#` comments. Values are
// scalars, comma lists, `linspace(lo,hi,n)`, or atom lists `[(t,w),(t,w)]`.
// Unknown sections/keys are rejected with their field path.
#pragma once

#include <cctype>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hara/prior.hpp"
#include "hara/simulate.hpp"
#include "hara/utility.hpp"

namespace hara {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct RunConfig {
  MarketParams mkt{0.0, 0.2, 1.0};

  PriorKind prior_kind = PriorKind::PointMass;
  double prior_theta0 = 0.0;
  std::vector<std::pair<double, double>> prior_atoms;
  double prior_m = 0.0;
  double prior_v = 1.0;

  UtilitySpec utility = LogUtility{};

  std::vector<double> eval_t{0.0};
  std::vector<double> eval_y{0.0};
  double eval_x = 1.0;

  QuadConfig quad;

  std::vector<double> sweep_gammas;

  int sim_n_paths = 10000;
  int sim_n_steps = 250;
  std::uint64_t sim_seed = 1;
  double sim_x0 = 1.0;
  bool sim_antithetic = false;
  std::vector<StrategySpec> sim_strategies = {{StrategyKind::Optimal}, {StrategyKind::Myopic}};

  std::string out_csv;
  int out_precision = 12;

  Prior build_prior() const {
    switch (prior_kind) {
      case PriorKind::PointMass:
        return Prior::point_mass(prior_theta0);
      case PriorKind::Discrete:
        return Prior::discrete(prior_atoms);
      case PriorKind::Gaussian:
        return Prior::gaussian(prior_m, prior_v, quad.theta_nodes);
      case PriorKind::QuadratureContinuous:
        return Prior::quadrature(prior_atoms);
    }
    throw ConfigError("prior.kind: unknown variant");
  }

  SimConfig build_sim() const {
    SimConfig cfg;
    cfg.n_paths = sim_n_paths;
    cfg.n_steps = sim_n_steps;
    cfg.seed = sim_seed;
    cfg.strategies = sim_strategies;
    cfg.utility = utility;
    cfg.prior = build_prior();
    cfg.mkt = mkt;
    cfg.x0 = sim_x0;
    cfg.antithetic = sim_antithetic;
    cfg.quad = quad;
    return cfg;
  }
};

namespace config_detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline double parse_double(const std::string& path, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw ConfigError(path + ": expected a number, got '" + v + "'");
  }
}

inline long long parse_int(const std::string& path, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long i = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return i;
  } catch (const std::exception&) {
    throw ConfigError(path + ": expected an integer, got '" + v + "'");
  }
}

inline bool parse_bool(const std::string& path, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(path + ": expected a boolean, got '" + v + "'");
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == sep && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

// scalar | a,b,c | linspace(lo,hi,n)
inline std::vector<double> parse_grid(const std::string& path, const std::string& v) {
  if (v.rfind("linspace(", 0) == 0 && v.back() == ')') {
    const auto args = split(v.substr(9, v.size() - 10), ',');
    if (args.size() != 3) throw ConfigError(path + ": linspace expects (lo,hi,n)");
    const double lo = parse_double(path, args[0]);
    const double hi = parse_double(path, args[1]);
    const long long n = parse_int(path, args[2]);
    if (n < 2) throw ConfigError(path + ": linspace needs n >= 2");
    std::vector<double> grid(n);
    for (long long i = 0; i < n; ++i) grid[i] = lo + (hi - lo) * i / static_cast<double>(n - 1);
    return grid;
  }
  std::vector<double> grid;
  for (const auto& tok : split(v, ',')) grid.push_back(parse_double(path, tok));
  if (grid.empty()) throw ConfigError(path + ": empty value");
  return grid;
}

// [(theta,w),(theta,w),...]
inline std::vector<std::pair<double, double>> parse_atoms(const std::string& path,
                                                          const std::string& v) {
  if (v.size() < 2 || v.front() != '[' || v.back() != ']')
    throw ConfigError(path + ": expected [(theta,w),...]");
  std::vector<std::pair<double, double>> atoms;
  for (const auto& tok : split(v.substr(1, v.size() - 2), ',')) {
    if (tok.size() < 2 || tok.front() != '(' || tok.back() != ')')
      throw ConfigError(path + ": expected (theta,w) pair, got '" + tok + "'");
    const auto parts = split(tok.substr(1, tok.size() - 2), ',');
    if (parts.size() != 2) throw ConfigError(path + ": expected (theta,w) pair, got '" + tok + "'");
    atoms.emplace_back(parse_double(path, parts[0]), parse_double(path, parts[1]));
  }
  if (atoms.empty()) throw ConfigError(path + ": no atoms");
  return atoms;
}

inline std::vector<StrategySpec> parse_strategies(const std::string& path, const std::string& v) {
  std::vector<StrategySpec> out;
  for (const auto& tok : split(v, ',')) {
    if (tok == "optimal") {
      out.push_back({StrategyKind::Optimal, 0.0});
    } else if (tok == "myopic") {
      out.push_back({StrategyKind::Myopic, 0.0});
    } else if (tok.rfind("merton:", 0) == 0) {
      out.push_back({StrategyKind::FixedMerton, parse_double(path, tok.substr(7))});
    } else {
      throw ConfigError(path + ": unknown strategy '" + tok + "'");
    }
  }
  if (out.empty()) throw ConfigError(path + ": empty strategy list");
  return out;
}

}  // namespace config_detail

inline RunConfig parse_config(const std::string& text) {
  using namespace config_detail;
  RunConfig cfg;
  // utility section is assembled after all keys are seen
  std::string family = "log";
  double gamma = 0.5, beta = 1.0, eta = 0.0;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": bad section");
      section = line.substr(1, line.size() - 2);
      if (section != "market" && section != "prior" && section != "utility" &&
          section != "eval" && section != "quad" && section != "sweep" && section != "sim" &&
          section != "output")
        throw ConfigError("unknown section [" + section + "]");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    const std::string path = section + "." + key;

    if (section == "market") {
      if (key == "r") cfg.mkt.r = parse_double(path, val);
      else if (key == "sigma") cfg.mkt.sigma = parse_double(path, val);
      else if (key == "T") cfg.mkt.T = parse_double(path, val);
      else throw ConfigError("unknown key " + path);
    } else if (section == "prior") {
      if (key == "kind") {
        if (val == "pointmass") cfg.prior_kind = PriorKind::PointMass;
        else if (val == "discrete") cfg.prior_kind = PriorKind::Discrete;
        else if (val == "gaussian") cfg.prior_kind = PriorKind::Gaussian;
        else if (val == "quadrature") cfg.prior_kind = PriorKind::QuadratureContinuous;
        else throw ConfigError(path + ": unknown prior kind '" + val + "'");
      } else if (key == "theta0") cfg.prior_theta0 = parse_double(path, val);
      else if (key == "atoms") cfg.prior_atoms = parse_atoms(path, val);
      else if (key == "m") cfg.prior_m = parse_double(path, val);
      else if (key == "v") cfg.prior_v = parse_double(path, val);
      else throw ConfigError("unknown key " + path);
    } else if (section == "utility") {
      if (key == "family") {
        if (val != "power" && val != "log" && val != "exp")
          throw ConfigError(path + ": unknown family '" + val + "'");
        family = val;
      } else if (key == "gamma") gamma = parse_double(path, val);
      else if (key == "beta") beta = parse_double(path, val);
      else if (key == "eta") eta = parse_double(path, val);
      else throw ConfigError("unknown key " + path);
    } else if (section == "eval") {
      if (key == "t") cfg.eval_t = parse_grid(path, val);
      else if (key == "y") cfg.eval_y = parse_grid(path, val);
      else if (key == "x") cfg.eval_x = parse_double(path, val);
      else throw ConfigError("unknown key " + path);
    } else if (section == "quad") {
      if (key == "z_nodes") cfg.quad.z_nodes = static_cast<int>(parse_int(path, val));
      else if (key == "theta_nodes") cfg.quad.theta_nodes = static_cast<int>(parse_int(path, val));
      else if (key == "tol") cfg.quad.tol = parse_double(path, val);
      else throw ConfigError("unknown key " + path);
    } else if (section == "sweep") {
      if (key == "gammas") cfg.sweep_gammas = parse_grid(path, val);
      else throw ConfigError("unknown key " + path);
    } else if (section == "sim") {
      if (key == "n_paths") cfg.sim_n_paths = static_cast<int>(parse_int(path, val));
      else if (key == "n_steps") cfg.sim_n_steps = static_cast<int>(parse_int(path, val));
      else if (key == "seed") cfg.sim_seed = static_cast<std::uint64_t>(parse_int(path, val));
      else if (key == "x0") cfg.sim_x0 = parse_double(path, val);
      else if (key == "antithetic") cfg.sim_antithetic = parse_bool(path, val);
      else if (key == "strategies") cfg.sim_strategies = parse_strategies(path, val);
      else throw ConfigError("unknown key " + path);
    } else if (section == "output") {
      if (key == "csv") cfg.out_csv = val;
      else if (key == "precision") cfg.out_precision = static_cast<int>(parse_int(path, val));
      else throw ConfigError("unknown key " + path);
    } else {
      throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
    }
  }

  if (family == "power") cfg.utility = PowerUtility{gamma, beta, eta};
  else if (family == "log") cfg.utility = LogUtility{beta, eta};
  else cfg.utility = ExpUtility{beta};

  try {
    cfg.mkt.validate();
    validate(cfg.utility);
    cfg.build_prior();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

inline std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream os;
  os.precision(17);
  os << "[market]\nr = " << cfg.mkt.r << "\nsigma = " << cfg.mkt.sigma << "\nT = " << cfg.mkt.T
     << "\n\n[prior]\n";
  switch (cfg.prior_kind) {
    case PriorKind::PointMass:
      os << "kind = pointmass\ntheta0 = " << cfg.prior_theta0 << "\n";
      break;
    case PriorKind::Discrete:
    case PriorKind::QuadratureContinuous:
      os << "kind = " << (cfg.prior_kind == PriorKind::Discrete ? "discrete" : "quadrature")
         << "\natoms = [";
      for (std::size_t i = 0; i < cfg.prior_atoms.size(); ++i)
        os << (i ? "," : "") << "(" << cfg.prior_atoms[i].first << "," << cfg.prior_atoms[i].second
           << ")";
      os << "]\n";
      break;
    case PriorKind::Gaussian:
      os << "kind = gaussian\nm = " << cfg.prior_m << "\nv = " << cfg.prior_v << "\n";
      break;
  }
  os << "\n[utility]\n";
  std::visit(
      [&](const auto& u) {
        using U = std::decay_t<decltype(u)>;
        if constexpr (std::is_same_v<U, PowerUtility>)
          os << "family = power\ngamma = " << u.gamma << "\nbeta = " << u.beta
             << "\neta = " << u.eta << "\n";
        else if constexpr (std::is_same_v<U, LogUtility>)
          os << "family = log\nbeta = " << u.beta << "\neta = " << u.eta << "\n";
        else
          os << "family = exp\nbeta = " << u.beta << "\n";
      },
      cfg.utility);
  os << "\n[eval]\nt = ";
  for (std::size_t i = 0; i < cfg.eval_t.size(); ++i) os << (i ? "," : "") << cfg.eval_t[i];
  os << "\ny = ";
  for (std::size_t i = 0; i < cfg.eval_y.size(); ++i) os << (i ? "," : "") << cfg.eval_y[i];
  os << "\nx = " << cfg.eval_x << "\n";
  os << "\n[quad]\nz_nodes = " << cfg.quad.z_nodes << "\ntheta_nodes = " << cfg.quad.theta_nodes
     << "\ntol = " << cfg.quad.tol << "\n";
  if (!cfg.sweep_gammas.empty()) {
    os << "\n[sweep]\ngammas = ";
    for (std::size_t i = 0; i < cfg.sweep_gammas.size(); ++i)
      os << (i ? "," : "") << cfg.sweep_gammas[i];
    os << "\n";
  }
  os << "\n[sim]\nn_paths = " << cfg.sim_n_paths << "\nn_steps = " << cfg.sim_n_steps
     << "\nseed = " << cfg.sim_seed << "\nx0 = " << cfg.sim_x0
     << "\nantithetic = " << (cfg.sim_antithetic ? "true" : "false") << "\nstrategies = ";
  for (std::size_t i = 0; i < cfg.sim_strategies.size(); ++i) {
    if (i) os << ",";
    switch (cfg.sim_strategies[i].kind) {
      case StrategyKind::Optimal: os << "optimal"; break;
      case StrategyKind::Myopic: os << "myopic"; break;
      case StrategyKind::FixedMerton: os << "merton:" << cfg.sim_strategies[i].theta; break;
    }
  }
  os << "\n\n[output]\ncsv = " << cfg.out_csv << "\nprecision = " << cfg.out_precision << "\n";
  return os.str();
}

}  // namespace hara
