// Command-line front end: portfolio evaluation, gamma sweeps, structural
// verification, and Monte Carlo simulation.
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hara/config.hpp"
#include "hara/policy.hpp"
#include "hara/simulate.hpp"
#include "hara/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitDivergent = 2;
constexpr int kExitVerifyFailed = 3;

struct CommonOpts {
  std::string config_path;
  std::string out_path;
  std::string format = "table";
  std::optional<long long> seed;
};

hara::RunConfig load_config(const CommonOpts& opts) {
  std::ifstream in(opts.config_path);
  if (!in) throw hara::ConfigError("cannot open config file: " + opts.config_path);
  std::stringstream buf;
  buf << in.rdbuf();
  hara::RunConfig cfg = hara::parse_config(buf.str());
  if (opts.seed) cfg.sim_seed = static_cast<std::uint64_t>(*opts.seed);
  if (const char* env = std::getenv("HARA_QUAD_NODES")) {
    const int n = std::atoi(env);
    if (n < 2) throw hara::ConfigError("HARA_QUAD_NODES: expected an integer >= 2");
    cfg.quad.z_nodes = n;
    cfg.quad.theta_nodes = n;
  }
  return cfg;
}

std::string fmt(double x, int precision) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(precision) << x;
  return os.str();
}

std::ostream& open_output(const CommonOpts& opts, std::ofstream& file) {
  if (opts.out_path.empty()) return std::cout;
  file.open(opts.out_path);
  if (!file) throw hara::ConfigError("cannot open output file: " + opts.out_path);
  return file;
}

int cmd_portfolio(const CommonOpts& opts) {
  const hara::RunConfig cfg = load_config(opts);
  const hara::Prior prior = cfg.build_prior();
  std::ofstream file;
  std::ostream& os = open_output(opts, file);
  const int prec = cfg.out_precision;
  const bool csv = opts.format == "csv" || !opts.out_path.empty();

  if (csv) os << "t,y,x,pi_hat,pi_myopic,hedging,ratio,value\n";
  bool any_divergent = false;
  for (double t : cfg.eval_t) {
    for (double y : cfg.eval_y) {
      const hara::EvalPoint pt{t, cfg.eval_x, y};
      std::string err;
      hara::PolicyReport rep;
      double value = 0.0;
      try {
        rep = hara::policy_report(prior, cfg.utility, cfg.mkt, pt, cfg.quad);
        value = hara::value_function(prior, cfg.utility, cfg.mkt, pt, cfg.quad);
      } catch (const std::exception& e) {
        err = e.what();
        any_divergent = true;
      }
      if (csv) {
        os << fmt(t, prec) << ',' << fmt(y, prec) << ',' << fmt(cfg.eval_x, prec) << ',';
        if (err.empty()) {
          os << fmt(rep.pi_hat, prec) << ',' << fmt(rep.pi_myopic, prec) << ','
             << fmt(rep.hedging_demand, prec) << ','
             << (rep.ratio ? fmt(*rep.ratio, prec) : "undefined") << ',' << fmt(value, prec)
             << '\n';
        } else {
          os << "DIVERGENT,DIVERGENT,DIVERGENT,DIVERGENT,DIVERGENT\n";
        }
      } else {
        os << "t=" << fmt(t, 6) << " y=" << fmt(y, 6) << " x=" << fmt(cfg.eval_x, 6) << "  ";
        if (err.empty()) {
          os << "pi_hat=" << fmt(rep.pi_hat, prec) << "  pi_myopic=" << fmt(rep.pi_myopic, prec)
             << "  hedging=" << fmt(rep.hedging_demand, prec)
             << "  ratio=" << (rep.ratio ? fmt(*rep.ratio, prec) : "undefined")
             << "  value=" << fmt(value, prec) << '\n';
        } else {
          os << "DIVERGENT (" << err << ")\n";
        }
      }
    }
  }
  return any_divergent ? kExitDivergent : kExitOk;
}

int cmd_sweep(const CommonOpts& opts) {
  const hara::RunConfig cfg = load_config(opts);
  if (cfg.sweep_gammas.empty())
    throw hara::ConfigError("sweep.gammas: required for the sweep subcommand");
  const hara::Prior prior = cfg.build_prior();
  const hara::EvalPoint pt{cfg.eval_t.front(), cfg.eval_x, cfg.eval_y.front()};
  double beta = 1.0, eta = 0.0;
  if (const auto* pu = std::get_if<hara::PowerUtility>(&cfg.utility)) {
    beta = pu->beta;
    eta = pu->eta;
  }
  const auto rows = hara::gamma_sweep(prior, cfg.mkt, pt, beta, eta, cfg.sweep_gammas, cfg.quad);

  std::ofstream file;
  std::ostream& os = open_output(opts, file);
  const int prec = cfg.out_precision;
  os << "gamma,pi_hat,pi_myopic,hedging,ratio,error\n";
  for (const auto& row : rows) {
    os << fmt(row.gamma, prec) << ',';
    if (row.error.empty()) {
      os << fmt(row.pi_hat, prec) << ',' << fmt(row.pi_myopic, prec) << ','
         << fmt(row.hedging, prec) << ',' << (row.ratio ? fmt(*row.ratio, prec) : "undefined")
         << ",\n";
    } else {
      os << ",,,," << row.error << '\n';
    }
  }
  return kExitOk;
}

int cmd_verify(const CommonOpts& opts) {
  const hara::RunConfig cfg = load_config(opts);
  const hara::VerifyReport rep = hara::run_verification(cfg);
  std::ofstream file;
  std::ostream& os = open_output(opts, file);
  for (const auto& c : rep.checks) {
    os << (c.pass ? "PASS" : "FAIL") << "  " << c.name;
    if (!c.pass && !c.detail.empty()) os << "  [" << c.detail << "]";
    os << '\n';
  }
  for (const auto& d : rep.detections) os << "NOTE  " << d << '\n';
  os << (rep.all_pass ? "verification passed" : "verification FAILED") << '\n';
  return rep.all_pass ? kExitOk : kExitVerifyFailed;
}

int cmd_simulate(const CommonOpts& opts) {
  const hara::RunConfig cfg = load_config(opts);
  const hara::SimConfig sim_cfg = cfg.build_sim();
  const hara::SimReport rep = hara::simulate(sim_cfg);
  std::ofstream file;
  std::ostream& os = open_output(opts, file);
  const int prec = cfg.out_precision;
  const bool csv = opts.format == "csv" || !opts.out_path.empty();
  if (csv) {
    os << "strategy,mean_utility,std_error,certainty_equivalent,n_valid,violations\n";
    for (const auto& s : rep.strategies)
      os << s.name << ',' << fmt(s.mean_utility, prec) << ',' << fmt(s.std_error, prec) << ','
         << fmt(s.certainty_equivalent, prec) << ',' << s.n_valid << ',' << s.violations << '\n';
    if (rep.has_paired)
      os << "paired optimal-myopic," << fmt(rep.paired_mean, prec) << ','
         << fmt(rep.paired_std_error, prec) << ",," << rep.paired_n << ",\n";
  } else {
    for (const auto& s : rep.strategies)
      os << s.name << ": mean utility " << fmt(s.mean_utility, prec) << " (se "
         << fmt(s.std_error, prec) << "), certainty equivalent "
         << fmt(s.certainty_equivalent, prec) << ", valid paths " << s.n_valid << ", violations "
         << s.violations << '\n';
    if (rep.has_paired) {
      const double lo = rep.paired_mean - 1.96 * rep.paired_std_error;
      const double hi = rep.paired_mean + 1.96 * rep.paired_std_error;
      os << "paired optimal-myopic: mean " << fmt(rep.paired_mean, prec) << " (se "
         << fmt(rep.paired_std_error, prec) << "), 95% CI [" << fmt(lo, prec) << ", "
         << fmt(hi, prec) << "], n " << rep.paired_n << '\n';
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HARA portfolio choice under partial observation of the market price of risk"};
  app.require_subcommand(1);

  CommonOpts opts;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "run configuration file")->required();
    sub->add_option("--out", opts.out_path, "output file (default stdout)");
    sub->add_option("--format", opts.format, "csv|table")
        ->check(CLI::IsMember({"csv", "table"}));
    long long seed = 0;
    sub->add_option("--seed", seed, "override sim.seed")->each([&opts](const std::string& s) {
      opts.seed = std::stoll(s);
    });
  };

  auto* portfolio = app.add_subcommand("portfolio", "evaluate portfolios and value functions");
  auto* sweep = app.add_subcommand("sweep", "gamma sweep at one evaluation point");
  auto* verify = app.add_subcommand("verify", "run the structural verification suite");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo wealth simulation");
  for (auto* sub : {portfolio, sweep, verify, simulate}) add_common(sub);

  CLI11_PARSE(app, argc, argv);

  try {
    if (portfolio->parsed()) return cmd_portfolio(opts);
    if (sweep->parsed()) return cmd_sweep(opts);
    if (verify->parsed()) return cmd_verify(opts);
    if (simulate->parsed()) return cmd_simulate(opts);
  } catch (const hara::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitDivergent;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
