#include "locsvm/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "locsvm/analysis.hpp"
#include "locsvm/tvsvm.hpp"

namespace locsvm {

namespace {

namespace fs = std::filesystem;

struct KeySpec {
  const char* name;
  const char* help;
  bool required = false;
};

struct CommandSpec {
  const char* name;
  const char* help;
  std::vector<KeySpec> keys;
};

const std::vector<CommandSpec>& commands() {
  static const std::vector<CommandSpec> table = {
      {"partition",
       "build an r-net Voronoi partition of the unit ball and report its invariants",
       {{"d", "dimension (>=1)", true},
        {"r", "net radius in (0,2]", true},
        {"seed", "lattice jitter seed"},
        {"probes", "covering probes for the report (default 100000)"},
        {"out_dir", "output directory (default .)"},
        {"config", "key=value file applied before command-line keys"}}},
      {"train",
       "train a localized SVM with the theory's fixed per-cell parameter rules",
       {{"family", "halfspace | sphere (default halfspace)"},
        {"d", "dimension", true},
        {"zeta", "noise-profile exponent (default 1)"},
        {"tau", "plateau width in (0,1] (default 1)"},
        {"R", "sphere boundary radius (sphere family, default 0.5)"},
        {"n", "training sample size", true},
        {"nu", "cell-shrink exponent, r_n = n^-nu (default 0.25)"},
        {"r", "override the partition radius"},
        {"s", "override the near/far separation (default r_n)"},
        {"sigma", "lambda exponent, 0 = automatic (default 0)"},
        {"gamma_scale", "scale on the kernel-width rule (default 1)"},
        {"lambda_scale", "scale on the regularization rule (default 1)"},
        {"probe_budget", "cell-classification probes (default 64)"},
        {"n_test", "test points for the risk estimate (default 100000)"},
        {"kkt_tol", "solver KKT tolerance (default 1e-6)"},
        {"max_sweeps", "solver sweep cap (default 10000)"},
        {"seed", "experiment seed"},
        {"threads", "parallelism degree, 0 = all cores (default 0)"},
        {"out_dir", "output directory (default .)"},
        {"config", "key=value file applied before command-line keys"}}},
      {"tvsvm",
       "train a training-validation SVM with per-cell parameter selection",
       {{"family", "halfspace | sphere (default halfspace)"},
        {"d", "dimension", true},
        {"zeta", "noise-profile exponent (default 1)"},
        {"tau", "plateau width in (0,1] (default 1)"},
        {"R", "sphere boundary radius (sphere family, default 0.5)"},
        {"n", "sample size (>=4)", true},
        {"nu", "cell-shrink exponent (default 0.25)"},
        {"r", "override the partition radius"},
        {"net_mode", "exact | geometric (default geometric)"},
        {"net_size", "points per geometric net (default 6)"},
        {"n_test", "test points for the risk estimate (default 100000)"},
        {"kkt_tol", "solver KKT tolerance (default 1e-6)"},
        {"max_sweeps", "solver sweep cap (default 10000)"},
        {"seed", "experiment seed"},
        {"threads", "parallelism degree, 0 = all cores (default 0)"},
        {"out_dir", "output directory (default .)"},
        {"config", "key=value file applied before command-line keys"}}},
      {"margins",
       "estimate the margin exponents of a family and compare with the declared sheet",
       {{"family", "halfspace | sphere (default halfspace)"},
        {"d", "dimension", true},
        {"zeta", "noise-profile exponent (default 1)"},
        {"tau", "plateau width in (0,1] (default 1)"},
        {"R", "sphere boundary radius (sphere family, default 0.5)"},
        {"n_mc", "Monte-Carlo sample size (default 1000000)"},
        {"seed", "sampling seed"},
        {"out_dir", "output directory (default .)"},
        {"config", "key=value file applied before command-line keys"}}},
      {"theory",
       "evaluate every rate exponent of the theory at (beta, q, d, zeta)",
       {{"beta", "margin-noise exponent (> 0)", true},
        {"q", "noise exponent (>= 0)", true},
        {"d", "dimension", true},
        {"zeta", "lower-control exponent (>= 0)", true},
        {"out_dir", "output directory (default .)"},
        {"config", "key=value file applied before command-line keys"}}},
      {"rates",
       "learning-curve experiment: excess risk over an n ladder with a slope fit",
       {{"family", "halfspace | sphere (default halfspace)"},
        {"d", "dimension", true},
        {"zeta", "noise-profile exponent (default 1)"},
        {"tau", "plateau width in (0,1] (default 1)"},
        {"R", "sphere boundary radius (sphere family, default 0.5)"},
        {"n_ladder", "comma-separated sample sizes, length >= 4", true},
        {"reps", "repetitions per ladder point (default 5)"},
        {"nu", "cell-shrink exponent (default 0.25)"},
        {"sigma", "lambda exponent, 0 = automatic (default 0)"},
        {"r_scale", "scale on r_n (default 1)"},
        {"gamma_scale", "scale on the kernel-width rule (default 1)"},
        {"lambda_scale", "scale on the regularization rule (default 1)"},
        {"n_test", "test points per repetition (default 100000)"},
        {"probe_budget", "cell-classification probes (default 64)"},
        {"compare_global", "also run the m=1 global SVM, 0/1 (default 1)"},
        {"drop_smallest", "drop the smallest ladder point from the fit, 0/1 (default 0)"},
        {"kkt_tol", "solver KKT tolerance (default 1e-3)"},
        {"max_sweeps", "solver sweep cap (default 2000)"},
        {"seed", "experiment seed"},
        {"threads", "parallelism degree, 0 = all cores (default 0)"},
        {"out_dir", "output directory (default .)"},
        {"config", "key=value file applied before command-line keys"}}},
  };
  return table;
}

void print_usage(std::ostream& out) {
  out << "usage: locsvm <command> [key=value ...]\n\ncommands:\n";
  for (const CommandSpec& cmd : commands())
    out << "  " << cmd.name << "  -  " << cmd.help << "\n";
  out << "\nuse `locsvm <command> --help` for the accepted keys;"
         " LOCSVM_SEED sets the default seed\n";
}

void print_command_help(const CommandSpec& cmd, std::ostream& out) {
  out << "usage: locsvm " << cmd.name << " [key=value ...]\n  " << cmd.help << "\n\nkeys:\n";
  for (const KeySpec& key : cmd.keys)
    out << "  " << key.name << (key.required ? " (required)" : "") << "  -  " << key.help
        << "\n";
}

class Config {
 public:
  explicit Config(std::map<std::string, std::string> values) : values_(std::move(values)) {}

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string str(const std::string& key, const std::string& fallback = "") const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  double real(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    return parse_real(key, it->second);
  }

  long integer(const std::string& key, long fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    return parse_integer(key, it->second);
  }

  long bounded(const std::string& key, long fallback, long lo, long hi) const {
    long v = integer(key, fallback);
    if (v < lo || v > hi)
      throw std::invalid_argument("key " + key + ": must be in [" + std::to_string(lo) +
                                  ", " + std::to_string(hi) + "]");
    return v;
  }

  std::uint64_t seed() const {
    auto it = values_.find("seed");
    if (it != values_.end()) return std::uint64_t(parse_integer("seed", it->second));
    if (const char* env = std::getenv("LOCSVM_SEED"))
      return std::uint64_t(parse_integer("LOCSVM_SEED", env));
    return 0;
  }

  static double parse_real(const std::string& key, const std::string& text) {
    std::size_t pos = 0;
    double v;
    try {
      v = std::stod(text, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("key " + key + ": not a number: " + text);
    }
    if (pos != text.size() || !std::isfinite(v))
      throw std::invalid_argument("key " + key + ": not a finite number: " + text);
    return v;
  }

  static long parse_integer(const std::string& key, const std::string& text) {
    std::size_t pos = 0;
    long v;
    try {
      v = std::stol(text, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("key " + key + ": not an integer: " + text);
    }
    if (pos != text.size())
      throw std::invalid_argument("key " + key + ": not an integer: " + text);
    return v;
  }

 private:
  std::map<std::string, std::string> values_;
};

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("malformed config line (expected key=value): " + line);
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

Config parse_args(const CommandSpec& spec, const std::vector<std::string>& tokens) {
  auto known = [&](const std::string& key) {
    for (const KeySpec& k : spec.keys)
      if (key == k.name) return true;
    return false;
  };

  std::map<std::string, std::string> file_values, cli_values;
  for (const std::string& token : tokens) {
    auto eq = token.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("expected key=value, got: " + token);
    std::string key = token.substr(0, eq), value = token.substr(eq + 1);
    if (!known(key)) throw std::invalid_argument("unknown key for " + std::string(spec.name) + ": " + key);
    if (key == "config") {
      for (auto& [k, v] : read_config_file(value)) {
        if (!known(k))
          throw std::invalid_argument("unknown key in config file for " +
                                      std::string(spec.name) + ": " + k);
        file_values[k] = v;
      }
    } else {
      cli_values[key] = value;
    }
  }
  for (auto& [k, v] : cli_values) file_values[k] = v;  // command line wins
  for (const KeySpec& k : spec.keys)
    if (k.required && !file_values.count(k.name))
      throw std::invalid_argument("missing required key: " + std::string(k.name));
  return Config(std::move(file_values));
}

MarginDistribution make_distribution(const Config& cfg) {
  std::string family = cfg.str("family", "halfspace");
  int d = int(cfg.bounded("d", 0, 1, 16));
  double zeta = cfg.real("zeta", 1.0);
  double tau = cfg.real("tau", 1.0);
  if (family == "halfspace") return MarginDistribution::halfspace(d, zeta, tau);
  if (family == "sphere")
    return MarginDistribution::sphere(d, zeta, tau, cfg.real("R", 0.5));
  throw std::invalid_argument("family must be halfspace or sphere, got: " + family);
}

fs::path prepare_out_dir(const Config& cfg) {
  fs::path dir = cfg.str("out_dir", ".");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec && !fs::is_directory(dir))
    throw std::invalid_argument("out_dir not writable: " + dir.string());
  return dir;
}

int cmd_partition(const Config& cfg) {
  int d = int(cfg.bounded("d", 0, 1, 16));
  double r = cfg.real("r", 0.0);
  std::size_t probes = std::size_t(cfg.bounded("probes", 100000, 1, 100000000));
  fs::path dir = prepare_out_dir(cfg);

  Partition p = build_rnet(d, r, cfg.seed());
  PartitionCheck check = verify_partition(p, probes, cfg.seed() + 1);
  save_partition(p, (dir / "partition.txt").string());

  std::ofstream report(dir / "partition_report.txt");
  report << "cells " << p.count() << "\n"
         << "min_separation " << format_g17(check.min_separation) << "\n"
         << "max_cover_dist " << format_g17(check.max_cover_dist) << "\n"
         << "separation_ok " << check.separation_ok << "\n"
         << "covering_ok " << check.covering_ok << "\n"
         << "size_bound_ok " << check.size_bound_ok << "\n";
  std::cout << "wrote " << (dir / "partition.txt").string() << " ("
            << p.count() << " cells)\n";
  return check.all_ok() ? 0 : 1;
}

// Per-cell parameter rules of the fixed-parameter experiment: small widths on
// straddling near cells, width r elsewhere, one shared lambda.
void theory_parameter_rules(const MarginDistribution& dist, const Partition& p,
                            const CellClassification& cc, std::size_t n, double sigma,
                            double gamma_scale, double lambda_scale,
                            std::vector<double>& lambdas, std::vector<double>& gammas) {
  ExponentSheet sheet = dist.exponents();
  double kappa = theory_exponents(sheet.beta, sheet.q, dist.dim, sheet.zeta).kappa;
  double nd = double(n);
  gammas.assign(std::size_t(p.count()), p.radius);
  double gamma_n1 =
      std::min(p.radius, gamma_scale * std::pow(p.radius, kappa) * std::pow(nd, -kappa));
  for (int j : cc.n1_indices) gammas[std::size_t(j)] = gamma_n1;
  lambdas.assign(std::size_t(p.count()), lambda_scale * std::pow(nd, -sigma));
}

void write_risk_csv(const RiskEstimate& est, const fs::path& path) {
  std::ofstream out(path);
  out << "class_risk,hinge_risk,excess_class,excess_hinge,stderr,n_test\n";
  out << format_g17(est.class_risk) << "," << format_g17(est.hinge_risk) << ","
      << format_g17(est.excess_class) << "," << format_g17(est.excess_hinge) << ","
      << format_g17(est.std_error) << "," << est.n_test << "\n";
}

int cmd_train(const Config& cfg) {
  MarginDistribution dist = make_distribution(cfg);
  std::size_t n = std::size_t(cfg.bounded("n", 0, 1, 100000000));
  double nu = cfg.real("nu", 0.25);
  double r_n = cfg.has("r") ? cfg.real("r", 0.0) : std::min(2.0, std::pow(double(n), -nu));
  double s = cfg.has("s") ? cfg.real("s", 0.0) : r_n;
  double sigma = cfg.real("sigma", 0.0);
  if (sigma <= 0.0) {
    ExponentSheet sheet = dist.exponents();
    TheoryExponents th = theory_exponents(sheet.beta, sheet.q, dist.dim, sheet.zeta);
    sigma = std::max(1.0, th.kappa * (sheet.beta + dist.dim) * (nu + 1.0) - nu);
  }
  int threads = int(cfg.bounded("threads", 0, 0, 4096));
  fs::path dir = prepare_out_dir(cfg);

  Partition p = build_rnet(dist.dim, r_n, cfg.seed());
  CellClassification cc =
      classify_cells(p, dist, s, int(cfg.bounded("probe_budget", 64, 1, 1000000)), cfg.seed() + 1);
  std::vector<double> lambdas, gammas;
  theory_parameter_rules(dist, p, cc, n, sigma, cfg.real("gamma_scale", 1.0),
                         cfg.real("lambda_scale", 1.0), lambdas, gammas);

  Dataset train = dist.sample(n, cfg.seed() + 2);
  LocalizedModel model =
      train_localized(train, p, lambdas, gammas, threads, cfg.real("kkt_tol", 1e-6),
                      int(cfg.bounded("max_sweeps", 10000, 1, 10000000)));
  RiskEstimate est = estimate_risk(model, dist,
                                   std::size_t(cfg.bounded("n_test", 100000, 1000, 100000000)),
                                   cfg.seed() + 3);
  save_model(model, (dir / "model.txt").string());
  write_risk_csv(est, dir / "risk.csv");
  std::cout << "wrote " << (dir / "model.txt").string() << " and risk.csv (excess_class="
            << est.excess_class << ")\n";
  return 0;
}

int cmd_tvsvm(const Config& cfg) {
  MarginDistribution dist = make_distribution(cfg);
  std::size_t n = std::size_t(cfg.bounded("n", 0, 4, 100000000));
  double nu = cfg.real("nu", 0.25);
  double r_n = cfg.has("r") ? cfg.real("r", 0.0) : std::min(2.0, std::pow(double(n), -nu));
  std::string mode_text = cfg.str("net_mode", "geometric");
  NetMode mode;
  if (mode_text == "exact")
    mode = NetMode::kExact;
  else if (mode_text == "geometric")
    mode = NetMode::kGeometric;
  else
    throw std::invalid_argument("net_mode must be exact or geometric, got: " + mode_text);
  fs::path dir = prepare_out_dir(cfg);

  Partition p = build_rnet(dist.dim, r_n, cfg.seed());
  Dataset data = dist.sample(n, cfg.seed() + 2);
  ParameterNets nets = build_nets(n, r_n, mode, std::size_t(cfg.bounded("net_size", 6, 2, 100000)));
  auto [model, report] =
      train_tv(data, p, nets, int(cfg.bounded("threads", 0, 0, 4096)), cfg.real("kkt_tol", 1e-6),
               int(cfg.bounded("max_sweeps", 10000, 1, 10000000)));
  RiskEstimate est = estimate_risk(model, dist,
                                   std::size_t(cfg.bounded("n_test", 100000, 1000, 100000000)),
                                   cfg.seed() + 3);
  save_model(model, (dir / "model.txt").string());
  save_tv_report_csv(report, (dir / "tv_report.csv").string());
  write_risk_csv(est, dir / "risk.csv");
  std::cout << "wrote " << (dir / "model.txt").string()
            << ", tv_report.csv and risk.csv (excess_class=" << est.excess_class << ")\n";
  return 0;
}

int cmd_margins(const Config& cfg) {
  MarginDistribution dist = make_distribution(cfg);
  std::size_t n_mc = std::size_t(cfg.bounded("n_mc", 1000000, 10000, 1000000000));
  std::uint64_t seed = cfg.seed();
  fs::path dir = prepare_out_dir(cfg);

  ExponentSheet sheet = dist.exponents();
  double q_hat = estimate_ne(dist, n_mc, seed);
  double beta_hat = estimate_mne(dist, n_mc, seed + 1);
  double alpha_hat = estimate_me(dist, n_mc, seed + 2);
  LcCheck lc = check_lc(dist, sheet.zeta, n_mc, seed + 3);

  std::ofstream out(dir / "margins.csv");
  out << "quantity,declared,estimated\n";
  out << "q," << format_g17(sheet.q) << "," << format_g17(q_hat) << "\n";
  out << "beta," << format_g17(sheet.beta) << "," << format_g17(beta_hat) << "\n";
  out << "alpha," << format_g17(sheet.alpha) << "," << format_g17(alpha_hat) << "\n";
  out << "lc_holds,1," << (lc.holds ? 1 : 0) << "\n";
  out << "c_lc,," << format_g17(lc.c_lc) << "\n";
  std::cout << "wrote " << (dir / "margins.csv").string() << " (q_hat=" << q_hat << ")\n";
  return 0;
}

int cmd_theory(const Config& cfg) {
  double beta = cfg.real("beta", 0.0);
  double q = cfg.real("q", -1.0);
  int d = int(cfg.bounded("d", 0, 1, 16));
  double zeta = cfg.real("zeta", -1.0);
  TheoryExponents th = theory_exponents(beta, q, d, zeta);
  fs::path dir = prepare_out_dir(cfg);

  std::ofstream out(dir / "theory.csv");
  out << "method,exponent,valid\n";
  out << "kappa," << format_g17(th.kappa) << ",1\n";
  out << "nu," << format_g17(th.nu) << ",1\n";
  out << "regime_first," << (th.regime_first ? 1 : 0) << ",1\n";
  out << "localized_svm," << format_g17(th.localized) << ",1\n";
  out << "localized_svm_closed_form," << format_g17(th.localized_closed) << ",1\n";
  out << "global_svm," << format_g17(th.global_svm) << ",1\n";
  out << "plugin_optimal," << (th.plugin_opt ? format_g17(*th.plugin_opt) : "")
      << "," << (th.plugin_opt ? 1 : 0) << "\n";
  out << "kohler_krzyzak," << (th.kohler_krzyzak ? format_g17(*th.kohler_krzyzak) : "")
      << "," << (th.kohler_krzyzak ? 1 : 0) << "\n";
  out << "histogram," << format_g17(th.histogram) << "," << (th.histogram_valid ? 1 : 0)
      << "\n";
  std::cout << "wrote " << (dir / "theory.csv").string() << " (localized="
            << th.localized << ", global=" << th.global_svm << ")\n";
  return 0;
}

int cmd_rates(const Config& cfg) {
  MarginDistribution dist = make_distribution(cfg);
  RateConfig rc;
  {
    std::stringstream ladder(cfg.str("n_ladder"));
    std::string item;
    while (std::getline(ladder, item, ','))
      {
      long v = Config::parse_integer("n_ladder", item);
      if (v < 1 || v > 100000000)
        throw std::invalid_argument("key n_ladder: entries must be in [1, 1e8]");
      rc.n_ladder.push_back(std::size_t(v));
    }
  }
  rc.reps = int(cfg.bounded("reps", 5, 1, 100000));
  rc.nu = cfg.real("nu", 0.25);
  rc.sigma = cfg.real("sigma", 0.0);
  rc.r_scale = cfg.real("r_scale", 1.0);
  rc.gamma_scale = cfg.real("gamma_scale", 1.0);
  rc.lambda_scale = cfg.real("lambda_scale", 1.0);
  rc.n_test = std::size_t(cfg.bounded("n_test", 100000, 1000, 100000000));
  rc.probe_budget = int(cfg.bounded("probe_budget", 64, 1, 1000000));
  rc.seed = cfg.seed();
  rc.threads = int(cfg.bounded("threads", 0, 0, 4096));
  rc.drop_smallest_in_fit = cfg.integer("drop_smallest", 0) != 0;
  rc.kkt_tol = cfg.real("kkt_tol", 1e-3);
  rc.max_sweeps = int(cfg.bounded("max_sweeps", 2000, 1, 10000000));
  fs::path dir = prepare_out_dir(cfg);

  RateReport report = rate_experiment(dist, rc);
  save_rate_rows_csv(report, (dir / "rates.csv").string());
  save_rate_summary_csv(report, (dir / "rates_summary.csv").string());
  save_rate_plot_data(report, (dir / "rates_logplot.dat").string());
  std::cout << "localized slope " << report.slope.slope << " (theory -"
            << report.theory.localized << ")\n";

  if (cfg.integer("compare_global", 1) != 0) {
    RateConfig gc = rc;
    gc.global_single_cell = true;
    RateReport global = rate_experiment(dist, gc);
    save_rate_rows_csv(global, (dir / "rates_global.csv").string());
    save_rate_summary_csv(global, (dir / "rates_global_summary.csv").string());
    save_rate_plot_data(global, (dir / "rates_global_logplot.dat").string());
    std::cout << "global slope " << global.slope.slope << " (theory -"
              << global.theory.global_svm << ")\n";
  }
  return 0;
}

}  // namespace

int cli_run(const std::vector<std::string>& args) {
  try {
    if (args.empty() || args[0] == "--help" || args[0] == "help") {
      print_usage(std::cout);
      return args.empty() ? 1 : 0;
    }
    const CommandSpec* spec = nullptr;
    for (const CommandSpec& cmd : commands())
      if (args[0] == cmd.name) spec = &cmd;
    if (!spec) {
      std::cerr << "error: unknown command: " << args[0] << "\n";
      print_usage(std::cerr);
      return 1;
    }
    std::vector<std::string> rest(args.begin() + 1, args.end());
    for (const std::string& token : rest)
      if (token == "--help" || token == "help") {
        print_command_help(*spec, std::cout);
        return 0;
      }
    Config cfg = parse_args(*spec, rest);
    if (args[0] == "partition") return cmd_partition(cfg);
    if (args[0] == "train") return cmd_train(cfg);
    if (args[0] == "tvsvm") return cmd_tvsvm(cfg);
    if (args[0] == "margins") return cmd_margins(cfg);
    if (args[0] == "theory") return cmd_theory(cfg);
    return cmd_rates(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cli_run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_run(args);
}

}  // namespace locsvm
