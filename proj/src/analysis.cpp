#include "locsvm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "locsvm/parallel.hpp"
#include "locsvm/quasirandom.hpp"

namespace locsvm {

RawPredictor as_predictor(const LocalizedModel& m) {
  return [&m](std::span<const double> x) { return predict_raw(m, x); };
}

RawPredictor bayes_predictor(const MarginDistribution& dist) {
  return [&dist](std::span<const double> x) { return double(dist.bayes_label(x)); };
}

namespace {

struct LossSample {
  std::vector<double> class_loss;  // 0/1 by predict_sign
  std::vector<double> hinge_loss;  // hinge of the clipped value
};

LossSample evaluate_losses(const RawPredictor& f, const MarginDistribution& dist,
                           std::size_t n_test, std::uint64_t seed) {
  Dataset test = dist.sample(n_test, seed);
  LossSample ls;
  ls.class_loss.resize(n_test);
  ls.hinge_loss.resize(n_test);
  for (std::size_t i = 0; i < n_test; ++i) {
    double raw = f(test.point(i));
    int sign = raw >= 0.0 ? 1 : -1;
    ls.class_loss[i] = sign == test.ys[i] ? 0.0 : 1.0;
    ls.hinge_loss[i] = hinge(test.ys[i], clip(raw));
  }
  return ls;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / double(v.size());
}

double se_of(const std::vector<double>& v, double mean) {
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return std::sqrt(s / double(v.size()) / double(v.size()));
}

}  // namespace

RiskEstimate estimate_risk(const RawPredictor& f, const MarginDistribution& dist,
                           std::size_t n_test, std::uint64_t seed) {
  if (n_test < 1000) throw std::invalid_argument("estimate_risk: n_test must be >= 1e3");
  LossSample ls = evaluate_losses(f, dist, n_test, seed);
  RiskEstimate est;
  est.n_test = n_test;
  est.class_risk = mean_of(ls.class_loss);
  est.hinge_risk = mean_of(ls.hinge_loss);
  est.excess_class = est.class_risk - dist.bayes_risk();
  est.excess_hinge = est.hinge_risk - dist.hinge_bayes_risk();
  est.std_error = se_of(ls.class_loss, est.class_risk);
  return est;
}

RiskEstimate estimate_risk(const LocalizedModel& m, const MarginDistribution& dist,
                           std::size_t n_test, std::uint64_t seed) {
  return estimate_risk(as_predictor(m), dist, n_test, seed);
}

ZhangCheck zhang_check(const RawPredictor& f, const MarginDistribution& dist,
                       std::size_t n_test, std::uint64_t seed) {
  if (n_test < 1000) throw std::invalid_argument("zhang_check: n_test must be >= 1e3");
  LossSample ls = evaluate_losses(f, dist, n_test, seed);
  double class_risk = mean_of(ls.class_loss);
  double hinge_risk = mean_of(ls.hinge_loss);
  std::vector<double> diff(n_test);
  for (std::size_t i = 0; i < n_test; ++i) diff[i] = ls.class_loss[i] - ls.hinge_loss[i];
  ZhangCheck zc;
  zc.excess_class = class_risk - dist.bayes_risk();
  zc.excess_hinge = hinge_risk - dist.hinge_bayes_risk();
  zc.diff_se = se_of(diff, mean_of(diff));
  zc.ok = zc.excess_class <= zc.excess_hinge + 3.0 * zc.diff_se;
  return zc;
}

VarianceBoundCheck variance_bound_check(const MarginDistribution& dist, double s,
                                        double zeta, double c_lc, std::size_t n_mc,
                                        int trials, std::uint64_t seed) {
  if (trials < 5) throw std::invalid_argument("variance_bound_check: trials must be >= 5");
  if (!(s > 0.0) || !(c_lc > 0.0))
    throw std::invalid_argument("variance_bound_check: s and c_lc must be > 0");

  const double factor = 2.0 * c_lc / std::pow(s, zeta);
  VarianceBoundCheck out;
  out.ok = true;

  for (int t = 0; t < trials; ++t) {
    std::uint64_t trial_seed = mix64(seed + 1000003ULL * std::uint64_t(t + 1));
    // A random clipped localized predictor: small training set, random
    // partition scale and hyperparameters.
    Dataset train = dist.sample(192, trial_seed);
    double r = 0.3 + 0.4 * double(mix64(trial_seed ^ 1) % 1000) / 1000.0;
    Partition p = build_rnet(dist.dim, r, trial_seed ^ 2);
    double gamma = r * (0.2 + 0.7 * double(mix64(trial_seed ^ 3) % 1000) / 1000.0);
    double lambda = std::pow(10.0, -1.0 - 2.0 * double(mix64(trial_seed ^ 4) % 1000) / 1000.0);
    std::vector<double> lambdas(p.count(), lambda), gammas(p.count(), gamma);
    LocalizedModel model = train_localized(train, p, lambdas, gammas, 1, 1e-4, 500);

    Dataset mc = dist.sample(n_mc, trial_seed ^ 5);
    double sum_d = 0.0, sum_d_sq = 0.0, sum_sq = 0.0, sum_q = 0.0;
    for (std::size_t i = 0; i < n_mc; ++i) {
      auto x = mc.point(i);
      if (dist.delta(x) < s) continue;  // off the far region: both losses drop out
      double lf = hinge(mc.ys[i], predict_clipped(model, x));
      double lstar = hinge(mc.ys[i], double(dist.bayes_label(x)));
      double d = lf - lstar;
      sum_d += d;
      sum_d_sq += d * d;
      double sq = d * d;
      sum_sq += sq;
      sum_q += sq * sq;
    }
    double n = double(n_mc);
    double lhs = sum_sq / n;
    double rhs_mean = sum_d / n;
    double se_lhs = std::sqrt(std::max(0.0, sum_q / n - lhs * lhs) / n);
    double se_rhs = std::sqrt(std::max(0.0, sum_d_sq / n - rhs_mean * rhs_mean) / n);
    double se = std::sqrt(se_lhs * se_lhs + factor * factor * se_rhs * se_rhs);
    double rhs = factor * rhs_mean + 4.0 * se;
    out.lhs.push_back(lhs);
    out.rhs.push_back(rhs);
    if (!(lhs <= rhs)) {
      out.ok = false;
      ++out.failures;
    }
  }
  return out;
}

TheoryExponents theory_exponents(double beta, double q, int d, double zeta) {
  if (!(beta > 0.0)) throw std::invalid_argument("theory_exponents: beta must be > 0");
  if (!(q >= 0.0)) throw std::invalid_argument("theory_exponents: q must be >= 0");
  if (d < 1) throw std::invalid_argument("theory_exponents: d must be >= 1");
  if (!(zeta >= 0.0)) throw std::invalid_argument("theory_exponents: zeta must be >= 0");

  TheoryExponents th;
  const double dd = double(d);
  const double mx = std::max(dd, zeta);
  th.kappa = (q + 1.0) / (beta * (q + 2.0) + dd * (q + 1.0));
  th.regime_first = beta >= (q + 1.0) * (1.0 + mx - dd);
  if (th.regime_first) {
    th.nu = th.kappa / (1.0 - th.kappa);
    th.localized_closed = beta * (q + 1.0) / (beta * (q + 2.0) + (dd - 1.0) * (q + 1.0));
  } else {
    th.nu = (1.0 - beta * th.kappa) / (beta * th.kappa + mx);
    th.localized_closed = beta * th.kappa * (1.0 + mx) / (beta * th.kappa + mx);
  }
  th.localized = beta * th.kappa * (th.nu + 1.0);
  th.global_svm = beta * th.kappa;

  double rho = beta / (q + 1.0);
  if (rho <= 1.0) {
    th.plugin_opt = rho * (q + 1.0) / (rho * (q + 2.0) + dd);
    th.kohler_krzyzak = rho * (q + 1.0) / (rho * (q + 3.0) + dd);
  }
  th.histogram =
      beta * (q + 1.0) /
      (beta * (q + 1.0) + dd * (q + 1.0) + beta * zeta / (1.0 + zeta));
  th.histogram_valid = beta <= (1.0 + zeta) * (q + 1.0);
  return th;
}

RateReport rate_experiment(const MarginDistribution& dist, const RateConfig& config) {
  if (config.n_ladder.size() < 4)
    throw std::invalid_argument("rate_experiment: ladder length must be >= 4");
  for (std::size_t i = 1; i < config.n_ladder.size(); ++i)
    if (config.n_ladder[i] <= config.n_ladder[i - 1])
      throw std::invalid_argument("rate_experiment: ladder must be strictly increasing");
  if (config.reps < 3) throw std::invalid_argument("rate_experiment: repetitions must be >= 3");
  if (!(config.nu > 0.0)) throw std::invalid_argument("rate_experiment: nu must be > 0");

  ExponentSheet sheet = dist.exponents();
  RateReport report;
  report.theory = theory_exponents(sheet.beta, sheet.q, dist.dim, sheet.zeta);
  report.nu = config.nu;
  report.global_variant = config.global_single_cell;
  report.sigma =
      config.sigma > 0.0
          ? config.sigma
          : std::max(1.0, report.theory.kappa * (sheet.beta + dist.dim) * (config.nu + 1.0) -
                              config.nu);

  const std::size_t ladder = config.n_ladder.size();
  const std::size_t tasks = ladder * std::size_t(config.reps);
  report.rows.resize(tasks);

  parallel_for(tasks, config.threads, [&](std::size_t task) {
    const std::size_t li = task / std::size_t(config.reps);
    const int rep = int(task % std::size_t(config.reps));
    const std::size_t n = config.n_ladder[li];
    const double nd = double(n);
    std::uint64_t task_seed = mix64(config.seed ^ (0x51ceb00dULL + n * 131ULL + rep));

    const double kappa = report.theory.kappa;
    Partition p;
    std::vector<double> gammas;
    if (config.global_single_cell) {
      p = single_cell_partition(dist.dim);
      gammas.assign(1, std::min(p.radius, config.gamma_scale * std::pow(nd, -kappa)));
    } else {
      double r_n = std::min(2.0, config.r_scale * std::pow(nd, -config.nu));
      p = build_rnet(dist.dim, r_n, task_seed);
      CellClassification cc =
          classify_cells(p, dist, r_n, config.probe_budget, task_seed + 1);
      gammas.assign(std::size_t(p.count()), r_n);
      double gamma_n1 = std::min(
          r_n, config.gamma_scale * std::pow(r_n, kappa) * std::pow(nd, -kappa));
      for (int j : cc.n1_indices) gammas[std::size_t(j)] = gamma_n1;
    }
    std::vector<double> lambdas(std::size_t(p.count()),
                                config.lambda_scale * std::pow(nd, -report.sigma));

    Dataset train = dist.sample(n, task_seed + 2);
    LocalizedModel model = train_localized(train, p, lambdas, gammas, 1, config.kkt_tol,
                                           config.max_sweeps);
    RiskEstimate est = estimate_risk(model, dist, config.n_test, task_seed + 3);
    report.rows[task] = {n, rep, est.excess_class, est.excess_hinge, est.std_error};
  });

  report.ns = config.n_ladder;
  report.mean_excess.resize(ladder, 0.0);
  report.mean_se.resize(ladder, 0.0);
  for (std::size_t li = 0; li < ladder; ++li) {
    double acc = 0.0;
    for (int rep = 0; rep < config.reps; ++rep)
      acc += report.rows[li * config.reps + rep].excess_class;
    report.mean_excess[li] = acc / config.reps;
    double var = 0.0;
    for (int rep = 0; rep < config.reps; ++rep) {
      double d = report.rows[li * config.reps + rep].excess_class - report.mean_excess[li];
      var += d * d;
    }
    report.mean_se[li] = config.reps > 1 ? std::sqrt(var / (config.reps - 1) / config.reps) : 0.0;
  }

  std::vector<double> lx, ly;
  for (std::size_t li = config.drop_smallest_in_fit ? 1 : 0; li < ladder; ++li) {
    double m = report.mean_excess[li];
    if (m < 1e-6) {
      m = 1e-6;  // keeps the log finite; flagged in the report
      report.floored = true;
    }
    lx.push_back(std::log(double(report.ns[li])));
    ly.push_back(std::log(m));
  }
  report.slope = ols_fit(lx, ly);
  return report;
}

void save_rate_rows_csv(const RateReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "n,rep,excess_class,excess_hinge,stderr\n";
  for (const RateRow& row : report.rows)
    out << row.n << "," << row.rep << "," << format_g17(row.excess_class) << ","
        << format_g17(row.excess_hinge) << "," << format_g17(row.std_error) << "\n";
}

void save_rate_summary_csv(const RateReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "slope,slope_se,theory_exponent,regime,nu,sigma,floored\n";
  double theory_exp =
      report.global_variant ? report.theory.global_svm : report.theory.localized;
  out << format_g17(report.slope.slope) << "," << format_g17(report.slope.slope_se) << ","
      << format_g17(theory_exp) << ","
      << (report.theory.regime_first ? "first" : "second") << "," << format_g17(report.nu)
      << "," << format_g17(report.sigma) << "," << (report.floored ? 1 : 0) << "\n";
}

void save_rate_plot_data(const RateReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (std::size_t li = 0; li < report.ns.size(); ++li)
    out << format_g17(std::log(double(report.ns[li]))) << " "
        << format_g17(std::log(std::max(report.mean_excess[li], 1e-6))) << "\n";
}

}  // namespace locsvm
