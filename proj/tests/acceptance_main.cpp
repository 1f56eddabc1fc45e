// Acceptance suite: runs every criterion end to end, prints one PASS/FAIL
// line per criterion, and exits nonzero if any fail. Each criterion writes
// its artifacts under --out; the determinism criterion reruns everything at
// a different parallelism degree and byte-compares the trees.
//
//   acceptance [--out DIR] [--threads N] [criterion numbers...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <vector>

#include "locsvm/analysis.hpp"
#include "locsvm/kernel.hpp"
#include "locsvm/parallel.hpp"
#include "locsvm/quasirandom.hpp"
#include "locsvm/specfun.hpp"
#include "locsvm/tvsvm.hpp"

using namespace locsvm;
namespace fs = std::filesystem;

namespace {

struct Ctx {
  fs::path out;
  int threads = 0;
  std::string detail;
};

std::ofstream open_csv(const Ctx& ctx, const std::string& name, const std::string& header) {
  fs::create_directories(ctx.out);
  std::ofstream out(ctx.out / name);
  out << header << "\n";
  return out;
}

// ---------------------------------------------------------------- criterion 1
// Solver correctness: dual objective within the grid-oracle bound and KKT
// satisfied at 1e-6 on 100 random small problems.
bool criterion_solver(Ctx& ctx) {
  std::ofstream csv = open_csv(ctx, "solver_check.csv", "trial,n,dual,dual_oracle,gap_bound,kkt");
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> ux(-0.5, 0.5), ul(0.05, 1.5);
  int failures = 0;
  for (int trial = 0; trial < 100; ++trial) {
    CellProblem p;
    p.dim = 1 + int(rng() % 3);
    std::size_t n = 1 + rng() % 4;
    p.xs.resize(n * std::size_t(p.dim));
    p.ys.resize(n);
    for (double& v : p.xs) v = ux(rng);
    for (int& y : p.ys) y = rng() % 2 ? 1 : -1;
    p.lambda = ul(rng);
    p.gamma = 0.1 + 0.5 * ul(rng);
    p.global_n = n + rng() % 8;

    double c = p.box_c();
    double step = c / 24.0;
    CellModel fast = train_cell(p, 1e-6, 10000);
    CellModel slow = brute_force_dual(p, step);

    auto full_alpha = [&](const CellModel& m) {
      std::vector<double> alpha(p.size(), 0.0);
      std::size_t s = 0;
      for (std::size_t i = 0; i < p.size() && s < m.n_sv(); ++i) {
        auto x = p.point(i);
        if (m.sv_y[s] == p.ys[i] && std::equal(x.begin(), x.end(), m.sv(s).begin()))
          alpha[i] = m.alpha[s++];
      }
      return alpha;
    };
    double w_fast = dual_objective(p, full_alpha(fast));
    double w_slow = dual_objective(p, full_alpha(slow));
    double bound = double(p.size()) * step * (1.0 + c);
    double kkt = max_kkt_violation(p, fast);
    bool ok = w_fast >= w_slow - bound && kkt <= 1e-6 && fast.converged;
    failures += !ok;
    csv << trial << "," << n << "," << format_g17(w_fast) << "," << format_g17(w_slow)
        << "," << format_g17(bound) << "," << format_g17(kkt) << "\n";
  }
  ctx.detail = "100 random problems vs grid oracle, failures=" + std::to_string(failures);
  return failures == 0;
}

// ---------------------------------------------------------------- criterion 2
// Partition invariants on 20 random (d <= 4, r) builds.
bool criterion_partition(Ctx& ctx) {
  std::ofstream csv = open_csv(ctx, "partition_check.csv", "d,r,m,min_sep,max_cover,ok");
  std::mt19937_64 rng(202);
  const double r_floor[5] = {0.0, 0.05, 0.2, 0.4, 0.55};
  int failures = 0;
  for (int trial = 0; trial < 20; ++trial) {
    int d = 1 + trial % 4;
    std::uniform_real_distribution<double> ur(r_floor[d], 1.8);
    double r = ur(rng);
    Partition p = build_rnet(d, r, rng());
    PartitionCheck check = verify_partition(p, 100000, rng());
    bool ok = check.all_ok();
    failures += !ok;
    csv << d << "," << format_g17(r) << "," << p.count() << ","
        << format_g17(check.min_separation) << "," << format_g17(check.max_cover_dist)
        << "," << ok << "\n";
  }
  ctx.detail = "20 builds, failures=" + std::to_string(failures);
  return failures == 0;
}

// ---------------------------------------------------------------- criterion 3
// Gaussian ball mass: Monte Carlo vs the incomplete-gamma identity within
// 4 standard errors on 20 random (d, rho, gamma) triples at 1e6 samples.
bool criterion_ball_mass(Ctx& ctx) {
  std::ofstream csv = open_csv(ctx, "ballmass_check.csv", "d,rho,gamma,exact,mc,se,ok");
  std::mt19937_64 rng(303);
  std::normal_distribution<double> normal(0.0, 1.0);
  int failures = 0;
  for (int trial = 0; trial < 20; ++trial) {
    int d = 1 + int(rng() % 5);
    std::uniform_real_distribution<double> ug(0.1, 0.6);
    double gamma = ug(rng);
    double rho = 0.0, exact = 0.0;
    do {  // keep the mass away from the degenerate corners
      rho = gamma * (0.2 + 1.2 * std::uniform_real_distribution<double>(0, 1)(rng)) *
            std::sqrt(double(d));
      exact = gauss_ball_mass(d, rho, gamma);
    } while (exact < 0.02 || exact > 0.98);
    std::size_t n = 1000000, hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double dist_sq = 0.0;
      for (int k = 0; k < d; ++k) {
        double y = 0.5 * gamma * normal(rng);
        dist_sq += y * y;
      }
      hits += dist_sq <= rho * rho;
    }
    double mc = double(hits) / double(n);
    double se = std::sqrt(std::max(mc * (1.0 - mc), 1e-12) / double(n));
    bool ok = std::fabs(exact - mc) <= 4.0 * se;
    failures += !ok;
    csv << d << "," << format_g17(rho) << "," << format_g17(gamma) << ","
        << format_g17(exact) << "," << format_g17(mc) << "," << format_g17(se) << ","
        << ok << "\n";
  }
  ctx.detail = "20 triples at 1e6 samples, failures=" + std::to_string(failures);
  return failures == 0;
}

// ---------------------------------------------------------------- criterion 4
// Convolution error bounds near and away from the boundary, halfspace family,
// d in {1,2}, 50 random points each, within 3 quadrature standard errors.
bool criterion_approx_bounds(Ctx& ctx) {
  std::ofstream csv =
      open_csv(ctx, "approx_check.csv", "region,d,point,value,target,bound,se,ok");
  std::mt19937_64 rng(404);
  int failures = 0;

  auto plateau = [](std::vector<double> z, double rho, double gamma,
                    std::function<double(std::span<const double>)> pattern) {
    int d = int(z.size());
    double level = std::pow(M_PI * gamma * gamma, -0.25 * d);
    return std::function<double(std::span<const double>)>(
        [=, z = std::move(z), f = std::move(pattern)](std::span<const double> y) {
          double dist_sq = 0.0;
          for (int k = 0; k < d; ++k) dist_sq += (y[k] - z[k]) * (y[k] - z[k]);
          if (dist_sq > rho * rho) return 0.0;
          return level * f(y);
        });
  };
  auto sign_pattern = [](std::span<const double> y) {
    return y[0] > 0.0 ? 1.0 : (y[0] < 0.0 ? -1.0 : 0.0);
  };
  auto positive_pattern = [](std::span<const double> y) {
    return y[0] > 0.0 ? 1.0 : 0.0;
  };

  for (int d : {1, 2}) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    // straddling cell: bound 2·Q(d/2, 2Δ²/γ²)
    {
      std::vector<double> z(d, 0.0);
      z[0] = 0.05;
      if (d == 2) z[1] = 0.3;
      double r = 0.2, gamma = 0.15;
      auto f = plateau(z, 3.0 * r, gamma, sign_pattern);
      for (int i = 0; i < 50; ++i) {
        std::vector<double> x(d);
        for (int k = 0; k < d; ++k) x[k] = z[k] + r * u(rng) / std::sqrt(double(d));
        double fstar = x[0] >= 0.0 ? 1.0 : -1.0;
        double delta = std::fabs(x[0]);
        double bound = 2.0 * gamma_q(0.5 * d, 2.0 * delta * delta / (gamma * gamma));
        auto est = smooth_convolve(f, x, gamma, 6000, 4000 + i);
        bool ok = std::fabs(est.value - fstar) <= bound + 3.0 * est.std_error;
        failures += !ok;
        csv << "near," << d << "," << i << "," << format_g17(est.value) << "," << fstar
            << "," << format_g17(bound) << "," << format_g17(est.std_error) << "," << ok
            << "\n";
      }
    }
    // far cell: bound Q(d/2, 2ω₋²/γ²)
    {
      std::vector<double> z(d, 0.0);
      z[0] = 0.6;
      double r = 0.2, gamma = 0.15, omega_minus = 0.25;
      auto f = plateau(z, omega_minus + r, gamma, positive_pattern);
      double bound = gamma_q(0.5 * d, 2.0 * omega_minus * omega_minus / (gamma * gamma));
      for (int i = 0; i < 50; ++i) {
        std::vector<double> x(d);
        for (int k = 0; k < d; ++k) x[k] = z[k] + r * u(rng) / std::sqrt(double(d));
        auto est = smooth_convolve(f, x, gamma, 6000, 5000 + i);
        bool ok = std::fabs(est.value - 1.0) <= bound + 3.0 * est.std_error;
        failures += !ok;
        csv << "far," << d << "," << i << "," << format_g17(est.value) << ",1,"
            << format_g17(bound) << "," << format_g17(est.std_error) << "," << ok << "\n";
      }
    }
  }
  ctx.detail = "200 bound checks, failures=" + std::to_string(failures);
  return failures == 0;
}

// ---------------------------------------------------------------- criterion 5
// Margin-exponent recovery for the halfspace family at three noise profiles.
bool criterion_margins(Ctx& ctx) {
  std::ofstream csv = open_csv(ctx, "margins_check.csv",
                               "zeta,q_hat,beta_hat,alpha_hat,lc_holds,c_lc,ok");
  const std::size_t n_mc = 1000000;
  int failures = 0;
  for (double zeta : {0.5, 1.0, 2.0}) {
    auto dist = MarginDistribution::halfspace(1, zeta, 1.0);
    double q_hat = estimate_ne(dist, n_mc, 501);
    double beta_hat = estimate_mne(dist, n_mc, 502);
    double alpha_hat = estimate_me(dist, n_mc, 503);
    LcCheck lc = check_lc(dist, zeta, n_mc, 504);
    bool ok = std::fabs(q_hat - 1.0 / zeta) <= 0.15 &&
              std::fabs(beta_hat - (1.0 + zeta)) <= 0.2 &&
              std::fabs(alpha_hat - 1.0) <= 0.1 && lc.holds && lc.c_lc <= 1.0 + 1e-6 &&
              std::fabs(q_hat - alpha_hat / zeta) <= 0.15;
    failures += !ok;
    csv << format_g17(zeta) << "," << format_g17(q_hat) << "," << format_g17(beta_hat)
        << "," << format_g17(alpha_hat) << "," << lc.holds << "," << format_g17(lc.c_lc)
        << "," << ok << "\n";
  }
  ctx.detail = "zeta in {0.5,1,2} at 1e6 samples, failures=" + std::to_string(failures);
  return failures == 0;
}

// ---------------------------------------------------------------- criterion 6
// Zhang's inequality on 20 random localized models plus the variance bound
// with the true and a falsified constant.
bool criterion_zhang_variance(Ctx& ctx) {
  std::ofstream csv = open_csv(ctx, "zhang_variance.csv", "check,trial,lhs,rhs,ok");
  int failures = 0;
  auto hs1 = MarginDistribution::halfspace(1, 1.0, 1.0);
  auto sp2 = MarginDistribution::sphere(2, 1.0, 1.0, 0.5);
  std::mt19937_64 rng(606);
  for (int trial = 0; trial < 20; ++trial) {
    const MarginDistribution& dist = trial % 2 ? sp2 : hs1;
    Dataset train = dist.sample(128, rng());
    Partition p = build_rnet(dist.dim, 0.3 + 0.3 * double(rng() % 100) / 100.0, rng());
    std::vector<double> lam(p.count(), 0.002 + 0.05 * double(rng() % 100) / 100.0);
    std::vector<double> gam(p.count(), p.radius * (0.3 + 0.6 * double(rng() % 100) / 100.0));
    LocalizedModel m = train_localized(train, p, lam, gam, 1, 1e-4, 500);
    ZhangCheck zc = zhang_check(as_predictor(m), dist, 20000, rng());
    failures += !zc.ok;
    csv << "zhang," << trial << "," << format_g17(zc.excess_class) << ","
        << format_g17(zc.excess_hinge) << "," << zc.ok << "\n";
  }

  VarianceBoundCheck good = variance_bound_check(hs1, 0.25, 1.0, 1.0, 1000000, 10, 77);
  VarianceBoundCheck bad = variance_bound_check(hs1, 0.25, 1.0, 1e-3, 1000000, 10, 77);
  for (std::size_t t = 0; t < good.lhs.size(); ++t)
    csv << "variance_true," << t << "," << format_g17(good.lhs[t]) << ","
        << format_g17(good.rhs[t]) << "," << (good.lhs[t] <= good.rhs[t]) << "\n";
  for (std::size_t t = 0; t < bad.lhs.size(); ++t)
    csv << "variance_falsified," << t << "," << format_g17(bad.lhs[t]) << ","
        << format_g17(bad.rhs[t]) << "," << (bad.lhs[t] <= bad.rhs[t]) << "\n";
  bool ok = failures == 0 && good.ok && !bad.ok;
  ctx.detail = "zhang failures=" + std::to_string(failures) +
               ", variance ok=" + std::to_string(good.ok) +
               ", falsified rejected=" + std::to_string(!bad.ok);
  return ok;
}

// ---------------------------------------------------------------- criterion 7
// Theory calculator: worked values exactly, two-route agreement, ordering.
bool criterion_theory(Ctx& ctx) {
  std::ofstream csv = open_csv(ctx, "theory_check.csv", "case,value,expected,ok");
  int failures = 0;
  auto expect = [&](const std::string& name, double value, double expected, double tol) {
    bool ok = std::fabs(value - expected) <= tol;
    failures += !ok;
    csv << name << "," << format_g17(value) << "," << format_g17(expected) << "," << ok
        << "\n";
  };
  TheoryExponents a = theory_exponents(2.0, 1.0, 2, 1.0);
  expect("kappa", a.kappa, 0.2, 0.0);
  expect("nu", a.nu, 0.25, 0.0);
  expect("localized", a.localized, 0.5, 0.0);
  expect("global", a.global_svm, 0.4, 0.0);
  TheoryExponents b = theory_exponents(1.0, 1.0, 2, 1.0);
  expect("localized_second_regime", b.localized, 0.375, 0.0);

  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> ub(0.1, 5.0), uq(0.0, 4.0), uz(0.0, 4.0);
  int route_failures = 0, order_failures = 0;
  for (int i = 0; i < 100; ++i) {
    TheoryExponents th =
        theory_exponents(ub(rng), uq(rng), 1 + int(rng() % 5), uz(rng));
    if (std::fabs(th.localized - th.localized_closed) >
        1e-12 * std::max(1.0, std::fabs(th.localized)))
      ++route_failures;
    if (th.localized < th.global_svm) ++order_failures;
  }
  expect("two_route_failures", route_failures, 0, 0.0);
  expect("ordering_failures", order_failures, 0, 0.0);
  ctx.detail = "worked values and 100 random draws, failures=" + std::to_string(failures);
  return failures == 0;
}

// ---------------------------------------------------------------- criterion 8
// The headline rate experiment at desk scale. The parameter sequences carry
// free leading constants; these are pinned so that both learning curves sit
// in their power-law windows across the ladder (r_scale = 3 keeps the
// smallest cells at ~30 points, gamma_scale = 1/2 keeps the single-cell
// model's excess above the Monte-Carlo floor). All exponents are the
// theory's; only the constants are calibration.
bool criterion_rates(Ctx& ctx) {
  auto dist = MarginDistribution::halfspace(2, 1.0, 1.0);
  RateConfig rc;
  rc.n_ladder = {256, 512, 1024, 2048, 4096, 8192};
  rc.reps = 5;
  rc.nu = 0.25;
  rc.r_scale = 3.0;
  rc.n_test = 100000;
  rc.seed = 808;
  rc.threads = ctx.threads;

  RateReport local = rate_experiment(dist, rc);
  RateConfig gc = rc;
  gc.global_single_cell = true;
  gc.gamma_scale = 0.5;
  RateReport global = rate_experiment(dist, gc);

  fs::create_directories(ctx.out);
  save_rate_rows_csv(local, (ctx.out / "rates.csv").string());
  save_rate_summary_csv(local, (ctx.out / "rates_summary.csv").string());
  save_rate_plot_data(local, (ctx.out / "rates_logplot.dat").string());
  save_rate_rows_csv(global, (ctx.out / "rates_global.csv").string());
  save_rate_summary_csv(global, (ctx.out / "rates_global_summary.csv").string());
  save_rate_plot_data(global, (ctx.out / "rates_global_logplot.dat").string());

  bool band = local.slope.slope >= -0.70 && local.slope.slope <= -0.30;
  bool beats = local.slope.slope <= global.slope.slope + 0.05;
  std::ostringstream detail;
  detail << "localized slope " << local.slope.slope << " (band [-0.70,-0.30]), global "
         << global.slope.slope;
  ctx.detail = detail.str();
  return band && beats;
}

// ---------------------------------------------------------------- criterion 9
// TV-SVM adaptivity against the oracle fixed pair over the same nets.
bool criterion_tv_adaptivity(Ctx& ctx) {
  auto dist = MarginDistribution::halfspace(2, 1.0, 1.0);
  const std::size_t n = 4096;
  const double r_n = std::pow(double(n), -0.25);
  const int seeds = 5;

  std::vector<double> tv_excess(seeds), best_excess(seeds);
  std::vector<std::pair<double, double>> best_pair(seeds);
  parallel_for(seeds, ctx.threads, [&](std::size_t s) {
    std::uint64_t seed = 900 + s;
    Dataset data = dist.sample(n, seed);
    Partition p = build_rnet(2, r_n, seed);
    ParameterNets nets = build_nets(n, r_n, NetMode::kGeometric, 6);

    auto [tv_model, report] = train_tv(data, p, nets, 1);
    tv_excess[s] = estimate_risk(tv_model, dist, 100000, seed ^ 0x222).excess_class;

    // Oracle: evaluate every fixed pair on one fresh test set, then measure
    // the winner on a second independent one so its excess is unbiased.
    auto [d1, d2] = split_tv(data);
    double best_sel = 1e18;
    LocalizedModel best_model;
    for (double lambda : nets.lambdas)
      for (double gamma : nets.gammas) {
        std::vector<double> lam(p.count(), lambda), gam(p.count(), gamma);
        LocalizedModel m = train_localized(d1, p, lam, gam, 1);
        double sel = estimate_risk(m, dist, 100000, seed ^ 0x111).excess_class;
        if (sel < best_sel) {
          best_sel = sel;
          best_model = std::move(m);
          best_pair[s] = {lambda, gamma};
        }
      }
    best_excess[s] = estimate_risk(best_model, dist, 100000, seed ^ 0x222).excess_class;
  });

  std::ofstream csv = open_csv(ctx, "tv_adaptivity.csv",
                               "seed,tv_excess,best_fixed_excess,best_lambda,best_gamma");
  double tv_mean = 0.0, best_mean = 0.0;
  for (int s = 0; s < seeds; ++s) {
    tv_mean += tv_excess[s] / seeds;
    best_mean += best_excess[s] / seeds;
    csv << s << "," << format_g17(tv_excess[s]) << "," << format_g17(best_excess[s]) << ","
        << format_g17(best_pair[s].first) << "," << format_g17(best_pair[s].second) << "\n";
  }
  std::ostringstream detail;
  detail << "mean tv excess " << tv_mean << " vs best fixed " << best_mean;
  ctx.detail = detail.str();
  return tv_mean <= 2.0 * best_mean;
}

// --------------------------------------------------------------------- runner

using Criterion = std::function<bool(Ctx&)>;

const std::vector<std::pair<std::string, Criterion>>& criteria() {
  static const std::vector<std::pair<std::string, Criterion>> table = {
      {"solver vs brute-force oracle", criterion_solver},
      {"partition invariants", criterion_partition},
      {"gaussian ball mass identity", criterion_ball_mass},
      {"convolution error bounds", criterion_approx_bounds},
      {"margin exponent recovery", criterion_margins},
      {"zhang and variance bounds", criterion_zhang_variance},
      {"theory exponent calculator", criterion_theory},
      {"learning-rate experiment", criterion_rates},
      {"tv-svm adaptivity", criterion_tv_adaptivity},
  };
  return table;
}

bool trees_identical(const fs::path& a, const fs::path& b, std::string& why) {
  std::map<std::string, fs::path> left, right;
  for (auto& entry : fs::recursive_directory_iterator(a))
    if (entry.is_regular_file()) left[fs::relative(entry.path(), a).string()] = entry.path();
  for (auto& entry : fs::recursive_directory_iterator(b))
    if (entry.is_regular_file()) right[fs::relative(entry.path(), b).string()] = entry.path();
  if (left.size() != right.size()) {
    why = "file sets differ";
    return false;
  }
  for (auto& [rel, path] : left) {
    auto it = right.find(rel);
    if (it == right.end()) {
      why = "missing file " + rel;
      return false;
    }
    std::ifstream fa(path, std::ios::binary), fb(it->second, std::ios::binary);
    std::ostringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    if (sa.str() != sb.str()) {
      why = "content differs in " + rel;
      return false;
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  fs::path out = "acceptance_out";
  int threads = 0;
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--out" && i + 1 < argc)
      out = argv[++i];
    else if (arg == "--threads" && i + 1 < argc)
      threads = std::atoi(argv[++i]);
    else
      selected.push_back(std::atoi(arg.c_str()));
  }
  auto wants = [&](int id) {
    return selected.empty() ||
           std::find(selected.begin(), selected.end(), id) != selected.end();
  };

  fs::remove_all(out);
  fs::create_directories(out);
  bool all_ok = true;
  std::vector<int> ran;

  for (std::size_t i = 0; i < criteria().size(); ++i) {
    int id = int(i) + 1;
    if (!wants(id)) continue;
    Ctx ctx{out / ("c" + std::to_string(id)), threads, ""};
    auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = criteria()[i].second(ctx);
    } catch (const std::exception& e) {
      ctx.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %d (%s): %s [%.1fs]\n", ok ? "PASS" : "FAIL", id,
                criteria()[i].first.c_str(), ctx.detail.c_str(), secs);
    std::fflush(stdout);
    all_ok = all_ok && ok;
    ran.push_back(id);
  }

  // criterion 10: rerun everything at a different parallelism degree and
  // require bit-identical artifacts.
  if (wants(10)) {
    auto start = std::chrono::steady_clock::now();
    int other_threads = effective_threads(threads) == 1 ? 2 : 1;
    bool ok = true;
    std::string why;
    for (int id : ran) {
      Ctx ctx{out / "rerun" / ("c" + std::to_string(id)), other_threads, ""};
      try {
        criteria()[std::size_t(id - 1)].second(ctx);
      } catch (const std::exception& e) {
        ok = false;
        why = std::string("exception: ") + e.what();
        break;
      }
      if (!trees_identical(out / ("c" + std::to_string(id)), ctx.out, why)) {
        ok = false;
        why = "criterion " + std::to_string(id) + ": " + why;
        break;
      }
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion 10 (determinism across parallelism): %s [%.1fs]\n",
                ok ? "PASS" : "FAIL",
                ok ? ("reran " + std::to_string(ran.size()) + " criteria at threads=" +
                      std::to_string(other_threads) + ", outputs identical")
                         .c_str()
                   : why.c_str(),
                secs);
    all_ok = all_ok && ok;
  }

  return all_ok ? 0 : 1;
}
