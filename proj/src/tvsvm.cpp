#include "locsvm/tvsvm.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "locsvm/parallel.hpp"

namespace locsvm {

std::pair<Dataset, Dataset> split_tv(const Dataset& data) {
  const std::size_t n = data.size();
  if (n < 4) throw std::invalid_argument("split_tv: requires n >= 4");
  const std::size_t l = n / 2 + 1;
  Dataset d1, d2;
  d1.dim = d2.dim = data.dim;
  for (std::size_t i = 0; i < n; ++i)
    (i < l ? d1 : d2).append(data.point(i), data.ys[i]);
  return {std::move(d1), std::move(d2)};
}

ParameterNets build_nets(std::size_t n, double r_n, NetMode mode, std::size_t size_cap) {
  if (n < 4) throw std::invalid_argument("build_nets: requires n >= 4");
  if (!(r_n > 0.0 && r_n <= 2.0)) throw std::invalid_argument("build_nets: r_n must be in (0,2]");
  if (size_cap < 2) throw std::invalid_argument("build_nets: size_cap must be >= 2");

  ParameterNets nets;
  nets.mode = mode;
  const double nd = double(n);
  if (mode == NetMode::kExact) {
    nets.rho_n = 1.0 / (nd * nd);
    nets.delta_n = 1.0 / nd;
    for (std::size_t k = n; k >= 1; --k) {
      nets.lambdas.push_back(double(k) / (nd * nd));
      nets.gammas.push_back(double(k) * r_n / nd);
    }
  } else {
    // Theory-deviating practical default; flagged in reports.
    const double lambda_hi = 1.0 / nd, lambda_lo = 1.0 / (nd * nd * nd);
    const double gamma_hi = r_n, gamma_lo = r_n / nd;
    for (std::size_t k = 0; k < size_cap; ++k) {
      double t = size_cap > 1 ? double(k) / double(size_cap - 1) : 0.0;
      nets.lambdas.push_back(lambda_hi * std::pow(lambda_lo / lambda_hi, t));
      nets.gammas.push_back(gamma_hi * std::pow(gamma_lo / gamma_hi, t));
    }
  }
  return nets;
}

std::pair<LocalizedModel, TvReport> train_tv(const Dataset& data, const Partition& p,
                                             const ParameterNets& nets, int threads,
                                             double kkt_tol, int max_sweeps) {
  if (nets.lambdas.empty() || nets.gammas.empty())
    throw std::invalid_argument("train_tv: empty parameter nets");
  for (double g : nets.gammas)
    if (!(g > 0.0 && g <= p.radius))
      throw std::invalid_argument("train_tv: net gamma outside (0, r]");

  auto [d1, d2] = split_tv(data);
  const int m = p.count();
  const std::size_t n_lambda = nets.lambdas.size(), n_gamma = nets.gammas.size();
  const std::size_t per_cell = n_lambda * n_gamma;

  std::vector<std::vector<std::size_t>> train_members(m), val_members(m);
  for (std::size_t i = 0; i < d1.size(); ++i)
    train_members[std::size_t(assign_cell(p, d1.point(i)))].push_back(i);
  for (std::size_t i = 0; i < d2.size(); ++i)
    val_members[std::size_t(assign_cell(p, d2.point(i)))].push_back(i);

  // All candidates, cell-major: slot (j, a, b) = j*per_cell + a*n_gamma + b.
  std::vector<CellModel> candidates(std::size_t(m) * per_cell);
  std::vector<double> risks(std::size_t(m) * per_cell,
                            std::numeric_limits<double>::quiet_NaN());

  parallel_for(std::size_t(m) * per_cell, threads, [&](std::size_t slot) {
    const std::size_t j = slot / per_cell;
    const std::size_t a = (slot % per_cell) / n_gamma;
    const std::size_t b = slot % n_gamma;
    CellProblem problem;
    problem.dim = p.dim;
    problem.lambda = nets.lambdas[a];
    problem.gamma = nets.gammas[b];
    problem.global_n = std::max<std::size_t>(d1.size(), 1);
    for (std::size_t i : train_members[j]) {
      auto x = d1.point(i);
      problem.xs.insert(problem.xs.end(), x.begin(), x.end());
      problem.ys.push_back(d1.ys[i]);
    }
    candidates[slot] = train_cell(problem, kkt_tol, max_sweeps);
    if (!val_members[j].empty()) {
      double acc = 0.0;
      for (std::size_t i : val_members[j])
        acc += hinge(d2.ys[i], clip(cell_predict_raw(candidates[slot], d2.point(i))));
      risks[slot] = acc / double(val_members[j].size());
    }
  });

  LocalizedModel model;
  model.partition = p;
  model.cells.resize(m);
  TvReport report;
  report.l = d1.size();
  report.n_val = d2.size();
  report.mode = nets.mode;
  report.rows.reserve(risks.size());
  report.chosen_pairs.resize(m);

  for (int j = 0; j < m; ++j) {
    std::size_t best = std::size_t(-1);
    if (!val_members[std::size_t(j)].empty()) {
      // Deterministic selection: lowest risk, ties to smallest λ then largest γ.
      for (std::size_t a = 0; a < n_lambda; ++a)
        for (std::size_t b = 0; b < n_gamma; ++b) {
          std::size_t slot = std::size_t(j) * per_cell + a * n_gamma + b;
          if (best == std::size_t(-1)) {
            best = slot;
            continue;
          }
          double lam = nets.lambdas[a], gam = nets.gammas[b];
          double blam = nets.lambdas[(best % per_cell) / n_gamma];
          double bgam = nets.gammas[best % n_gamma];
          if (risks[slot] < risks[best] ||
              (risks[slot] == risks[best] &&
               (lam < blam || (lam == blam && gam > bgam))))
            best = slot;
        }
    } else {
      // No validation data: the most conservative candidate (min Λ, max Γ).
      std::size_t a_min = 0, b_max = 0;
      for (std::size_t a = 1; a < n_lambda; ++a)
        if (nets.lambdas[a] < nets.lambdas[a_min]) a_min = a;
      for (std::size_t b = 1; b < n_gamma; ++b)
        if (nets.gammas[b] > nets.gammas[b_max]) b_max = b;
      best = std::size_t(j) * per_cell + a_min * n_gamma + b_max;
    }

    model.cells[std::size_t(j)] = candidates[best];
    report.chosen_pairs[std::size_t(j)] = {model.cells[std::size_t(j)].lambda,
                                           model.cells[std::size_t(j)].gamma};
    for (std::size_t a = 0; a < n_lambda; ++a)
      for (std::size_t b = 0; b < n_gamma; ++b) {
        std::size_t slot = std::size_t(j) * per_cell + a * n_gamma + b;
        report.rows.push_back(
            {j, nets.lambdas[a], nets.gammas[b], risks[slot], slot == best});
      }
  }
  return {std::move(model), std::move(report)};
}

void save_tv_report_csv(const TvReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "cell,lambda,gamma,val_risk,chosen\n";
  for (const TvCandidate& row : report.rows)
    out << row.cell << "," << format_g17(row.lambda) << "," << format_g17(row.gamma) << ","
        << format_g17(row.val_risk) << "," << (row.chosen ? 1 : 0) << "\n";
}

}  // namespace locsvm
