#include "locsvm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "locsvm/kernel.hpp"

namespace locsvm {

namespace {

constexpr double kSnapTol = 1e-12;
constexpr std::size_t kKernelCacheLimit = 8192;  // cache K below this size

void validate(const CellProblem& problem) {
  if (!(problem.lambda > 0.0)) throw std::invalid_argument("train_cell: lambda must be > 0");
  if (!(problem.gamma > 0.0)) throw std::invalid_argument("train_cell: gamma must be > 0");
  if (problem.size() > 0 && problem.dim < 1)
    throw std::invalid_argument("train_cell: bad dimension");
  if (problem.global_n < problem.size())
    throw std::invalid_argument("train_cell: global_n smaller than |D_j|");
  for (int y : problem.ys)
    if (y != 1 && y != -1) throw std::invalid_argument("train_cell: labels must be -1 or +1");
}

CellModel zero_model(const CellProblem& problem) {
  CellModel m;
  m.dim = problem.dim;
  m.gamma = problem.gamma;
  m.lambda = problem.lambda;
  m.box_c = problem.global_n > 0 ? problem.box_c() : 0.0;
  return m;
}

// Builds the model from a converged dual vector: snaps coefficients, keeps
// supports, recomputes the RKHS norm from scratch.
CellModel assemble(const CellProblem& problem, std::vector<double>& alpha, bool converged,
                   int sweeps) {
  const double c = problem.box_c();
  CellModel m = zero_model(problem);
  m.converged = converged;
  m.sweeps = sweeps;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (std::fabs(alpha[i]) <= kSnapTol) alpha[i] = 0.0;
    if (std::fabs(alpha[i] - c) <= kSnapTol) alpha[i] = c;
    if (alpha[i] > 0.0) {
      auto x = problem.point(i);
      m.sv_x.insert(m.sv_x.end(), x.begin(), x.end());
      m.sv_y.push_back(problem.ys[i]);
      m.alpha.push_back(alpha[i]);
    }
  }
  double norm_sq = 0.0;
  for (std::size_t i = 0; i < m.n_sv(); ++i)
    for (std::size_t k = 0; k < m.n_sv(); ++k)
      norm_sq += m.alpha[i] * m.alpha[k] * m.sv_y[i] * m.sv_y[k] *
                 gaussian_eval(m.sv(i), m.sv(k), m.gamma);
  m.rkhs_norm_sq = std::max(0.0, norm_sq);
  return m;
}

}  // namespace

CellModel train_cell(const CellProblem& problem, double kkt_tol, int max_sweeps,
                     std::vector<double>* dual_trace) {
  validate(problem);
  if (!(kkt_tol > 0.0)) throw std::invalid_argument("train_cell: kkt_tol must be > 0");
  if (max_sweeps < 1) throw std::invalid_argument("train_cell: max_sweeps must be >= 1");
  const std::size_t n = problem.size();
  if (n == 0) return zero_model(problem);

  const double c = problem.box_c();
  std::vector<double> alpha(n, 0.0);
  std::vector<double> f(n, 0.0);  // f[i] = Σ_k α_k y_k K(x_k, x_i)

  std::vector<double> cache;
  if (n <= kKernelCacheLimit) cache = kernel_matrix(problem.xs, problem.dim, problem.gamma);
  std::vector<double> row(cache.empty() ? n : 0);
  auto kernel_row = [&](std::size_t i) -> const double* {
    if (!cache.empty()) return cache.data() + i * n;
    auto xi = problem.point(i);
    for (std::size_t k = 0; k < n; ++k)
      row[k] = gaussian_eval(xi, problem.point(k), problem.gamma);
    return row.data();
  };

  bool converged = false;
  int sweep = 0;
  while (sweep < max_sweeps) {
    ++sweep;
    for (std::size_t i = 0; i < n; ++i) {
      double grad = 1.0 - problem.ys[i] * f[i];
      double next = std::clamp(alpha[i] + grad, 0.0, c);  // K_ii = 1
      double delta = next - alpha[i];
      if (delta == 0.0) continue;
      alpha[i] = next;
      const double* k_row = kernel_row(i);
      const double step = delta * problem.ys[i];
      for (std::size_t k = 0; k < n; ++k) f[k] += step * k_row[k];
    }

    if (dual_trace) {
      double w = 0.0;
      for (std::size_t i = 0; i < n; ++i) w += alpha[i] * (1.0 - 0.5 * problem.ys[i] * f[i]);
      dual_trace->push_back(w);
    }

    double violation = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double margin = problem.ys[i] * f[i];
      double v;
      if (alpha[i] <= kSnapTol)
        v = std::max(0.0, 1.0 - margin);
      else if (alpha[i] >= c - kSnapTol)
        v = std::max(0.0, margin - 1.0);
      else
        v = std::fabs(margin - 1.0);
      violation = std::max(violation, v);
    }
    if (violation <= kkt_tol) {
      converged = true;
      break;
    }
  }
  return assemble(problem, alpha, converged, sweep);
}

double cell_predict_raw(const CellModel& model, std::span<const double> x) {
  double acc = 0.0;
  for (std::size_t i = 0; i < model.n_sv(); ++i)
    acc += model.alpha[i] * model.sv_y[i] * gaussian_eval(model.sv(i), x, model.gamma);
  return acc;
}

double dual_objective(const CellProblem& problem, std::span<const double> alpha) {
  const std::size_t n = problem.size();
  if (alpha.size() != n) throw std::invalid_argument("dual_objective: size mismatch");
  double linear = 0.0, quad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    linear += alpha[i];
    for (std::size_t k = 0; k < n; ++k)
      quad += alpha[i] * alpha[k] * problem.ys[i] * problem.ys[k] *
              gaussian_eval(problem.point(i), problem.point(k), problem.gamma);
  }
  return linear - 0.5 * quad;
}

CellModel brute_force_dual(const CellProblem& problem, double grid_step) {
  validate(problem);
  if (!(grid_step > 0.0)) throw std::invalid_argument("brute_force_dual: grid_step must be > 0");
  const std::size_t n = problem.size();
  if (n > 5) throw std::invalid_argument("brute_force_dual: |D_j| must be <= 5");
  if (n == 0) return zero_model(problem);

  const double c = problem.box_c();
  std::vector<double> levels;
  for (double v = 0.0; v < c; v += grid_step) levels.push_back(v);
  levels.push_back(c);

  std::vector<std::size_t> pick(n, 0);
  std::vector<double> alpha(n, 0.0), best_alpha(n, 0.0);
  double best = -std::numeric_limits<double>::infinity();
  for (;;) {
    for (std::size_t i = 0; i < n; ++i) alpha[i] = levels[pick[i]];
    double w = dual_objective(problem, alpha);
    if (w > best) {
      best = w;
      best_alpha = alpha;
    }
    std::size_t k = 0;
    while (k < n && ++pick[k] == levels.size()) pick[k++] = 0;
    if (k == n) break;
  }
  return assemble(problem, best_alpha, true, 0);
}

double max_kkt_violation(const CellProblem& problem, const CellModel& model) {
  const double c = problem.box_c();
  double violation = 0.0;
  std::vector<double> full(problem.size(), 0.0);
  // Match the model supports back to problem indices by position: supports
  // preserve insertion order, so walk both lists in lockstep.
  std::size_t sv = 0;
  for (std::size_t i = 0; i < problem.size() && sv < model.n_sv(); ++i) {
    auto x = problem.point(i);
    auto s = model.sv(sv);
    if (problem.ys[i] == model.sv_y[sv] && std::equal(x.begin(), x.end(), s.begin()))
      full[i] = model.alpha[sv++];
  }
  for (std::size_t i = 0; i < problem.size(); ++i) {
    double margin = problem.ys[i] * cell_predict_raw(model, problem.point(i));
    double v;
    if (full[i] <= kSnapTol)
      v = std::max(0.0, 1.0 - margin);
    else if (full[i] >= c - kSnapTol)
      v = std::max(0.0, margin - 1.0);
    else
      v = std::fabs(margin - 1.0);
    violation = std::max(violation, v);
  }
  return violation;
}

}  // namespace locsvm
