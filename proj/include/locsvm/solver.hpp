#pragma once

#include <span>
#include <vector>

#include "locsvm/dataset.hpp"

namespace locsvm {

// One cell's regularized hinge-loss problem
//   min_f  λ·||f||²_H + (1/n)·Σ_{(x_i,y_i) ∈ D_j} max(0, 1 - y_i f(x_i)),
// where n is the GLOBAL sample size, not |D_j|. Dividing by 2λ turns this
// into the standard form ½||f||² + C·Σ hinge with box constant
// C = 1/(2·λ·n); there is no offset term, so the dual
//   max_{α ∈ [0,C]^m}  Σα_i - ½ Σ_{i,k} α_i α_k y_i y_k k_γ(x_i,x_k)
// has no equality constraint and exact coordinate ascent applies.
struct CellProblem {
  int dim = 0;
  std::vector<double> xs;  // local points, row-major
  std::vector<int> ys;     // ±1
  double lambda = 0.0;
  double gamma = 0.0;
  std::size_t global_n = 0;

  std::size_t size() const { return ys.size(); }
  std::span<const double> point(std::size_t i) const {
    return {xs.data() + i * std::size_t(dim), std::size_t(dim)};
  }
  double box_c() const { return 1.0 / (2.0 * lambda * double(global_n)); }
};

// Trained cell: support points with dual coefficients in (0, C].
struct CellModel {
  int dim = 0;
  double gamma = 0.0;
  double lambda = 0.0;
  double box_c = 0.0;
  std::vector<double> sv_x;  // n_sv × dim
  std::vector<int> sv_y;
  std::vector<double> alpha;
  double rkhs_norm_sq = 0.0;
  bool converged = true;
  int sweeps = 0;

  std::size_t n_sv() const { return alpha.size(); }
  std::span<const double> sv(std::size_t i) const {
    return {sv_x.data() + i * std::size_t(dim), std::size_t(dim)};
  }
};

inline double clip(double t) { return t > 1.0 ? 1.0 : (t < -1.0 ? -1.0 : t); }

inline double hinge(int y, double t) {
  double v = 1.0 - double(y) * t;
  return v > 0.0 ? v : 0.0;
}

// Cyclic dual coordinate ascent with the exact per-coordinate update
// α_i ← clamp(α_i + (1 - y_i f(x_i))/K_ii, 0, C); K_ii = 1 for the Gaussian
// kernel. Stops when the KKT violation drops below kkt_tol or after
// max_sweeps (reported via CellModel::converged). Deterministic. When
// dual_trace is given, the dual objective after each sweep is appended.
CellModel train_cell(const CellProblem& problem, double kkt_tol = 1e-6,
                     int max_sweeps = 10000, std::vector<double>* dual_trace = nullptr);

// Σ_i α_i y_i k_γ(x_i, x).
double cell_predict_raw(const CellModel& model, std::span<const double> x);

// Dual objective W(α) for a full coefficient vector over the problem points.
double dual_objective(const CellProblem& problem, std::span<const double> alpha);

// Exhaustive grid search over [0,C]^{|D_j|} at resolution grid_step.
// Test oracle; |D_j| <= 5 only.
CellModel brute_force_dual(const CellProblem& problem, double grid_step);

// Largest KKT violation of the model's dual vector on its training problem.
double max_kkt_violation(const CellProblem& problem, const CellModel& model);

}  // namespace locsvm
