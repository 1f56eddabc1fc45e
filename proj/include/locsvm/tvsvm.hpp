#pragma once

#include <string>
#include <utility>
#include <vector>

#include "locsvm/model.hpp"

namespace locsvm {

enum class NetMode { kExact, kGeometric };

// Candidate hyperparameter grids. Exact mode builds the arithmetic ε-nets
// Λ_n ⊂ (0, n⁻¹] with spacing n⁻² and Γ_n ⊂ (0, r_n] with spacing r_n/n, so
// |Λ_n| = |Γ_n| = n. Geometric mode is the practical default: log-spaced
// grids of size_cap points over [n⁻³, n⁻¹] and [r_n/n, r_n].
struct ParameterNets {
  std::vector<double> lambdas;  // decreasing
  std::vector<double> gammas;   // decreasing
  double rho_n = 0.0;           // λ net spacing (exact mode)
  double delta_n = 0.0;         // γ net spacing as a fraction of r_n (exact mode)
  NetMode mode = NetMode::kGeometric;
};

// D₁ = first ⌊n/2⌋+1 samples, D₂ = the rest, in the given order. n >= 4.
std::pair<Dataset, Dataset> split_tv(const Dataset& data);

ParameterNets build_nets(std::size_t n, double r_n, NetMode mode, std::size_t size_cap);

struct TvCandidate {
  int cell = 0;
  double lambda = 0.0;
  double gamma = 0.0;
  double val_risk = 0.0;  // NaN when the cell has no validation points
  bool chosen = false;
};

struct TvReport {
  std::vector<TvCandidate> rows;                // cell-major, λ-major, γ-minor
  std::vector<std::pair<double, double>> chosen_pairs;  // per cell (λ, γ)
  std::size_t l = 0;      // |D₁|
  std::size_t n_val = 0;  // |D₂|
  NetMode mode = NetMode::kGeometric;
};

// Training-validation SVM: per cell, trains every (λ,γ) candidate on the
// cell's D₁ points (objective normalized by l = |D₁|), scores the clipped
// hinge risk on the cell's D₂ points, and keeps the minimizer. Ties go to
// the smallest λ, then the largest γ; cells without validation points fall
// back to (min Λ, max Γ).
std::pair<LocalizedModel, TvReport> train_tv(const Dataset& data, const Partition& p,
                                             const ParameterNets& nets, int threads = 1,
                                             double kkt_tol = 1e-6, int max_sweeps = 10000);

// CSV: cell,lambda,gamma,val_risk,chosen(0/1).
void save_tv_report_csv(const TvReport& report, const std::string& path);

}  // namespace locsvm
