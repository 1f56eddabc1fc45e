#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "locsvm/distributions.hpp"
#include "locsvm/model.hpp"
#include "locsvm/stats.hpp"

namespace locsvm {

// Any real-valued decision function on the unit ball; the sign classifies,
// the clipped value feeds the hinge risk.
using RawPredictor = std::function<double(std::span<const double>)>;

RawPredictor as_predictor(const LocalizedModel& m);
RawPredictor bayes_predictor(const MarginDistribution& dist);

struct RiskEstimate {
  double class_risk = 0.0;
  double hinge_risk = 0.0;
  double excess_class = 0.0;
  double excess_hinge = 0.0;
  double std_error = 0.0;  // Monte-Carlo SE of the classification risk
  std::size_t n_test = 0;
};

// Monte-Carlo risks over fresh samples; n_test >= 1e3.
RiskEstimate estimate_risk(const RawPredictor& f, const MarginDistribution& dist,
                           std::size_t n_test, std::uint64_t seed);
RiskEstimate estimate_risk(const LocalizedModel& m, const MarginDistribution& dist,
                           std::size_t n_test, std::uint64_t seed);

struct ZhangCheck {
  double excess_class = 0.0;
  double excess_hinge = 0.0;
  double diff_se = 0.0;  // SE of the class-minus-hinge risk difference
  bool ok = false;       // excess_class <= excess_hinge + 3·diff_se
};
ZhangCheck zhang_check(const RawPredictor& f, const MarginDistribution& dist,
                       std::size_t n_test, std::uint64_t seed);

struct VarianceBoundCheck {
  bool ok = false;
  int failures = 0;
  std::vector<double> lhs, rhs;  // per trial: second moment vs bound
};
// Variance bound on the far region {Δ_η >= s}: for `trials`
// random clipped localized predictors f,
//   E (L_F∘f - L_F∘f*)² <= (2·c_lc / s^ζ)·E (L_F∘f - L_F∘f*) + 4·SE.
VarianceBoundCheck variance_bound_check(const MarginDistribution& dist, double s,
                                        double zeta, double c_lc, std::size_t n_mc,
                                        int trials, std::uint64_t seed);

// All rate exponents of the theory at (β, q, d, ζ).
struct TheoryExponents {
  double kappa = 0.0;         // (q+1) / (β(q+2) + d(q+1))
  bool regime_first = false;  // β >= (q+1)(1 + max{d,ζ} - d)
  double nu = 0.0;            // the largest admissible cell-shrink exponent
  double localized = 0.0;     // βκ(ν+1) via the direct route
  double localized_closed = 0.0;  // the regime's closed form; equals `localized`
  double global_svm = 0.0;        // βκ
  std::optional<double> plugin_opt;      // ρ(q+1)/(ρ(q+2)+d), ρ = β/(q+1) when <= 1
  std::optional<double> kohler_krzyzak;  // ρ(q+1)/(ρ(q+3)+d)
  double histogram = 0.0;  // β(q+1)/(β(q+1)+d(q+1)+βζ/(1+ζ))
  bool histogram_valid = false;  // β <= (1+ζ)(q+1)
};
TheoryExponents theory_exponents(double beta, double q, int d, double zeta);

struct RateConfig {
  std::vector<std::size_t> n_ladder;  // strictly increasing, length >= 4
  int reps = 3;                       // >= 3
  double nu = 0.25;
  double sigma = 0.0;     // 0 → max(1, κ(β+d)(ν+1) - ν)
  double r_scale = 1.0;
  double gamma_scale = 1.0;
  double lambda_scale = 1.0;
  std::size_t n_test = 100000;
  int probe_budget = 64;
  std::uint64_t seed = 0;
  int threads = 0;
  bool global_single_cell = false;  // m = 1 comparison variant, γ = n^{-κ}
  bool drop_smallest_in_fit = false;
  double kkt_tol = 1e-3;  // experiment-scale solver settings
  int max_sweeps = 2000;
};

struct RateRow {
  std::size_t n = 0;
  int rep = 0;
  double excess_class = 0.0;
  double excess_hinge = 0.0;
  double std_error = 0.0;
};

struct RateReport {
  std::vector<RateRow> rows;
  std::vector<std::size_t> ns;
  std::vector<double> mean_excess;  // per ladder point, over reps
  std::vector<double> mean_se;
  SlopeFit slope;          // OLS on (log n, log mean excess)
  TheoryExponents theory;
  double nu = 0.0, sigma = 0.0;
  bool global_variant = false;
  bool floored = false;    // some mean was clamped to 1e-6 before the log
};

// Builds the partition at r_n = r_scale·n^{-ν}, classifies cells at s = r_n,
// applies the per-regime kernel widths (γ = r_n^κ n^{-κ} on straddling near
// cells, γ = r_n elsewhere) and λ = λ_scale·n^{-σ}, trains, and measures
// excess risks on fresh test points, for every ladder point and repetition.
RateReport rate_experiment(const MarginDistribution& dist, const RateConfig& config);

void save_rate_rows_csv(const RateReport& report, const std::string& path);
void save_rate_summary_csv(const RateReport& report, const std::string& path);
void save_rate_plot_data(const RateReport& report, const std::string& path);

}  // namespace locsvm
