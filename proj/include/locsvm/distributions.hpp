#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "locsvm/dataset.hpp"

namespace locsvm {

enum class Family { kHalfspace, kSphere };

// Margin exponents of a synthetic family: margin-noise β, noise q, lower
// control ζ, margin α, plus the Hölder exponent of η when η is Hölder.
struct ExponentSheet {
  double beta = 0.0;
  double q = 0.0;
  double zeta = 0.0;
  double alpha = 0.0;
  std::optional<double> holder_rho;
};

// Synthetic data-generating measure on the closed unit ball with uniform
// marginal and posterior
//   η(x) = (1 + σ(x)·min(1, (Δ(x)/τ)^ζ)) / 2,
// where Δ is the distance to the decision boundary and σ = ±1 by class side.
// Boundaries: {x₁ = 0} (halfspace) or the radius-R sphere (positive class
// inside). Everything downstream needs is closed form: η, Δ, the Bayes
// labels and risks, and the margin exponents.
struct MarginDistribution {
  Family family = Family::kHalfspace;
  int dim = 1;
  double zeta = 1.0;          // noise-profile exponent, > 0
  double tau = 1.0;           // plateau width in (0,1]
  double sphere_radius = 0.0; // boundary radius, sphere family only

  static MarginDistribution halfspace(int dim, double zeta, double tau);
  static MarginDistribution sphere(int dim, double zeta, double tau, double R);

  double eta(std::span<const double> x) const;
  double delta(std::span<const double> x) const;
  // |2η(x)-1| = min(1, (Δ(x)/τ)^ζ), evaluated without the cancellation that
  // forming η first would cost near the boundary.
  double noise_margin(std::span<const double> x) const;
  int bayes_label(std::span<const double> x) const;  // sign(2η-1), sign 0 := +1

  double bayes_risk() const;        // E min(η, 1-η)
  double hinge_bayes_risk() const;  // E (1 - |2η-1|)
  ExponentSheet exponents() const;

  // x_i uniform on the ball, y_i = +1 with probability η(x_i).
  Dataset sample(std::size_t n, std::uint64_t seed) const;

  // Range of Δ_η over the ball B_r(z); a superset bound for any cell in it.
  std::pair<double, double> delta_range_ball(std::span<const double> z, double r) const;
  // d = 1 only: exact range of Δ_η over the interval [lo, hi].
  std::pair<double, double> delta_range_interval(double lo, double hi) const;
  // d = 1 only: whether (lo, hi) meets both X₁ and X₋₁ with positive length.
  bool straddles_interval(double lo, double hi) const;
};

// key=value text (family, d, zeta, tau, R, seed).
void save_distribution(const MarginDistribution& dist, const std::string& path,
                       std::uint64_t seed = 0);
MarginDistribution load_distribution(const std::string& path);

// Fitted log-log slopes of the empirical margin quantities over the dyadic
// ladder t ∈ {2^{-1},...,2^{-6}}; n_mc >= 1e4 required.
double estimate_ne(const MarginDistribution& dist, std::size_t n_mc, std::uint64_t seed);
double estimate_mne(const MarginDistribution& dist, std::size_t n_mc, std::uint64_t seed);
double estimate_me(const MarginDistribution& dist, std::size_t n_mc, std::uint64_t seed);

struct LcCheck {
  bool holds = false;
  double c_lc = 0.0;  // smallest feasible constant over the sample
};
// Verifies Δ^ζ <= c·|2η-1| at the declared ζ over n_mc samples. The flag is
// false on a hard violation (|2η-1| = 0 with Δ > 0) or when the constant
// diverges along the low-Δ tail relative to the Δ >= 0.1 bulk.
LcCheck check_lc(const MarginDistribution& dist, double zeta, std::size_t n_mc,
                 std::uint64_t seed);

struct ReverseHolderCheck {
  bool holds = false;
  double c_hat = 0.0;        // largest constant feasible over sampled pairs
  bool lc_consistent = true; // when holds: lower control verified at the same exponent
};
// |η(x)-η(x')| >= c·|x-x'|^δ at δ = ζ; halfspace, d = 1, τ = 1, ζ <= 1 only.
ReverseHolderCheck reverse_holder_check(const MarginDistribution& dist,
                                        std::size_t n_pairs, std::uint64_t seed);

}  // namespace locsvm
