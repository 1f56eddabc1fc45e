#include "locsvm/kernel.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "locsvm/dataset.hpp"
#include "locsvm/quasirandom.hpp"
#include "locsvm/specfun.hpp"

namespace locsvm {

double gaussian_eval(std::span<const double> x, std::span<const double> xp, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gaussian_eval: gamma must be > 0");
  if (x.size() != xp.size()) throw std::invalid_argument("gaussian_eval: dimension mismatch");
  return std::exp(-sq_dist(x, xp) / (gamma * gamma));
}

std::vector<double> kernel_matrix(std::span<const double> pts, int dim, double gamma) {
  if (dim < 1 || pts.size() % std::size_t(dim) != 0)
    throw std::invalid_argument("kernel_matrix: bad point block");
  std::size_t n = pts.size() / std::size_t(dim);
  if (n == 0) throw std::invalid_argument("kernel_matrix: empty point sequence");
  std::vector<double> k(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    std::span<const double> xi{pts.data() + i * dim, std::size_t(dim)};
    k[i * n + i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      std::span<const double> xj{pts.data() + j * dim, std::size_t(dim)};
      double v = gaussian_eval(xi, xj, gamma);
      k[i * n + j] = v;
      k[j * n + i] = v;
    }
  }
  return k;
}

ConvolveEstimate smooth_convolve(const std::function<double(std::span<const double>)>& f,
                                 std::span<const double> x, double gamma,
                                 std::size_t quad_budget, std::uint64_t seed) {
  if (!(gamma > 0.0)) throw std::invalid_argument("smooth_convolve: gamma must be > 0");
  if (quad_budget < 100) throw std::invalid_argument("smooth_convolve: quad_budget < 100");
  const int d = int(x.size());
  const double scale = std::pow(std::sqrt(M_PI) * gamma, 0.5 * d);
  const double sd = 0.5 * gamma;  // per-coordinate std dev of the profile

  std::mt19937_64 rng(mix64(seed));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> y(d);
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < quad_budget; ++i) {
    for (int k = 0; k < d; ++k) y[k] = x[k] + sd * normal(rng);
    double v = scale * f(y);
    sum += v;
    sum_sq += v * v;
  }
  double n = double(quad_budget);
  double mean = sum / n;
  double var = std::max(0.0, sum_sq / n - mean * mean);
  return {mean, std::sqrt(var / n), quad_budget};
}

double gauss_ball_mass(int d, double rho, double gamma) {
  if (d < 1) throw std::invalid_argument("gauss_ball_mass: d must be >= 1");
  if (!(rho > 0.0) || !(gamma > 0.0))
    throw std::invalid_argument("gauss_ball_mass: rho and gamma must be > 0");
  return gamma_p(0.5 * d, 2.0 * rho * rho / (gamma * gamma));
}

}  // namespace locsvm
