#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace locsvm {

// Gaussian kernel k_γ(x,x') = exp(-||x-x'||² / γ²).
double gaussian_eval(std::span<const double> x, std::span<const double> xp, double gamma);

// Dense symmetric kernel matrix, row-major n×n, unit diagonal.
std::vector<double> kernel_matrix(std::span<const double> pts, int dim, double gamma);

struct ConvolveEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

// Monte-Carlo estimate of the smoothing convolution (K_γ * f)(x) with
// K_γ(x) = (2/(π^{1/2}γ))^{d/2} e^{-2γ^{-2}||x-·||²}.  Samples are drawn from
// the kernel's own Gaussian profile N(x, γ²/4·I), which gives
//   (K_γ * f)(x) = (π^{1/2}γ)^{d/2} · E f(Y),
// so both the value and an honest standard error come out of one pass.
// Requires quad_budget >= 100.
ConvolveEstimate smooth_convolve(const std::function<double(std::span<const double>)>& f,
                                 std::span<const double> x, double gamma,
                                 std::size_t quad_budget, std::uint64_t seed);

// Normalized Gaussian mass of the radius-ρ ball around the kernel center:
// (2/(πγ²))^{d/2} ∫_{B_ρ(x)} e^{-2γ^{-2}||x-y||²} dy = P(d/2, 2ρ²/γ²).
double gauss_ball_mass(int d, double rho, double gamma);

}  // namespace locsvm
