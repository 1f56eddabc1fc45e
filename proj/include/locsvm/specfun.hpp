#pragma once

namespace locsvm {

// Regularized lower incomplete gamma P(a,x) = (1/Γ(a)) ∫_0^x e^{-t} t^{a-1} dt.
// Series expansion for x < a+1, Lentz continued fraction for x >= a+1,
// absolute tolerance 1e-12. Requires a > 0, x >= 0.
double gamma_p(double a, double x);

// Regularized upper incomplete gamma Q(a,x) = 1 - P(a,x).
double gamma_q(double a, double x);

// Unnormalized upper incomplete gamma Γ(a,x) = Q(a,x)·Γ(a).
double upper_gamma(double a, double x);

}  // namespace locsvm
