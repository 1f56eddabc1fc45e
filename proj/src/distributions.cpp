#include "locsvm/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "locsvm/quasirandom.hpp"
#include "locsvm/stats.hpp"

namespace locsvm {

namespace {

constexpr double kNormSlack = 1e-9;

void check_in_ball(std::span<const double> x, int dim) {
  if (int(x.size()) != dim) throw std::invalid_argument("point dimension mismatch");
  double s = 0.0;
  for (double v : x) s += v * v;
  if (s > 1.0 + kNormSlack) throw std::invalid_argument("point outside the closed unit ball");
}

// Adaptive Simpson on [a,b] to absolute tolerance.
double simpson(double a, double fa, double fm, double b, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt_step(const std::function<double(double)>& f, double a, double fa, double b,
                  double fb, double m, double fm, double whole, double tol, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = simpson(a, fa, flm, m, fm);
  double right = simpson(m, fm, frm, b, fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adapt_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adapt_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (b <= a) return 0.0;
  double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
  return adapt_step(f, a, fa, b, fb, m, fm, simpson(a, fa, fm, b, fb), tol, 48);
}

// Integral split at the integrand's kinks.
double integrate_split(const std::function<double(double)>& f, double a, double b,
                       std::vector<double> knots, double tol) {
  knots.push_back(a);
  knots.push_back(b);
  std::sort(knots.begin(), knots.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    double lo = std::clamp(knots[i], a, b);
    double hi = std::clamp(knots[i + 1], a, b);
    if (hi > lo) total += integrate(f, lo, hi, tol / double(knots.size()));
  }
  return total;
}

// Density of u = |x₁| on [0,1] for x uniform on the d-ball.
double abs_coord_density(int d, double u) {
  double log_c = std::lgamma(0.5 * d + 1.0) - 0.5 * std::log(M_PI) -
                 std::lgamma(0.5 * (d + 1.0));
  double base = std::max(0.0, 1.0 - u * u);
  return 2.0 * std::exp(log_c) * std::pow(base, 0.5 * (d - 1.0));
}

}  // namespace

MarginDistribution MarginDistribution::halfspace(int dim, double zeta, double tau) {
  if (dim < 1) throw std::invalid_argument("halfspace: dim must be >= 1");
  if (!(zeta > 0.0)) throw std::invalid_argument("halfspace: zeta must be > 0");
  if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("halfspace: tau must be in (0,1]");
  MarginDistribution d;
  d.family = Family::kHalfspace;
  d.dim = dim;
  d.zeta = zeta;
  d.tau = tau;
  return d;
}

MarginDistribution MarginDistribution::sphere(int dim, double zeta, double tau, double R) {
  if (dim < 1) throw std::invalid_argument("sphere: dim must be >= 1");
  if (!(zeta > 0.0)) throw std::invalid_argument("sphere: zeta must be > 0");
  if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("sphere: tau must be in (0,1]");
  if (!(R > 0.0 && R < 1.0)) throw std::invalid_argument("sphere: R must be in (0,1)");
  MarginDistribution d;
  d.family = Family::kSphere;
  d.dim = dim;
  d.zeta = zeta;
  d.tau = tau;
  d.sphere_radius = R;
  return d;
}

double MarginDistribution::delta(std::span<const double> x) const {
  check_in_ball(x, dim);
  if (family == Family::kHalfspace) return std::fabs(x[0]);
  return std::fabs(l2_norm(x) - sphere_radius);
}

double MarginDistribution::eta(std::span<const double> x) const {
  check_in_ball(x, dim);
  double sigma;
  double dist;
  if (family == Family::kHalfspace) {
    sigma = x[0] > 0.0 ? 1.0 : (x[0] < 0.0 ? -1.0 : 0.0);
    dist = std::fabs(x[0]);
  } else {
    double norm = l2_norm(x);
    sigma = norm < sphere_radius ? 1.0 : (norm > sphere_radius ? -1.0 : 0.0);
    dist = std::fabs(norm - sphere_radius);
  }
  return 0.5 * (1.0 + sigma * std::min(1.0, std::pow(dist / tau, zeta)));
}

double MarginDistribution::noise_margin(std::span<const double> x) const {
  return std::min(1.0, std::pow(delta(x) / tau, zeta));
}

int MarginDistribution::bayes_label(std::span<const double> x) const {
  return eta(x) >= 0.5 ? 1 : -1;
}

namespace {

// E min(1, (Δ/τ)^ζ) reduced to one dimension by the marginal of the
// boundary coordinate.
double noise_mean(const MarginDistribution& d) {
  double tol = 1e-9;
  if (d.family == Family::kHalfspace) {
    auto f = [&](double u) {
      return std::min(1.0, std::pow(u / d.tau, d.zeta)) * abs_coord_density(d.dim, u);
    };
    return integrate_split(f, 0.0, 1.0, {d.tau}, tol);
  }
  double R = d.sphere_radius;
  auto f = [&](double rho) {
    double dist = std::fabs(rho - R);
    return std::min(1.0, std::pow(dist / d.tau, d.zeta)) * d.dim *
           std::pow(rho, d.dim - 1.0);
  };
  return integrate_split(f, 0.0, 1.0, {R, R - d.tau, R + d.tau}, tol);
}

}  // namespace

double MarginDistribution::bayes_risk() const { return 0.5 * (1.0 - noise_mean(*this)); }

double MarginDistribution::hinge_bayes_risk() const { return 1.0 - noise_mean(*this); }

ExponentSheet MarginDistribution::exponents() const {
  ExponentSheet sheet;
  sheet.zeta = zeta;
  sheet.alpha = 1.0;  // uniform marginal and a (d-1)-dimensional boundary
  sheet.beta = zeta + sheet.alpha;
  sheet.q = sheet.alpha / zeta;
  if (zeta <= 1.0) {
    sheet.holder_rho = zeta;
    if (*sheet.holder_rho * sheet.q > 1.0 + 1e-12)
      throw std::logic_error("exponents: holder_rho * q exceeds 1");
  }
  return sheet;
}

Dataset MarginDistribution::sample(std::size_t n, std::uint64_t seed) const {
  std::mt19937_64 rng(mix64(seed ^ 0xd1575ULL));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Dataset data;
  data.dim = dim;
  data.xs.reserve(n * std::size_t(dim));
  data.ys.reserve(n);
  std::vector<double> x(dim);
  for (std::size_t i = 0; i < n; ++i) {
    double norm_sq = 0.0;
    do {
      norm_sq = 0.0;
      for (int k = 0; k < dim; ++k) {
        x[k] = normal(rng);
        norm_sq += x[k] * x[k];
      }
    } while (norm_sq == 0.0);
    double radius = std::pow(unif(rng), 1.0 / dim);
    double scale = radius / std::sqrt(norm_sq);
    for (int k = 0; k < dim; ++k) x[k] *= scale;
    int y = unif(rng) < eta(x) ? 1 : -1;
    data.append(x, y);
  }
  return data;
}

std::pair<double, double> MarginDistribution::delta_range_ball(std::span<const double> z,
                                                               double r) const {
  if (int(z.size()) != dim) throw std::invalid_argument("delta_range_ball: dimension mismatch");
  if (family == Family::kHalfspace) {
    double c = std::fabs(z[0]);
    return {std::max(0.0, c - r), c + r};
  }
  double norm = l2_norm(z);
  double lo_norm = std::max(0.0, norm - r);
  double hi_norm = norm + r;
  double R = sphere_radius;
  double hi = std::max(std::fabs(lo_norm - R), std::fabs(hi_norm - R));
  double lo = (lo_norm <= R && R <= hi_norm) ? 0.0
                                             : std::min(std::fabs(lo_norm - R),
                                                        std::fabs(hi_norm - R));
  return {lo, hi};
}

std::pair<double, double> MarginDistribution::delta_range_interval(double lo, double hi) const {
  if (dim != 1) throw std::invalid_argument("delta_range_interval: d = 1 only");
  if (hi < lo) std::swap(lo, hi);
  auto value = [&](double u) {
    double v[1] = {u};
    return delta(std::span<const double>(v, 1));
  };
  // Δ is piecewise linear in x with critical points at the boundary and 0.
  std::vector<double> candidates = {lo, hi};
  std::vector<double> crit;
  if (family == Family::kHalfspace) {
    crit = {0.0};
  } else {
    crit = {-sphere_radius, 0.0, sphere_radius};
  }
  for (double c : crit)
    if (c > lo && c < hi) candidates.push_back(c);
  double mn = std::numeric_limits<double>::infinity(), mx = 0.0;
  for (double c : candidates) {
    double v = value(c);
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  return {mn, mx};
}

bool MarginDistribution::straddles_interval(double lo, double hi) const {
  if (dim != 1) throw std::invalid_argument("straddles_interval: d = 1 only");
  if (hi < lo) std::swap(lo, hi);
  if (family == Family::kHalfspace) return lo < 0.0 && hi > 0.0;
  double R = sphere_radius;
  return (lo < R && hi > R) || (lo < -R && hi > -R);
}

void save_distribution(const MarginDistribution& dist, const std::string& path,
                       std::uint64_t seed) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "family=" << (dist.family == Family::kHalfspace ? "halfspace" : "sphere") << "\n";
  out << "d=" << dist.dim << "\n";
  out << "zeta=" << format_g17(dist.zeta) << "\n";
  out << "tau=" << format_g17(dist.tau) << "\n";
  if (dist.family == Family::kSphere) out << "R=" << format_g17(dist.sphere_radius) << "\n";
  out << "seed=" << seed << "\n";
}

MarginDistribution load_distribution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error("malformed distribution line: " + line);
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  auto need = [&](const std::string& k) {
    auto it = kv.find(k);
    if (it == kv.end()) throw std::runtime_error("distribution spec missing key: " + k);
    return it->second;
  };
  std::string family = need("family");
  int d = std::stoi(need("d"));
  double zeta = std::stod(need("zeta"));
  double tau = std::stod(need("tau"));
  if (family == "halfspace") return MarginDistribution::halfspace(d, zeta, tau);
  if (family == "sphere") return MarginDistribution::sphere(d, zeta, tau, std::stod(need("R")));
  throw std::runtime_error("unknown family: " + family);
}

namespace {

struct MarginSample {
  std::vector<double> dist_to_boundary;
  std::vector<double> noise;  // |2η - 1|
};

MarginSample margin_sample(const MarginDistribution& dist, std::size_t n_mc,
                           std::uint64_t seed) {
  if (n_mc < 10000) throw std::invalid_argument("margin estimators require n_mc >= 1e4");
  std::mt19937_64 rng(mix64(seed ^ 0x3a97fULL));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  MarginSample ms;
  ms.dist_to_boundary.resize(n_mc);
  ms.noise.resize(n_mc);
  std::vector<double> x(dist.dim);
  for (std::size_t i = 0; i < n_mc; ++i) {
    double norm_sq = 0.0;
    do {
      norm_sq = 0.0;
      for (int k = 0; k < dist.dim; ++k) {
        x[k] = normal(rng);
        norm_sq += x[k] * x[k];
      }
    } while (norm_sq == 0.0);
    double radius = std::pow(unif(rng), 1.0 / dist.dim);
    double scale = radius / std::sqrt(norm_sq);
    for (int k = 0; k < dist.dim; ++k) x[k] *= scale;
    ms.dist_to_boundary[i] = dist.delta(x);
    ms.noise[i] = dist.noise_margin(x);
  }
  return ms;
}

// Log-log slope of `statistic(t)` over the dyadic ladder t = 2^{-1..-6};
// ladder points with an empty event are dropped.
double ladder_slope(const std::function<double(double)>& statistic) {
  std::vector<double> lx, ly;
  for (int k = 1; k <= 6; ++k) {
    double t = std::ldexp(1.0, -k);
    double v = statistic(t);
    if (v > 0.0) {
      lx.push_back(std::log(t));
      ly.push_back(std::log(v));
    }
  }
  if (lx.size() < 3) throw std::runtime_error("margin estimator: too few nonzero ladder points");
  return ols_fit(lx, ly).slope;
}

}  // namespace

double estimate_ne(const MarginDistribution& dist, std::size_t n_mc, std::uint64_t seed) {
  MarginSample ms = margin_sample(dist, n_mc, seed);
  return ladder_slope([&](double eps) {
    std::size_t hits = 0;
    for (double g : ms.noise) hits += g < eps;
    return double(hits) / double(n_mc);
  });
}

double estimate_mne(const MarginDistribution& dist, std::size_t n_mc, std::uint64_t seed) {
  MarginSample ms = margin_sample(dist, n_mc, seed);
  return ladder_slope([&](double t) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n_mc; ++i)
      if (ms.dist_to_boundary[i] < t) acc += ms.noise[i];
    return acc / double(n_mc);
  });
}

double estimate_me(const MarginDistribution& dist, std::size_t n_mc, std::uint64_t seed) {
  MarginSample ms = margin_sample(dist, n_mc, seed);
  return ladder_slope([&](double t) {
    std::size_t hits = 0;
    for (double d : ms.dist_to_boundary) hits += d < t;
    return double(hits) / double(n_mc);
  });
}

LcCheck check_lc(const MarginDistribution& dist, double zeta, std::size_t n_mc,
                 std::uint64_t seed) {
  if (!(zeta >= 0.0)) throw std::invalid_argument("check_lc: zeta must be >= 0");
  MarginSample ms = margin_sample(dist, n_mc, seed);
  double c_all = 0.0, c_bulk = 0.0;
  bool hard_violation = false;
  for (std::size_t i = 0; i < n_mc; ++i) {
    double d = ms.dist_to_boundary[i];
    double g = ms.noise[i];
    if (d == 0.0) continue;  // ratio 0/g or 0/0; no constraint
    if (g == 0.0) {
      hard_violation = true;
      break;
    }
    double ratio = std::pow(d, zeta) / g;
    c_all = std::max(c_all, ratio);
    if (d >= 0.1) c_bulk = std::max(c_bulk, ratio);
  }
  if (hard_violation)
    return {false, std::numeric_limits<double>::infinity()};
  bool holds = c_bulk > 0.0 ? (c_all <= 2.0 * c_bulk) : true;
  return {holds, c_all};
}

ReverseHolderCheck reverse_holder_check(const MarginDistribution& dist,
                                        std::size_t n_pairs, std::uint64_t seed) {
  if (dist.family != Family::kHalfspace || dist.dim != 1 || dist.tau != 1.0 ||
      dist.zeta > 1.0)
    throw std::invalid_argument(
        "reverse_holder_check: supported only for the d=1 halfspace family with "
        "tau=1 and zeta <= 1");
  std::mt19937_64 rng(mix64(seed ^ 0x5e1fULL));
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  double c_all = std::numeric_limits<double>::infinity();
  double c_bulk = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n_pairs; ++i) {
    double a = unif(rng), b = unif(rng);
    double gap = std::fabs(a - b);
    if (gap < 1e-12) continue;
    double pa[1] = {a}, pb[1] = {b};
    double diff = std::fabs(dist.eta(std::span<const double>(pa, 1)) -
                            dist.eta(std::span<const double>(pb, 1)));
    double ratio = diff / std::pow(gap, dist.zeta);
    c_all = std::min(c_all, ratio);
    if (gap >= 0.1) c_bulk = std::min(c_bulk, ratio);
  }
  ReverseHolderCheck out;
  out.c_hat = c_all;
  out.holds = std::isfinite(c_all) && std::isfinite(c_bulk) && c_all >= 0.5 * c_bulk &&
              c_all > 0.0;
  if (out.holds) {
    out.lc_consistent =
        check_lc(dist, dist.zeta, std::max<std::size_t>(n_pairs, 10000), seed ^ 0x77ULL).holds;
  }
  return out;
}

}  // namespace locsvm
