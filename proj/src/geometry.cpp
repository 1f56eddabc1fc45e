#include "locsvm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "locsvm/dataset.hpp"
#include "locsvm/distributions.hpp"
#include "locsvm/quasirandom.hpp"

namespace locsvm {

namespace {

constexpr double kNormSlack = 1e-9;

void require_in_ball(std::span<const double> x, int dim, const char* who) {
  if (int(x.size()) != dim) throw std::invalid_argument(std::string(who) + ": dimension mismatch");
  double s = 0.0;
  for (double v : x) s += v * v;
  if (s > 1.0 + kNormSlack)
    throw std::invalid_argument(std::string(who) + ": point outside the closed unit ball");
}

}  // namespace

Partition build_rnet(int dim, double r, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("build_rnet: dim must be >= 1");
  if (!(r > 0.0) || r > 2.0) throw std::invalid_argument("build_rnet: net degenerate, need 0 < r <= 2");

  // Candidate pool: cubic lattice with spacing h = r/(2*sqrt(d)), jittered by
  // a seed-dependent offset, restricted to the ball; sites just outside are
  // projected onto the sphere. Pool dispersion over the ball is <= h*sqrt(d)/2
  // = r/4, so covering the pool at 3r/4 covers the ball at r.
  const double h = r / (2.0 * std::sqrt(double(dim)));
  const double margin = 0.5 * h * std::sqrt(double(dim));
  {
    double per_axis = std::floor(2.0 * (1.0 + margin) / h) + 2.0;
    if (std::pow(per_axis, dim) > 5e7)
      throw std::invalid_argument("build_rnet: r too small for this dimension");
  }

  std::vector<double> offset(dim);
  for (int k = 0; k < dim; ++k)
    offset[k] = h * (double(mix64(seed + 11 * std::uint64_t(k) + 1) >> 11) *
                     (1.0 / 9007199254740992.0));

  std::vector<double> pool;
  std::vector<long> lo(dim), hi(dim), idx(dim);
  for (int k = 0; k < dim; ++k) {
    lo[k] = long(std::ceil((-1.0 - margin - offset[k]) / h));
    hi[k] = long(std::floor((1.0 + margin - offset[k]) / h));
    idx[k] = lo[k];
  }
  std::vector<double> q(dim);
  const double limit = 1.0 + margin;
  for (;;) {
    double norm_sq = 0.0;
    for (int k = 0; k < dim; ++k) {
      q[k] = offset[k] + h * double(idx[k]);
      norm_sq += q[k] * q[k];
    }
    if (norm_sq <= limit * limit) {
      if (norm_sq <= 1.0) {
        pool.insert(pool.end(), q.begin(), q.end());
      } else {
        double scale = 1.0 / std::sqrt(norm_sq);
        for (int k = 0; k < dim; ++k) pool.push_back(q[k] * scale);
      }
    }
    int k = 0;
    while (k < dim && ++idx[k] > hi[k]) {
      idx[k] = lo[k];
      ++k;
    }
    if (k == dim) break;
  }

  const std::size_t pool_n = pool.size() / std::size_t(dim);
  Partition p;
  p.dim = dim;
  p.radius = r;
  p.centers.assign(std::size_t(dim), 0.0);  // greedy insertion seeded at the origin

  std::vector<double> dist(pool_n);
  for (std::size_t i = 0; i < pool_n; ++i) {
    double s = 0.0;
    for (int k = 0; k < dim; ++k) s += pool[i * dim + k] * pool[i * dim + k];
    dist[i] = std::sqrt(s);
  }

  const double threshold = 0.75 * r;
  for (;;) {
    std::size_t far = 0;
    double far_dist = -1.0;
    for (std::size_t i = 0; i < pool_n; ++i)
      if (dist[i] > far_dist) {
        far_dist = dist[i];
        far = i;
      }
    if (far_dist <= threshold) break;
    std::span<const double> z{pool.data() + far * dim, std::size_t(dim)};
    p.centers.insert(p.centers.end(), z.begin(), z.end());
    for (std::size_t i = 0; i < pool_n; ++i) {
      double s = 0.0;
      for (int k = 0; k < dim; ++k) {
        double d = pool[i * dim + k] - z[k];
        s += d * d;
      }
      dist[i] = std::min(dist[i], std::sqrt(s));
    }
  }
  return p;
}

Partition single_cell_partition(int dim) {
  if (dim < 1) throw std::invalid_argument("single_cell_partition: dim must be >= 1");
  Partition p;
  p.dim = dim;
  p.radius = 2.0;
  p.centers.assign(std::size_t(dim), 0.0);
  return p;
}

int assign_cell(const Partition& p, std::span<const double> x) {
  require_in_ball(x, p.dim, "assign_cell");
  const int m = p.count();
  if (m == 0) throw std::invalid_argument("assign_cell: empty partition");
  int best = 0;
  double best_dist = sq_dist(x, p.center(0));
  for (int j = 1; j < m; ++j) {
    double d = sq_dist(x, p.center(j));
    if (d < best_dist) {
      best_dist = d;
      best = j;
    }
  }
  return best;
}

std::pair<double, double> cell_interval_1d(const Partition& p, int j) {
  if (p.dim != 1) throw std::invalid_argument("cell_interval_1d: d = 1 only");
  if (j < 0 || j >= p.count()) throw std::invalid_argument("cell_interval_1d: bad index");
  double zj = p.centers[std::size_t(j)];
  double lo = -1.0, hi = 1.0;
  for (int k = 0; k < p.count(); ++k) {
    if (k == j) continue;
    double zk = p.centers[std::size_t(k)];
    double mid = 0.5 * (zj + zk);
    if (zk < zj) lo = std::max(lo, mid);
    if (zk > zj) hi = std::min(hi, mid);
  }
  return {lo, hi};
}

PartitionCheck verify_partition(const Partition& p, std::size_t probes, std::uint64_t seed) {
  PartitionCheck check;
  const int m = p.count();
  check.min_separation = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      check.min_separation =
          std::min(check.min_separation, std::sqrt(sq_dist(p.center(i), p.center(j))));
  check.separation_ok = m < 2 || check.min_separation >= 0.5 * p.radius - 1e-12;

  BallSequence seq(p.dim, seed);
  std::vector<double> x(p.dim);
  for (std::size_t i = 0; i < probes; ++i) {
    seq.next(x.data());
    int j = assign_cell(p, x);
    check.max_cover_dist =
        std::max(check.max_cover_dist, std::sqrt(sq_dist(std::span<const double>(x), p.center(j))));
  }
  check.covering_ok = check.max_cover_dist <= p.radius + 1e-12;
  check.size_bound_ok = p.radius <= 16.0 * std::pow(double(m), -1.0 / p.dim) + 1e-12;
  return check;
}

CellClassification classify_cells(const Partition& p, const MarginDistribution& dist,
                                  double s, int probe_budget, std::uint64_t seed) {
  if (s < p.radius)
    throw std::invalid_argument("classify_cells: separation s must be >= partition radius");
  if (probe_budget < 1) throw std::invalid_argument("classify_cells: probe_budget must be >= 1");
  if (dist.dim != p.dim) throw std::invalid_argument("classify_cells: dimension mismatch");

  CellClassification out;
  out.separation = s;
  const int m = p.count();
  std::vector<double> x(p.dim);

  for (int j = 0; j < m; ++j) {
    double sup, inf;
    bool meets_pos = false, meets_neg = false;

    if (p.dim == 1) {
      auto [lo, hi] = cell_interval_1d(p, j);
      std::tie(inf, sup) = dist.delta_range_interval(lo, hi);
      if (dist.straddles_interval(lo, hi)) {
        meets_pos = meets_neg = true;
      } else {
        double mid[1] = {0.5 * (lo + hi)};
        double e = dist.eta(std::span<const double>(mid, 1));
        (e >= 0.5 ? meets_pos : meets_neg) = true;
      }
    } else {
      std::span<const double> z = p.center(j);
      sup = 0.0;
      inf = std::numeric_limits<double>::infinity();
      auto probe = [&](std::span<const double> pt) {
        double norm_sq = 0.0;
        for (double v : pt) norm_sq += v * v;
        if (norm_sq > 1.0) return;
        if (assign_cell(p, pt) != j) return;
        double d = dist.delta(pt);
        sup = std::max(sup, d);
        inf = std::min(inf, d);
        double e = dist.eta(pt);
        if (e > 0.5) meets_pos = true;
        if (e < 0.5) meets_neg = true;
      };

      probe(z);
      // Candidates realizing the Δ extremes of the surrounding ball.
      if (dist.family == Family::kHalfspace) {
        std::vector<double> c(z.begin(), z.end());
        c[0] = 0.0;
        probe(c);
        c[0] = z[0] + p.radius;
        probe(c);
        c[0] = z[0] - p.radius;
        probe(c);
      } else {
        double norm = l2_norm(z);
        if (norm > 0.0) {
          std::vector<double> c(p.dim);
          for (double f : {dist.sphere_radius / norm, (norm + p.radius) / norm,
                           std::max(0.0, norm - p.radius) / norm}) {
            for (int k = 0; k < p.dim; ++k) c[k] = z[k] * f;
            probe(c);
          }
        }
      }

      BallSequence seq(p.dim, mix64(seed) ^ (0x9d2cULL * std::uint64_t(j + 1)));
      int kept = 0;
      long attempts = 0, max_attempts = 200L * probe_budget;
      while (kept < probe_budget && attempts < max_attempts) {
        seq.next(x.data());
        ++attempts;
        std::vector<double> pt(p.dim);
        for (int k = 0; k < p.dim; ++k) pt[k] = z[k] + p.radius * x[k];
        double norm_sq = 0.0;
        for (double v : pt) norm_sq += v * v;
        if (norm_sq > 1.0 || assign_cell(p, pt) != j) continue;
        probe(pt);
        ++kept;
      }
    }

    bool near = sup <= 3.0 * s;
    bool far = inf >= s;
    if (near) {
      out.near_indices.push_back(j);
      (meets_pos && meets_neg ? out.n1_indices : out.n2_indices).push_back(j);
    }
    if (far) out.far_indices.push_back(j);
  }
  return out;
}

std::string partition_to_text(const Partition& p) {
  std::ostringstream out;
  out << p.dim << " " << format_g17(p.radius) << " " << p.count() << "\n";
  for (int j = 0; j < p.count(); ++j) {
    auto z = p.center(j);
    for (int k = 0; k < p.dim; ++k) out << (k ? " " : "") << format_g17(z[k]);
    out << "\n";
  }
  return out.str();
}

Partition partition_from_text(const std::string& text) {
  std::istringstream in(text);
  Partition p;
  int m = 0;
  if (!(in >> p.dim >> p.radius >> m) || p.dim < 1 || m < 1)
    throw std::runtime_error("malformed partition header");
  p.centers.resize(std::size_t(m) * p.dim);
  for (double& v : p.centers)
    if (!(in >> v)) throw std::runtime_error("malformed partition centers");
  return p;
}

void save_partition(const Partition& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << partition_to_text(p);
}

Partition load_partition(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return partition_from_text(buffer.str());
}

}  // namespace locsvm
