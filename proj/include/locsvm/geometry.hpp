#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace locsvm {

struct MarginDistribution;

// Voronoi partition of the closed unit ball induced by an r-net of centers:
// pairwise separation >= r/2, every ball point within r of some center, and
// r <= 16·m^{-1/d}. Immutable after construction; queries are thread safe.
struct Partition {
  int dim = 0;
  double radius = 0.0;
  std::vector<double> centers;  // count() × dim, row-major

  int count() const { return dim > 0 ? int(centers.size() / std::size_t(dim)) : 0; }
  std::span<const double> center(int j) const {
    return {centers.data() + std::size_t(j) * dim, std::size_t(dim)};
  }
};

// Greedy farthest-point net seeded at the origin over a jittered-lattice
// candidate pool of the ball. Insertion stops once the pool is covered at
// 3r/4; the pool's dispersion is at most r/4, so the whole ball is covered
// at radius r and inserted centers are at least 3r/4 apart.
Partition build_rnet(int dim, double r, std::uint64_t seed);

// Partition with the single center 0 and radius 2 (the m = 1 degenerate net).
Partition single_cell_partition(int dim);

// Voronoi rule: index of the nearest center, ties to the lowest index.
// Rejects points outside the closed unit ball.
int assign_cell(const Partition& p, std::span<const double> x);

// d = 1 only: exact cell interval [lo, hi] of cell j within [-1, 1].
std::pair<double, double> cell_interval_1d(const Partition& p, int j);

struct PartitionCheck {
  double min_separation = 0.0;  // min over pairs of ||z_i - z_j||
  double max_cover_dist = 0.0;  // max over probes of the assigned-center distance
  bool separation_ok = false;   // min_separation >= r/2
  bool covering_ok = false;     // max_cover_dist <= r
  bool size_bound_ok = false;   // r <= 16·m^{-1/d}
  bool all_ok() const { return separation_ok && covering_ok && size_bound_ok; }
};
PartitionCheck verify_partition(const Partition& p, std::size_t probes, std::uint64_t seed);

// Near/far cell index sets for a separation parameter s >= r. Near and far
// may overlap; n1/n2 split the near set by whether a cell meets both classes.
struct CellClassification {
  std::vector<int> near_indices;
  std::vector<int> far_indices;
  std::vector<int> n1_indices;
  std::vector<int> n2_indices;
  double separation = 0.0;
};

// Classifies every cell against the distance to the decision boundary:
// near iff sup_cell Δ <= 3s, far iff inf_cell Δ >= s. In d = 1 the cell
// extrema are exact (interval cells); otherwise they are taken over
// probe_budget quasi-random in-cell probes, which is approximate for cells
// whose extremum hides in an unprobed corner.
CellClassification classify_cells(const Partition& p, const MarginDistribution& dist,
                                  double s, int probe_budget, std::uint64_t seed);

// Plain text: line 1 "d r m", then one center per line, 17 significant digits.
std::string partition_to_text(const Partition& p);
Partition partition_from_text(const std::string& text);
void save_partition(const Partition& p, const std::string& path);
Partition load_partition(const std::string& path);

}  // namespace locsvm
