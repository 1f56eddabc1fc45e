#pragma once

#include <span>
#include <string>
#include <vector>

namespace locsvm {

// Labeled points in the closed unit ball of R^d; labels are -1/+1.
struct Dataset {
  int dim = 0;
  std::vector<double> xs;  // row-major, size() * dim entries
  std::vector<int> ys;

  std::size_t size() const { return ys.size(); }
  std::span<const double> point(std::size_t i) const {
    return {xs.data() + i * std::size_t(dim), std::size_t(dim)};
  }
  void append(std::span<const double> x, int y);
};

double l2_norm(std::span<const double> x);
double sq_dist(std::span<const double> a, std::span<const double> b);

// Shortest decimal form that round-trips a double (17 significant digits).
std::string format_g17(double v);

// CSV with header "x1,...,xd,y"; y in {-1,1}.
void save_dataset_csv(const Dataset& data, const std::string& path);
Dataset load_dataset_csv(const std::string& path);

}  // namespace locsvm
