#include "locsvm/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace locsvm {

void Dataset::append(std::span<const double> x, int y) {
  if (int(x.size()) != dim) throw std::invalid_argument("Dataset::append: dimension mismatch");
  if (y != 1 && y != -1) throw std::invalid_argument("Dataset::append: label must be -1 or +1");
  xs.insert(xs.end(), x.begin(), x.end());
  ys.push_back(y);
}

double l2_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void save_dataset_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (int k = 1; k <= data.dim; ++k) out << "x" << k << ",";
  out << "y\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    auto p = data.point(i);
    for (double v : p) out << format_g17(v) << ",";
    out << data.ys[i] << "\n";
  }
}

Dataset load_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty dataset file: " + path);
  int dim = 0;
  {
    std::stringstream header(line);
    std::string col;
    while (std::getline(header, col, ',')) {
      if (col == "y") break;
      ++dim;
    }
  }
  if (dim < 1) throw std::runtime_error("malformed dataset header: " + path);
  Dataset data;
  data.dim = dim;
  std::vector<double> x(dim);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    for (int k = 0; k < dim; ++k) {
      if (!std::getline(row, cell, ',')) throw std::runtime_error("short row in: " + path);
      x[k] = std::stod(cell);
    }
    if (!std::getline(row, cell, ',')) throw std::runtime_error("missing label in: " + path);
    data.append(x, std::stoi(cell));
  }
  return data;
}

}  // namespace locsvm
