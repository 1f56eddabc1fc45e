#include "locsvm/quasirandom.hpp"

#include <cmath>
#include <stdexcept>

namespace locsvm {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double radical_inverse(std::uint64_t index, unsigned base) {
  double inv_base = 1.0 / base;
  double scale = inv_base;
  double value = 0.0;
  while (index > 0) {
    value += double(index % base) * scale;
    index /= base;
    scale *= inv_base;
  }
  return value;
}

namespace {
constexpr unsigned kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19,
                                23, 29, 31, 37, 41, 43, 47, 53};
}

BallSequence::BallSequence(int dim, std::uint64_t seed) : dim_(dim) {
  if (dim < 1 || dim > 16) throw std::invalid_argument("BallSequence: dim must be in [1,16]");
  // Skip a seed-dependent prefix; keep the offset moderate so the Halton
  // stream stays well distributed.
  index_ = 1 + (mix64(seed) & 0xfffffULL);
}

void BallSequence::next(double* out) {
  for (;;) {
    double norm_sq = 0.0;
    for (int k = 0; k < dim_; ++k) {
      out[k] = 2.0 * radical_inverse(index_, kPrimes[k]) - 1.0;
      norm_sq += out[k] * out[k];
    }
    ++index_;
    if (norm_sq <= 1.0) return;
  }
}

std::vector<double> BallSequence::take(std::size_t count) {
  std::vector<double> pts(count * std::size_t(dim_));
  for (std::size_t i = 0; i < count; ++i) next(pts.data() + i * dim_);
  return pts;
}

}  // namespace locsvm
