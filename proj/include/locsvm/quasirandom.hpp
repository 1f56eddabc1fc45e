#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace locsvm {

// SplitMix64 finalizer; used to derive stream offsets and jitter from seeds.
std::uint64_t mix64(std::uint64_t x);

// Radical inverse of `index` in the given base (van der Corput).
double radical_inverse(std::uint64_t index, unsigned base);

// Low-discrepancy stream of points in the closed unit ball of R^d.
// Halton points in [-1,1]^d, rejected to the ball; the seed offsets the
// start index so distinct seeds give distinct streams.
class BallSequence {
 public:
  BallSequence(int dim, std::uint64_t seed);

  // Writes the next point to out[0..dim).
  void next(double* out);

  // Flat row-major block of `count` points.
  std::vector<double> take(std::size_t count);

  int dim() const { return dim_; }

 private:
  int dim_;
  std::uint64_t index_;
};

}  // namespace locsvm
