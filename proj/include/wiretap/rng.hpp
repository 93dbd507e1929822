#pragma once

// Portable seeded normal variates for reproducible batch experiments.
//
// Generator: std::mt19937_64 (the 64-bit Mersenne Twister, whose output
// sequence is fixed by the C++ standard) seeded with the user seed.
// Uniforms: u = (x >> 11) * 2^-53 in [0, 1).
// Normals: Box-Muller on consecutive uniform pairs (u1, u2),
//   z0 = sqrt(-2 ln(1 - u1)) cos(2 pi u2), z1 = sqrt(-2 ln(1 - u1)) sin(2 pi u2),
// returned in that order.

#include "wiretap/matcalc.hpp"

#include <cstdint>
#include <optional>
#include <random>

namespace wiretap {

class NormalGenerator {
 public:
  explicit NormalGenerator(std::uint64_t seed) : engine_(seed) {}

  double uniform();
  double normal();
  /// rows x cols matrix filled row by row.
  Matrix matrix(Index rows, Index cols);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

}  // namespace wiretap
