#include "wiretap/rng.hpp"

#include <cmath>
#include <numbers>

namespace wiretap {

double NormalGenerator::uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

double NormalGenerator::normal() {
  if (spare_) {
    const double z = *spare_;
    spare_.reset();
    return z;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(1.0 - u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

Matrix NormalGenerator::matrix(Index rows, Index cols) {
  Matrix out(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) out(i, j) = normal();
  return out;
}

}  // namespace wiretap
