#pragma once

#include "lethargy/vector.hpp"

#include <cstddef>
#include <random>

namespace lethargy::testing {

/// Random vector supported on {1..dim}, each coordinate present with probability 3/4.
inline Vector random_vector(std::mt19937_64& rng, Index dim, double scale = 2.0) {
  std::uniform_real_distribution<double> coef(-scale, scale);
  std::bernoulli_distribution present(0.75);
  Vector v;
  for (Index j = 1; j <= dim; ++j) {
    if (present(rng)) v.set(j, coef(rng));
  }
  return v;
}

inline bool close(double a, double b, double tol) { return a - b <= tol && b - a <= tol; }

inline bool rel_close(double a, double b, double rel) {
  const double scale = (a < 0 ? -a : a) > (b < 0 ? -b : b) ? (a < 0 ? -a : a) : (b < 0 ? -b : b);
  return close(a, b, rel * (scale > 0 ? scale : 1.0));
}

}  // namespace lethargy::testing
