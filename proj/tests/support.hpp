#pragma once

#include <random>

#include "agds/operator_core.hpp"

namespace agds::testing {

inline Vec random_vec(Index n, std::mt19937& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  Vec v(n);
  for (Index i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

inline Mat random_mat(Index r, Index c, std::mt19937& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  Mat m(r, c);
  for (Index j = 0; j < c; ++j)
    for (Index i = 0; i < r; ++i) m(i, j) = d(rng);
  return m;
}

// Well-conditioned random SPD matrix.
inline Mat random_spd(Index n, std::mt19937& rng) {
  Mat b = random_mat(n, n, rng);
  return b * b.transpose() / static_cast<double>(n) + Mat::Identity(n, n);
}

inline SpMat sparse(const Mat& m) { return m.sparseView(); }

}  // namespace agds::testing
