#pragma once

#include "repro/core.hpp"
#include "repro/split.hpp"

#include <cmath>
#include <initializer_list>

namespace fixtures {

using repro::Matrix;
using repro::NonNegMatrix;

inline Matrix<double> dense(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix<double> m(static_cast<repro::Index>(rows.size()),
                   static_cast<repro::Index>(rows.begin()->size()));
  repro::Index i = 0;
  for (const auto& row : rows) {
    repro::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline NonNegMatrix<double> nonneg(std::initializer_list<std::initializer_list<double>> rows) {
  return NonNegMatrix<double>(dense(rows));
}

inline repro::SplitSystem<double> split(std::initializer_list<std::initializer_list<double>> T,
                                        std::initializer_list<std::initializer_list<double>> F) {
  return repro::make_split(nonneg(T), nonneg(F));
}

/// T = [[0,0],[0.5,0]], F = [[1,1],[0,0]], A = [[1,1],[0.5,0]].
inline repro::SplitSystem<double> worked_example() {
  return split({{0, 0}, {0.5, 0}}, {{1, 1}, {0, 0}});
}

inline const double kRootA = (1 + std::sqrt(3.0)) / 2;

}  // namespace fixtures
