// Copyright 2026 The projconj Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "schur.hpp"

#include <cmath>

#include "projconj/error.hpp"

namespace projconj::detail {

ReorderableSchur::ReorderableSchur(const Mat& a) {
  const Eigen::ComplexSchur<CMat> schur(a.cast<Complex>());
  if (schur.info() != Eigen::Success) {
    throw Error(ErrorCode::kInternal, "complex Schur iteration did not converge");
  }
  t_ = schur.matrixT();
  q_ = schur.matrixU();
  // Eigen leaves rounding noise below the diagonal untouched in some paths.
  for (Eigen::Index c = 0; c < t_.cols(); ++c) {
    for (Eigen::Index r = c + 1; r < t_.rows(); ++r) t_(r, c) = 0.0;
  }
}

void ReorderableSchur::swap_adjacent(Eigen::Index k) {
  const Complex t11 = t_(k, k);
  const Complex t22 = t_(k + 1, k + 1);
  const Complex f = t_(k, k + 1);
  const Complex g = t22 - t11;
  const double fa = std::abs(f);
  const double ga = std::abs(g);
  if (ga == 0.0) return;  // equal eigenvalues: the swap is the identity

  // Rotation G = [c s; -conj(s) c] with G [f; g] = [r; 0].
  const double nrm = std::hypot(fa, ga);
  double c = 0.0;
  Complex s;
  if (fa == 0.0) {
    s = std::conj(g) / ga;
  } else {
    c = fa / nrm;
    s = (f / fa) * std::conj(g) / nrm;
  }

  const Eigen::Index n = t_.rows();
  for (Eigen::Index col = k; col < n; ++col) {
    const Complex x = t_(k, col);
    const Complex y = t_(k + 1, col);
    t_(k, col) = c * x + s * y;
    t_(k + 1, col) = c * y - std::conj(s) * x;
  }
  for (Eigen::Index row = 0; row <= k + 1; ++row) {
    const Complex x = t_(row, k);
    const Complex y = t_(row, k + 1);
    t_(row, k) = c * x + std::conj(s) * y;
    t_(row, k + 1) = c * y - s * x;
  }
  for (Eigen::Index row = 0; row < n; ++row) {
    const Complex x = q_(row, k);
    const Complex y = q_(row, k + 1);
    q_(row, k) = c * x + std::conj(s) * y;
    q_(row, k + 1) = c * y - s * x;
  }
  t_(k + 1, k) = 0.0;
  t_(k, k) = t22;
  t_(k + 1, k + 1) = t11;
}

int ReorderableSchur::bring_to_front(const std::vector<bool>& selected) {
  const auto n = t_.rows();
  if (static_cast<Eigen::Index>(selected.size()) != n) {
    throw Error(ErrorCode::kInternal, "selection size does not match Schur form");
  }
  std::vector<bool> flags = selected;
  Eigen::Index front = 0;
  for (Eigen::Index pos = 0; pos < n; ++pos) {
    if (!flags[pos]) continue;
    for (Eigen::Index k = pos; k > front; --k) {
      swap_adjacent(k - 1);
      std::swap(flags[k - 1], flags[k]);
    }
    ++front;
  }
  return static_cast<int>(front);
}

double ReorderableSchur::residual(const Mat& a) const {
  return (q_ * t_ * q_.adjoint() - a.cast<Complex>()).norm();
}

}  // namespace projconj::detail
