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

#pragma once

#include <vector>

#include "projconj/linalg.hpp"

namespace projconj::detail {

// Complex Schur form a = q t q^* whose diagonal can be reordered by unitary
// Givens swaps of adjacent entries.
class ReorderableSchur {
 public:
  explicit ReorderableSchur(const Mat& a);

  const CMat& t() const { return t_; }
  const CMat& q() const { return q_; }
  Eigen::VectorXcd diagonal() const { return t_.diagonal(); }

  // Moves the diagonal entries with selected[i] == true (indexed by the
  // current diagonal position) to the leading positions, keeping their
  // relative order. Returns the number of selected entries.
  int bring_to_front(const std::vector<bool>& selected);

  // Residual of the factorization, for diagnostics.
  double residual(const Mat& a) const;

 private:
  void swap_adjacent(Eigen::Index k);

  CMat t_;
  CMat q_;
};

}  // namespace projconj::detail
