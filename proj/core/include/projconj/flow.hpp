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

#include "projconj/linalg.hpp"

namespace projconj {

/// A point of projective space, stored as a unit vector whose entry of
/// largest magnitude (lowest index on ties) is positive.
class ProjPoint {
 public:
  ProjPoint() = default;

  int ambient_dim() const { return static_cast<int>(rep_.size()); }
  const Vec& rep() const { return rep_; }

  friend ProjPoint proj_point(const Vec& x);
  friend bool operator==(const ProjPoint&, const ProjPoint&) = default;

 private:
  explicit ProjPoint(Vec rep) : rep_(std::move(rep)) {}
  Vec rep_;
};

ProjPoint proj_point(const Vec& x);

/// e^{At} x, rescaled to unit length. Long horizons are split into pieces
/// with ||A t|| <= 1e3 and renormalized in between.
Vec sphere_flow(const Mat& a, double t, const Vec& x);

ProjPoint proj_flow(const Mat& a, double t, const ProjPoint& p);

/// Chordal metric min(||u - v||, ||u + v||) on unit representatives.
double proj_dist(const ProjPoint& p, const ProjPoint& q);

/// Distance from p to the projective subspace P(V).
double proj_dist_to_subspace(const ProjPoint& p, const Subspace& v);

}  // namespace projconj
