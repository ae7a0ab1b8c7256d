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

#include "projconj/flow.hpp"

#include <algorithm>
#include <cmath>

#include "projconj/error.hpp"

namespace projconj {
namespace {

// Largest infinity-norm of A*dt per step: e^32 keeps every intermediate
// vector far from overflow before renormalization.
constexpr double kMaxStepNorm = 32.0;

void require_finite_vector(const Vec& x, const char* what) {
  if (!x.allFinite()) {
    throw Error(ErrorCode::kInvalidInput, std::string(what) + " is not finite");
  }
}

// Pushes x along e^{At}; the result is scaled to unit length.
Vec push_unit(const Mat& a, double t, Vec x) {
  require_square(a, "flow generator");
  if (a.rows() != x.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "point dimension does not match the generator");
  }
  if (!std::isfinite(t)) {
    throw Error(ErrorCode::kInvalidInput, "flow time is not finite");
  }
  const double size = a.cwiseAbs().rowwise().sum().maxCoeff() * std::abs(t);
  const int pieces = std::max(1, static_cast<int>(std::ceil(size / kMaxStepNorm)));
  const Mat step = expm(a, t / pieces);
  for (int k = 0; k < pieces; ++k) {
    x = step * x;
    x /= x.norm();
  }
  return x;
}

}  // namespace

ProjPoint proj_point(const Vec& x) {
  require_finite_vector(x, "point");
  const double nrm = x.norm();
  if (x.size() == 0 || nrm == 0.0) {
    throw Error(ErrorCode::kInvalidInput, "the zero vector has no projective class");
  }
  Eigen::Index lead = 0;
  for (Eigen::Index i = 1; i < x.size(); ++i) {
    if (std::abs(x(i)) > std::abs(x(lead))) lead = i;
  }
  Vec rep = x / nrm;
  if (rep(lead) < 0.0) rep = -rep;
  return ProjPoint(std::move(rep));
}

Vec sphere_flow(const Mat& a, double t, const Vec& x) {
  require_finite_vector(x, "point");
  if (std::abs(x.norm() - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidInput, "sphere flow needs a unit vector");
  }
  return push_unit(a, t, x);
}

ProjPoint proj_flow(const Mat& a, double t, const ProjPoint& p) {
  if (t == 0.0) {
    require_square(a, "flow generator");
    if (a.rows() != p.ambient_dim()) {
      throw Error(ErrorCode::kDimensionMismatch, "point dimension does not match the generator");
    }
    return p;
  }
  return proj_point(push_unit(a, t, p.rep()));
}

double proj_dist(const ProjPoint& p, const ProjPoint& q) {
  if (p.ambient_dim() != q.ambient_dim()) {
    throw Error(ErrorCode::kInvalidInput, "projective points of different dimension");
  }
  return std::min((p.rep() - q.rep()).norm(), (p.rep() + q.rep()).norm());
}

double proj_dist_to_subspace(const ProjPoint& p, const Subspace& v) {
  if (p.ambient_dim() != v.ambient_dim()) {
    throw Error(ErrorCode::kInvalidInput, "point and subspace of different dimension");
  }
  if (v.dim() == 0) return std::sqrt(2.0);
  const double c = std::min(1.0, v.project(p.rep()).norm());
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * c));
}

}  // namespace projconj
