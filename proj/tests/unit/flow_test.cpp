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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "projconj/error.hpp"
#include "projconj/flow.hpp"

namespace projconj {
namespace {

Vec v2(double a, double b) { return Eigen::Vector2d(a, b); }

TEST(ProjPoint, CanonicalRepresentative) {
  EXPECT_EQ(proj_point(v2(0, -2)).rep(), v2(0, 1));
  const Vec r = proj_point(v2(3, 4)).rep();
  EXPECT_NEAR(r(0), 0.6, 1e-15);
  EXPECT_NEAR(r(1), 0.8, 1e-15);
  const Vec t = proj_point(v2(-1, 1)).rep();
  EXPECT_NEAR(t(0), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(t(1), -1.0 / std::sqrt(2.0), 1e-15);
}

TEST(ProjPoint, ScaleInvariant) {
  gen::Rng rng(31);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  for (int i = 0; i < 100; ++i) {
    const Vec x = gen::gaussian_vec(rng, 1 + i % 6);
    double alpha = u(rng);
    if (alpha == 0.0) alpha = 1.0;
    EXPECT_LE(proj_dist(proj_point(alpha * x), proj_point(x)), 1e-15);
    EXPECT_NEAR(proj_point(x).rep().norm(), 1.0, 1e-12);
  }
}

TEST(ProjPoint, RejectsZeroAndNonFinite) {
  EXPECT_THROW(proj_point(Vec::Zero(3)), Error);
  EXPECT_THROW(proj_point(v2(NAN, 1)), Error);
  EXPECT_THROW(proj_point(Vec()), Error);
}

TEST(SphereFlow, Examples) {
  const Vec x = v2(1, 1) / std::sqrt(2.0);
  const Mat a = Eigen::Vector2d(1.0, 0.0).asDiagonal();
  EXPECT_LE((sphere_flow(a, 0.0, x) - x).norm(), 1e-15);
  EXPECT_LE((sphere_flow(a, std::log(2.0), x) - v2(2, 1) / std::sqrt(5.0)).norm(), 1e-15);
  Mat r(2, 2);
  r << 0, -1, 1, 0;
  EXPECT_LE((sphere_flow(r, std::numbers::pi / 2, v2(1, 0)) - v2(0, 1)).norm(), 1e-15);
  EXPECT_THROW(sphere_flow(a, 1.0, v2(1, 1)), Error);
}

TEST(SphereFlow, GroupLaw) {
  gen::Rng rng(32);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + i % 6;
    const Mat a = gen::gaussian_mat(rng, n);
    const Vec x = gen::gaussian_vec(rng, n).normalized();
    const double s = u(rng);
    const double t = u(rng);
    EXPECT_LE((sphere_flow(a, s + t, x) - sphere_flow(a, t, sphere_flow(a, s, x))).norm(), 1e-9);
  }
}

TEST(ProjFlow, Examples) {
  const Mat a = Eigen::Vector2d(1.0, 0.0).asDiagonal();
  const ProjPoint p = proj_point(v2(1, 1));
  EXPECT_EQ(proj_flow(a, 0.0, p), p);
  EXPECT_LE(proj_dist(proj_flow(a, 50.0, p), proj_point(v2(1, 0))), 1e-20);

  const Mat n = gen::nilpotent_example();
  for (double t : {-3.0, 0.5, 2.0, 40.0}) {
    Vec want = Vec::Zero(9);
    want(2) = 1.0;
    want(1) = t;
    want(0) = t * t / 2.0;
    EXPECT_LE(proj_dist(proj_flow(n, t, proj_point(Vec::Unit(9, 2))), proj_point(want)), 1e-13);
  }
}

TEST(ProjFlow, GroupLawAndEquivariance) {
  gen::Rng rng(33);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + i % 6;
    const Mat a = gen::gaussian_mat(rng, n);
    const Vec x = gen::gaussian_vec(rng, n);
    const ProjPoint p = proj_point(x);
    const double s = u(rng);
    const double t = u(rng);
    EXPECT_LE(proj_dist(proj_flow(a, s + t, p), proj_flow(a, t, proj_flow(a, s, p))), 1e-9);
    // Both flows push the same representative, so the points agree exactly.
    EXPECT_EQ(proj_point(sphere_flow(a, t, p.rep())), proj_flow(a, t, p));
    EXPECT_LE(proj_dist(proj_flow(a, t, proj_point(-3.5 * x)), proj_flow(a, t, p)), 1e-14);
  }
}

TEST(ProjFlow, LongTimeSplitting) {
  Mat r(2, 2);
  r << 0, -1, 1, 0;
  const double t = 2000.0 * std::numbers::pi + 0.5;
  const ProjPoint got = proj_flow(r, t, proj_point(v2(1, 0)));
  EXPECT_LE(proj_dist(got, proj_point(v2(std::cos(0.5), std::sin(0.5)))), 1e-9);
}

TEST(ProjDist, Examples) {
  const ProjPoint e1 = proj_point(v2(1, 0));
  EXPECT_EQ(proj_dist(e1, e1), 0.0);
  EXPECT_NEAR(proj_dist(e1, proj_point(v2(0, 1))), std::sqrt(2.0), 1e-15);
  const double eps = 1e-3;
  EXPECT_NEAR(proj_dist(e1, proj_point(v2(-1, eps))), eps, 1e-6);
  EXPECT_THROW(proj_dist(e1, proj_point(Vec::Ones(3))), Error);
}

TEST(ProjDist, MetricAxioms) {
  gen::Rng rng(34);
  for (int i = 0; i < 300; ++i) {
    const int n = 2 + i % 5;
    const ProjPoint p = proj_point(gen::gaussian_vec(rng, n));
    const ProjPoint q = proj_point(gen::gaussian_vec(rng, n));
    const ProjPoint r = proj_point(gen::gaussian_vec(rng, n));
    EXPECT_EQ(proj_dist(p, q), proj_dist(q, p));
    EXPECT_LE(proj_dist(p, r), proj_dist(p, q) + proj_dist(q, r) + 1e-12);
    EXPECT_LE(proj_dist(p, p), 1e-12);
    EXPECT_GT(proj_dist(p, q), 1e-12);
    EXPECT_LE(proj_dist(p, q), std::sqrt(2.0) + 1e-15);
  }
}

TEST(ProjDist, ToSubspace) {
  const Subspace x_axis = Subspace::coordinates(3, {0});
  EXPECT_NEAR(proj_dist_to_subspace(proj_point(Eigen::Vector3d(-2, 0, 0)), x_axis), 0.0, 1e-8);
  EXPECT_NEAR(proj_dist_to_subspace(proj_point(Eigen::Vector3d(0, 1, 0)), x_axis),
              std::sqrt(2.0), 1e-15);
}

}  // namespace
}  // namespace projconj
