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

#include "generators.hpp"
#include "projconj/error.hpp"
#include "projconj/spectral.hpp"

namespace projconj {
namespace {

SigmaStructure cells(std::vector<JordanCell> c) { return SigmaStructure{std::move(c)}; }

void expect_structure(const SigmaStructure& got, std::vector<JordanCell> want) {
  EXPECT_TRUE(same_structure(got, cells(std::move(want)), 1e-9)) << describe(got);
}

TEST(AnalyzeStructure, NilpotentExample) {
  const LyapunovStructure ls = analyze_structure(gen::nilpotent_example());
  ASSERT_EQ(ls.blocks.size(), 1u);
  EXPECT_EQ(ls.blocks[0].lambda, 0.0);
  EXPECT_EQ(ls.blocks[0].space.dim(), 9);
  expect_structure(ls.blocks[0].sigma, {{0, 3}, {0, 3}, {0, 2}, {0, 1}});
}

TEST(AnalyzeStructure, DiagonalOrdersByDecreasingLambda) {
  const Mat d = Eigen::Vector3d(1.0, 1.0, 0.0).asDiagonal();
  const LyapunovStructure ls = analyze_structure(d);
  ASSERT_EQ(ls.blocks.size(), 2u);
  EXPECT_NEAR(ls.blocks[0].lambda, 1.0, 1e-14);
  EXPECT_NEAR(ls.blocks[1].lambda, 0.0, 1e-14);
  expect_structure(ls.blocks[0].sigma, {{0, 1}, {0, 1}});
  expect_structure(ls.blocks[1].sigma, {{0, 1}});
  EXPECT_NEAR(ls.blocks[1].space.distance(Vec::Unit(3, 2)), 0.0, 1e-12);
}

TEST(AnalyzeStructure, ComplexPairAndDoubleZero) {
  Mat m(4, 4);
  m << 1, -2, 0, 0, 2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0;
  const LyapunovStructure ls = analyze_structure(m);
  ASSERT_EQ(ls.blocks.size(), 2u);
  EXPECT_NEAR(ls.blocks[0].lambda, 1.0, 1e-12);
  expect_structure(ls.blocks[0].sigma, {{2, 1}});
  expect_structure(ls.blocks[1].sigma, {{0, 1}, {0, 1}});
}

TEST(AnalyzeStructure, RejectsBadInput) {
  EXPECT_THROW(analyze_structure(Mat::Zero(2, 3)), Error);
  EXPECT_THROW(analyze_structure(Mat::Identity(2, 2), 0.0), Error);
}

TEST(AnalyzeStructure, AmbiguousRealPartGap) {
  // Real parts 1e-7 apart: above the merge tolerance, below ten times it.
  const Mat d = Eigen::Vector2d(0.0, 1e-7).asDiagonal();
  try {
    analyze_structure(d, 1e-8);
    FAIL() << "expected an ambiguity error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAmbiguousClustering);
  }
}

TEST(AnalyzeStructure, RecoversHiddenStructures) {
  gen::Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const auto blocks = gen::random_blocks(rng, 9, 3);
    const Mat a = gen::hidden(rng, blocks, 10.0);
    const LyapunovStructure ls = analyze_structure(a);
    const LyapunovStructure exact = structure_from_blocks(blocks);
    ASSERT_EQ(ls.blocks.size(), exact.blocks.size()) << "trial " << trial;
    int total = 0;
    for (std::size_t i = 0; i < ls.blocks.size(); ++i) {
      EXPECT_NEAR(ls.blocks[i].lambda, blocks[i].lambda, 1e-6);
      EXPECT_TRUE(same_structure(ls.blocks[i].sigma, exact.blocks[i].sigma, 1e-6))
          << describe(ls.blocks[i].sigma) << " vs " << describe(exact.blocks[i].sigma);
      total += ls.blocks[i].space.dim();
      // The restriction to V_i has its spectrum on the line Re = lambda_i.
      const Mat r = restrict_to(a, ls.blocks[i].space);
      for (const auto& z : eigvals(r)) EXPECT_NEAR(z.real(), ls.blocks[i].lambda, 1e-4);
    }
    EXPECT_EQ(total, ls.ambient_dim);
  }
}

TEST(AnalyzeStructure, InvariantUnderOrthogonalSimilarity) {
  gen::Rng rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    const auto blocks = gen::random_blocks(rng, 6, 3);
    const Mat a = gen::hidden(rng, blocks, 10.0);
    const Mat q = gen::random_orthogonal(rng, static_cast<int>(a.rows()));
    const auto pa = reduced_profile(analyze_structure(a));
    const auto pq = reduced_profile(analyze_structure(q * a * q.transpose()));
    ASSERT_EQ(pa.size(), pq.size());
    for (std::size_t i = 0; i < pa.size(); ++i) {
      EXPECT_TRUE(same_structure(pa[i], pq[i], 1e-6));
    }
  }
}

TEST(ReducedProfile, StripsLambdas) {
  const auto p1 = reduced_profile(analyze_structure(Eigen::Vector2d(5.0, -2.0).asDiagonal()));
  const auto p2 = reduced_profile(analyze_structure(Eigen::Vector2d(1.0, 0.0).asDiagonal()));
  ASSERT_EQ(p1.size(), 2u);
  ASSERT_EQ(p2.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(describe(p1[i]), "{(0,1)}");
    EXPECT_EQ(describe(p1[i]), describe(p2[i]));
  }
  const auto p3 = reduced_profile(analyze_structure(gen::nilpotent_example()));
  ASSERT_EQ(p3.size(), 1u);
  EXPECT_EQ(describe(p3[0]), "{(0,3),(0,3),(0,2),(0,1)}");
}

TEST(DProfile, Examples) {
  const DProfile p = d_profile(cells({{0, 3}, {0, 3}, {0, 2}, {0, 1}}));
  EXPECT_EQ(p.s_max, 3);
  EXPECT_EQ(p.d, (std::vector<int>{1, 1, 2}));

  const DProfile q = d_profile(cells({{0, 1}}));
  EXPECT_EQ(q.s_max, 1);
  EXPECT_EQ(q.d, (std::vector<int>{1}));

  const DProfile r = d_profile(cells({{2, 2}}));
  EXPECT_EQ(r.s_max, 2);
  EXPECT_EQ(r.d, (std::vector<int>{0, 2}));

  EXPECT_THROW(d_profile(SigmaStructure{}), Error);
}

TEST(DProfile, WeightedSumIsTotalDimension) {
  gen::Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    for (const auto& b : gen::random_blocks(rng, 12, 3)) {
      const SigmaStructure s{b.cells};
      const DProfile p = d_profile(s);
      int sum = 0;
      for (int k = 1; k <= p.s_max; ++k) sum += k * p.at(k);
      EXPECT_EQ(sum, s.total_dim());
      EXPECT_GT(p.at(p.s_max), 0);
    }
  }
}

TEST(Blocks, ValidateRejectsBadSpecifications) {
  const std::vector<BlockSpec> not_decreasing{{0.0, {{0, 1}}}, {1.0, {{0, 1}}}};
  EXPECT_THROW(validate_blocks(not_decreasing), Error);
  const std::vector<BlockSpec> bad_size{{0.0, {{0, 0}}}};
  EXPECT_THROW(validate_blocks(bad_size), Error);
  const std::vector<BlockSpec> bad_omega{{0.0, {{-1, 1}}}};
  EXPECT_THROW(validate_blocks(bad_omega), Error);
  const std::vector<BlockSpec> empty_cells{{0.0, {}}};
  EXPECT_THROW(validate_blocks(empty_cells), Error);
}

TEST(Blocks, MaterializedMatrixHasTheSameProfile) {
  gen::Rng rng(24);
  for (int trial = 0; trial < 100; ++trial) {
    const auto blocks = gen::random_blocks(rng, 9, 3);
    const auto exact = reduced_profile(structure_from_blocks(blocks));
    const auto numeric = reduced_profile(analyze_structure(materialize(blocks)));
    ASSERT_EQ(exact.size(), numeric.size());
    for (std::size_t i = 0; i < exact.size(); ++i) {
      EXPECT_EQ(describe(exact[i]), describe(numeric[i]));
    }
  }
}

TEST(Blocks, MaterializeLayout) {
  const std::vector<BlockSpec> spec{{1.0, {{2.0, 2}}}, {0.0, {{0.0, 1}}}};
  const Mat m = materialize(spec);
  ASSERT_EQ(m.rows(), 5);
  EXPECT_EQ(m(0, 0), 1.0);
  EXPECT_EQ(m(0, 1), -2.0);
  EXPECT_EQ(m(1, 0), 2.0);
  EXPECT_EQ(m(0, 2), 1.0);
  EXPECT_EQ(m(1, 3), 1.0);
  EXPECT_EQ(m(4, 4), 0.0);
}

}  // namespace
}  // namespace projconj
