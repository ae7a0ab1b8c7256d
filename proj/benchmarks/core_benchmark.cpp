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


#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "projconj/conjugacy.hpp"
#include "projconj/flow.hpp"
#include "projconj/linalg.hpp"
#include "projconj/spectral.hpp"

namespace {

using projconj::BlockSpec;
using projconj::Mat;
using projconj::Vec;

Mat random_mat(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> nd;
  Mat m(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) m(r, c) = nd(rng);
  }
  return m;
}

// Two Lyapunov blocks, each with a rotation cell and a nilpotent chain.
std::vector<BlockSpec> two_block_spec(double lambda0 = 1.0, double lambda1 = -0.5) {
  return {{lambda0, {{1.0, 2}, {0.0, 2}}}, {lambda1, {{0.5, 1}, {0.0, 3}}}};
}

Mat hide(std::mt19937_64& rng, const Mat& j) {
  const Mat s = random_mat(rng, static_cast<int>(j.rows())) +
                4.0 * Mat::Identity(j.rows(), j.cols());
  return s * j * s.partialPivLu().inverse();
}

void BM_Expm(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const int n = static_cast<int>(state.range(0));
  const Mat m = random_mat(rng, n) / std::sqrt(static_cast<double>(n));
  for (auto _ : state) benchmark::DoNotOptimize(projconj::expm(m, 3.0));
}
BENCHMARK(BM_Expm)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_AnalyzeStructure(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto spec = two_block_spec();
  const Mat a = hide(rng, projconj::materialize(spec));
  for (auto _ : state) benchmark::DoNotOptimize(projconj::analyze_structure(a));
}
BENCHMARK(BM_AnalyzeStructure);

void BM_BuildChain(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto spec = two_block_spec();
  const Mat a = hide(rng, projconj::materialize(spec));
  const Mat b = hide(rng, projconj::materialize(two_block_spec(2.5, -1.0)));
  for (auto _ : state) benchmark::DoNotOptimize(projconj::build_chain(a, b));
}
BENCHMARK(BM_BuildChain);

void BM_EvalChain(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const auto spec = two_block_spec();
  const Mat a = hide(rng, projconj::materialize(spec));
  const Mat b = hide(rng, projconj::materialize(two_block_spec(2.5, -1.0)));
  const auto chain = projconj::build_chain(a, b);
  std::normal_distribution<double> nd;
  Vec x(a.rows());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = nd(rng);
  const projconj::ProjPoint p = projconj::proj_point(x);
  for (auto _ : state) benchmark::DoNotOptimize(projconj::eval_chain(chain, p));
}
BENCHMARK(BM_EvalChain);

void BM_ProjFlow(benchmark::State& state) {
  std::mt19937_64 rng(5);
  const Mat a = projconj::materialize(two_block_spec());
  Vec x(a.rows());
  std::normal_distribution<double> nd;
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = nd(rng);
  const projconj::ProjPoint p = projconj::proj_point(x);
  const double t = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(projconj::proj_flow(a, t, p));
}
BENCHMARK(BM_ProjFlow)->Arg(1)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
