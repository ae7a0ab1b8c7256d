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

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "projconj/linalg.hpp"
#include "projconj/spectral.hpp"

namespace projconj::gen {

using Rng = std::mt19937_64;

/// Frequencies used for random imaginary parts.
inline const std::vector<double> kOmegas{0.0, 0.5, 1.0, 1.5, 2.0, 3.0};

/// The 9x9 nilpotent matrix with cells of sizes 3, 3, 2, 1 on the diagonal.
Mat nilpotent_example();

Vec gaussian_vec(Rng& rng, int n);
Mat gaussian_mat(Rng& rng, int n);

/// Random orthogonal matrix (QR of a Gaussian matrix with sign fix).
Mat random_orthogonal(Rng& rng, int n);

/// U diag(s) V^T with log-uniform singular values in [1, max_cond].
Mat random_similarity(Rng& rng, int n, double max_cond);

/// s * m * s^-1.
Mat conjugated(const Mat& m, const Mat& s);

/// Random block specification with total dimension in [1, max_dim] and at
/// most max_blocks Lyapunov blocks. Real parts are separated by at least 0.5.
std::vector<BlockSpec> random_blocks(Rng& rng, int max_dim, int max_blocks);

/// Same cells, fresh strictly decreasing real parts (gaps >= 0.5).
std::vector<BlockSpec> relabel_lambdas(Rng& rng, std::vector<BlockSpec> blocks);

int total_dim(const std::vector<BlockSpec>& blocks);

/// Random matrix with the given structure, hidden by a similarity of
/// condition number at most max_cond.
Mat hidden(Rng& rng, const std::vector<BlockSpec>& blocks, double max_cond);

/// Dense JSON text for the command-line tool.
std::string dense_json(const Mat& m);

}  // namespace projconj::gen
