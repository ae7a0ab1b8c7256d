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

#include "generators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace projconj::gen {

Mat nilpotent_example() {
  Mat a = Mat::Zero(9, 9);
  a(0, 1) = a(1, 2) = 1.0;
  a(3, 4) = a(4, 5) = 1.0;
  a(6, 7) = 1.0;
  return a;
}

Vec gaussian_vec(Rng& rng, int n) {
  std::normal_distribution<double> nd;
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = nd(rng);
  return v;
}

Mat gaussian_mat(Rng& rng, int n) {
  std::normal_distribution<double> nd;
  Mat m(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) m(r, c) = nd(rng);
  }
  return m;
}

Mat random_orthogonal(Rng& rng, int n) {
  const Eigen::HouseholderQR<Mat> qr(gaussian_mat(rng, n));
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR();
  for (int i = 0; i < n; ++i) {
    if (r(i, i) < 0) q.col(i) *= -1.0;
  }
  return q;
}

Mat random_similarity(Rng& rng, int n, double max_cond) {
  std::uniform_real_distribution<double> ud(0.0, std::log(max_cond));
  Vec s(n);
  for (int i = 0; i < n; ++i) s(i) = std::exp(ud(rng));
  s(0) = 1.0;
  if (n > 1) s(n - 1) = std::max(s(n - 1), 1.0);
  return random_orthogonal(rng, n) * s.asDiagonal() * random_orthogonal(rng, n).transpose();
}

Mat conjugated(const Mat& m, const Mat& s) {
  return s * m * s.partialPivLu().inverse();
}

int total_dim(const std::vector<BlockSpec>& blocks) {
  int n = 0;
  for (const auto& b : blocks) {
    for (const auto& c : b.cells) n += c.real_dim();
  }
  return n;
}

std::vector<BlockSpec> relabel_lambdas(Rng& rng, std::vector<BlockSpec> blocks) {
  std::uniform_real_distribution<double> start(-1.0, 2.0);
  std::uniform_real_distribution<double> gap(0.5, 1.5);
  double lambda = start(rng);
  for (auto& b : blocks) {
    b.lambda = lambda;
    lambda -= gap(rng);
  }
  return blocks;
}

std::vector<BlockSpec> random_blocks(Rng& rng, int max_dim, int max_blocks) {
  std::uniform_int_distribution<int> n_blocks(1, max_blocks);
  std::uniform_int_distribution<int> n_cells(1, 2);
  std::uniform_int_distribution<std::size_t> pick_omega(0, kOmegas.size() - 1);
  std::uniform_int_distribution<int> pick_size(1, 3);
  const int k = n_blocks(rng);
  std::vector<BlockSpec> blocks;
  int used = 0;
  for (int b = 0; b < k && used < max_dim; ++b) {
    BlockSpec spec;
    const int cells = n_cells(rng);
    for (int c = 0; c < cells; ++c) {
      for (int attempt = 0; attempt < 20; ++attempt) {
        JordanCell cell{kOmegas[pick_omega(rng)], pick_size(rng)};
        if (used + cell.real_dim() <= max_dim) {
          spec.cells.push_back(cell);
          used += cell.real_dim();
          break;
        }
      }
    }
    if (spec.cells.empty()) {
      spec.cells.push_back({0.0, 1});
      ++used;
    }
    blocks.push_back(std::move(spec));
  }
  return relabel_lambdas(rng, std::move(blocks));
}

Mat hidden(Rng& rng, const std::vector<BlockSpec>& blocks, double max_cond) {
  const Mat j = materialize(blocks);
  return conjugated(j, random_similarity(rng, static_cast<int>(j.rows()), max_cond));
}

std::string dense_json(const Mat& m) {
  std::string out = "{\"dense\":{\"dim\":" + std::to_string(m.rows()) + ",\"entries\":[";
  char buf[32];
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", m(r, c));
      if (r + c > 0) out += ",";
      out += buf;
    }
  }
  out += "]}}";
  return out;
}

}  // namespace projconj::gen
