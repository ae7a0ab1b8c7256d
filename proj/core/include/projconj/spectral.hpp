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

#include <span>
#include <string>
#include <vector>

#include "projconj/linalg.hpp"

namespace projconj {

inline constexpr double kDefaultEps = 1e-8;

/// One complex Jordan chain: eigenvalue lambda + i*omega (omega >= 0, the
/// conjugate chain is implicit) of length `size`.
struct JordanCell {
  double omega = 0.0;
  int size = 1;

  /// Real dimension spanned by the cell and its conjugate.
  int real_dim() const { return omega == 0.0 ? size : 2 * size; }
};

/// Jordan structure of the imaginary-spectrum part of one Lyapunov block.
struct SigmaStructure {
  std::vector<JordanCell> cells;

  int total_dim() const;
  /// Distinct frequencies, ascending.
  std::vector<double> frequencies() const;
  /// Cells sorted by (omega, size) descending.
  SigmaStructure canonical() const;
};

/// Equality of canonical forms with frequencies compared to `omega_tol`.
bool same_structure(const SigmaStructure& a, const SigmaStructure& b,
                    double omega_tol);

struct LyapunovBlockInfo {
  double lambda = 0.0;
  SigmaStructure sigma;
  Subspace space;  // the Lyapunov space, orthonormal basis
};

struct LyapunovStructure {
  std::vector<LyapunovBlockInfo> blocks;  // strictly decreasing lambda
  int ambient_dim = 0;
  /// Spectral radius of the analyzed matrix; scales the tolerances.
  double spectral_radius = 0.0;
};

/// d[s-1] is the dimension of the sum of the real eigenspaces inside the
/// sum of all real Jordan subspaces of chain length s.
struct DProfile {
  int s_max = 0;
  std::vector<int> d;

  int at(int s) const { return d.at(static_cast<std::size_t>(s - 1)); }
};

/// Lyapunov blocks of `a` ordered by decreasing real part, each with the
/// Jordan cells of its imaginary-spectrum part.
///
/// Eigenvalues are grouped in the complex plane with a multiplicity-aware
/// tolerance (a defective eigenvalue of multiplicity m scatters by roughly
/// the m-th root of the rounding level), clusters whose real parts agree to
/// eps * (1 + spectral radius) share a block, and cell sizes come from the
/// rank staircase of the cluster's triangular Schur block. Real-part gaps
/// that fall within a factor 10 above the merge tolerance are reported as
/// kAmbiguousClustering instead of being resolved silently.
LyapunovStructure analyze_structure(const Mat& a, double eps = kDefaultEps);

/// Strips the real parts and keeps the block order.
std::vector<SigmaStructure> reduced_profile(const LyapunovStructure& ls);

DProfile d_profile(const SigmaStructure& sigma);

/// Exact structural input: one entry per Lyapunov block.
struct BlockSpec {
  double lambda = 0.0;
  std::vector<JordanCell> cells;
};

void validate_blocks(std::span<const BlockSpec> blocks);

/// Real Jordan matrix of the block specification, blocks in the given order,
/// cells in the given order within each block.
Mat materialize(std::span<const BlockSpec> blocks);

/// Structure of materialize(blocks) without any numerical extraction.
LyapunovStructure structure_from_blocks(std::span<const BlockSpec> blocks);

/// Restriction of `a` to the invariant subspace `space` in its basis.
Mat restrict_to(const Mat& a, const Subspace& space);

std::string describe(const SigmaStructure& sigma);

}  // namespace projconj
