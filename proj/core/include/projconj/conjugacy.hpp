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
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "projconj/flow.hpp"
#include "projconj/linalg.hpp"
#include "projconj/spectral.hpp"

namespace projconj {

// ---------------------------------------------------------------------------
// Decision

enum class ObstructionKind { kBlockCount, kBlockDims, kSigmaSpectrum, kJordanStructure };

/// "block-count", "block-dims", "sigma-spectrum" or "jordan-structure".
std::string_view to_string(ObstructionKind kind);

struct Obstruction {
  ObstructionKind kind = ObstructionKind::kBlockCount;
  int block = -1;  // 0-based block position; -1 when not block specific
  std::string a_value;
  std::string b_value;
};

struct Verdict {
  bool conjugate = false;
  /// Block i of A matched with block pairing[i].second of B (0-based).
  std::optional<std::vector<std::pair<int, int>>> pairing;
  std::optional<Obstruction> obstruction;
};

Verdict decide(const Mat& a, const Mat& b, double eps = kDefaultEps);
Verdict decide(const LyapunovStructure& a, const LyapunovStructure& b,
               double eps = kDefaultEps);

/// Distinct frequencies formatted as e.g. "{0,±1i,±2.5i}".
std::string describe_spectrum(const SigmaStructure& sigma);

// ---------------------------------------------------------------------------
// Adapted norms

/// Block norms ||x_i||_A = ||factors[i] x_i|| such that
/// e^{-delta t} ||x_i||_A <= ||e^{sigma_i t} x_i||_A <= e^{delta t} ||x_i||_A
/// for every block and every t >= 0.
struct AdaptedNorm {
  double delta = 0.0;
  int j = 0;  // 1-based split index the norm was built for
  std::vector<Mat> factors;

  double block_norm(std::size_t i, const Vec& x_i) const;
};

AdaptedNorm build_adapted_norm(const std::vector<Mat>& sigma_blocks, int j, double delta,
                               double eps = kDefaultEps);
AdaptedNorm build_adapted_norm(const std::vector<Mat>& sigma_blocks,
                               const std::vector<SigmaStructure>& structures, int j,
                               double delta);

// ---------------------------------------------------------------------------
// Construction

/// Shared block coordinates: columns of t are bases of the Lyapunov spaces.
struct BlockFrame {
  Mat t;
  Mat t_inv;
  std::vector<int> offsets;
  std::vector<int> sizes;
  std::vector<Mat> sigma;  // imaginary-spectrum parts, block coordinates
  std::vector<SigmaStructure> structures;

  int block_count() const { return static_cast<int>(sizes.size()); }
  int ambient_dim() const { return static_cast<int>(t.rows()); }
  /// t * blockdiag(sigma_l + lambdas[l] * I) * t_inv.
  Mat assemble(const std::vector<double>& lambdas) const;
};

/// One elementary conjugacy: adds gamma to the real parts of blocks 1..j.
struct ConjugacyStage {
  double gamma = 0.0;
  int j = 0;  // 1-based
  double delta = 0.0;
  std::vector<double> lambdas;  // real parts of the source, block order
  Mat a_stage;
  Mat b_stage;
  AdaptedNorm norm;
  Subspace w_space;  // blocks 1..j
  Subspace z_space;  // blocks j+1..k
  std::shared_ptr<const BlockFrame> frame;
};

struct ConjugacyChain {
  std::vector<ConjugacyStage> stages;  // applied in order
  Mat source;
  Mat target;
  std::vector<double> gammas;  // gamma_1 .. gamma_k
  std::vector<double> lambdas;
  std::vector<double> mus;
  /// Relative size of the off-diagonal blocks dropped from t_inv * A * t.
  double block_residual = 0.0;
  std::shared_ptr<const BlockFrame> frame;
};

/// Guard band on |beta|: alpha outside [1e-300, 1e300] counts as boundary.
inline constexpr double kBoundaryBeta = 690.7755278982137;

/// ln of the ratio of squared adapted norms, blocks j+1..k over blocks 1..j.
double beta(const ConjugacyStage& stage, const ProjPoint& p);
/// Time at which the source flow through p meets beta = 0. Throws
/// kNearBoundary inside the guard band.
double tau(const ConjugacyStage& stage, const ProjPoint& p);
ProjPoint eval_stage(const ConjugacyStage& stage, const ProjPoint& p);

/// Throws kNotConjugate when the decision is negative. B is replaced by its
/// representative in the block coordinates of A.
ConjugacyChain build_chain(const Mat& a, const Mat& b, double eps = kDefaultEps);

ProjPoint eval_chain(const ConjugacyChain& chain, const ProjPoint& p);

struct VerificationReport {
  int n_points = 0;
  int n_times = 0;
  double tol = 0.0;
  std::uint64_t seed = 0;
  double max_violation = 0.0;
  ProjPoint worst_point;
  double worst_time = 0.0;
  int boundary_points = 0;         // samples inside some stage's guard band
  bool injective = true;
  double min_separation_ratio = 0.0;  // over pairs farther apart than tol
  bool boundary_fixed = true;
  double max_boundary_displacement = 0.0;
  bool passed = false;
};

VerificationReport verify_chain(const ConjugacyChain& chain, int n_points,
                                const std::vector<double>& times, double tol,
                                std::uint64_t seed);

}  // namespace projconj
