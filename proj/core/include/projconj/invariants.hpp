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

#include "projconj/flow.hpp"
#include "projconj/linalg.hpp"
#include "projconj/spectral.hpp"

namespace projconj {

struct MorseSet {
  Subspace space;
  int proj_dim = 0;
  double lambda = 0.0;
};

/// Morse sets ordered by decreasing lambda; the last one is the attractor.
struct MorseDecomposition {
  std::vector<MorseSet> sets;
};

MorseDecomposition morse_decomposition(const Mat& a, double eps = kDefaultEps);
MorseDecomposition morse_decomposition(const LyapunovStructure& ls);

/// Additive split m = semisimple + nilpotent into commuting parts.
struct JordanChevalley {
  Mat semisimple;
  Mat nilpotent;
};

/// Split of a matrix whose eigenvalues are 0 or +-i*omega for the given
/// frequencies, by Newton iteration on the square-free polynomial with
/// exactly those roots.
JordanChevalley jordan_chevalley(const Mat& m, const std::vector<double>& frequencies);

struct RecurrenceProfile {
  SigmaStructure sigma;
  DProfile profile;
  Mat nilpotent;                       // nilpotent part of sigma
  Subspace e_space;                    // sum of real eigenspaces
  std::vector<Subspace> r_filtration;  // lifts of R_1 .. R_{s_max}
  std::vector<int> strata_dims;        // dim(R_s minus R_{s+1}), s = 1..s_max
  std::vector<int> stable_dims;        // D_s, s = 1..s_max
};

std::vector<int> stable_dims(const DProfile& profile);
std::vector<int> strata_dims(const DProfile& profile);

/// Requires every eigenvalue of sigma to have real part within tolerance of
/// zero; throws kPrecondition otherwise.
Subspace recurrent_set(const Mat& sigma, double eps = kDefaultEps);
RecurrenceProfile recurrence_profile(const Mat& sigma, double eps = kDefaultEps);
/// Same, with the Jordan structure of sigma supplied by the caller.
RecurrenceProfile recurrence_profile(const Mat& sigma, const SigmaStructure& structure);

/// The unique recurrent point asymptotic to p: P(N^(j-1) x) where j - 1 is
/// the largest power with N^(j-1) x numerically nonzero.
ProjPoint limit_recurrent_point(const Mat& sigma, const ProjPoint& p,
                                double eps = kDefaultEps);
ProjPoint limit_along_nilpotent(const Mat& nilpotent, const ProjPoint& p,
                                double eps = kDefaultEps);

/// dim(ker M intersected with im M^(s-1)) for s = 1..s_max, where M is sigma
/// for omega = 0 and sigma^2 + omega^2 otherwise. Computed from tolerant
/// ranks only, with no reference to a Jordan basis.
std::vector<int> frequency_filtration_dims(const Mat& sigma, double omega, int s_max,
                                           double eps = kDefaultRankTol);

}  // namespace projconj
