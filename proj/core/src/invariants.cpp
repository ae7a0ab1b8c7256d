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

#include "projconj/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "projconj/error.hpp"

namespace projconj {
namespace {

// Single block with real part zero, or kPrecondition.
SigmaStructure require_imaginary_spectrum(const Mat& sigma, double eps) {
  const LyapunovStructure ls = analyze_structure(sigma, eps);
  const double tol = eps * (1.0 + ls.spectral_radius);
  if (ls.blocks.size() != 1 || std::abs(ls.blocks.front().lambda) > tol) {
    std::ostringstream msg;
    msg << "expected a purely imaginary spectrum, found real parts";
    for (const auto& b : ls.blocks) msg << " " << b.lambda;
    throw Error(ErrorCode::kPrecondition, msg.str());
  }
  return ls.blocks.front().sigma;
}

int sum_from(const DProfile& p, int s) {
  int total = 0;
  for (int i = s; i <= p.s_max; ++i) total += p.at(i);
  return total;
}

}  // namespace

MorseDecomposition morse_decomposition(const LyapunovStructure& ls) {
  MorseDecomposition out;
  for (const auto& b : ls.blocks) {
    out.sets.push_back({b.space, b.space.dim() - 1, b.lambda});
  }
  return out;
}

MorseDecomposition morse_decomposition(const Mat& a, double eps) {
  return morse_decomposition(analyze_structure(a, eps));
}

JordanChevalley jordan_chevalley(const Mat& m, const std::vector<double>& frequencies) {
  require_square(m, "Jordan-Chevalley input");
  const auto n = m.rows();
  const Mat id = Mat::Identity(n, n);
  bool has_zero = false;
  std::vector<double> omegas;
  for (double w : frequencies) {
    if (w == 0.0) {
      has_zero = true;
    } else {
      omegas.push_back(w);
    }
  }
  // p(x) = x^[has_zero] * prod (x^2 + w^2), p' by the product rule.
  auto factors = [&](const Mat& s) {
    std::vector<Mat> f;
    std::vector<Mat> df;
    if (has_zero) {
      f.push_back(s);
      df.push_back(id);
    }
    for (double w : omegas) {
      f.push_back(s * s + w * w * id);
      df.push_back(2.0 * s);
    }
    return std::pair{f, df};
  };

  Mat s = m;
  const double scale = 1.0 + m.norm();
  for (int iter = 0; iter < 60; ++iter) {
    const auto [f, df] = factors(s);
    Mat p = id;
    for (const auto& x : f) p = p * x;
    Mat dp = Mat::Zero(n, n);
    for (std::size_t i = 0; i < f.size(); ++i) {
      Mat term = df[i];
      for (std::size_t k = 0; k < f.size(); ++k) {
        if (k != i) term = term * f[k];
      }
      dp += term;
    }
    const Mat step = dp.partialPivLu().solve(p);
    if (!step.allFinite()) {
      throw Error(ErrorCode::kInternal, "Jordan-Chevalley iteration broke down");
    }
    s -= step;
    if (step.norm() <= 1e-15 * scale) break;
  }
  return {s, m - s};
}

std::vector<int> stable_dims(const DProfile& profile) {
  int total = 0;
  for (int i = 1; i <= profile.s_max; ++i) total += i * profile.at(i);
  std::vector<int> out;
  for (int s = 1; s <= profile.s_max; ++s) {
    int sub = 0;
    for (int i = s; i <= profile.s_max; ++i) sub += (i + 1 - s) * profile.at(i);
    out.push_back(total - sub);
  }
  return out;
}

std::vector<int> strata_dims(const DProfile& profile) {
  std::vector<int> out;
  for (int s = 1; s <= profile.s_max; ++s) out.push_back(sum_from(profile, s) - 1);
  return out;
}

RecurrenceProfile recurrence_profile(const Mat& sigma, const SigmaStructure& structure) {
  require_square(sigma, "sigma");
  if (structure.total_dim() != sigma.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "Jordan structure does not match the matrix dimension");
  }
  RecurrenceProfile out;
  out.sigma = structure.canonical();
  out.profile = d_profile(out.sigma);
  out.nilpotent = jordan_chevalley(sigma, out.sigma.frequencies()).nilpotent;
  const Mat& nil = out.nilpotent;
  const auto n = sigma.rows();

  // R_s lifts to ker N intersected with im N^(s-1), which is N^(s-1) applied
  // to ker N^s. Dimensions follow from the cell sizes.
  Mat power = Mat::Identity(n, n);  // N^(s-1)
  for (int s = 1; s <= out.profile.s_max; ++s) {
    int ker_dim = 0;
    for (const auto& c : out.sigma.cells) {
      ker_dim += std::min(c.size, s) * (c.omega == 0.0 ? 1 : 2);
    }
    const Subspace ker = null_space(power * nil, ker_dim);
    out.r_filtration.push_back(
        leading_span(power * ker.basis(), sum_from(out.profile, s)));
    power = power * nil;
  }
  out.e_space = out.r_filtration.front();
  out.strata_dims = strata_dims(out.profile);
  out.stable_dims = stable_dims(out.profile);
  return out;
}

RecurrenceProfile recurrence_profile(const Mat& sigma, double eps) {
  return recurrence_profile(sigma, require_imaginary_spectrum(sigma, eps));
}

Subspace recurrent_set(const Mat& sigma, double eps) {
  return recurrence_profile(sigma, eps).e_space;
}

ProjPoint limit_along_nilpotent(const Mat& nilpotent, const ProjPoint& p, double eps) {
  require_square(nilpotent, "nilpotent part");
  if (nilpotent.rows() != p.ambient_dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "point dimension does not match the matrix");
  }
  const double scale = std::max(1.0, nilpotent.norm());
  Vec cur = p.rep();
  double threshold = eps;
  for (Eigen::Index k = 0; k < nilpotent.rows(); ++k) {
    const Vec next = nilpotent * cur;
    threshold *= scale;
    if (next.norm() <= threshold) break;
    cur = next;
  }
  return proj_point(cur);
}

ProjPoint limit_recurrent_point(const Mat& sigma, const ProjPoint& p, double eps) {
  const SigmaStructure structure = require_imaginary_spectrum(sigma, eps);
  const Mat nil = jordan_chevalley(sigma, structure.frequencies()).nilpotent;
  return limit_along_nilpotent(nil, p, eps);
}

std::vector<int> frequency_filtration_dims(const Mat& sigma, double omega, int s_max,
                                           double eps) {
  require_square(sigma, "sigma");
  const auto n = sigma.rows();
  const Mat id = Mat::Identity(n, n);
  const Mat m = omega == 0.0 ? sigma : Mat(sigma * sigma + omega * omega * id);
  if (!(eps > 0.0)) {
    throw Error(ErrorCode::kInvalidTolerance, "eps must be positive");
  }
  // Absolute threshold: a power that should vanish carries only noise, which
  // a threshold relative to its own norm would count as rank.
  const double scale = std::max(1.0, m.norm());
  std::vector<int> out;
  Mat power = id;
  int prev = static_cast<int>(n);
  double threshold = eps;
  for (int s = 1; s <= s_max; ++s) {
    power = power * m;
    threshold *= scale;
    const Vec sv = Eigen::JacobiSVD<Mat>(power).singularValues();
    const int r = static_cast<int>((sv.array() > threshold).count());
    out.push_back(prev - r);
    prev = r;
  }
  return out;
}

}  // namespace projconj
