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

#include "projconj/conjugacy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "projconj/error.hpp"
#include "projconj/invariants.hpp"

namespace projconj {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// |beta| below this counts as lying on the fundamental domain.
constexpr double kDomainBeta = 1e-10;
// Root-finding target for beta along the orbit.
constexpr double kRootBeta = 1e-12;

std::string dims_list(const std::vector<SigmaStructure>& profile) {
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (i > 0) out << ",";
    out << profile[i].total_dim();
  }
  out << "]";
  return out.str();
}

bool same_spectrum(const SigmaStructure& a, const SigmaStructure& b, double tol) {
  const auto fa = a.frequencies();
  const auto fb = b.frequencies();
  if (fa.size() != fb.size()) return false;
  for (std::size_t i = 0; i < fa.size(); ++i) {
    if (std::abs(fa[i] - fb[i]) > tol) return false;
  }
  return true;
}

double log_sum_exp(const std::vector<double>& terms) {
  double top = -kInf;
  for (double v : terms) top = std::max(top, v);
  if (top == -kInf) return -kInf;
  double sum = 0.0;
  for (double v : terms) sum += std::exp(v - top);
  return top + std::log(sum);
}

Vec block_of(const BlockFrame& f, const Vec& y, int l) {
  return y.segment(f.offsets[static_cast<std::size_t>(l)], f.sizes[static_cast<std::size_t>(l)]);
}

// beta of the source flow of `stage` at time t through the block vector y.
double beta_block(const ConjugacyStage& stage, const Vec& y, double t) {
  const BlockFrame& f = *stage.frame;
  std::vector<double> w_terms;
  std::vector<double> z_terms;
  for (int l = 0; l < f.block_count(); ++l) {
    Vec part = block_of(f, y, l);
    if (t != 0.0) part = expm(f.sigma[static_cast<std::size_t>(l)], t) * part;
    const double nrm = stage.norm.block_norm(static_cast<std::size_t>(l), part);
    const double term =
        nrm == 0.0 ? -kInf
                   : 2.0 * stage.lambdas[static_cast<std::size_t>(l)] * t + 2.0 * std::log(nrm);
    (l < stage.j ? w_terms : z_terms).push_back(term);
  }
  const double num = log_sum_exp(z_terms);
  const double den = log_sum_exp(w_terms);
  if (den == -kInf) return kInf;
  if (num == -kInf) return -kInf;
  return num - den;
}

bool in_guard_band(double b) { return !std::isfinite(b) || std::abs(b) > kBoundaryBeta; }

// Root of t -> beta(psi(t, y)); beta0 is its value at t = 0.
double tau_block(const ConjugacyStage& stage, const Vec& y, double beta0) {
  if (std::abs(beta0) <= kDomainBeta) return 0.0;
  const auto j = static_cast<std::size_t>(stage.j);
  const double r = 2.0 * (stage.lambdas[j - 1] - stage.lambdas[j] - 2.0 * stage.delta);
  auto f = [&](double t) { return beta_block(stage, y, t); };

  // Slope bounds: beta decreases at least at rate r along the orbit.
  double lo = 0.0;
  double hi = 0.0;
  double flo = beta0;
  double fhi = beta0;
  const double reach = std::abs(beta0) / r;
  for (int grow = 0; grow < 60; ++grow) {
    const double span = reach * (1.0 + 1e-9) * std::ldexp(1.0, grow) + 1e-12;
    if (beta0 > 0.0) {
      hi = span;
      fhi = f(hi);
      if (fhi <= 0.0) break;
    } else {
      lo = -span;
      flo = f(lo);
      if (flo >= 0.0) break;
    }
  }
  if (!(flo >= 0.0 && fhi <= 0.0)) {
    throw Error(ErrorCode::kInternal, "could not bracket the fundamental domain crossing");
  }

  // Illinois variant of regula falsi on the decreasing function f.
  int side = 0;
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    x = (lo * fhi - hi * flo) / (fhi - flo);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    const double fx = f(x);
    if (std::abs(fx) <= kRootBeta) return x;
    if (fx > 0.0) {
      lo = x;
      flo = fx;
      if (side == 1) fhi *= 0.5;
      side = 1;
    } else {
      hi = x;
      fhi = fx;
      if (side == -1) flo *= 0.5;
      side = -1;
    }
    if (hi - lo <= 1e-15 * (1.0 + std::abs(x))) break;
  }
  return x;
}

// Applies the stage in block coordinates. Returns false when y is a fixed
// point (boundary, guard band or fundamental domain).
bool apply_stage_block(const ConjugacyStage& stage, Vec& y) {
  const BlockFrame& f = *stage.frame;
  if (stage.j >= f.block_count()) return false;
  const double b0 = beta_block(stage, y, 0.0);
  if (in_guard_band(b0) || std::abs(b0) <= kDomainBeta) return false;
  const double t = tau_block(stage, y, b0);
  const double log_scale = -stage.gamma * t;  // applied to the W part
  const int w_dim = f.offsets[static_cast<std::size_t>(stage.j)];
  if (log_scale <= 0.0) {
    y.head(w_dim) *= std::exp(log_scale);
  } else {
    y.tail(y.size() - w_dim) *= std::exp(-log_scale);
  }
  y /= y.norm();
  return true;
}

Mat adapted_factor(const Mat& sigma, const SigmaStructure& structure, double delta) {
  const auto n = sigma.rows();
  const Mat id = Mat::Identity(n, n);
  const JordanChevalley jc = jordan_chevalley(sigma, structure.frequencies());

  std::vector<Complex> roots;
  for (double w : structure.frequencies()) {
    if (w == 0.0) {
      roots.emplace_back(0.0, 0.0);
    } else {
      roots.emplace_back(0.0, w);
      roots.emplace_back(0.0, -w);
    }
  }
  // H makes the semisimple part skew: sum of P_c^* P_c over the spectral
  // projectors of S.
  Mat h = id;
  if (roots.size() > 1) {
    const CMat s = jc.semisimple.cast<Complex>();
    const CMat cid = CMat::Identity(n, n);
    h.setZero();
    for (std::size_t c = 0; c < roots.size(); ++c) {
      CMat proj = cid;
      for (std::size_t d = 0; d < roots.size(); ++d) {
        if (d != c) proj = proj * (s - roots[d] * cid) / (roots[c] - roots[d]);
      }
      h += (proj.adjoint() * proj).real();
    }
    h = 0.5 * (h + h.transpose());
  }
  int s_max = 1;
  for (const auto& c : structure.cells) s_max = std::max(s_max, c.size);
  Mat g = Mat::Zero(n, n);
  Mat power = id;
  double weight = 1.0;
  for (int k = 0; k < s_max; ++k) {
    g += weight * power.transpose() * h * power;
    power = jc.nilpotent * power;
    weight /= delta * delta;
  }
  g = 0.5 * (g + g.transpose());
  const Eigen::LLT<Mat> llt(g);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kInternal, "adapted norm Gram matrix is not positive definite");
  }
  return llt.matrixU();
}

}  // namespace

std::string_view to_string(ObstructionKind kind) {
  switch (kind) {
    case ObstructionKind::kBlockCount: return "block-count";
    case ObstructionKind::kBlockDims: return "block-dims";
    case ObstructionKind::kSigmaSpectrum: return "sigma-spectrum";
    case ObstructionKind::kJordanStructure: return "jordan-structure";
  }
  return "unknown";
}

std::string describe_spectrum(const SigmaStructure& sigma) {
  std::ostringstream out;
  out << "{";
  bool first = true;
  for (double w : sigma.frequencies()) {
    if (!first) out << ",";
    first = false;
    if (w == 0.0) {
      out << "0";
    } else {
      out << "±" << w << "i";
    }
  }
  out << "}";
  return out.str();
}

Verdict decide(const LyapunovStructure& a, const LyapunovStructure& b, double eps) {
  if (a.ambient_dim != b.ambient_dim) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cannot compare flows on spaces of dimension " +
                    std::to_string(a.ambient_dim) + " and " + std::to_string(b.ambient_dim));
  }
  const auto pa = reduced_profile(a);
  const auto pb = reduced_profile(b);
  const double tol = eps * (1.0 + std::max(a.spectral_radius, b.spectral_radius));
  Verdict v;
  auto fail = [&](ObstructionKind kind, int block, std::string av, std::string bv) {
    v.conjugate = false;
    v.obstruction = Obstruction{kind, block, std::move(av), std::move(bv)};
    return v;
  };
  if (pa.size() != pb.size()) {
    return fail(ObstructionKind::kBlockCount, -1, std::to_string(pa.size()),
                std::to_string(pb.size()));
  }
  for (std::size_t i = 0; i < pa.size(); ++i) {
    if (pa[i].total_dim() != pb[i].total_dim()) {
      return fail(ObstructionKind::kBlockDims, static_cast<int>(i), dims_list(pa),
                  dims_list(pb));
    }
  }
  for (std::size_t i = 0; i < pa.size(); ++i) {
    if (!same_spectrum(pa[i], pb[i], tol)) {
      return fail(ObstructionKind::kSigmaSpectrum, static_cast<int>(i),
                  describe_spectrum(pa[i]), describe_spectrum(pb[i]));
    }
  }
  for (std::size_t i = 0; i < pa.size(); ++i) {
    if (!same_structure(pa[i], pb[i], tol)) {
      return fail(ObstructionKind::kJordanStructure, static_cast<int>(i), describe(pa[i]),
                  describe(pb[i]));
    }
  }
  v.conjugate = true;
  std::vector<std::pair<int, int>> pairing;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    pairing.emplace_back(static_cast<int>(i), static_cast<int>(i));
  }
  v.pairing = std::move(pairing);
  return v;
}

Verdict decide(const Mat& a, const Mat& b, double eps) {
  require_square(a, "A");
  require_square(b, "B");
  if (a.rows() != b.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cannot compare flows on spaces of dimension " + std::to_string(a.rows()) +
                    " and " + std::to_string(b.rows()));
  }
  return decide(analyze_structure(a, eps), analyze_structure(b, eps), eps);
}

double AdaptedNorm::block_norm(std::size_t i, const Vec& x_i) const {
  return (factors.at(i) * x_i).norm();
}

AdaptedNorm build_adapted_norm(const std::vector<Mat>& sigma_blocks,
                               const std::vector<SigmaStructure>& structures, int j,
                               double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorCode::kInvalidInput, "delta must be positive and finite");
  }
  if (sigma_blocks.size() != structures.size()) {
    throw Error(ErrorCode::kInvalidInput, "one Jordan structure per block is required");
  }
  AdaptedNorm out;
  out.delta = delta;
  out.j = j;
  for (std::size_t l = 0; l < sigma_blocks.size(); ++l) {
    require_square(sigma_blocks[l], "sigma block");
    if (structures[l].total_dim() != sigma_blocks[l].rows()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "Jordan structure does not match its sigma block");
    }
    out.factors.push_back(adapted_factor(sigma_blocks[l], structures[l], delta));
  }
  return out;
}

AdaptedNorm build_adapted_norm(const std::vector<Mat>& sigma_blocks, int j, double delta,
                               double eps) {
  std::vector<SigmaStructure> structures;
  for (const auto& s : sigma_blocks) {
    require_square(s, "sigma block");
    const RecurrenceProfile rp = recurrence_profile(s, eps);
    structures.push_back(rp.sigma);
  }
  return build_adapted_norm(sigma_blocks, structures, j, delta);
}

Mat BlockFrame::assemble(const std::vector<double>& lambdas) const {
  const auto n = t.rows();
  Mat d = Mat::Zero(n, n);
  for (int l = 0; l < block_count(); ++l) {
    const auto o = offsets[static_cast<std::size_t>(l)];
    const auto m = sizes[static_cast<std::size_t>(l)];
    d.block(o, o, m, m) = sigma[static_cast<std::size_t>(l)] +
                          lambdas[static_cast<std::size_t>(l)] * Mat::Identity(m, m);
  }
  return t * d * t_inv;
}

double beta(const ConjugacyStage& stage, const ProjPoint& p) {
  return beta_block(stage, stage.frame->t_inv * p.rep(), 0.0);
}

double tau(const ConjugacyStage& stage, const ProjPoint& p) {
  const Vec y = stage.frame->t_inv * p.rep();
  const double b0 = beta_block(stage, y, 0.0);
  if (in_guard_band(b0)) {
    std::ostringstream msg;
    msg << "point lies in the boundary guard band (beta = " << b0 << ")";
    throw Error(ErrorCode::kNearBoundary, msg.str());
  }
  return tau_block(stage, y, b0);
}

ProjPoint eval_stage(const ConjugacyStage& stage, const ProjPoint& p) {
  Vec y = stage.frame->t_inv * p.rep();
  if (!apply_stage_block(stage, y)) return p;
  return proj_point(stage.frame->t * y);
}

ConjugacyChain build_chain(const Mat& a, const Mat& b, double eps) {
  require_square(a, "A");
  require_square(b, "B");
  if (a.rows() != b.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cannot conjugate flows on spaces of dimension " + std::to_string(a.rows()) +
                    " and " + std::to_string(b.rows()));
  }
  const LyapunovStructure la = analyze_structure(a, eps);
  const LyapunovStructure lb = analyze_structure(b, eps);
  const Verdict v = decide(la, lb, eps);
  if (!v.conjugate) {
    const Obstruction& o = *v.obstruction;
    throw Error(ErrorCode::kNotConjugate,
                std::string(to_string(o.kind)) + " differs: " + o.a_value + " vs " + o.b_value);
  }

  const int n = la.ambient_dim;
  const int k = static_cast<int>(la.blocks.size());
  auto frame = std::make_shared<BlockFrame>();
  frame->t.resize(n, n);
  int at = 0;
  for (const auto& blk : la.blocks) {
    const int m = blk.space.dim();
    frame->t.middleCols(at, m) = blk.space.basis();
    frame->offsets.push_back(at);
    frame->sizes.push_back(m);
    frame->structures.push_back(blk.sigma);
    at += m;
  }
  frame->t_inv = frame->t.partialPivLu().inverse();
  const Mat local = frame->t_inv * a * frame->t;
  Mat dropped = local;
  for (int l = 0; l < k; ++l) {
    const int o = frame->offsets[static_cast<std::size_t>(l)];
    const int m = frame->sizes[static_cast<std::size_t>(l)];
    frame->sigma.push_back(local.block(o, o, m, m) -
                           la.blocks[static_cast<std::size_t>(l)].lambda * Mat::Identity(m, m));
    dropped.block(o, o, m, m).setZero();
  }

  ConjugacyChain chain;
  chain.frame = frame;
  chain.source = a;
  chain.block_residual = dropped.norm() / std::max(1.0, a.norm());
  for (int l = 0; l < k; ++l) {
    chain.lambdas.push_back(la.blocks[static_cast<std::size_t>(l)].lambda);
    chain.mus.push_back(lb.blocks[static_cast<std::size_t>(l)].lambda);
  }
  chain.gammas.assign(static_cast<std::size_t>(k), 0.0);
  for (int i = k - 1; i >= 0; --i) {
    const auto u = static_cast<std::size_t>(i);
    chain.gammas[u] = chain.mus[u] - chain.lambdas[u];
    if (i + 1 < k) chain.gammas[u] -= chain.mus[u + 1] - chain.lambdas[u + 1];
  }

  const double skip = eps * (1.0 + std::max(la.spectral_radius, lb.spectral_radius));
  std::vector<double> cur = chain.lambdas;
  for (int i = k; i >= 1; --i) {
    const double gamma = chain.gammas[static_cast<std::size_t>(i - 1)];
    if (std::abs(gamma) <= skip) continue;
    ConjugacyStage stage;
    stage.gamma = gamma;
    stage.j = i;
    stage.lambdas = cur;
    stage.frame = frame;
    double g = 1.0;
    if (i < k) {
      const double gap = cur[static_cast<std::size_t>(i - 1)] - cur[static_cast<std::size_t>(i)];
      g = std::min(gap, gamma + gap);
      if (!(g > 0.0)) {
        std::ostringstream msg;
        msg << "stage j=" << i << " violates gamma + lambda_j > lambda_(j+1) (gamma = " << gamma
            << ", gap = " << gap << ")";
        throw Error(ErrorCode::kInternal, msg.str());
      }
    } else if (k > 1) {
      g = kInf;
      for (int l = 0; l + 1 < k; ++l) {
        g = std::min(g, cur[static_cast<std::size_t>(l)] - cur[static_cast<std::size_t>(l + 1)]);
      }
    }
    stage.delta = g / 8.0;
    stage.norm = build_adapted_norm(frame->sigma, frame->structures, i, stage.delta);
    stage.a_stage = frame->assemble(cur);
    for (int l = 0; l < i; ++l) cur[static_cast<std::size_t>(l)] += gamma;
    stage.b_stage = frame->assemble(cur);
    const int w_dim = frame->offsets.size() > static_cast<std::size_t>(i)
                          ? frame->offsets[static_cast<std::size_t>(i)]
                          : n;
    stage.w_space = Subspace::span(frame->t.leftCols(w_dim));
    stage.z_space = Subspace::span(frame->t.rightCols(n - w_dim));
    chain.stages.push_back(std::move(stage));
  }
  chain.target = frame->assemble(cur);
  return chain;
}

ProjPoint eval_chain(const ConjugacyChain& chain, const ProjPoint& p) {
  if (chain.stages.empty()) return p;
  Vec y = chain.frame->t_inv * p.rep();
  bool moved = false;
  for (const auto& stage : chain.stages) moved = apply_stage_block(stage, y) || moved;
  if (!moved) return p;
  return proj_point(chain.frame->t * y);
}

VerificationReport verify_chain(const ConjugacyChain& chain, int n_points,
                                const std::vector<double>& times, double tol,
                                std::uint64_t seed) {
  if (!(tol > 0.0)) throw Error(ErrorCode::kInvalidTolerance, "tol must be positive");
  if (n_points < 0) throw Error(ErrorCode::kInvalidInput, "point count must be non-negative");
  VerificationReport rep;
  rep.n_points = n_points;
  rep.n_times = static_cast<int>(times.size());
  rep.tol = tol;
  rep.seed = seed;
  const int n = static_cast<int>(chain.source.rows());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  auto gaussian = [&](int dim) {
    Vec x(dim);
    for (int i = 0; i < dim; ++i) x(i) = normal(rng);
    return x;
  };

  std::vector<ProjPoint> points;
  std::vector<ProjPoint> images;
  for (int i = 0; i < n_points; ++i) {
    const ProjPoint p = proj_point(gaussian(n));
    const Vec y = chain.frame ? Vec(chain.frame->t_inv * p.rep()) : p.rep();
    for (const auto& stage : chain.stages) {
      if (in_guard_band(beta_block(stage, y, 0.0)) && stage.j < stage.frame->block_count()) {
        ++rep.boundary_points;
        break;
      }
    }
    const ProjPoint hp = eval_chain(chain, p);
    for (double t : times) {
      const ProjPoint lhs = eval_chain(chain, proj_flow(chain.source, t, p));
      const ProjPoint rhs = proj_flow(chain.target, t, hp);
      const double d = proj_dist(lhs, rhs);
      if (d >= rep.max_violation) {
        rep.max_violation = d;
        rep.worst_point = p;
        rep.worst_time = t;
      }
    }
    points.push_back(p);
    images.push_back(hp);
  }

  rep.min_separation_ratio = kInf;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t k = i + 1; k < points.size(); ++k) {
      const double d = proj_dist(points[i], points[k]);
      if (d <= tol) continue;
      const double di = proj_dist(images[i], images[k]);
      rep.min_separation_ratio = std::min(rep.min_separation_ratio, di / d);
      if (di <= tol / 10.0) rep.injective = false;
    }
  }
  if (rep.min_separation_ratio == kInf) rep.min_separation_ratio = 0.0;

  // Points of W and Z are fixed by their stage.
  const int per_side = std::min(n_points, 10);
  for (const auto& stage : chain.stages) {
    const BlockFrame& f = *stage.frame;
    if (stage.j >= f.block_count()) continue;
    const int w_dim = f.offsets[static_cast<std::size_t>(stage.j)];
    for (int side = 0; side < 2; ++side) {
      for (int s = 0; s < per_side; ++s) {
        Vec y = Vec::Zero(n);
        if (side == 0) {
          y.head(w_dim) = gaussian(w_dim);
        } else {
          y.tail(n - w_dim) = gaussian(n - w_dim);
        }
        const ProjPoint q = proj_point(f.t * y);
        Vec moved = y;
        const ProjPoint image =
            apply_stage_block(stage, moved) ? proj_point(f.t * moved) : q;
        const double d = proj_dist(image, q);
        rep.max_boundary_displacement = std::max(rep.max_boundary_displacement, d);
        if (d > tol) rep.boundary_fixed = false;
      }
    }
  }
  rep.passed = rep.max_violation <= tol && rep.injective && rep.boundary_fixed;
  return rep;
}

}  // namespace projconj
