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

#include "projconj/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <tuple>

#include "projconj/error.hpp"
#include "schur.hpp"

namespace projconj {
namespace {

// Relative size of the backward error assumed for the eigensolver,
// including a condition-number allowance of about 1e3.
constexpr double kRoundingLevel = 1e-12;

struct Cluster {
  std::vector<int> members;  // Schur diagonal positions
  Complex center;
  std::vector<int> cell_sizes;
  bool real = false;
  int conjugate = -1;  // partner cluster for non-real clusters
};

// Largest admissible diameter for a cluster whose longest Jordan cell has
// size s: a cell perturbed at relative level eta scatters on a circle of
// radius about eta^(1/s) times the matrix scale.
double cluster_tol(int s, double scale, double merge_tol) {
  return std::max(merge_tol, 4.0 * std::pow(kRoundingLevel, 1.0 / s) * scale);
}

double diameter(const std::vector<Complex>& values, const std::vector<int>& group) {
  double d = 0.0;
  for (std::size_t i = 0; i < group.size(); ++i) {
    for (std::size_t k = i + 1; k < group.size(); ++k) {
      d = std::max(d, std::abs(values[group[i]] - values[group[k]]));
    }
  }
  return d;
}

double operator_norm(const CMat& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<CMat>(m).singularValues()(0);
}

// Jordan cell sizes of a nearly nilpotent triangular block, from the
// staircase #cells of size >= k = rank(N^(k-1)) - rank(N^k). Empty when the
// ranks do not settle into a nilpotent pattern.
std::vector<int> staircase_cell_sizes(const CMat& n, double eps) {
  const auto m = static_cast<int>(n.rows());
  const double scale = std::max(1.0, operator_norm(n));
  std::vector<int> at_least;  // at_least[k-1] = #cells of size >= k
  int prev_rank = m;
  CMat power = n;
  for (int k = 1; prev_rank > 0; ++k) {
    if (k > m) return {};
    const Eigen::VectorXd sv = Eigen::JacobiSVD<CMat>(power).singularValues();
    const double threshold = eps * std::pow(scale, k);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv(i) > threshold) ++rank;
    }
    if (rank >= prev_rank) return {};
    at_least.push_back(prev_rank - rank);
    prev_rank = rank;
    power = power * n;
  }
  std::vector<int> sizes;
  for (std::size_t k = 0; k < at_least.size(); ++k) {
    const int next = k + 1 < at_least.size() ? at_least[k + 1] : 0;
    for (int c = 0; c < at_least[k] - next; ++c) {
      sizes.push_back(static_cast<int>(k + 1));
    }
  }
  if (std::accumulate(sizes.begin(), sizes.end(), 0) != m) return {};
  std::sort(sizes.rbegin(), sizes.rend());
  return sizes;
}

// Members at the outer edge of the scatter. A generically perturbed cell of
// size s places s eigenvalues on a roughly regular polygon, so a genuine
// cluster whose longest cell is s has at least s members out there. Scatter
// within `noise` of the center carries no shape information.
int outer_ring_count(const std::vector<Complex>& values,
                     const std::vector<int>& group, const Complex& center,
                     double noise) {
  double radius = 0.0;
  for (int i : group) radius = std::max(radius, std::abs(values[i] - center));
  if (radius <= noise) return static_cast<int>(group.size());
  int count = 0;
  for (int i : group) {
    if (std::abs(values[i] - center) >= radius / 20.0) ++count;
  }
  return count;
}

struct ClusterContext {
  const detail::ReorderableSchur* base;
  std::vector<Complex> values;    // conjugate-symmetric eigenvalues
  std::vector<int> schur_pos;     // values[i] sits at this Schur position
  double scale;
  double merge_tol;
  double eps;
};

// Greedy nearest bijection between eigenvalues and Schur diagonal entries.
std::vector<int> match_schur(const std::vector<Complex>& values,
                             const Eigen::VectorXcd& diag) {
  const auto n = values.size();
  std::vector<std::tuple<double, int, int>> pairs;
  pairs.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      pairs.emplace_back(std::abs(values[i] - diag(static_cast<Eigen::Index>(k))),
                         static_cast<int>(i), static_cast<int>(k));
    }
  }
  std::sort(pairs.begin(), pairs.end());
  std::vector<int> pos(n, -1);
  std::vector<bool> taken(n, false);
  for (const auto& [d, i, k] : pairs) {
    if (pos[i] >= 0 || taken[k]) continue;
    pos[i] = k;
    taken[k] = true;
  }
  return pos;
}

// Accepts `group` when its reordered Schur block, shifted by the group mean,
// has a consistent rank staircase and the group is tight for the longest
// cell found; otherwise splits at the longest minimum-spanning-tree edge.
void split_group(const ClusterContext& ctx, const std::vector<int>& group,
                 std::vector<Cluster>& out) {
  const int m = static_cast<int>(group.size());
  Complex sum = 0.0;
  for (int i : group) sum += ctx.values[i];
  const Complex center = sum / static_cast<double>(m);

  if (m == 1) {
    out.push_back({group, center, {1}});
    return;
  }
  const double diam = diameter(ctx.values, group);
  if (diam <= cluster_tol(m, ctx.scale, ctx.merge_tol)) {
    detail::ReorderableSchur schur = *ctx.base;
    std::vector<bool> sel(ctx.values.size(), false);
    for (int i : group) sel[static_cast<std::size_t>(ctx.schur_pos[i])] = true;
    schur.bring_to_front(sel);
    const CMat shifted =
        schur.t().topLeftCorner(m, m) - center * CMat::Identity(m, m);
    std::vector<int> sizes = staircase_cell_sizes(shifted, ctx.eps);
    if (!sizes.empty() &&
        diam <= cluster_tol(sizes.front(), ctx.scale, ctx.merge_tol) &&
        outer_ring_count(ctx.values, group, center,
                         100.0 * cluster_tol(1, ctx.scale, ctx.merge_tol)) >=
            sizes.front()) {
      out.push_back({group, center, std::move(sizes)});
      return;
    }
  }

  // Prim's algorithm over the group.
  std::vector<bool> in_tree(m, false);
  std::vector<double> best(m, std::numeric_limits<double>::infinity());
  std::vector<int> parent(m, -1);
  best[0] = 0.0;
  for (int step = 0; step < m; ++step) {
    int pick = -1;
    for (int i = 0; i < m; ++i) {
      if (!in_tree[i] && (pick < 0 || best[i] < best[pick])) pick = i;
    }
    in_tree[pick] = true;
    for (int i = 0; i < m; ++i) {
      if (in_tree[i]) continue;
      const double d = std::abs(ctx.values[group[pick]] - ctx.values[group[i]]);
      if (d < best[i]) {
        best[i] = d;
        parent[i] = pick;
      }
    }
  }
  int cut = -1;
  for (int i = 1; i < m; ++i) {
    if (parent[i] >= 0 && (cut < 0 || best[i] > best[cut])) cut = i;
  }
  // Component containing `cut` once the edge (cut, parent[cut]) is removed.
  std::vector<bool> below(m, false);
  below[cut] = true;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < m; ++i) {
      if (!below[i] && parent[i] >= 0 && below[parent[i]]) {
        below[i] = true;
        changed = true;
      }
    }
  }
  std::vector<int> first;
  std::vector<int> second;
  for (int i = 0; i < m; ++i) (below[i] ? second : first).push_back(group[i]);
  split_group(ctx, first, out);
  split_group(ctx, second, out);
}

std::vector<Cluster> cluster_eigenvalues(const ClusterContext& ctx) {
  const int n = static_cast<int>(ctx.values.size());
  std::vector<int> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 0);
  std::vector<Cluster> clusters;
  split_group(ctx, all, clusters);

  // Exact conjugate of each eigenvalue, as an index.
  std::vector<int> mirror(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (mirror[k] < 0 && ctx.values[k] == std::conj(ctx.values[i]) &&
          (k != i || ctx.values[i].imag() == 0.0)) {
        mirror[i] = k;
        mirror[k] = i;
        break;
      }
    }
  }
  std::vector<int> owner(static_cast<std::size_t>(n), -1);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (int i : clusters[c].members) owner[i] = static_cast<int>(c);
  }
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    Cluster& cl = clusters[c];
    const int partner = mirror[cl.members.front()] < 0
                            ? -1
                            : owner[mirror[cl.members.front()]];
    bool closed = partner >= 0;
    for (int i : cl.members) {
      closed = closed && mirror[i] >= 0 && owner[mirror[i]] == partner;
    }
    if (!closed || clusters[partner].members.size() != cl.members.size()) {
      std::ostringstream msg;
      msg << "eigenvalue cluster at " << cl.center
          << " is not matched by its complex conjugate";
      throw Error(ErrorCode::kAmbiguousStructure, msg.str());
    }
    if (partner == static_cast<int>(c)) {
      cl.real = true;
      cl.center = {cl.center.real(), 0.0};
    } else {
      cl.conjugate = partner;
    }
  }
  for (auto& cl : clusters) {
    if (!cl.real && cl.center.imag() > 0.0 &&
        clusters[cl.conjugate].cell_sizes != cl.cell_sizes) {
      std::ostringstream msg;
      msg << "eigenvalue cluster at " << cl.center
          << " and its conjugate disagree on Jordan structure";
      throw Error(ErrorCode::kAmbiguousStructure, msg.str());
    }
  }
  return clusters;
}

}  // namespace

int SigmaStructure::total_dim() const {
  int total = 0;
  for (const auto& c : cells) total += c.real_dim();
  return total;
}

std::vector<double> SigmaStructure::frequencies() const {
  std::vector<double> out;
  for (const auto& c : cells) out.push_back(c.omega);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SigmaStructure SigmaStructure::canonical() const {
  SigmaStructure out = *this;
  std::sort(out.cells.begin(), out.cells.end(),
            [](const JordanCell& a, const JordanCell& b) {
              if (a.omega != b.omega) return a.omega > b.omega;
              return a.size > b.size;
            });
  return out;
}

bool same_structure(const SigmaStructure& a, const SigmaStructure& b,
                    double omega_tol) {
  if (a.cells.size() != b.cells.size()) return false;
  std::vector<bool> used(b.cells.size(), false);
  for (const auto& ca : a.cells) {
    bool found = false;
    for (std::size_t k = 0; k < b.cells.size(); ++k) {
      if (used[k] || b.cells[k].size != ca.size) continue;
      if (std::abs(b.cells[k].omega - ca.omega) <= omega_tol) {
        used[k] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

LyapunovStructure analyze_structure(const Mat& a, double eps) {
  require_square(a, "analyze_structure input");
  if (!(eps > 0.0)) {
    throw Error(ErrorCode::kInvalidTolerance, "eps must be positive");
  }
  const int n = static_cast<int>(a.rows());
  std::vector<Complex> values = eigvals(a);
  const double rho = spectral_radius(values);
  const double merge_tol = eps * (1.0 + rho);
  const detail::ReorderableSchur base(a);
  std::vector<int> schur_pos = match_schur(values, base.diagonal());
  const ClusterContext ctx{&base, std::move(values), std::move(schur_pos),
                           1.0 + Eigen::JacobiSVD<Mat>(a).singularValues()(0),
                           merge_tol, eps};
  const std::vector<Cluster> clusters = cluster_eigenvalues(ctx);

  // Representatives: real clusters and upper half-plane clusters.
  std::vector<int> reps;
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    if (clusters[i].real || clusters[i].center.imag() > 0.0) {
      reps.push_back(static_cast<int>(i));
    }
  }
  std::sort(reps.begin(), reps.end(), [&](int x, int y) {
    const auto& cx = clusters[x].center;
    const auto& cy = clusters[y].center;
    if (cx.real() != cy.real()) return cx.real() > cy.real();
    return cx.imag() < cy.imag();
  });

  // Group representatives into Lyapunov blocks by real part.
  std::vector<std::vector<int>> block_reps;
  for (std::size_t r = 0; r < reps.size(); ++r) {
    if (r == 0) {
      block_reps.push_back({reps[r]});
      continue;
    }
    const Complex prev = clusters[reps[r - 1]].center;
    const Complex cur = clusters[reps[r]].center;
    const double gap = prev.real() - cur.real();
    if (gap <= merge_tol) {
      block_reps.back().push_back(reps[r]);
    } else if (gap <= 10.0 * merge_tol) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "real parts of eigenvalues " << prev << " and " << cur
          << " differ by " << gap << ", within a factor 10 of the merge "
          << "tolerance " << merge_tol;
      throw Error(ErrorCode::kAmbiguousClustering, msg.str());
    } else {
      block_reps.push_back({reps[r]});
    }
  }

  LyapunovStructure out;
  out.ambient_dim = n;
  out.spectral_radius = rho;
  for (const auto& group : block_reps) {
    LyapunovBlockInfo info;
    double weighted = 0.0;
    int weight = 0;
    std::vector<bool> in_block(static_cast<std::size_t>(n), false);
    for (int rep : group) {
      const Cluster& c = clusters[rep];
      const int real_mult = static_cast<int>(c.members.size()) * (c.real ? 1 : 2);
      weighted += c.center.real() * real_mult;
      weight += real_mult;
      for (int i : c.members) {
        in_block[static_cast<std::size_t>(ctx.schur_pos[i])] = true;
      }
      if (!c.real) {
        for (int i : clusters[c.conjugate].members) {
          in_block[static_cast<std::size_t>(ctx.schur_pos[i])] = true;
        }
      }
      for (int size : c.cell_sizes) {
        info.sigma.cells.push_back({c.real ? 0.0 : c.center.imag(), size});
      }
    }
    info.lambda = weighted / weight;
    info.sigma = info.sigma.canonical();

    detail::ReorderableSchur schur = base;
    const int m = schur.bring_to_front(in_block);
    const CMat lead = schur.q().leftCols(m);
    Mat parts(n, 2 * m);
    parts << lead.real(), lead.imag();
    const Eigen::JacobiSVD<Mat> svd(parts, Eigen::ComputeThinU);
    const Eigen::VectorXd& sv = svd.singularValues();
    if (m < sv.size() && sv(m) > 1e-6 * sv(0)) {
      throw Error(ErrorCode::kInternal,
                  "Lyapunov space is not closed under conjugation");
    }
    info.space = Subspace::from_orthonormal(svd.matrixU().leftCols(m));
    if (info.space.dim() != info.sigma.total_dim()) {
      throw Error(ErrorCode::kInternal,
                  "Lyapunov space dimension disagrees with its Jordan cells");
    }
    out.blocks.push_back(std::move(info));
  }
  return out;
}

std::vector<SigmaStructure> reduced_profile(const LyapunovStructure& ls) {
  std::vector<SigmaStructure> out;
  out.reserve(ls.blocks.size());
  for (const auto& b : ls.blocks) out.push_back(b.sigma.canonical());
  return out;
}

DProfile d_profile(const SigmaStructure& sigma) {
  if (sigma.cells.empty()) {
    throw Error(ErrorCode::kInvalidInput, "d_profile of an empty structure");
  }
  DProfile p;
  for (const auto& c : sigma.cells) p.s_max = std::max(p.s_max, c.size);
  p.d.assign(static_cast<std::size_t>(p.s_max), 0);
  for (const auto& c : sigma.cells) {
    p.d[static_cast<std::size_t>(c.size - 1)] += c.omega == 0.0 ? 1 : 2;
  }
  return p;
}

void validate_blocks(std::span<const BlockSpec> blocks) {
  if (blocks.empty()) {
    throw Error(ErrorCode::kInvalidInput, "block list is empty");
  }
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& b = blocks[i];
    const std::string where = "blocks[" + std::to_string(i) + "]";
    if (!std::isfinite(b.lambda)) {
      throw Error(ErrorCode::kInvalidInput, where + ".lambda is not finite");
    }
    if (i > 0 && !(blocks[i - 1].lambda > b.lambda)) {
      throw Error(ErrorCode::kInvalidInput,
                  where + ".lambda must be strictly below the previous block");
    }
    if (b.cells.empty()) {
      throw Error(ErrorCode::kInvalidInput, where + ".cells is empty");
    }
    for (std::size_t k = 0; k < b.cells.size(); ++k) {
      const auto& c = b.cells[k];
      const std::string cw = where + ".cells[" + std::to_string(k) + "]";
      if (c.size < 1) throw Error(ErrorCode::kInvalidInput, cw + ".size must be >= 1");
      if (!std::isfinite(c.omega) || c.omega < 0.0) {
        throw Error(ErrorCode::kInvalidInput, cw + ".omega must be finite and >= 0");
      }
    }
  }
}

Mat materialize(std::span<const BlockSpec> blocks) {
  validate_blocks(blocks);
  int n = 0;
  for (const auto& b : blocks) {
    for (const auto& c : b.cells) n += c.real_dim();
  }
  Mat a = Mat::Zero(n, n);
  int at = 0;
  for (const auto& b : blocks) {
    for (const auto& c : b.cells) {
      if (c.omega == 0.0) {
        for (int i = 0; i < c.size; ++i) {
          a(at + i, at + i) = b.lambda;
          if (i + 1 < c.size) a(at + i, at + i + 1) = 1.0;
        }
      } else {
        for (int i = 0; i < c.size; ++i) {
          const int r = at + 2 * i;
          a(r, r) = b.lambda;
          a(r, r + 1) = -c.omega;
          a(r + 1, r) = c.omega;
          a(r + 1, r + 1) = b.lambda;
          if (i + 1 < c.size) {
            a(r, r + 2) = 1.0;
            a(r + 1, r + 3) = 1.0;
          }
        }
      }
      at += c.real_dim();
    }
  }
  return a;
}

LyapunovStructure structure_from_blocks(std::span<const BlockSpec> blocks) {
  validate_blocks(blocks);
  LyapunovStructure out;
  for (const auto& b : blocks) {
    for (const auto& c : b.cells) out.ambient_dim += c.real_dim();
  }
  int at = 0;
  for (const auto& b : blocks) {
    LyapunovBlockInfo info;
    info.lambda = b.lambda;
    info.sigma.cells = b.cells;
    info.sigma = info.sigma.canonical();
    std::vector<int> idx;
    for (int i = 0; i < info.sigma.total_dim(); ++i) idx.push_back(at + i);
    at += info.sigma.total_dim();
    info.space = Subspace::coordinates(out.ambient_dim, idx);
    for (const auto& c : b.cells) {
      out.spectral_radius =
          std::max(out.spectral_radius, std::hypot(b.lambda, c.omega));
    }
    out.blocks.push_back(std::move(info));
  }
  return out;
}

Mat restrict_to(const Mat& a, const Subspace& space) {
  return space.basis().transpose() * a * space.basis();
}

std::string describe(const SigmaStructure& sigma) {
  std::ostringstream out;
  out << "{";
  const auto canon = sigma.canonical();
  for (std::size_t i = 0; i < canon.cells.size(); ++i) {
    if (i > 0) out << ",";
    out << "(" << canon.cells[i].omega << "," << canon.cells[i].size << ")";
  }
  out << "}";
  return out.str();
}

}  // namespace projconj
