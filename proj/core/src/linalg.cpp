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

#include "projconj/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "projconj/error.hpp"

namespace projconj {
namespace {

// Pade coefficients for exp, degrees 3..13.
constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0,
                                          420.0,   30.0,    1.0};
constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0,
                                          277200.0,   25200.0,   1512.0,
                                          56.0,       1.0};
constexpr std::array<double, 10> kPade9 = {
    17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
    2162160.0,     110880.0,     3960.0,       90.0,        1.0};
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0,  129060195264000.0,   10559470521600.0,
    670442572800.0,      33522128640.0,       1323241920.0,
    40840800.0,          960960.0,            16380.0,
    182.0,               1.0};

// Largest 1-norms for which the degree 3, 5, 7, 9 and 13 approximants reach
// unit roundoff in double precision.
constexpr std::array<double, 4> kThetaLow = {1.495585217958292e-2,
                                             2.539398330063230e-1,
                                             9.504178996162932e-1,
                                             2.097847961257068e0};
constexpr double kTheta13 = 5.371920351148152e0;

double norm1(const Mat& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

template <std::size_t N>
Mat pade_low(const Mat& a, const std::array<double, N>& b) {
  const auto n = a.rows();
  const Mat id = Mat::Identity(n, n);
  const Mat a2 = a * a;
  Mat even_power = id;
  Mat u_sum = Mat::Zero(n, n);
  Mat v_sum = Mat::Zero(n, n);
  for (std::size_t k = 0; k < N; k += 2) {
    v_sum += b[k] * even_power;
    if (k + 1 < N) u_sum += b[k + 1] * even_power;
    even_power = even_power * a2;
  }
  const Mat u = a * u_sum;
  return (v_sum - u).partialPivLu().solve(v_sum + u);
}

Mat pade13(const Mat& a) {
  const auto& b = kPade13;
  const auto n = a.rows();
  const Mat id = Mat::Identity(n, n);
  const Mat a2 = a * a;
  const Mat a4 = a2 * a2;
  const Mat a6 = a4 * a2;
  const Mat u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) +
                      b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id;
  const Mat u = a * u_inner;
  const Mat v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
                b[4] * a4 + b[2] * a2 + b[0] * id;
  return (v - u).partialPivLu().solve(v + u);
}

// Pivoted Gram-Schmidt on the projector columns of an orthonormal basis.
Mat canonical_basis(const Mat& q) {
  const auto n = q.rows();
  const auto m = q.cols();
  Mat residual = q * q.transpose();
  Mat out(n, m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const Vec norms = residual.colwise().norm();
    const double best = norms.maxCoeff();
    Eigen::Index pick = 0;
    for (Eigen::Index c = 0; c < n; ++c) {
      if (norms(c) >= best * (1.0 - 1e-9)) {
        pick = c;
        break;
      }
    }
    Vec col = residual.col(pick) / norms(pick);
    for (Eigen::Index p = 0; p < r; ++p) col -= out.col(p).dot(col) * out.col(p);
    col.normalize();
    out.col(r) = col;
    residual -= col * (col.transpose() * residual);
  }
  return out;
}

}  // namespace

void require_square(const Mat& m, std::string_view what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw Error(ErrorCode::kInvalidInput,
                std::string(what) + " must be a non-empty square matrix, got " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (!m.allFinite()) {
    throw Error(ErrorCode::kInvalidInput,
                std::string(what) + " has non-finite entries");
  }
}

Mat expm(const Mat& m, double t) {
  require_square(m, "expm generator");
  if (!std::isfinite(t)) {
    throw Error(ErrorCode::kInvalidInput, "expm time must be finite");
  }
  const auto n = m.rows();
  Mat a = m * t;
  const double a_norm = norm1(a);
  if (a_norm == 0.0) return Mat::Identity(n, n);

  if (a_norm <= kThetaLow[0]) return pade_low(a, kPade3);
  if (a_norm <= kThetaLow[1]) return pade_low(a, kPade5);
  if (a_norm <= kThetaLow[2]) return pade_low(a, kPade7);
  if (a_norm <= kThetaLow[3]) return pade_low(a, kPade9);

  const int squarings =
      std::max(0, static_cast<int>(std::ceil(std::log2(a_norm / kTheta13))));
  a *= std::ldexp(1.0, -squarings);
  Mat r = pade13(a);
  for (int i = 0; i < squarings; ++i) r = r * r;
  return r;
}

int rank_tol(const Mat& m, double eps) {
  if (!(eps > 0.0)) {
    throw Error(ErrorCode::kInvalidTolerance,
                "rank tolerance must be positive, got " + std::to_string(eps));
  }
  if (m.size() == 0) return 0;
  const Vec sv = Eigen::JacobiSVD<Mat>(m).singularValues();
  if (sv(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > eps * sv(0)) ++rank;
  }
  return rank;
}

std::vector<Complex> eigvals(const Mat& m) {
  require_square(m, "eigvals input");
  const Eigen::EigenSolver<Mat> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kInternal, "eigenvalue iteration did not converge");
  }
  std::vector<Complex> values(solver.eigenvalues().begin(),
                              solver.eigenvalues().end());

  // Pair every upper half-plane value with the nearest unpaired lower one
  // and average the pair so that it is exactly conjugate.
  std::vector<bool> used(values.size(), false);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].imag() <= 0.0 || used[i]) continue;
    std::size_t partner = values.size();
    double best = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
      if (k == i || used[k] || values[k].imag() >= 0.0) continue;
      const double d = std::abs(values[k] - std::conj(values[i]));
      if (partner == values.size() || d < best) {
        partner = k;
        best = d;
      }
    }
    if (partner == values.size()) continue;
    const double re = 0.5 * (values[i].real() + values[partner].real());
    const double im = 0.5 * (values[i].imag() - values[partner].imag());
    values[i] = {re, im};
    values[partner] = {re, -im};
    used[i] = used[partner] = true;
  }

  std::sort(values.begin(), values.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  return values;
}

double spectral_radius(const std::vector<Complex>& values) {
  double r = 0.0;
  for (const auto& v : values) r = std::max(r, std::abs(v));
  return r;
}

Subspace::Subspace(int ambient_dim)
    : ambient_dim_(ambient_dim), basis_(ambient_dim, 0) {}

Subspace Subspace::span(const Mat& vectors, double tol) {
  Subspace out(static_cast<int>(vectors.rows()));
  if (vectors.cols() == 0 || vectors.rows() == 0) return out;
  const Eigen::JacobiSVD<Mat> svd(vectors, Eigen::ComputeThinU);
  const Vec& sv = svd.singularValues();
  if (sv(0) == 0.0) return out;
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > tol * sv(0)) ++r;
  return from_orthonormal(svd.matrixU().leftCols(r));
}

Subspace Subspace::from_orthonormal(const Mat& basis) {
  Subspace out(static_cast<int>(basis.rows()));
  if (basis.cols() > 0) out.basis_ = canonical_basis(basis);
  return out;
}

Subspace Subspace::whole(int ambient_dim) {
  Subspace out(ambient_dim);
  out.basis_ = Mat::Identity(ambient_dim, ambient_dim);
  return out;
}

Subspace Subspace::coordinates(int ambient_dim, const std::vector<int>& indices) {
  Subspace out(ambient_dim);
  std::vector<int> sorted = indices;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  out.basis_ = Mat::Zero(ambient_dim, static_cast<Eigen::Index>(sorted.size()));
  for (std::size_t c = 0; c < sorted.size(); ++c) {
    if (sorted[c] < 0 || sorted[c] >= ambient_dim) {
      throw Error(ErrorCode::kInvalidInput, "coordinate index out of range");
    }
    out.basis_(sorted[c], static_cast<Eigen::Index>(c)) = 1.0;
  }
  return out;
}

Mat Subspace::projector() const { return basis_ * basis_.transpose(); }

Vec Subspace::project(const Vec& x) const {
  return basis_ * (basis_.transpose() * x);
}

double Subspace::distance(const Vec& x) const { return (x - project(x)).norm(); }

bool Subspace::contains(const Subspace& other, double tol) const {
  if (other.ambient_dim() != ambient_dim_) return false;
  for (Eigen::Index c = 0; c < other.basis().cols(); ++c) {
    if (distance(other.basis().col(c)) > tol) return false;
  }
  return true;
}

Subspace null_space(const Mat& m, int dim) {
  const auto n = m.cols();
  if (dim < 0 || dim > n) {
    throw Error(ErrorCode::kInvalidInput, "null space dimension out of range");
  }
  const Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  return Subspace::from_orthonormal(svd.matrixV().rightCols(dim));
}

Subspace leading_span(const Mat& m, int dim) {
  if (dim < 0 || dim > std::min(m.rows(), m.cols())) {
    throw Error(ErrorCode::kInvalidInput, "leading span dimension out of range");
  }
  if (dim == 0) return Subspace(static_cast<int>(m.rows()));
  const Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
  return Subspace::from_orthonormal(svd.matrixU().leftCols(dim));
}

Subspace kernel(const Mat& m, double eps) {
  const int r = rank_tol(m, eps);
  return null_space(m, static_cast<int>(m.cols()) - r);
}

Subspace image(const Mat& m, double eps) {
  const int r = rank_tol(m, eps);
  const Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU);
  return Subspace::from_orthonormal(svd.matrixU().leftCols(r));
}

Subspace intersect(const Subspace& a, const Subspace& b, double eps) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cannot intersect subspaces of different ambient dimension");
  }
  if (a.dim() == 0 || b.dim() == 0) return Subspace(a.ambient_dim());
  Mat stacked(a.ambient_dim(), a.dim() + b.dim());
  stacked << a.basis(), -b.basis();
  const Subspace coeffs = kernel(stacked, eps);
  if (coeffs.dim() == 0) return Subspace(a.ambient_dim());
  return Subspace::span(a.basis() * coeffs.basis().topRows(a.dim()), eps);
}

}  // namespace projconj
