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

#include <complex>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace projconj {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;

inline constexpr double kDefaultRankTol = 1e-8;

// Throws kInvalidInput unless `m` is non-empty, square and finite.
void require_square(const Mat& m, std::string_view what = "matrix");

/// e^{m t} by scaling and squaring with a Pade approximant whose degree
/// (3, 5, 7, 9 or 13) is picked from the 1-norm of m t.
Mat expm(const Mat& m, double t);

/// Number of singular values greater than eps times the largest one.
/// The zero matrix has rank 0.
int rank_tol(const Mat& m, double eps = kDefaultRankTol);

/// Eigenvalues with multiplicity, sorted by decreasing real part and then
/// decreasing imaginary part. Non-real values come in exact conjugate pairs.
std::vector<Complex> eigvals(const Mat& m);

double spectral_radius(const std::vector<Complex>& values);

/// Linear subspace of R^n held as an orthonormal basis in canonical form:
/// the basis is obtained by pivoted Gram-Schmidt on the columns of the
/// orthogonal projector, so two representations of the same subspace
/// produce the same basis up to rounding.
class Subspace {
 public:
  explicit Subspace(int ambient_dim = 0);

  /// Span of the columns of `vectors`; directions whose singular value is at
  /// most tol times the largest are dropped.
  static Subspace span(const Mat& vectors, double tol = 1e-10);
  static Subspace from_orthonormal(const Mat& basis);
  static Subspace whole(int ambient_dim);
  static Subspace coordinates(int ambient_dim, const std::vector<int>& indices);

  int ambient_dim() const { return ambient_dim_; }
  int dim() const { return static_cast<int>(basis_.cols()); }
  const Mat& basis() const { return basis_; }

  Mat projector() const;
  Vec project(const Vec& x) const;
  // Euclidean distance from x to the subspace.
  double distance(const Vec& x) const;
  bool contains(const Subspace& other, double tol = 1e-10) const;

 private:
  int ambient_dim_;
  Mat basis_;
};

/// Orthonormal basis of the `dim` right singular directions with the
/// smallest singular values.
Subspace null_space(const Mat& m, int dim);
/// Span of the `dim` leading left singular vectors of m.
Subspace leading_span(const Mat& m, int dim);

/// Kernel and image with the rank decided by rank_tol(m, eps).
Subspace kernel(const Mat& m, double eps = kDefaultRankTol);
Subspace image(const Mat& m, double eps = kDefaultRankTol);

Subspace intersect(const Subspace& a, const Subspace& b,
                   double eps = kDefaultRankTol);

}  // namespace projconj
