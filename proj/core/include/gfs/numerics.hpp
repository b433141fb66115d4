#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace gfs {

using Index = Eigen::Index;
/// Column-major dense matrix. A column is one point or one basis vector.
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

namespace tol {
/// Singular values at or below `kRankRel * sigma_max` count as zero.
inline constexpr double kRankRel = 1e-12;
/// Symmetry check for symmetric_eigen inputs.
inline constexpr double kSymmetry = 1e-10;
/// Unit-norm check for point clouds and bases.
inline constexpr double kUnitNorm = 1e-10;
/// Orthonormality check for bases.
inline constexpr double kOrthonormal = 1e-10;
}  // namespace tol

struct SvdResult {
  Mat u;      // n x r, orthonormal columns
  Vec sigma;  // r, nonincreasing, nonnegative
  Mat vt;     // r x m, orthonormal rows
};

struct EigenResult {
  Vec values;   // nondecreasing
  Mat vectors;  // column i pairs with values(i)
};

/// Thin SVD, r = min(rows, cols). Throws DomainError on empty or non-finite
/// input and NumericalFailure if the factorization does not reconstruct.
SvdResult svd(const Mat& a);

/// Number of singular values above `rel_tol * sigma(0)`.
Index numerical_rank(const Vec& sigma, double rel_tol = tol::kRankRel);

/// Moore-Penrose pseudoinverse; singular values under the rank threshold are
/// left at zero rather than inverted.
Mat pseudoinverse(const Mat& a, double rel_tol = tol::kRankRel);

/// Orthogonal projector onto range(a).
Mat projector(const Mat& a, double rel_tol = tol::kRankRel);

/// Minimum-norm minimizer of ||a c - y||_2, equal to pseudoinverse(a) * y.
Vec lstsq(const Mat& a, const Vec& y, double rel_tol = tol::kRankRel);

/// Eigen-decomposition of a symmetric matrix, eigenvalues ascending.
EigenResult symmetric_eigen(const Mat& a);

/// Orthonormal basis for range(a) (left singular vectors above threshold).
Mat orthonormal_range(const Mat& a, double rel_tol = tol::kRankRel);

/// Throws DomainError unless `a` is nonempty and every entry is finite.
void require_finite(const Mat& a, const char* what);

/// Throws DomainError unless every column of `a` has unit 2-norm.
void require_unit_columns(const Mat& a, const char* what,
                          double tolerance = tol::kUnitNorm);

}  // namespace gfs
