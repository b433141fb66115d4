#include "gfs/numerics.hpp"

#include "gfs/errors.hpp"

#include <cmath>
#include <string>

namespace gfs {

namespace {

// Reconstruction contract for svd(); anything looser means Jacobi sweeps
// stalled on a pathological input.
constexpr double kReconstructionRel = 1e-8;
// Residual contract for symmetric_eigen().
constexpr double kEigenResidualRel = 1e-8;

}  // namespace

void require_finite(const Mat& a, const char* what) {
  if (a.rows() == 0 || a.cols() == 0) {
    throw DomainError(std::string(what) + ": empty matrix");
  }
  if (!a.allFinite()) {
    throw DomainError(std::string(what) + ": non-finite entry");
  }
}

void require_unit_columns(const Mat& a, const char* what, double tolerance) {
  require_finite(a, what);
  for (Index j = 0; j < a.cols(); ++j) {
    if (std::abs(a.col(j).norm() - 1.0) > tolerance) {
      throw DomainError(std::string(what) + ": column " + std::to_string(j) +
                        " is not unit norm");
    }
  }
}

SvdResult svd(const Mat& a) {
  require_finite(a, "svd");
  Eigen::JacobiSVD<Mat> solver(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("svd: Jacobi iteration did not converge");
  }
  SvdResult out{solver.matrixU(), solver.singularValues(),
                solver.matrixV().transpose()};

  const double scale = a.norm();
  const double err =
      (a - out.u * out.sigma.asDiagonal() * out.vt).norm();
  if (err > kReconstructionRel * std::max(scale, 1e-300)) {
    throw NumericalFailure("svd: reconstruction error " + std::to_string(err));
  }
  return out;
}

Index numerical_rank(const Vec& sigma, double rel_tol) {
  if (sigma.size() == 0 || sigma(0) <= 0.0) return 0;
  const double cut = rel_tol * sigma(0);
  Index r = 0;
  while (r < sigma.size() && sigma(r) > cut) ++r;
  return r;
}

Mat pseudoinverse(const Mat& a, double rel_tol) {
  const SvdResult f = svd(a);
  const Index r = numerical_rank(f.sigma, rel_tol);
  Mat out = Mat::Zero(a.cols(), a.rows());
  for (Index i = 0; i < r; ++i) {
    out.noalias() += (f.vt.row(i).transpose() / f.sigma(i)) * f.u.col(i).transpose();
  }
  return out;
}

Mat orthonormal_range(const Mat& a, double rel_tol) {
  const SvdResult f = svd(a);
  return f.u.leftCols(numerical_rank(f.sigma, rel_tol));
}

Mat projector(const Mat& a, double rel_tol) {
  const Mat q = orthonormal_range(a, rel_tol);
  return q * q.transpose();
}

Vec lstsq(const Mat& a, const Vec& y, double rel_tol) {
  if (a.rows() != y.size()) {
    throw DomainError("lstsq: rows(a) = " + std::to_string(a.rows()) +
                      " but len(y) = " + std::to_string(y.size()));
  }
  require_finite(y, "lstsq rhs");
  const SvdResult f = svd(a);
  const Index r = numerical_rank(f.sigma, rel_tol);
  Vec coeffs = f.u.leftCols(r).transpose() * y;
  coeffs.array() /= f.sigma.head(r).array();
  return f.vt.topRows(r).transpose() * coeffs;
}

EigenResult symmetric_eigen(const Mat& a) {
  require_finite(a, "symmetric_eigen");
  if (a.rows() != a.cols()) {
    throw DomainError("symmetric_eigen: matrix is not square");
  }
  const double scale = std::max(a.cwiseAbs().maxCoeff(), 1.0);
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > tol::kSymmetry * scale) {
    throw DomainError("symmetric_eigen: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat> solver(a);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("symmetric_eigen: QL iteration did not converge");
  }
  EigenResult out{solver.eigenvalues(), solver.eigenvectors()};
  const double resid =
      (a * out.vectors - out.vectors * out.values.asDiagonal()).cwiseAbs().maxCoeff();
  if (resid > kEigenResidualRel * scale * static_cast<double>(a.rows())) {
    throw NumericalFailure("symmetric_eigen: residual " + std::to_string(resid));
  }
  return out;
}

}  // namespace gfs
