#pragma once

#include "gfs/numerics.hpp"

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace gfs {

/// Per-point feature set: the selected support and its least-squares weights.
struct FeatureSet {
  Index point_index = -1;       // -1 when the signal is not part of the atoms
  std::vector<Index> selected;  // in selection order
  std::vector<double> coeffs;   // aligned with `selected`
  double residual_norm = 0.0;
};

/// OMP stopping criterion: fixed sparsity k or residual norm kappa.
class StoppingRule {
 public:
  enum class Kind { sparsity, residual };

  static StoppingRule sparsity(Index k);
  static StoppingRule residual(double kappa);

  Kind kind() const { return kind_; }
  Index k() const { return k_; }
  double kappa() const { return kappa_; }

 private:
  StoppingRule(Kind kind, Index k, double kappa) : kind_(kind), k_(k), kappa_(kappa) {}
  Kind kind_;
  Index k_ = 0;
  double kappa_ = 0.0;
};

/// No remaining atom correlates with a nonzero residual.
class StallError : public std::runtime_error {
 public:
  StallError(const std::string& what, FeatureSet partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const FeatureSet& partial() const { return partial_; }

 private:
  FeatureSet partial_;
};

/// State after one OMP update, handed to an observer.
struct OmpStep {
  Index iteration = 0;                  // 1-based count of selected atoms
  Index chosen = -1;                    // atom added on this step
  std::span<const Index> selected;      // support so far
  const Vec* residual = nullptr;        // (I - P_Lambda) y
  const Vec* correlations = nullptr;    // A^T s before this step's update
};

/// Return false to stop the pursuit early (the partial support is kept).
using OmpObserver = std::function<bool(const OmpStep&)>;

/// Correlations this small, with a residual still above the zero threshold,
/// mean no atom can make progress.
inline constexpr double kStallCorrelation = 1e-12;
/// Residual norms at or below this end the pursuit under either rule.
inline constexpr double kZeroResidual = 1e-12;

/// Orthogonal matching pursuit of `y` over the columns of `atoms`. Column
/// `exclude` (if >= 0) is never a candidate; that is the endogenous mode.
/// Ties in |correlation| go to the lowest column index.
FeatureSet omp(const Vec& y, const Mat& atoms, const StoppingRule& stop,
               Index exclude = -1, const OmpObserver& observer = {});

/// Endogenous OMP over a fixed point cloud. Caches the Gram matrix once and
/// updates correlations through it, so each point costs O(d k^2) instead of
/// O(n d k). Selections match omp() with the point excluded.
class EndogenousOmp {
 public:
  explicit EndogenousOmp(const Mat& points);
  EndogenousOmp(const Mat& points, Mat gram);

  const Mat& points() const { return points_; }
  const Mat& gram() const { return gram_; }

  /// Feature set for point i. Throws StallError like omp().
  FeatureSet select(Index i, const StoppingRule& stop,
                    const OmpObserver& observer = {}) const;

 private:
  Mat points_;
  Mat gram_;
};

/// One OMP feature set per column, each with its own column excluded.
/// A stalled point rethrows StallError with the point index in the message.
std::vector<FeatureSet> omp_feature_sets(const Mat& points, const StoppingRule& stop);

/// k nearest neighbors by |<y_i, y_j>|, j != i; coeffs are the signed inner
/// products. Ties go to the lowest index.
std::vector<FeatureSet> nn_feature_sets(const Mat& points, Index k);
FeatureSet nn_feature_set(const Mat& gram, Index i, Index k);

/// True iff every selected index shares the point's label.
bool efs_check(const FeatureSet& fs, std::span<const int> labels);

/// Fraction of feature sets passing efs_check.
double efs_rate(std::span<const FeatureSet> sets, std::span<const int> labels);

}  // namespace gfs
