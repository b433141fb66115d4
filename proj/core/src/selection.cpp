#include "gfs/selection.hpp"

#include "gfs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace gfs {

namespace {

// A new atom whose component orthogonal to the current support is this small
// is numerically dependent on it.
constexpr double kDependentAtom = 1e-14;

Index atom_limit(const StoppingRule& stop, Index available, Index ambient) {
  const Index cap = std::min(available, ambient);
  return stop.kind() == StoppingRule::Kind::sparsity ? std::min(stop.k(), cap) : cap;
}

bool residual_done(const StoppingRule& stop, double rnorm) {
  if (rnorm <= kZeroResidual) return true;
  return stop.kind() == StoppingRule::Kind::residual && rnorm <= stop.kappa();
}

// argmax |corr(j)| over unmasked j; strict comparison keeps the lowest index.
Index pick_atom(const Vec& corr, const std::vector<char>& masked, double& best) {
  Index arg = -1;
  best = -1.0;
  for (Index j = 0; j < corr.size(); ++j) {
    if (masked[static_cast<std::size_t>(j)]) continue;
    const double v = std::abs(corr(j));
    if (v > best) {
      best = v;
      arg = j;
    }
  }
  return arg;
}

// Appends the normalized component of `v` orthogonal to the first m columns of
// q (two Gram-Schmidt passes). Returns the projection weights and the norm.
double orthogonalize(Mat& q, Index m, Vec v, Vec& weights) {
  weights.setZero(m);
  for (int pass = 0; pass < 2; ++pass) {
    if (m == 0) break;
    const Vec h = q.leftCols(m).transpose() * v;
    v.noalias() -= q.leftCols(m) * h;
    weights += h;
  }
  const double r = v.norm();
  if (r > kDependentAtom) q.col(m) = v / r;
  return r;
}

[[noreturn]] void stall(const std::string& msg, FeatureSet partial) {
  throw StallError(msg + " after " + std::to_string(partial.selected.size()) +
                       " atoms (residual " + std::to_string(partial.residual_norm) + ")",
                   std::move(partial));
}

void validate_signal(const Vec& y, const Mat& atoms, Index exclude) {
  require_finite(atoms, "omp atoms");
  require_finite(y, "omp signal");
  if (y.size() != atoms.rows()) {
    throw DomainError("omp: signal length " + std::to_string(y.size()) +
                      " does not match atom length " + std::to_string(atoms.rows()));
  }
  if (exclude < -1 || exclude >= atoms.cols()) {
    throw DomainError("omp: excluded column out of range");
  }
}

}  // namespace

StoppingRule StoppingRule::sparsity(Index k) {
  if (k < 1) throw DomainError("StoppingRule: sparsity must be >= 1");
  return {Kind::sparsity, k, 0.0};
}

StoppingRule StoppingRule::residual(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw DomainError("StoppingRule: residual tolerance must be > 0");
  }
  return {Kind::residual, 0, kappa};
}

FeatureSet omp(const Vec& y, const Mat& atoms, const StoppingRule& stop, Index exclude,
               const OmpObserver& observer) {
  validate_signal(y, atoms, exclude);
  const Index n = atoms.rows(), d = atoms.cols();
  const Index limit = atom_limit(stop, d - (exclude >= 0 ? 1 : 0), n);

  FeatureSet fs;
  fs.point_index = exclude;
  std::vector<char> masked(static_cast<std::size_t>(d), 0);
  if (exclude >= 0) masked[static_cast<std::size_t>(exclude)] = 1;

  Mat q(n, std::max<Index>(limit, 1));
  Vec weights;
  Vec s = y;
  fs.residual_norm = s.norm();

  auto finish = [&](FeatureSet& out) {
    if (!out.selected.empty()) {
      const Vec c = lstsq(atoms(Eigen::all, out.selected), y);
      out.coeffs.assign(c.data(), c.data() + c.size());
    }
  };

  while (static_cast<Index>(fs.selected.size()) < limit) {
    if (residual_done(stop, fs.residual_norm)) break;
    const Vec corr = atoms.transpose() * s;
    double best = 0.0;
    const Index j = pick_atom(corr, masked, best);
    if (j < 0 || best < kStallCorrelation) {
      finish(fs);
      stall("omp: no atom correlates with the residual", std::move(fs));
    }
    const Index m = static_cast<Index>(fs.selected.size());
    if (orthogonalize(q, m, atoms.col(j), weights) <= kDependentAtom) {
      finish(fs);
      stall("omp: selected atom is dependent on the support", std::move(fs));
    }
    masked[static_cast<std::size_t>(j)] = 1;
    fs.selected.push_back(j);
    // s = (I - A_L A_L^+) y, recomputed from y against the current basis.
    s = y - q.leftCols(m + 1) * (q.leftCols(m + 1).transpose() * y);
    fs.residual_norm = s.norm();
    if (observer && !observer({m + 1, j, fs.selected, &s, &corr})) break;
  }
  finish(fs);
  return fs;
}

EndogenousOmp::EndogenousOmp(const Mat& points)
    : EndogenousOmp(points, Mat()) {}

EndogenousOmp::EndogenousOmp(const Mat& points, Mat gram)
    : points_(points), gram_(std::move(gram)) {
  require_finite(points_, "EndogenousOmp points");
  if (gram_.size() == 0) {
    gram_ = Mat::Zero(points_.cols(), points_.cols());
    gram_.selfadjointView<Eigen::Lower>().rankUpdate(points_.transpose());
    gram_.triangularView<Eigen::StrictlyUpper>() = gram_.transpose();
  }
  if (gram_.rows() != points_.cols() || gram_.cols() != points_.cols()) {
    throw DomainError("EndogenousOmp: Gram matrix shape does not match points");
  }
}

FeatureSet EndogenousOmp::select(Index i, const StoppingRule& stop,
                                 const OmpObserver& observer) const {
  const Index n = points_.rows(), d = points_.cols();
  if (i < 0 || i >= d) throw DomainError("EndogenousOmp: point index out of range");
  const Index limit = atom_limit(stop, d - 1, n);
  const Index width = std::max<Index>(limit, 1);

  FeatureSet fs;
  fs.point_index = i;
  std::vector<char> masked(static_cast<std::size_t>(d), 0);
  masked[static_cast<std::size_t>(i)] = 1;

  Mat q(n, width);            // orthonormal basis of the support
  Mat at_q(d, width);         // A^T q_m, by recurrence through the Gram matrix
  Mat r = Mat::Zero(width, width);  // A_L = Q R
  Vec qty = Vec::Zero(width);       // Q^T y
  Vec weights;
  Vec s = points_.col(i);
  Vec corr = gram_.col(i);
  fs.residual_norm = s.norm();

  auto finish = [&](FeatureSet& out) {
    const Index m = static_cast<Index>(out.selected.size());
    if (m == 0) return;
    const Vec c = r.topLeftCorner(m, m).triangularView<Eigen::Upper>().solve(qty.head(m));
    out.coeffs.assign(c.data(), c.data() + c.size());
  };

  while (static_cast<Index>(fs.selected.size()) < limit) {
    if (residual_done(stop, fs.residual_norm)) break;
    double best = 0.0;
    const Index j = pick_atom(corr, masked, best);
    if (j < 0 || best < kStallCorrelation) {
      finish(fs);
      stall("omp: no atom correlates with the residual at point " + std::to_string(i),
            std::move(fs));
    }
    const Index m = static_cast<Index>(fs.selected.size());
    const double rmm = orthogonalize(q, m, points_.col(j), weights);
    if (rmm <= kDependentAtom) {
      finish(fs);
      stall("omp: selected atom is dependent on the support at point " +
                std::to_string(i),
            std::move(fs));
    }
    r.col(m).head(m) = weights;
    r(m, m) = rmm;
    at_q.col(m) = gram_.col(j);
    if (m > 0) at_q.col(m).noalias() -= at_q.leftCols(m) * weights;
    at_q.col(m) /= rmm;

    masked[static_cast<std::size_t>(j)] = 1;
    fs.selected.push_back(j);
    qty(m) = q.col(m).dot(points_.col(i));
    const double beta = q.col(m).dot(s);
    const Vec corr_before = observer ? corr : Vec();
    s.noalias() -= beta * q.col(m);
    corr.noalias() -= beta * at_q.col(m);
    fs.residual_norm = s.norm();
    if (observer && !observer({m + 1, j, fs.selected, &s, &corr_before})) break;
  }
  finish(fs);
  return fs;
}

std::vector<FeatureSet> omp_feature_sets(const Mat& points, const StoppingRule& stop) {
  require_unit_columns(points, "omp_feature_sets");
  const EndogenousOmp engine(points);
  std::vector<FeatureSet> out;
  out.reserve(static_cast<std::size_t>(points.cols()));
  for (Index i = 0; i < points.cols(); ++i) {
    try {
      out.push_back(engine.select(i, stop));
    } catch (const StallError& e) {
      throw StallError("point " + std::to_string(i) + ": " + e.what(), e.partial());
    }
  }
  return out;
}

FeatureSet nn_feature_set(const Mat& gram, Index i, Index k) {
  const Index d = gram.cols();
  if (i < 0 || i >= d) throw DomainError("nn: point index out of range");
  if (k < 1 || k >= d) throw DomainError("nn: need 1 <= k < number of points");
  std::vector<Index> order;
  order.reserve(static_cast<std::size_t>(d - 1));
  for (Index j = 0; j < d; ++j) {
    if (j != i) order.push_back(j);
  }
  auto closer = [&](Index a, Index b) {
    const double va = std::abs(gram(a, i)), vb = std::abs(gram(b, i));
    return va != vb ? va > vb : a < b;
  };
  std::partial_sort(order.begin(), order.begin() + k, order.end(), closer);
  FeatureSet fs;
  fs.point_index = i;
  fs.selected.assign(order.begin(), order.begin() + k);
  for (const Index j : fs.selected) fs.coeffs.push_back(gram(j, i));
  return fs;
}

std::vector<FeatureSet> nn_feature_sets(const Mat& points, Index k) {
  require_unit_columns(points, "nn_feature_sets");
  const Mat gram = points.transpose() * points;
  std::vector<FeatureSet> out;
  out.reserve(static_cast<std::size_t>(points.cols()));
  for (Index i = 0; i < points.cols(); ++i) out.push_back(nn_feature_set(gram, i, k));
  return out;
}

bool efs_check(const FeatureSet& fs, std::span<const int> labels) {
  const auto size = static_cast<Index>(labels.size());
  if (fs.selected.empty()) throw DomainError("efs_check: no features selected");
  if (fs.point_index < 0 || fs.point_index >= size) {
    throw DomainError("efs_check: point index not covered by labels");
  }
  const int own = labels[static_cast<std::size_t>(fs.point_index)];
  return std::all_of(fs.selected.begin(), fs.selected.end(), [&](Index j) {
    if (j < 0 || j >= size) throw DomainError("efs_check: feature index not covered by labels");
    return labels[static_cast<std::size_t>(j)] == own;
  });
}

double efs_rate(std::span<const FeatureSet> sets, std::span<const int> labels) {
  if (sets.empty()) return 0.0;
  std::size_t ok = 0;
  for (const auto& fs : sets) {
    if (!fs.selected.empty() && efs_check(fs, labels)) ++ok;
  }
  return static_cast<double>(ok) / static_cast<double>(sets.size());
}

}  // namespace gfs
