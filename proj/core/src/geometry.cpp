#include "gfs/geometry.hpp"

#include "gfs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace gfs {

namespace {

// Cross-spectra live on [0, 1]; entries at or below this count as zero.
constexpr double kSpectrumZero = 1e-12;
// Points must lie in the basis span to this distance for covering estimates.
constexpr double kSpanTol = 1e-8;

void require_eps(double eps) {
  if (!(eps >= 0.0 && eps <= 2.0)) {
    throw DomainError("covering diameter must lie in [0, 2], got " +
                      std::to_string(eps));
  }
}

void require_unit_interval(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw DomainError(std::string(name) + " must lie in [0, 1], got " +
                      std::to_string(v));
  }
}

// Leading two values of |A^T alpha| per sampled direction, in subspace
// coordinates. Feeds both the radius and leave-one-out diameter estimates.
template <typename Visit>
void sample_directions(const Mat& coords, Index num_dirs, std::uint64_t seed,
                       Visit&& visit) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const Index k = coords.rows();
  Vec alpha(k);
  for (Index t = 0; t < num_dirs; ++t) {
    double norm = 0.0;
    do {
      for (Index i = 0; i < k; ++i) alpha(i) = normal(rng);
      norm = alpha.norm();
    } while (norm < 1e-12);
    alpha /= norm;
    const Vec dots = (coords.transpose() * alpha).cwiseAbs();
    double best = 0.0, second = 0.0;
    for (Index j = 0; j < dots.size(); ++j) {
      const double v = dots(j);
      if (v > best) {
        second = best;
        best = v;
      } else if (v > second) {
        second = v;
      }
    }
    visit(best, second);
  }
}

double dist_from_cos(double c) { return std::sqrt(std::max(0.0, 1.0 - c * c)); }

Mat subspace_coords(const Mat& cluster, const SubspaceBasis& basis, Index min_points) {
  require_finite(cluster, "covering");
  if (cluster.cols() < min_points) {
    throw DomainError("covering: cluster needs at least " +
                      std::to_string(min_points) + " points");
  }
  if (cluster.rows() != basis.ambient_dim()) {
    throw DomainError("covering: ambient dimension mismatch");
  }
  if (basis.max_distance(cluster) > kSpanTol) {
    throw DomainError("covering: cluster does not lie in the basis span");
  }
  Mat coords = basis.phi().transpose() * cluster;
  for (Index j = 0; j < coords.cols(); ++j) {
    const double n = coords.col(j).norm();
    if (n == 0.0) throw DomainError("covering: zero point in cluster");
    coords.col(j) /= n;
  }
  return coords;
}

}  // namespace

SubspaceBasis::SubspaceBasis(Mat phi, double tolerance) : phi_(std::move(phi)) {
  require_finite(phi_, "SubspaceBasis");
  if (phi_.cols() > phi_.rows()) {
    throw DomainError("SubspaceBasis: more basis vectors than ambient dimensions");
  }
  const Mat gram = phi_.transpose() * phi_;
  const double err =
      (gram - Mat::Identity(phi_.cols(), phi_.cols())).cwiseAbs().maxCoeff();
  if (err > tolerance) {
    throw DomainError("SubspaceBasis: columns not orthonormal (error " +
                      std::to_string(err) + ")");
  }
}

SubspaceBasis SubspaceBasis::from_span(const Mat& spanning) {
  Mat q = orthonormal_range(spanning);
  if (q.cols() == 0) throw DomainError("SubspaceBasis: spanning set has rank 0");
  return SubspaceBasis(std::move(q));
}

double SubspaceBasis::max_distance(const Mat& points) const {
  if (points.rows() != ambient_dim()) {
    throw DomainError("SubspaceBasis: ambient dimension mismatch");
  }
  const Mat resid = points - phi_ * (phi_.transpose() * points);
  return resid.cols() ? resid.colwise().norm().maxCoeff() : 0.0;
}

std::string_view to_string(Condition c) {
  switch (c) {
    case Condition::thm1: return "thm1";
    case Condition::cor1: return "cor1";
    case Condition::thm3: return "thm3";
  }
  return "unknown";
}

double mutual_coherence(const Mat& yi, const Mat& yj) {
  require_unit_columns(yi, "mutual_coherence lhs");
  require_unit_columns(yj, "mutual_coherence rhs");
  if (yi.rows() != yj.rows()) {
    throw DomainError("mutual_coherence: ambient dimension mismatch");
  }
  return std::min(1.0, (yi.transpose() * yj).cwiseAbs().maxCoeff());
}

double max_mutual_coherence(const Mat& points, std::span<const int> labels,
                            int cluster) {
  if (static_cast<Index>(labels.size()) != points.cols()) {
    throw DomainError("max_mutual_coherence: label count does not match points");
  }
  std::vector<Index> own, other;
  for (Index j = 0; j < points.cols(); ++j) {
    (labels[static_cast<std::size_t>(j)] == cluster ? own : other).push_back(j);
  }
  if (own.empty()) {
    throw DomainError("max_mutual_coherence: cluster " + std::to_string(cluster) +
                      " is empty");
  }
  if (other.empty()) {
    throw DomainError("max_mutual_coherence: ensemble has a single cluster");
  }
  return mutual_coherence(points(Eigen::all, own), points(Eigen::all, other));
}

CrossSpectrum principal_angles(const SubspaceBasis& phi_i, const SubspaceBasis& phi_j) {
  if (phi_i.ambient_dim() != phi_j.ambient_dim()) {
    throw DomainError("principal_angles: ambient dimension mismatch");
  }
  const SvdResult f = svd(phi_i.phi().transpose() * phi_j.phi());
  CrossSpectrum out;
  out.sigma = f.sigma.cwiseMin(1.0).cwiseMax(0.0);
  while (out.q < out.sigma.size() && out.sigma(out.q) > kSpectrumZero) ++out.q;
  return out;
}

double projective_distance(const Vec& u, const Vec& y) {
  if (u.size() != y.size()) throw DomainError("projective_distance: size mismatch");
  const double nu = u.squaredNorm(), ny = y.squaredNorm();
  if (nu == 0.0 || ny == 0.0) throw DomainError("projective_distance: zero vector");
  const double c = u.dot(y);
  return std::sqrt(std::clamp(1.0 - c * c / (nu * ny), 0.0, 1.0));
}

CoveringEstimate covering_radius(const Mat& cluster, const SubspaceBasis& basis,
                                 Index num_dirs, std::uint64_t seed) {
  if (num_dirs < 1) throw DomainError("covering_radius: num_dirs must be >= 1");
  const Mat coords = subspace_coords(cluster, basis, 1);
  double radius = 0.0;
  sample_directions(coords, num_dirs, seed, [&](double best, double) {
    radius = std::max(radius, dist_from_cos(best));
  });
  return {radius, num_dirs, true};
}

CoveringEstimate covering_diameter(const Mat& cluster, const SubspaceBasis& basis,
                                   Index num_dirs, std::uint64_t seed) {
  if (num_dirs < 1) throw DomainError("covering_diameter: num_dirs must be >= 1");
  const Mat coords = subspace_coords(cluster, basis, 2);
  // For a fixed direction the worst leave-one-out subset drops the nearest
  // point, leaving the runner-up as the nearest sample.
  double radius = 0.0;
  sample_directions(coords, num_dirs, seed, [&](double, double second) {
    radius = std::max(radius, dist_from_cos(second));
  });
  return {std::min(2.0, 2.0 * radius), num_dirs, true};
}

double covering_proxy(const Mat& cluster) {
  require_unit_columns(cluster, "covering_proxy");
  if (cluster.cols() < 2) throw DomainError("covering_proxy: need at least 2 points");
  Mat g = (cluster.transpose() * cluster).cwiseAbs();
  g.diagonal().setConstant(-1.0);
  const double worst_nn = g.colwise().maxCoeff().minCoeff();
  return std::min(2.0, 2.0 * dist_from_cos(std::min(worst_nn, 1.0)));
}

double inradius_from_diameter(double eps) {
  require_eps(eps);
  return std::sqrt(std::max(0.0, 1.0 - eps * eps / 4.0));
}

EfsCertificate efs_condition_thm1(double mu_c, double eps, double max_cos_theta) {
  require_unit_interval(mu_c, "mutual coherence");
  require_eps(eps);
  require_unit_interval(max_cos_theta, "max cos theta");
  const double rhs =
      inradius_from_diameter(eps) - eps / kTwelveFourthRoot * max_cos_theta;
  return {mu_c < rhs, mu_c, rhs, Condition::thm1};
}

EfsCertificate efs_condition_cor1(double eps, double max_cos_theta) {
  require_eps(eps);
  require_unit_interval(max_cos_theta, "max cos theta");
  if (max_cos_theta >= 1.0) {
    throw PreconditionError(
        "cor1: subspaces intersect (cos theta* = 1); the disjoint-subspace "
        "condition does not apply");
  }
  const double rhs = inradius_from_diameter(eps) / (1.0 + eps / kTwelveFourthRoot);
  return {max_cos_theta < rhs, max_cos_theta, rhs, Condition::cor1};
}

double bounding_constant(const Mat& yi, const Mat& yj, const SubspaceBasis& phi_i,
                         const SubspaceBasis& phi_j) {
  require_unit_columns(yi, "bounding_constant Y_i");
  require_unit_columns(yj, "bounding_constant Y_j");
  if (phi_i.ambient_dim() != phi_j.ambient_dim() || yi.rows() != phi_i.ambient_dim() ||
      yj.rows() != phi_j.ambient_dim()) {
    throw DomainError("bounding_constant: ambient dimension mismatch");
  }
  const SvdResult f = svd(phi_i.phi().transpose() * phi_j.phi());
  Index q = 0;
  while (q < f.sigma.size() && f.sigma(q) > kSpectrumZero) ++q;
  if (q == 0) return 0.0;
  const Mat u_tilde = phi_i.phi() * f.u.leftCols(q);
  const Mat v_tilde = phi_j.phi() * f.vt.topRows(q).transpose();
  return std::max((yi.transpose() * u_tilde).cwiseAbs().maxCoeff(),
                  (yj.transpose() * v_tilde).cwiseAbs().maxCoeff());
}

EfsCertificate efs_condition_thm3(double eps, double gamma, const CrossSpectrum& cross) {
  require_eps(eps);
  if (!(gamma >= 0.0)) throw DomainError("thm3: bounding constant must be >= 0");
  if (cross.q > 0 && gamma >= std::sqrt(1.0 / static_cast<double>(cross.q))) {
    throw PreconditionError("thm3: bounding constant gamma = " + std::to_string(gamma) +
                            " violates the hypothesis gamma < sqrt(1/q) with q = " +
                            std::to_string(cross.q));
  }
  const double coherence_bound = gamma * cross.l1();
  if (coherence_bound >= 1.0) return {false, eps, 0.0, Condition::thm3};
  const double rhs = std::sqrt(1.0 - coherence_bound * coherence_bound);
  return {eps < rhs, eps, rhs, Condition::thm3};
}

double erc(const Mat& dictionary, std::span<const Index> lambda) {
  require_finite(dictionary, "erc");
  if (lambda.empty()) throw DomainError("erc: empty support");
  std::vector<bool> in_support(static_cast<std::size_t>(dictionary.cols()), false);
  for (const Index i : lambda) {
    if (i < 0 || i >= dictionary.cols()) throw DomainError("erc: index out of range");
    if (in_support[static_cast<std::size_t>(i)]) throw DomainError("erc: duplicate index");
    in_support[static_cast<std::size_t>(i)] = true;
  }
  const std::vector<Index> support(lambda.begin(), lambda.end());
  const Mat sub = dictionary(Eigen::all, support);
  const SvdResult f = svd(sub);
  if (numerical_rank(f.sigma) < sub.cols()) {
    throw DomainError("erc: sub-dictionary is rank deficient");
  }
  const Mat pinv = pseudoinverse(sub);
  double worst = 0.0;
  for (Index i = 0; i < dictionary.cols(); ++i) {
    if (in_support[static_cast<std::size_t>(i)]) continue;
    worst = std::max(worst, (pinv * dictionary.col(i)).lpNorm<1>());
  }
  return worst;
}

std::pair<double, double> lemma1_gap(double x) {
  require_unit_interval(x, "lemma1_gap argument");
  return {std::sqrt(2.0 - std::sqrt(4.0 - x * x)), x / kTwelveFourthRoot};
}

}  // namespace gfs
