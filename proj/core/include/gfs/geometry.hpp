#pragma once

#include "gfs/numerics.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace gfs {

/// Orthonormal basis (n x k, k <= n) for one subspace.
class SubspaceBasis {
 public:
  /// Validates phi^T phi = I_k within `tolerance`; throws DomainError.
  explicit SubspaceBasis(Mat phi, double tolerance = tol::kOrthonormal);

  /// Orthonormalizes the span of `spanning` columns.
  static SubspaceBasis from_span(const Mat& spanning);

  const Mat& phi() const { return phi_; }
  Index ambient_dim() const { return phi_.rows(); }
  Index dim() const { return phi_.cols(); }

  /// Largest distance from a column of `points` to the subspace.
  double max_distance(const Mat& points) const;

 private:
  Mat phi_;
};

/// Singular values of Phi_i^T Phi_j clipped to [0, 1], nonincreasing.
struct CrossSpectrum {
  Vec sigma;
  Index q = 0;  // overlap: count of entries above the rank threshold

  double l1() const { return sigma.head(q).sum(); }
  double max() const { return sigma.size() ? sigma(0) : 0.0; }
};

struct CoveringEstimate {
  double diameter = 0.0;  // in [0, 2]
  Index samples_used = 0;
  bool is_lower_bound = true;
};

enum class Condition { thm1, cor1, thm3 };
std::string_view to_string(Condition c);

/// Sufficient-condition certificate: holds iff lhs < rhs (strict).
struct EfsCertificate {
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
  Condition condition = Condition::thm1;
};

/// max |<u, v>| over column pairs u of yi and v of yj.
double mutual_coherence(const Mat& yi, const Mat& yj);

/// max over other clusters j of mutual_coherence(Y_i, Y_j).
double max_mutual_coherence(const Mat& points, std::span<const int> labels,
                            int cluster);

/// Cross-spectrum (principal-angle cosines) of two subspaces.
CrossSpectrum principal_angles(const SubspaceBasis& phi_i,
                               const SubspaceBasis& phi_j);

/// Cosine of the smallest principal angle between the two subspaces.
inline double max_cos_angle(const SubspaceBasis& a, const SubspaceBasis& b) {
  return principal_angles(a, b).max();
}

/// sqrt(1 - <u,y>^2 / (|u|^2 |y|^2)); sign-invariant, in [0, 1].
double projective_distance(const Vec& u, const Vec& y);

/// Monte Carlo estimate of max_{u in S} min_{y} dist(u, y) over the whole
/// cluster. Returned value is a radius (not doubled).
CoveringEstimate covering_radius(const Mat& cluster, const SubspaceBasis& basis,
                                 Index num_dirs, std::uint64_t seed);

/// Monte Carlo estimate of the maximum covering diameter over all
/// leave-one-out subsets of `cluster`. All subsets are scored on the same
/// direction sample, so the estimate for n directions is a prefix of the
/// estimate for n + 1 (monotone in num_dirs for a fixed seed).
CoveringEstimate covering_diameter(const Mat& cluster, const SubspaceBasis& basis,
                                   Index num_dirs = 2000, std::uint64_t seed = 0);

/// Data-only proxy: 2 * max over points of the projective distance to the
/// nearest other point. Needs no basis; not a bound on the true diameter.
double covering_proxy(const Mat& cluster);

/// sqrt(1 - eps^2 / 4).
double inradius_from_diameter(double eps);

/// mu_c < sqrt(1 - eps^2/4) - eps / 12^(1/4) * max_cos_theta.
EfsCertificate efs_condition_thm1(double mu_c, double eps, double max_cos_theta);

/// max_cos_theta < sqrt(1 - eps^2/4) / (1 + eps / 12^(1/4)).
/// Throws PreconditionError if the subspaces intersect (cos = 1).
EfsCertificate efs_condition_cor1(double eps, double max_cos_theta);

/// Bounding constant: max(|Y_i^T U~|_inf, |Y_j^T V~|_inf) where U~, V~ are the
/// principal vectors for the nonzero cross-spectrum. Zero when q = 0.
double bounding_constant(const Mat& yi, const Mat& yj, const SubspaceBasis& phi_i,
                         const SubspaceBasis& phi_j);

/// eps < sqrt(1 - gamma^2 |sigma|_1^2). Vacuous (holds = false, rhs = 0) once
/// gamma |sigma|_1 >= 1. Throws PreconditionError if gamma >= sqrt(1/q).
EfsCertificate efs_condition_thm3(double eps, double gamma, const CrossSpectrum& cross);

/// Exact recovery coefficient max_{i not in lambda} |Phi_lambda^+ phi_i|_1.
double erc(const Mat& dictionary, std::span<const Index> lambda);

/// (sqrt(2 - sqrt(4 - x^2)), x / 12^(1/4)) for x in [0, 1].
std::pair<double, double> lemma1_gap(double x);

/// 12^(1/4), the slope of the covering-diameter penalty.
inline constexpr double kTwelveFourthRoot = 1.8612097182041991;

}  // namespace gfs
