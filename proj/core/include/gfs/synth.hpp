#pragma once

#include "gfs/geometry.hpp"
#include "gfs/numerics.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

namespace gfs {

enum class CoefficientModel { m1, m2 };
enum class SpectrumShape { orthoblock, lorentzian, exponential, explicit_list };

std::string_view to_string(CoefficientModel m);
std::string_view to_string(SpectrumShape s);
CoefficientModel parse_model(std::string_view s);
SpectrumShape parse_shape(std::string_view s);

/// Parameters of a two-subspace union. `n == 0` selects the default ambient
/// dimension for the spectrum shape.
struct UnionSpec {
  Index n = 0;
  Index k = 20;
  Index q = 0;
  Index d = 100;
  CoefficientModel model = CoefficientModel::m1;
  double tau = 0.5;
  SpectrumShape shape = SpectrumShape::orthoblock;
  std::vector<double> sigma;  // explicit_list only: k entries, nonincreasing
  std::uint64_t seed = 0;

  double overlap_ratio() const { return static_cast<double>(q) / static_cast<double>(k); }
  double oversampling_ratio() const { return static_cast<double>(k) / static_cast<double>(d); }

  /// Throws DomainError naming the first violated constraint.
  void validate() const;
};

/// Samples per atom segment for the shift-invariant constructions.
inline constexpr Index kSegmentLength = 24;
/// Width parameter (in samples) of the Lorentzian and exponential atoms.
inline constexpr double kAtomWidth = 1.0;

/// Target cross-spectrum (length k, nonincreasing) for the spec.
/// Lorentzian: 0.9 / (1 + (4 i / k)^2); exponential: 0.75 exp(-i / (1.9 k));
/// both truncated to zero after the first q entries.
std::vector<double> target_spectrum(const UnionSpec& spec);

/// Smallest ambient dimension that fits the construction.
Index min_ambient_dim(const UnionSpec& spec);
/// Ambient dimension actually used (spec.n, or the default when 0).
Index ambient_dim(const UnionSpec& spec);

struct SubspacePair {
  SubspaceBasis psi;
  SubspaceBasis phi;
  CrossSpectrum cross;  // diag(psi^T phi), nonincreasing
};

/// Builds bases with diagonal psi^T phi equal to target_spectrum(spec).
SubspacePair build_subspace_pair(const UnionSpec& spec);

/// Discretized atom on [0, length): unit norm, centered at `center`.
Vec shift_atom(SpectrumShape shape, double center, Index length = kSegmentLength,
               double width = kAtomWidth);

/// Shift in samples at which <atom(c), atom(c + shift)> equals `target`.
double shift_for_coherence(SpectrumShape shape, double target);

/// d unit points y = Phi a / |Phi a| with a ~ N(0, I).
Mat sample_m1(const SubspaceBasis& basis, Index d, std::mt19937_64& rng);

/// Bounded-energy points tau * yc/|yc| + (1 - tau) * yd/|yd|, renormalized,
/// where yc spans the first q basis directions. Needs 0 < q < k, 0 <= tau < 1.
Mat sample_m2(const SubspaceBasis& basis, Index d, Index q, double tau,
              std::mt19937_64& rng);

/// Point cloud on the unit sphere with ground-truth cluster labels.
struct Ensemble {
  Mat points;
  std::vector<int> labels;
  std::vector<SubspaceBasis> bases;  // empty for ingested data
  std::optional<UnionSpec> spec;

  Index size() const { return points.cols(); }
  int num_clusters() const;
  /// Columns of cluster c.
  Mat cluster(int c) const;
  std::vector<Index> members(int c) const;
  /// Throws DomainError if norms or span membership are violated.
  void validate() const;
};

Ensemble generate_union(const UnionSpec& spec);

}  // namespace gfs
