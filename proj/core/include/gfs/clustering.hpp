#pragma once

#include "gfs/numerics.hpp"
#include "gfs/selection.hpp"

#include <span>
#include <vector>

namespace gfs {

/// Sparse coefficient matrix C: row i holds point i's coefficients.
struct CoefficientMatrix {
  Mat c;
  std::vector<Index> empty_rows;  // points whose feature set was empty
};

CoefficientMatrix coefficient_matrix(std::span<const FeatureSet> sets, Index d);

/// Symmetric, nonnegative, zero-diagonal affinity W = |C| + |C^T|.
class Affinity {
 public:
  explicit Affinity(const Mat& c);
  const Mat& w() const { return w_; }
  Index size() const { return w_.rows(); }

 private:
  Mat w_;
};

inline Affinity affinity(const Mat& c) { return Affinity(c); }

enum class LaplacianKind { plain, normalized };

/// L = D - W, or I - D^{-1/2} W D^{-1/2} with isolated vertices mapped to
/// identity rows.
Mat graph_laplacian(const Affinity& w, LaplacianKind kind = LaplacianKind::plain);

struct Partition {
  std::vector<int> labels;
  int num_clusters = 2;
};

/// Eigenvalues at or below this fraction of lambda_max count as zero.
inline constexpr double kFiedlerFloor = 1e-8;

/// Two-way split by the sign of the eigenvector at the smallest nonzero
/// eigenvalue. The vector is oriented so its first nonzero entry is positive;
/// entries >= 0 get label 0. If zero is a repeated eigenvalue the graph is
/// disconnected and the split follows connected components instead (more
/// than two are packed into two groups by size, vertex 0 in group 0).
/// Throws DomainError on an all-zero spectrum.
Partition spectral_bipartition(const Mat& laplacian);

/// Misclassification fraction minimized over the two label permutations.
double clustering_error(const Partition& predicted, std::span<const int> truth);

}  // namespace gfs
