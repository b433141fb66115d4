#include "gfs/clustering.hpp"

#include "gfs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace gfs {

CoefficientMatrix coefficient_matrix(std::span<const FeatureSet> sets, Index d) {
  if (d < 1) throw DomainError("coefficient_matrix: need at least one point");
  CoefficientMatrix out{Mat::Zero(d, d), {}};
  std::vector<char> seen(static_cast<std::size_t>(d), 0);
  for (const auto& fs : sets) {
    const Index i = fs.point_index;
    if (i < 0 || i >= d) throw DomainError("coefficient_matrix: point index out of range");
    if (fs.coeffs.size() != fs.selected.size()) {
      throw DomainError("coefficient_matrix: coefficients not aligned with support");
    }
    seen[static_cast<std::size_t>(i)] = 1;
    for (std::size_t t = 0; t < fs.selected.size(); ++t) {
      const Index j = fs.selected[t];
      if (j < 0 || j >= d) throw DomainError("coefficient_matrix: feature index out of range");
      if (j == i) throw DomainError("coefficient_matrix: point selected itself");
      out.c(i, j) = fs.coeffs[t];
    }
  }
  for (Index i = 0; i < d; ++i) {
    if (!seen[static_cast<std::size_t>(i)] || out.c.row(i).isZero(0.0)) {
      out.empty_rows.push_back(i);
    }
  }
  return out;
}

Affinity::Affinity(const Mat& c) {
  require_finite(c, "affinity");
  if (c.rows() != c.cols()) throw DomainError("affinity: coefficient matrix is not square");
  w_ = c.cwiseAbs() + c.transpose().cwiseAbs();
  w_.diagonal().setZero();
}

Mat graph_laplacian(const Affinity& w, LaplacianKind kind) {
  const Vec degree = w.w().rowwise().sum();
  const Index d = w.size();
  if (kind == LaplacianKind::plain) {
    Mat l = -w.w();
    l.diagonal() += degree;
    return l;
  }
  Vec inv_sqrt(d);
  for (Index i = 0; i < d; ++i) {
    inv_sqrt(i) = degree(i) > 0.0 ? 1.0 / std::sqrt(degree(i)) : 0.0;
  }
  Mat l = -(inv_sqrt.asDiagonal() * w.w() * inv_sqrt.asDiagonal());
  l.diagonal().setOnes();
  return l;
}

namespace {

// Connected components of the graph behind a Laplacian (off-diagonal
// nonzeros are edges for both Laplacian kinds).
std::vector<int> components(const Mat& l, int& count) {
  const Index d = l.rows();
  std::vector<int> comp(static_cast<std::size_t>(d), -1);
  count = 0;
  std::vector<Index> stack;
  for (Index s = 0; s < d; ++s) {
    if (comp[static_cast<std::size_t>(s)] >= 0) continue;
    comp[static_cast<std::size_t>(s)] = count;
    stack.push_back(s);
    while (!stack.empty()) {
      const Index u = stack.back();
      stack.pop_back();
      for (Index v = 0; v < d; ++v) {
        if (v != u && l(v, u) != 0.0 && comp[static_cast<std::size_t>(v)] < 0) {
          comp[static_cast<std::size_t>(v)] = count;
          stack.push_back(v);
        }
      }
    }
    ++count;
  }
  return comp;
}

// Two groups from several components: largest first, then each component
// joins whichever group is currently smaller. Ties keep component order.
std::vector<int> group_components(const std::vector<int>& comp, int count) {
  std::vector<std::size_t> size(static_cast<std::size_t>(count), 0);
  for (int c : comp) ++size[static_cast<std::size_t>(c)];
  std::vector<int> order(static_cast<std::size_t>(count));
  for (int c = 0; c < count; ++c) order[static_cast<std::size_t>(c)] = c;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return size[static_cast<std::size_t>(a)] > size[static_cast<std::size_t>(b)];
  });
  std::vector<int> group(static_cast<std::size_t>(count), 0);
  std::size_t total[2] = {0, 0};
  for (int c : order) {
    const int g = total[0] <= total[1] ? 0 : 1;
    group[static_cast<std::size_t>(c)] = g;
    total[g] += size[static_cast<std::size_t>(c)];
  }
  // Component of vertex 0 is always group 0.
  const int flip = group[static_cast<std::size_t>(comp.front())];
  std::vector<int> labels;
  for (int c : comp) labels.push_back(group[static_cast<std::size_t>(c)] ^ flip);
  return labels;
}

}  // namespace

Partition spectral_bipartition(const Mat& laplacian) {
  const EigenResult eig = symmetric_eigen(laplacian);
  const double lmax = eig.values.cwiseAbs().maxCoeff();
  if (lmax <= 0.0) throw DomainError("spectral_bipartition: degenerate graph (all eigenvalues zero)");
  const double floor = kFiedlerFloor * lmax;
  Index pick = -1;
  for (Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values(i) > floor) {
      pick = i;
      break;
    }
  }
  if (pick < 0) throw DomainError("spectral_bipartition: degenerate graph (no nonzero eigenvalue)");

  Partition out;
  if (pick >= 2) {
    // A repeated zero eigenvalue means a disconnected graph. Its eigenvectors
    // are arbitrary mixes of component indicators, so split on components.
    int count = 0;
    const std::vector<int> comp = components(laplacian, count);
    if (count >= 2) {
      out.labels = group_components(comp, count);
      return out;
    }
    pick = 1;
  }

  Vec v = eig.vectors.col(pick);
  for (Index i = 0; i < v.size(); ++i) {
    if (v(i) != 0.0) {
      if (v(i) < 0.0) v = -v;
      break;
    }
  }
  out.labels.resize(static_cast<std::size_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) out.labels[static_cast<std::size_t>(i)] = v(i) >= 0.0 ? 0 : 1;
  return out;
}

double clustering_error(const Partition& predicted, std::span<const int> truth) {
  if (predicted.labels.size() != truth.size()) {
    throw DomainError("clustering_error: label counts differ");
  }
  if (truth.empty()) throw DomainError("clustering_error: no points");
  const std::set<int> truth_ids(truth.begin(), truth.end());
  const std::set<int> pred_ids(predicted.labels.begin(), predicted.labels.end());
  auto two_way = [](const std::set<int>& ids) {
    return ids.size() <= 2 && std::all_of(ids.begin(), ids.end(), [](int v) { return v == 0 || v == 1; });
  };
  if (predicted.num_clusters != 2 || !two_way(truth_ids) || !two_way(pred_ids)) {
    throw DomainError("clustering_error: only two-cluster partitions with labels {0, 1} are supported");
  }
  std::size_t same = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) same += predicted.labels[i] == truth[i];
  const std::size_t miss = std::min(truth.size() - same, same);
  return static_cast<double>(miss) / static_cast<double>(truth.size());
}

}  // namespace gfs
