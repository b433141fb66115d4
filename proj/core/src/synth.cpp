#include "gfs/synth.hpp"

#include "gfs/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace gfs {

namespace {

// Atom center inside its segment; shifts move the partner toward the far end.
constexpr double kAtomCenter = kSegmentLength / 4.0;
constexpr double kMaxShift = kSegmentLength - 1.0 - kAtomCenter;
// Bisection stops once the realized coherence is this close to the target.
constexpr double kCoherenceTol = 1e-14;
// Draws whose unnormalized norm falls below this are redrawn.
constexpr double kDegenerateDraw = 1e-12;
// Ensemble membership tolerances.
constexpr double kNormTol = 1e-10;
constexpr double kSpanTol = 1e-8;

bool uses_shifts(SpectrumShape s) {
  return s == SpectrumShape::lorentzian || s == SpectrumShape::exponential;
}

Index count_zero(const std::vector<double>& sigma) {
  return static_cast<Index>(std::count(sigma.begin(), sigma.end(), 0.0));
}

Index count_partial(const std::vector<double>& sigma) {
  return static_cast<Index>(
      std::count_if(sigma.begin(), sigma.end(), [](double s) { return s < 1.0; }));
}

Vec draw_gaussian(Index k, std::normal_distribution<double>& normal, std::mt19937_64& rng) {
  Vec a(k);
  for (Index i = 0; i < k; ++i) a(i) = normal(rng);
  return a;
}

}  // namespace

std::string_view to_string(CoefficientModel m) {
  return m == CoefficientModel::m1 ? "m1" : "m2";
}

std::string_view to_string(SpectrumShape s) {
  switch (s) {
    case SpectrumShape::orthoblock: return "orthoblock";
    case SpectrumShape::lorentzian: return "lorentzian";
    case SpectrumShape::exponential: return "exponential";
    case SpectrumShape::explicit_list: return "explicit";
  }
  return "unknown";
}

CoefficientModel parse_model(std::string_view s) {
  if (s == "m1") return CoefficientModel::m1;
  if (s == "m2") return CoefficientModel::m2;
  throw DomainError("unknown coefficient model '" + std::string(s) + "' (expected m1|m2)");
}

SpectrumShape parse_shape(std::string_view s) {
  if (s == "orthoblock") return SpectrumShape::orthoblock;
  if (s == "lorentzian") return SpectrumShape::lorentzian;
  if (s == "exponential") return SpectrumShape::exponential;
  if (s == "explicit") return SpectrumShape::explicit_list;
  throw DomainError("unknown spectrum '" + std::string(s) +
                    "' (expected orthoblock|lorentzian|exponential|explicit)");
}

std::vector<double> target_spectrum(const UnionSpec& spec) {
  if (spec.shape == SpectrumShape::explicit_list) return spec.sigma;
  std::vector<double> sigma(static_cast<std::size_t>(spec.k), 0.0);
  const double k = static_cast<double>(spec.k);
  for (Index i = 0; i < spec.q; ++i) {
    const double t = static_cast<double>(i);
    double v = 1.0;
    if (spec.shape == SpectrumShape::lorentzian) {
      v = 0.9 / (1.0 + (4.0 * t / k) * (4.0 * t / k));
    } else if (spec.shape == SpectrumShape::exponential) {
      v = 0.75 * std::exp(-t / (1.9 * k));
    }
    sigma[static_cast<std::size_t>(i)] = v;
  }
  return sigma;
}

Index min_ambient_dim(const UnionSpec& spec) {
  const auto sigma = target_spectrum(spec);
  if (uses_shifts(spec.shape)) return kSegmentLength * (spec.k + count_zero(sigma));
  return spec.k + count_partial(sigma);
}

Index ambient_dim(const UnionSpec& spec) {
  if (spec.n > 0) return spec.n;
  // Two subspaces: 2 k p room for the axis constructions, one segment per
  // basis direction for the shifted-atom ones.
  if (uses_shifts(spec.shape)) return kSegmentLength * 2 * spec.k;
  return 2 * spec.k * 2;
}

void UnionSpec::validate() const {
  auto fail = [](const std::string& msg) { throw DomainError("union spec: " + msg); };
  if (k < 1) fail("k must be >= 1");
  if (q < 0 || q > k) fail("q must satisfy 0 <= q <= k");
  if (d < 1) fail("d must be >= 1");
  if (shape == SpectrumShape::explicit_list) {
    if (static_cast<Index>(sigma.size()) != k) fail("explicit spectrum needs k entries");
    for (std::size_t i = 0; i < sigma.size(); ++i) {
      if (!(sigma[i] >= 0.0 && sigma[i] <= 1.0)) fail("explicit spectrum entries must lie in [0, 1]");
      if (i > 0 && sigma[i] > sigma[i - 1]) fail("explicit spectrum must be nonincreasing");
    }
    if (static_cast<Index>(sigma.size()) - count_zero(sigma) != q) {
      fail("q must equal the number of nonzero explicit spectrum entries");
    }
  }
  if (model == CoefficientModel::m2) {
    if (!(tau >= 0.0 && tau < 1.0)) fail("tau must satisfy 0 <= tau < 1");
    if (q <= 0 || q >= k) fail("model m2 needs 0 < q < k");
  }
  if (n < 0) fail("n must be >= 0");
  if (n > 0 && n < min_ambient_dim(*this)) {
    fail("n = " + std::to_string(n) + " is too small; the construction needs n >= " +
         std::to_string(min_ambient_dim(*this)));
  }
}

Vec shift_atom(SpectrumShape shape, double center, Index length, double width) {
  if (!uses_shifts(shape)) throw DomainError("shift_atom: shape has no atom profile");
  Vec a(length);
  for (Index t = 0; t < length; ++t) {
    const double x = (static_cast<double>(t) - center) / width;
    a(t) = shape == SpectrumShape::lorentzian ? 1.0 / (1.0 + x * x) : std::exp(-std::abs(x));
  }
  return a / a.norm();
}

double shift_for_coherence(SpectrumShape shape, double target) {
  if (!(target > 0.0 && target <= 1.0)) {
    throw DomainError("shift_for_coherence: target must lie in (0, 1]");
  }
  const Vec base = shift_atom(shape, kAtomCenter);
  auto coherence = [&](double shift) { return base.dot(shift_atom(shape, kAtomCenter + shift)); };
  if (target >= 1.0) return 0.0;
  double lo = 0.0, hi = kMaxShift;
  if (coherence(hi) > target) {
    throw DomainError("shift_for_coherence: target " + std::to_string(target) +
                      " is below the smallest coherence reachable inside one segment");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double c = coherence(mid);
    if (std::abs(c - target) <= kCoherenceTol) return mid;
    (c > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

SubspacePair build_subspace_pair(const UnionSpec& spec) {
  spec.validate();
  const auto sigma = target_spectrum(spec);
  const Index n = ambient_dim(spec), k = spec.k;
  Mat psi = Mat::Zero(n, k), phi = Mat::Zero(n, k);

  if (uses_shifts(spec.shape)) {
    const Index w = kSegmentLength;
    Index segment = 0;
    for (Index i = 0; i < k; ++i) {
      const double s = sigma[static_cast<std::size_t>(i)];
      psi.col(i).segment(segment * w, w) = shift_atom(spec.shape, kAtomCenter);
      if (s == 0.0) ++segment;  // partner goes to a fresh, disjoint segment
      const double shift = s == 0.0 ? 0.0 : shift_for_coherence(spec.shape, s);
      phi.col(i).segment(segment * w, w) = shift_atom(spec.shape, kAtomCenter + shift);
      ++segment;
    }
  } else {
    Index axis = 0;
    for (Index i = 0; i < k; ++i) {
      const double s = sigma[static_cast<std::size_t>(i)];
      psi(axis, i) = 1.0;
      phi(axis, i) = s;
      ++axis;
      if (s < 1.0) {
        phi(axis, i) = std::sqrt(1.0 - s * s);
        ++axis;
      }
    }
  }

  SubspacePair out{SubspaceBasis(psi), SubspaceBasis(phi), {}};
  // psi^T phi is diagonal by construction, so its singular values are |diag|.
  Vec diag = (psi.transpose() * phi).diagonal().cwiseAbs();
  std::sort(diag.data(), diag.data() + diag.size(), std::greater<>());
  out.cross.sigma = diag.cwiseMin(1.0);
  while (out.cross.q < k && out.cross.sigma(out.cross.q) > 0.0) ++out.cross.q;
  return out;
}

Mat sample_m1(const SubspaceBasis& basis, Index d, std::mt19937_64& rng) {
  if (d < 1) throw DomainError("sample_m1: d must be >= 1");
  std::normal_distribution<double> normal;
  Mat out(basis.ambient_dim(), d);
  for (Index j = 0; j < d; ++j) {
    Vec y;
    double norm = 0.0;
    do {
      y = basis.phi() * draw_gaussian(basis.dim(), normal, rng);
      norm = y.norm();
    } while (norm < kDegenerateDraw);
    out.col(j) = y / norm;
  }
  return out;
}

Mat sample_m2(const SubspaceBasis& basis, Index d, Index q, double tau, std::mt19937_64& rng) {
  if (d < 1) throw DomainError("sample_m2: d must be >= 1");
  const Index k = basis.dim();
  if (q <= 0 || q >= k) throw DomainError("sample_m2: need 0 < q < k");
  if (!(tau >= 0.0 && tau < 1.0)) throw DomainError("sample_m2: need 0 <= tau < 1");
  std::normal_distribution<double> normal;
  Mat out(basis.ambient_dim(), d);
  for (Index j = 0; j < d; ++j) {
    Vec common, disjoint;
    double nc = 0.0, nd = 0.0;
    do {
      const Vec a = draw_gaussian(k, normal, rng);
      common = basis.phi().leftCols(q) * a.head(q);
      disjoint = basis.phi().rightCols(k - q) * a.tail(k - q);
      nc = common.norm();
      nd = disjoint.norm();
    } while (nc < kDegenerateDraw || nd < kDegenerateDraw);
    const Vec y = tau * common / nc + (1.0 - tau) * disjoint / nd;
    out.col(j) = y / y.norm();
  }
  return out;
}

int Ensemble::num_clusters() const {
  return static_cast<int>(std::set<int>(labels.begin(), labels.end()).size());
}

std::vector<Index> Ensemble::members(int c) const {
  std::vector<Index> out;
  for (std::size_t j = 0; j < labels.size(); ++j) {
    if (labels[j] == c) out.push_back(static_cast<Index>(j));
  }
  return out;
}

Mat Ensemble::cluster(int c) const { return points(Eigen::all, members(c)); }

void Ensemble::validate() const {
  require_finite(points, "ensemble");
  if (static_cast<Index>(labels.size()) != points.cols()) {
    throw DomainError("ensemble: label count does not match point count");
  }
  for (Index j = 0; j < points.cols(); ++j) {
    if (std::abs(points.col(j).norm() - 1.0) > kNormTol) {
      throw DomainError("ensemble: point " + std::to_string(j) + " is not unit norm");
    }
    const int c = labels[static_cast<std::size_t>(j)];
    if (c < 0) throw DomainError("ensemble: negative label");
    if (!bases.empty()) {
      if (c >= static_cast<int>(bases.size())) throw DomainError("ensemble: label without basis");
      if (bases[static_cast<std::size_t>(c)].max_distance(points.col(j)) > kSpanTol) {
        throw DomainError("ensemble: point " + std::to_string(j) +
                          " is outside its subspace");
      }
    }
  }
}

Ensemble generate_union(const UnionSpec& spec) {
  SubspacePair pair = build_subspace_pair(spec);
  std::mt19937_64 rng(spec.seed);
  auto sample = [&](const SubspaceBasis& b) {
    return spec.model == CoefficientModel::m1 ? sample_m1(b, spec.d, rng)
                                              : sample_m2(b, spec.d, spec.q, spec.tau, rng);
  };
  Ensemble out;
  const Mat first = sample(pair.psi);
  const Mat second = sample(pair.phi);
  out.points.resize(first.rows(), 2 * spec.d);
  out.points << first, second;
  out.labels.assign(static_cast<std::size_t>(spec.d), 0);
  out.labels.resize(static_cast<std::size_t>(2 * spec.d), 1);
  out.bases = {std::move(pair.psi), std::move(pair.phi)};
  out.spec = spec;
  return out;
}

}  // namespace gfs
