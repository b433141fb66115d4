#pragma once

#include "gfs/numerics.hpp"
#include "gfs/synth.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gfs {

enum class Method { omp, nn };
std::string_view to_string(Method m);
Method parse_method(std::string_view s);

/// What the second grid axis holds.
enum class SecondAxis { rho, tau };
std::string_view to_string(SecondAxis a);

/// Stable 64-bit seed derivation (splitmix64 finalizer chained over the
/// coordinates). Part of the file format: changing it changes every result.
std::uint64_t mix64(std::uint64_t base, std::uint64_t row, std::uint64_t col, std::uint64_t t);

/// Monte Carlo grid. Cell (r, c) uses delta[r] and axis2[c]; q = round(delta k)
/// and, for rho axes, d = round(k / rho).
struct GridSpec {
  std::vector<double> delta;
  std::vector<double> axis2;
  SecondAxis axis2_kind = SecondAxis::rho;
  Index k = 20;
  Index trials = 100;
  std::uint64_t base_seed = 0;
  Method method = Method::omp;
  SpectrumShape shape = SpectrumShape::orthoblock;
  Index n = 0;             // 0 = default ambient dimension
  double rho_fixed = 0.1;  // tau axes only

  void validate() const;
  /// Union spec for cell (r, c), without the seed.
  UnionSpec cell_spec(std::size_t r, std::size_t c) const;
};

/// Trials whose generation or selection threw, as a fraction, above which a
/// cell is marked invalid.
inline constexpr double kMaxFailedFraction = 0.10;

struct EfsEstimate {
  double p_efs = 0.0;  // mean over successful trials
  Index trials = 0;    // successful trials
  Index failed = 0;
  bool valid = true;
  std::string diagnostic;  // first failure message, if any
};

struct PhaseGrid {
  GridSpec spec;
  std::vector<EfsEstimate> cells;  // row-major, delta.size() x axis2.size()

  std::size_t rows() const { return spec.delta.size(); }
  std::size_t cols() const { return spec.axis2.size(); }
  const EfsEstimate& at(std::size_t r, std::size_t c) const { return cells[r * cols() + c]; }
  double p(std::size_t r, std::size_t c) const { return at(r, c).p_efs; }
  /// P(EFS) along the delta axis for column c.
  std::vector<double> column(std::size_t c) const;
};

/// Fraction of points in `ensemble` whose sparsity-k feature set is exact.
/// OMP stops a point at its first foreign atom; a stalled pursuit is scored
/// on its partial support, and an empty one counts as a failure.
double efs_fraction(const Ensemble& ensemble, Method method, Index k);

/// Mean EFS fraction over `trials` unions drawn with seeds mix64(base, 0, 0, t).
/// Throws DomainError for an invalid spec; per-trial failures are recorded.
EfsEstimate efs_probability(const UnionSpec& spec, Method method, Index trials,
                            std::uint64_t base_seed, unsigned workers = 0);

/// Fills every cell of the grid. Cells never abort the run: an infeasible
/// cell comes back invalid. Output is independent of `workers`.
PhaseGrid phase_transition(const GridSpec& grid, unsigned workers = 0);

/// Both methods on identical per-trial ensembles; grid.method is ignored.
std::pair<PhaseGrid, PhaseGrid> omp_vs_nn(const GridSpec& grid, unsigned workers = 0);

/// M2 grid over (delta, tau) at fixed oversampling ratio.
PhaseGrid bounded_energy_sweep(Index k, double rho_fixed, std::vector<double> delta_axis,
                               std::vector<double> tau_axis, Index trials,
                               std::uint64_t seed, unsigned workers = 0);

/// First delta where p drops below `level`, linearly interpolated from the
/// previous grid point. Returns delta.front() if p starts below and nullopt if
/// it never drops.
std::optional<double> phase_boundary(std::span<const double> delta, std::span<const double> p,
                                     double level = 0.5);

/// Runs task(i) for i in [0, count) on up to `workers` threads (0 = hardware
/// concurrency). Exceptions propagate after all threads join.
void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& task);

}  // namespace gfs
