#include "gfs/experiments.hpp"

#include "gfs/errors.hpp"
#include "gfs/selection.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace gfs {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Index round_index(double x) { return static_cast<Index>(std::llround(x)); }

struct CellPlan {
  UnionSpec spec;
  std::uint64_t row = 0, col = 0;
  std::string invalid;  // non-empty when the spec cannot be generated
};

// Runs every (cell, trial) pair once, scoring each ensemble with every method
// in `methods`. Results land in fixed slots, so scheduling cannot change them.
std::vector<std::vector<EfsEstimate>> run_cells(const std::vector<CellPlan>& plans,
                                                std::span<const Method> methods, Index trials,
                                                std::uint64_t base_seed, unsigned workers) {
  const std::size_t per_cell = static_cast<std::size_t>(trials);
  const std::size_t nm = methods.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> slots(plans.size() * per_cell * nm, nan);
  std::vector<std::string> errors(plans.size() * per_cell);

  parallel_for(plans.size() * per_cell, workers, [&](std::size_t task) {
    const std::size_t cell = task / per_cell, t = task % per_cell;
    const CellPlan& plan = plans[cell];
    if (!plan.invalid.empty()) return;
    try {
      UnionSpec spec = plan.spec;
      spec.seed = mix64(base_seed, plan.row, plan.col, t);
      const Ensemble ensemble = generate_union(spec);
      for (std::size_t m = 0; m < nm; ++m) {
        slots[task * nm + m] = efs_fraction(ensemble, methods[m], spec.k);
      }
    } catch (const std::exception& e) {
      for (std::size_t m = 0; m < nm; ++m) slots[task * nm + m] = nan;
      errors[task] = e.what();
    }
  });

  std::vector<std::vector<EfsEstimate>> out(nm, std::vector<EfsEstimate>(plans.size()));
  for (std::size_t cell = 0; cell < plans.size(); ++cell) {
    for (std::size_t m = 0; m < nm; ++m) {
      EfsEstimate& est = out[m][cell];
      if (!plans[cell].invalid.empty()) {
        est.failed = trials;
        est.valid = false;
        est.diagnostic = plans[cell].invalid;
        continue;
      }
      double sum = 0.0;
      for (std::size_t t = 0; t < per_cell; ++t) {
        const std::size_t task = cell * per_cell + t;
        const double v = slots[task * nm + m];
        if (std::isnan(v)) {
          ++est.failed;
          if (est.diagnostic.empty()) est.diagnostic = errors[task];
        } else {
          sum += v;
          ++est.trials;
        }
      }
      est.p_efs = est.trials > 0 ? sum / static_cast<double>(est.trials) : 0.0;
      est.valid = est.trials > 0 && static_cast<double>(est.failed) <=
                                        kMaxFailedFraction * static_cast<double>(trials);
    }
  }
  return out;
}

std::vector<CellPlan> plan_grid(const GridSpec& grid) {
  std::vector<CellPlan> plans;
  for (std::size_t r = 0; r < grid.delta.size(); ++r) {
    for (std::size_t c = 0; c < grid.axis2.size(); ++c) {
      CellPlan plan;
      plan.row = r;
      plan.col = c;
      plan.spec = grid.cell_spec(r, c);
      try {
        plan.spec.validate();
      } catch (const DomainError& e) {
        plan.invalid = e.what();
      }
      plans.push_back(std::move(plan));
    }
  }
  return plans;
}

}  // namespace

std::string_view to_string(Method m) { return m == Method::omp ? "omp" : "nn"; }

Method parse_method(std::string_view s) {
  if (s == "omp") return Method::omp;
  if (s == "nn") return Method::nn;
  throw DomainError("unknown method '" + std::string(s) + "' (expected omp|nn)");
}

std::string_view to_string(SecondAxis a) { return a == SecondAxis::rho ? "rho" : "tau"; }

std::uint64_t mix64(std::uint64_t base, std::uint64_t row, std::uint64_t col, std::uint64_t t) {
  std::uint64_t h = splitmix64(base);
  h = splitmix64(h ^ row);
  h = splitmix64(h ^ col);
  return splitmix64(h ^ t);
}

void GridSpec::validate() const {
  auto fail = [](const std::string& msg) { throw DomainError("grid: " + msg); };
  if (delta.empty() || axis2.empty()) fail("both axes need at least one value");
  if (k < 1) fail("k must be >= 1");
  if (trials < 1) fail("trials must be >= 1");
  if (n < 0) fail("n must be >= 0");
  for (double v : delta) {
    if (!(v >= 0.0 && v <= 1.0)) fail("delta values must lie in [0, 1]");
  }
  for (double v : axis2) {
    if (axis2_kind == SecondAxis::rho && !(v > 0.0 && v <= 1.0)) {
      fail("rho values must lie in (0, 1]");
    }
    if (axis2_kind == SecondAxis::tau && !(v >= 0.0 && v < 1.0)) {
      fail("tau values must lie in [0, 1)");
    }
  }
  if (axis2_kind == SecondAxis::tau && !(rho_fixed > 0.0 && rho_fixed <= 1.0)) {
    fail("fixed rho must lie in (0, 1]");
  }
}

UnionSpec GridSpec::cell_spec(std::size_t r, std::size_t c) const {
  UnionSpec s;
  s.n = n;
  s.k = k;
  s.q = round_index(delta.at(r) * static_cast<double>(k));
  s.shape = shape;
  const double rho = axis2_kind == SecondAxis::rho ? axis2.at(c) : rho_fixed;
  s.d = std::max<Index>(1, round_index(static_cast<double>(k) / rho));
  if (axis2_kind == SecondAxis::tau) {
    s.model = CoefficientModel::m2;
    s.tau = axis2.at(c);
  }
  return s;
}

std::vector<double> PhaseGrid::column(std::size_t c) const {
  std::vector<double> out;
  for (std::size_t r = 0; r < rows(); ++r) out.push_back(p(r, c));
  return out;
}

double efs_fraction(const Ensemble& ensemble, Method method, Index k) {
  const Index d = ensemble.size();
  const std::span<const int> labels(ensemble.labels);
  if (d < 2) throw DomainError("efs_fraction: need at least two points");
  std::size_t ok = 0;
  if (method == Method::nn) {
    const Mat gram = ensemble.points.transpose() * ensemble.points;
    const Index kk = std::min(k, d - 1);
    for (Index i = 0; i < d; ++i) {
      if (efs_check(nn_feature_set(gram, i, kk), labels)) ++ok;
    }
  } else {
    const EndogenousOmp engine(ensemble.points);
    const StoppingRule stop = StoppingRule::sparsity(k);
    for (Index i = 0; i < d; ++i) {
      const int own = labels[static_cast<std::size_t>(i)];
      const OmpObserver abort_on_foreign = [&](const OmpStep& step) {
        return labels[static_cast<std::size_t>(step.chosen)] == own;
      };
      FeatureSet fs;
      try {
        fs = engine.select(i, stop, abort_on_foreign);
      } catch (const StallError& e) {
        fs = e.partial();
      }
      if (!fs.selected.empty() && efs_check(fs, labels)) ++ok;
    }
  }
  return static_cast<double>(ok) / static_cast<double>(d);
}

EfsEstimate efs_probability(const UnionSpec& spec, Method method, Index trials,
                            std::uint64_t base_seed, unsigned workers) {
  spec.validate();
  if (trials < 1) throw DomainError("efs_probability: trials must be >= 1");
  const std::vector<CellPlan> plans{{spec, 0, 0, {}}};
  const Method methods[] = {method};
  return run_cells(plans, methods, trials, base_seed, workers)[0][0];
}

PhaseGrid phase_transition(const GridSpec& grid, unsigned workers) {
  grid.validate();
  const Method methods[] = {grid.method};
  auto res = run_cells(plan_grid(grid), methods, grid.trials, grid.base_seed, workers);
  return {grid, std::move(res[0])};
}

std::pair<PhaseGrid, PhaseGrid> omp_vs_nn(const GridSpec& grid, unsigned workers) {
  grid.validate();
  const Method methods[] = {Method::omp, Method::nn};
  auto res = run_cells(plan_grid(grid), methods, grid.trials, grid.base_seed, workers);
  GridSpec omp_spec = grid, nn_spec = grid;
  omp_spec.method = Method::omp;
  nn_spec.method = Method::nn;
  return {PhaseGrid{omp_spec, std::move(res[0])}, PhaseGrid{nn_spec, std::move(res[1])}};
}

PhaseGrid bounded_energy_sweep(Index k, double rho_fixed, std::vector<double> delta_axis,
                               std::vector<double> tau_axis, Index trials,
                               std::uint64_t seed, unsigned workers) {
  GridSpec grid;
  grid.delta = std::move(delta_axis);
  grid.axis2 = std::move(tau_axis);
  grid.axis2_kind = SecondAxis::tau;
  grid.k = k;
  grid.trials = trials;
  grid.base_seed = seed;
  grid.rho_fixed = rho_fixed;
  return phase_transition(grid, workers);
}

std::optional<double> phase_boundary(std::span<const double> delta, std::span<const double> p,
                                     double level) {
  if (delta.size() != p.size()) throw DomainError("phase_boundary: axis length mismatch");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] >= level) continue;
    if (i == 0) return delta[0];
    const double t = (p[i - 1] - level) / (p[i - 1] - p[i]);
    return delta[i - 1] + t * (delta[i] - delta[i - 1]);
  }
  return std::nullopt;
}

void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& task) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t nthreads = std::min<std::size_t>(workers, count);
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        const std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < nthreads; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace gfs
