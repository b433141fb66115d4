#include "gfs/cli/commands.hpp"

#include "gfs/cli/io.hpp"
#include "gfs/cli/svg.hpp"
#include "gfs/errors.hpp"
#include "gfs/selection.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#ifndef GFS_VERSION
#define GFS_VERSION "unknown"
#endif

namespace gfs::cli {

namespace {

std::string str(Index v) { return std::to_string(v); }
std::string str(double v) { return format_double(v); }

// Notes end up inside CSV cells.
std::string cell_text(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

Mat normalized_columns(Mat m, const std::string& path) {
  for (Index j = 0; j < m.cols(); ++j) {
    const double norm = m.col(j).norm();
    if (!(norm > 0.0)) {
      throw DomainError(path + ": column " + std::to_string(j) + " is zero and cannot be normalized");
    }
    m.col(j) /= norm;
  }
  return m;
}

std::vector<int> load_labels(const std::string& path, Index points) {
  auto labels = read_labels(path);
  if (static_cast<Index>(labels.size()) != points) {
    throw DomainError(path + ": " + std::to_string(labels.size()) + " labels for " +
                      std::to_string(points) + " points");
  }
  return labels;
}

int count_clusters(const std::vector<int>& labels, const std::string& path) {
  const std::set<int> distinct(labels.begin(), labels.end());
  const int c = static_cast<int>(distinct.size());
  if (c < 2 || *distinct.rbegin() != c - 1) {
    throw DomainError(path + ": labels must be 0..C-1 with C >= 2 clusters");
  }
  return c;
}

std::string rerun_generate(const GenerateOptions& o) {
  const UnionSpec& s = o.spec;
  std::string cmd = "gfs generate --n " + str(s.n) + " --k " + str(s.k) + " --q " + str(s.q) +
                    " --d " + str(s.d) + " --model " + std::string(to_string(s.model)) +
                    " --tau " + str(s.tau) + " --spectrum " + std::string(to_string(s.shape)) +
                    " --seed " + std::to_string(s.seed) + " --out " + o.out;
  return cmd;
}

FeatureSet select_for_point(const EndogenousOmp& engine, Index i, const StoppingRule& stop,
                            Index& stalled) {
  try {
    return engine.select(i, stop);
  } catch (const StallError& e) {
    ++stalled;
    return e.partial();
  }
}

}  // namespace

std::string version() { return GFS_VERSION; }

void cmd_generate(const GenerateOptions& o) {
  if (o.out.empty()) throw DomainError("generate: --out is required");
  const Ensemble e = generate_union(o.spec);
  const UnionSpec& s = o.spec;
  const Mat y0 = e.cluster(0), y1 = e.cluster(1);
  const CrossSpectrum cross = principal_angles(e.bases[0], e.bases[1]);
  const double mu = mutual_coherence(y0, y1);

  Metadata meta = {{"command", "generate"},
                   {"version", version()},
                   {"n", str(e.points.rows())},
                   {"k", str(s.k)},
                   {"q", str(s.q)},
                   {"d", str(s.d)},
                   {"model", std::string(to_string(s.model))},
                   {"tau", str(s.tau)},
                   {"spectrum", std::string(to_string(s.shape))},
                   {"seed", std::to_string(s.seed)},
                   {"mutual_coherence", str(mu)},
                   {"rerun", rerun_generate(o)}};
  write_matrix(o.out + ".data.csv", e.points, meta);
  write_labels(o.out + ".labels.txt", e.labels);
  for (std::size_t i = 0; i < e.bases.size(); ++i) {
    write_matrix(o.out + ".basis" + std::to_string(i) + ".csv", e.bases[i].phi(),
                 {{"cluster", std::to_string(i)}, {"rerun", rerun_generate(o)}});
  }

  ResultFile summary;
  summary.meta = meta;
  summary.header = {"quantity", "value"};
  summary.rows = {{"points", str(e.size())},
                  {"ambient_dim", str(e.points.rows())},
                  {"mutual_coherence", str(mu)},
                  {"max_cos_theta", str(cross.max())},
                  {"overlap_rank", str(cross.q)},
                  {"sigma_l1", str(cross.l1())}};
  for (Index i = 0; i < cross.sigma.size(); ++i) {
    summary.rows.push_back({"sigma_" + std::to_string(i), str(cross.sigma(i))});
  }
  write_result(o.out + ".summary.csv", summary);
}

void cmd_cluster(const ClusterOptions& o) {
  if (o.out.empty()) throw DomainError("cluster: --out is required");
  const Mat points = normalized_columns(read_matrix(o.data), o.data);
  const Index d = points.cols();
  std::vector<int> truth;
  if (!o.labels.empty()) truth = load_labels(o.labels, d);

  std::vector<FeatureSet> sets;
  Index stalled = 0;
  std::string stop_desc;
  if (o.method == Method::omp) {
    const StoppingRule stop = o.residual ? StoppingRule::residual(*o.residual)
                                         : StoppingRule::sparsity(o.sparsity);
    stop_desc = o.residual ? "residual=" + str(*o.residual) : "sparsity=" + str(o.sparsity);
    const EndogenousOmp engine(points);
    for (Index i = 0; i < d; ++i) sets.push_back(select_for_point(engine, i, stop, stalled));
  } else {
    if (o.residual) throw DomainError("cluster: --residual applies to omp only");
    stop_desc = "sparsity=" + str(o.sparsity);
    const Mat gram = points.transpose() * points;
    for (Index i = 0; i < d; ++i) sets.push_back(nn_feature_set(gram, i, o.sparsity));
  }

  const CoefficientMatrix c = coefficient_matrix(sets, d);
  const Affinity w(c.c);
  const Partition part = spectral_bipartition(graph_laplacian(w, o.laplacian));

  ResultFile r;
  r.meta = {{"command", "cluster"},
            {"version", version()},
            {"data", o.data},
            {"labels", o.labels},
            {"method", std::string(to_string(o.method))},
            {"stopping", stop_desc},
            {"laplacian", o.laplacian == LaplacianKind::plain ? "plain" : "normalized"},
            {"points", str(d)},
            {"stalled_points", str(stalled)},
            {"empty_rows", str(static_cast<Index>(c.empty_rows.size()))}};
  if (!truth.empty()) {
    const std::set<int> distinct(truth.begin(), truth.end());
    if (distinct.size() == 2 && *distinct.rbegin() == 1) {
      r.meta.emplace_back("clustering_error", str(clustering_error(part, truth)));
    } else {
      r.meta.emplace_back("clustering_error", "n/a (needs labels 0/1)");
    }
    r.meta.emplace_back("efs_rate", str(efs_rate(sets, truth)));
  }
  std::string rerun = "gfs cluster --data " + o.data + (o.labels.empty() ? "" : " --labels " + o.labels) +
                      " --method " + std::string(to_string(o.method));
  rerun += o.residual ? " --residual " + str(*o.residual) : " --sparsity " + str(o.sparsity);
  rerun += std::string(" --laplacian ") + (o.laplacian == LaplacianKind::plain ? "plain" : "normalized");
  rerun += " --out " + o.out;
  r.meta.emplace_back("rerun", rerun);

  r.header = {"point", "label_pred", "label_true"};
  for (Index i = 0; i < d; ++i) {
    r.rows.push_back({str(i), std::to_string(part.labels[static_cast<std::size_t>(i)]),
                      truth.empty() ? "" : std::to_string(truth[static_cast<std::size_t>(i)])});
  }
  write_result(o.out, r);
}

void cmd_phase(const PhaseOptions& o) {
  if (o.out.empty()) throw DomainError("phase: --out is required");
  GridSpec g = o.grid;
  std::vector<PhaseGrid> grids;
  if (o.method == PhaseMethod::both) {
    auto [a, b] = omp_vs_nn(g, o.workers);
    grids.push_back(std::move(a));
    grids.push_back(std::move(b));
  } else {
    g.method = o.method == PhaseMethod::omp ? Method::omp : Method::nn;
    grids.push_back(phase_transition(g, o.workers));
  }
  const std::string method = o.method == PhaseMethod::both ? "both" : std::string(to_string(g.method));
  const bool tau = g.axis2_kind == SecondAxis::tau;

  ResultFile r;
  r.meta = {{"command", "phase"},
            {"version", version()},
            {"k", str(g.k)},
            {"n", str(g.n)},
            {"spectrum", std::string(to_string(g.shape))},
            {"model", tau ? "m2" : "m1"},
            {"axis", std::string(to_string(g.axis2_kind))},
            {"delta_grid", join_grid(g.delta)},
            {std::string(to_string(g.axis2_kind)) + "_grid", join_grid(g.axis2)}};
  if (tau) r.meta.emplace_back("rho", str(g.rho_fixed));
  r.meta.emplace_back("trials", str(g.trials));
  r.meta.emplace_back("seed", std::to_string(g.base_seed));
  r.meta.emplace_back("method", method);

  std::string rerun = "gfs phase --k " + str(g.k) + " --n " + str(g.n) + " --spectrum " +
                      std::string(to_string(g.shape)) + " --delta-grid " + join_grid(g.delta) +
                      (tau ? " --tau-grid " : " --rho-grid ") + join_grid(g.axis2) +
                      (tau ? " --rho " + str(g.rho_fixed) : "") + " --trials " + str(g.trials) +
                      " --method " + method + " --seed " + std::to_string(g.base_seed) +
                      " --out " + o.out + (o.svg.empty() ? "" : " --svg " + o.svg);
  r.meta.emplace_back("rerun", rerun);

  r.header = {"delta", "rho_or_tau"};
  if (grids.size() == 2) {
    r.header.insert(r.header.end(), {"p_efs_omp", "p_efs_nn"});
  } else {
    r.header.push_back("p_efs");
  }
  r.header.insert(r.header.end(), {"trials", "valid"});

  const PhaseGrid& first = grids.front();
  for (std::size_t row = 0; row < first.rows(); ++row) {
    for (std::size_t col = 0; col < first.cols(); ++col) {
      std::vector<std::string> cells{str(g.delta[row]), str(g.axis2[col])};
      bool valid = true;
      for (const auto& grid : grids) {
        const EfsEstimate& e = grid.at(row, col);
        cells.push_back(str(e.p_efs));
        valid = valid && e.valid;
        if (!e.valid && &grid == &first) {
          const std::string where = "delta=" + str(g.delta[row]) + " " +
                                    std::string(to_string(g.axis2_kind)) + "=" + str(g.axis2[col]);
          r.meta.emplace_back("invalid_cell", cell_text(where + ": " + e.diagnostic));
          std::cerr << "gfs phase: invalid cell " << where << ": " << e.diagnostic << '\n';
        }
      }
      cells.push_back(str(first.at(row, col).trials));
      cells.push_back(valid ? "1" : "0");
      r.rows.push_back(std::move(cells));
    }
  }
  write_result(o.out, r);

  if (!o.svg.empty()) {
    std::vector<const PhaseGrid*> ptrs;
    std::vector<std::string> titles;
    for (const auto& grid : grids) {
      ptrs.push_back(&grid);
      titles.push_back("P(EFS), " + std::string(to_string(grid.spec.method)) + ", k=" + str(g.k));
    }
    std::ofstream svg(o.svg, std::ios::binary);
    if (!svg) throw DomainError("cannot open '" + o.svg + "' for writing");
    svg << heatmap_svg(ptrs, titles);
  }
}

void cmd_diagnose(const DiagnoseOptions& o) {
  if (o.out.empty()) throw DomainError("diagnose: --out is required");
  const Mat points = normalized_columns(read_matrix(o.data), o.data);
  const auto labels = load_labels(o.labels, points.cols());
  const int nc = count_clusters(labels, o.labels);
  const bool needs_bases = o.condition != DiagnoseCondition::erc;
  const char* cond_name[] = {"thm1", "cor1", "thm3", "erc"};
  const std::string cname = cond_name[static_cast<int>(o.condition)];

  std::vector<SubspaceBasis> bases;
  if (needs_bases) {
    if (static_cast<int>(o.bases.size()) != nc) {
      throw DomainError("diagnose: condition " + cname + " needs --bases with one basis file per cluster (" +
                        std::to_string(nc) + " clusters, " + std::to_string(o.bases.size()) +
                        " given)");
    }
    for (const auto& path : o.bases) {
      bases.emplace_back(read_matrix(path));
      if (bases.back().ambient_dim() != points.rows()) {
        throw DomainError(path + ": basis ambient dimension does not match the data");
      }
    }
  }
  if (o.condition == DiagnoseCondition::erc && o.sparsity < 1) {
    throw DomainError("diagnose: condition erc needs --sparsity >= 1");
  }

  Ensemble e;
  e.points = points;
  e.labels = labels;

  ResultFile r;
  r.meta = {{"command", "diagnose"}, {"version", version()}, {"data", o.data},
            {"labels", o.labels},    {"condition", cname},     {"dirs", str(o.dirs)},
            {"seed", std::to_string(o.seed)}};
  std::string bases_joined;
  for (std::size_t i = 0; i < o.bases.size(); ++i) bases_joined += (i ? "," : "") + o.bases[i];
  r.meta.emplace_back("bases", bases_joined);
  std::string rerun = "gfs diagnose --data " + o.data + " --labels " + o.labels +
                      (bases_joined.empty() ? "" : " --bases " + bases_joined) + " --condition " +
                      cname + " --dirs " + str(o.dirs) + " --seed " + std::to_string(o.seed) +
                      (o.sparsity > 0 ? " --sparsity " + str(o.sparsity) : "") + " --out " + o.out;
  r.meta.emplace_back("rerun", rerun);
  r.header = {"cluster", "other", "condition", "lhs", "rhs", "holds",
              "mu_c",    "eps",   "max_cos",   "sigma_l1", "gamma", "note"};

  if (o.condition == DiagnoseCondition::erc) {
    const EndogenousOmp engine(points);
    const StoppingRule stop = StoppingRule::sparsity(o.sparsity);
    for (int c = 0; c < nc; ++c) {
      double worst = 0.0;
      Index scored = 0, skipped = 0, stalled = 0;
      for (const Index i : e.members(c)) {
        const FeatureSet fs = select_for_point(engine, i, stop, stalled);
        if (fs.selected.empty()) {
          ++skipped;
          continue;
        }
        // Dictionary without the point itself; remap the support accordingly.
        std::vector<Index> keep, lambda;
        for (Index j = 0; j < points.cols(); ++j) {
          if (j != i) keep.push_back(j);
        }
        for (const Index j : fs.selected) lambda.push_back(j < i ? j : j - 1);
        try {
          worst = std::max(worst, erc(points(Eigen::all, keep), lambda));
          ++scored;
        } catch (const DomainError&) {
          ++skipped;
        }
      }
      const double mu = max_mutual_coherence(points, labels, c);
      const bool holds = scored > 0 && worst < 1.0;
      r.rows.push_back({std::to_string(c), "-1", cname, str(worst), "1", holds ? "1" : "0", str(mu),
                        "", "", "", "",
                        "scored=" + str(scored) + " skipped=" + str(skipped) +
                            " stalled=" + str(stalled)});
    }
    write_result(o.out, r);
    return;
  }

  std::vector<double> eps(static_cast<std::size_t>(nc));
  for (int c = 0; c < nc; ++c) {
    eps[static_cast<std::size_t>(c)] =
        covering_diameter(e.cluster(c), bases[static_cast<std::size_t>(c)], o.dirs, o.seed).diameter;
  }
  for (int i = 0; i < nc; ++i) {
    for (int j = 0; j < nc; ++j) {
      if (i == j) continue;
      const auto& bi = bases[static_cast<std::size_t>(i)];
      const auto& bj = bases[static_cast<std::size_t>(j)];
      const Mat yi = e.cluster(i), yj = e.cluster(j);
      const double mu = mutual_coherence(yi, yj);
      const double ep = eps[static_cast<std::size_t>(i)];
      const CrossSpectrum cross = principal_angles(bi, bj);
      const double gamma = bounding_constant(yi, yj, bi, bj);
      std::vector<std::string> row{std::to_string(i), std::to_string(j), cname};
      std::string note;
      try {
        EfsCertificate cert;
        if (o.condition == DiagnoseCondition::thm1) {
          cert = efs_condition_thm1(mu, ep, cross.max());
        } else if (o.condition == DiagnoseCondition::cor1) {
          cert = efs_condition_cor1(ep, cross.max());
        } else {
          cert = efs_condition_thm3(ep, gamma, cross);
          if (!cert.holds && cert.rhs == 0.0) note = "vacuous: gamma * |sigma|_1 >= 1";
        }
        row.insert(row.end(), {str(cert.lhs), str(cert.rhs), cert.holds ? "1" : "0"});
      } catch (const PreconditionError& err) {
        note = std::string("precondition violated: ") + err.what();
        row.insert(row.end(), {"", "", "0"});
      }
      row.insert(row.end(), {str(mu), str(ep), str(cross.max()), str(cross.l1()), str(gamma),
                             cell_text(note)});
      r.rows.push_back(std::move(row));
    }
  }
  write_result(o.out, r);
}

void cmd_report(const std::vector<std::string>& files, std::ostream& os) {
  for (const auto& path : files) {
    const ResultFile r = read_result(path);
    const std::string command = r.get("command");
    os << path << ": " << (command.empty() ? "unknown" : command) << ", " << r.rows.size()
       << " rows\n";
    if (command == "phase") {
      const std::size_t dcol = r.column("delta"), acol = r.column("rho_or_tau");
      std::vector<std::string> pcols;
      for (const auto& h : r.header) {
        if (h.rfind("p_efs", 0) == 0) pcols.push_back(h);
      }
      std::vector<std::string> axis_values;
      for (const auto& row : r.rows) {
        if (std::find(axis_values.begin(), axis_values.end(), row[acol]) == axis_values.end()) {
          axis_values.push_back(row[acol]);
        }
      }
      for (const auto& a : axis_values) {
        for (const auto& pc : pcols) {
          const std::size_t pcol = r.column(pc);
          std::vector<double> delta, p;
          for (const auto& row : r.rows) {
            if (row[acol] != a) continue;
            delta.push_back(parse_double(row[dcol]));
            p.push_back(parse_double(row[pcol]));
          }
          const auto b = phase_boundary(delta, p);
          os << "  " << r.get("axis") << "=" << a << " " << pc << " boundary "
             << (b ? format_double(*b) : std::string("none")) << '\n';
        }
      }
    } else if (command == "cluster") {
      os << "  method " << r.get("method") << ", clustering_error "
         << (r.get("clustering_error").empty() ? "n/a" : r.get("clustering_error"))
         << ", efs_rate " << (r.get("efs_rate").empty() ? "n/a" : r.get("efs_rate")) << '\n';
    } else if (command == "diagnose") {
      const std::size_t hcol = r.column("holds");
      std::size_t holds = 0;
      for (const auto& row : r.rows) holds += row[hcol] == "1";
      os << "  " << r.get("condition") << " holds on " << holds << " of " << r.rows.size()
         << " rows\n";
    } else if (command == "generate") {
      for (const auto& row : r.rows) os << "  " << row[0] << " = " << row[1] << '\n';
    }
  }
}

int run(int argc, const char* const* argv) {
  CLI::App app{"Greedy feature selection for subspace clustering"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);

  GenerateOptions gen;
  std::string gen_model = "m1", gen_shape = "orthoblock";
  auto* generate = app.add_subcommand("generate", "Sample a two-subspace union");
  generate->add_option("--n", gen.spec.n, "Ambient dimension (0 = default)");
  generate->add_option("--k", gen.spec.k, "Subspace dimension");
  generate->add_option("--q", gen.spec.q, "Overlap (rank of the cross-spectrum)");
  generate->add_option("--d", gen.spec.d, "Points per subspace");
  generate->add_option("--model", gen_model, "Coefficient model m1|m2");
  generate->add_option("--tau", gen.spec.tau, "Common energy for m2");
  generate->add_option("--spectrum", gen_shape, "orthoblock|lorentzian|exponential");
  generate->add_option("--seed", gen.spec.seed, "Random seed")->required();
  generate->add_option("--out", gen.out, "Output prefix")->required();

  ClusterOptions clu;
  std::string clu_method = "omp", clu_lap = "plain";
  double clu_residual = 0.0;
  auto* cluster = app.add_subcommand("cluster", "Feature selection, affinity and spectral bipartition");
  cluster->add_option("--data", clu.data, "MatrixFile")->required();
  cluster->add_option("--labels", clu.labels, "LabelFile with ground truth");
  cluster->add_option("--method", clu_method, "omp|nn");
  auto* sparsity_opt = cluster->add_option("--sparsity", clu.sparsity, "Atoms (omp) or neighbors (nn)");
  auto* residual_opt = cluster->add_option("--residual", clu_residual, "OMP residual tolerance");
  sparsity_opt->excludes(residual_opt);
  cluster->add_option("--laplacian", clu_lap, "plain|normalized");
  cluster->add_option("--out", clu.out, "ResultFile")->required();

  PhaseOptions ph;
  std::string ph_delta, ph_rho, ph_tau, ph_method = "omp", ph_shape = "orthoblock";
  auto* phase = app.add_subcommand("phase", "Monte Carlo P(EFS) grid");
  phase->add_option("--k", ph.grid.k, "Subspace dimension");
  phase->add_option("--n", ph.grid.n, "Ambient dimension (0 = default)");
  phase->add_option("--delta-grid", ph_delta, "Overlap ratios: a,b,c or start:step:stop")->required();
  auto* rho_opt = phase->add_option("--rho-grid", ph_rho, "Oversampling ratios");
  auto* tau_opt = phase->add_option("--tau-grid", ph_tau, "Common energies (model m2)");
  rho_opt->excludes(tau_opt);
  phase->add_option("--rho", ph.grid.rho_fixed, "Fixed oversampling ratio for --tau-grid");
  phase->add_option("--trials", ph.grid.trials, "Trials per cell");
  phase->add_option("--method", ph_method, "omp|nn|both");
  phase->add_option("--spectrum", ph_shape, "orthoblock|lorentzian|exponential");
  phase->add_option("--seed", ph.grid.base_seed, "Base seed")->required();
  phase->add_option("--workers", ph.workers, "Worker threads (0 = all cores)");
  phase->add_option("--out", ph.out, "ResultFile")->required();
  phase->add_option("--svg", ph.svg, "Optional heatmap");

  DiagnoseOptions dia;
  std::string dia_cond;
  auto* diagnose = app.add_subcommand("diagnose", "Evaluate EFS certificates on labeled data");
  diagnose->add_option("--data", dia.data, "MatrixFile")->required();
  diagnose->add_option("--labels", dia.labels, "LabelFile")->required();
  diagnose->add_option("--bases", dia.bases, "Basis MatrixFiles, one per cluster")->delimiter(',');
  diagnose->add_option("--condition", dia_cond, "thm1|cor1|thm3|erc")->required();
  diagnose->add_option("--dirs", dia.dirs, "Covering-diameter directions");
  diagnose->add_option("--seed", dia.seed, "Seed for the direction sample")->required();
  diagnose->add_option("--sparsity", dia.sparsity, "OMP sparsity for erc");
  diagnose->add_option("--out", dia.out, "ResultFile")->required();

  std::vector<std::string> report_files;
  auto* report = app.add_subcommand("report", "Summarize ResultFiles");
  report->add_option("files", report_files, "ResultFiles")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (generate->parsed()) {
      gen.spec.model = parse_model(gen_model);
      gen.spec.shape = parse_shape(gen_shape);
      if (gen.spec.shape == SpectrumShape::explicit_list) {
        throw DomainError("generate: explicit spectra are library-only");
      }
      cmd_generate(gen);
    } else if (cluster->parsed()) {
      clu.method = parse_method(clu_method);
      if (clu_lap == "plain") {
        clu.laplacian = LaplacianKind::plain;
      } else if (clu_lap == "normalized") {
        clu.laplacian = LaplacianKind::normalized;
      } else {
        throw DomainError("unknown laplacian '" + clu_lap + "' (expected plain|normalized)");
      }
      if (residual_opt->count() > 0) {
        clu.residual = clu_residual;
      } else if (sparsity_opt->count() == 0) {
        throw DomainError("cluster: one of --sparsity or --residual is required");
      }
      cmd_cluster(clu);
    } else if (phase->parsed()) {
      ph.grid.delta = parse_grid(ph_delta);
      if (tau_opt->count() > 0) {
        ph.grid.axis2 = parse_grid(ph_tau);
        ph.grid.axis2_kind = SecondAxis::tau;
      } else if (rho_opt->count() > 0) {
        ph.grid.axis2 = parse_grid(ph_rho);
        ph.grid.axis2_kind = SecondAxis::rho;
      } else {
        throw DomainError("phase: one of --rho-grid or --tau-grid is required");
      }
      ph.grid.shape = parse_shape(ph_shape);
      if (ph_method == "both") {
        ph.method = PhaseMethod::both;
      } else {
        ph.method = parse_method(ph_method) == Method::omp ? PhaseMethod::omp : PhaseMethod::nn;
      }
      ph.grid.validate();
      cmd_phase(ph);
    } else if (diagnose->parsed()) {
      if (dia_cond == "thm1") {
        dia.condition = DiagnoseCondition::thm1;
      } else if (dia_cond == "cor1") {
        dia.condition = DiagnoseCondition::cor1;
      } else if (dia_cond == "thm3") {
        dia.condition = DiagnoseCondition::thm3;
      } else if (dia_cond == "erc") {
        dia.condition = DiagnoseCondition::erc;
      } else {
        throw DomainError("unknown condition '" + dia_cond + "' (expected thm1|cor1|thm3|erc)");
      }
      cmd_diagnose(dia);
    } else if (report->parsed()) {
      cmd_report(report_files, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "gfs: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace gfs::cli
