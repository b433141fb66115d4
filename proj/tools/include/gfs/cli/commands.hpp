#pragma once

#include "gfs/clustering.hpp"
#include "gfs/experiments.hpp"
#include "gfs/geometry.hpp"
#include "gfs/synth.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace gfs::cli {

/// Library version echoed into every ResultFile.
std::string version();

struct GenerateOptions {
  UnionSpec spec;
  std::string out;  // prefix for .data.csv, .labels.txt, .basis<i>.csv, .summary.csv
};
void cmd_generate(const GenerateOptions& o);

struct ClusterOptions {
  std::string data;
  std::string labels;  // optional
  Method method = Method::omp;
  Index sparsity = 0;  // 0 with residual set = residual rule
  std::optional<double> residual;
  LaplacianKind laplacian = LaplacianKind::plain;
  std::string out;
};
void cmd_cluster(const ClusterOptions& o);

enum class PhaseMethod { omp, nn, both };

struct PhaseOptions {
  GridSpec grid;
  PhaseMethod method = PhaseMethod::omp;
  unsigned workers = 0;  // not echoed: output does not depend on it
  std::string out;
  std::string svg;  // optional
};
void cmd_phase(const PhaseOptions& o);

enum class DiagnoseCondition { thm1, cor1, thm3, erc };

struct DiagnoseOptions {
  std::string data;
  std::string labels;
  std::vector<std::string> bases;  // one per cluster, in label order
  DiagnoseCondition condition = DiagnoseCondition::thm1;
  Index dirs = 2000;
  std::uint64_t seed = 0;
  Index sparsity = 0;  // erc only
  std::string out;
};
void cmd_diagnose(const DiagnoseOptions& o);

/// Re-parses ResultFiles and prints a short human-readable digest.
void cmd_report(const std::vector<std::string>& files, std::ostream& os);

/// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv);

}  // namespace gfs::cli
