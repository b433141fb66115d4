#include "gfs/cli/commands.hpp"
#include "gfs/cli/io.hpp"
#include "gfs/errors.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

using namespace gfs;
using namespace gfs::cli;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("gfs_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static int call(std::initializer_list<std::string> args) {
    std::vector<std::string> owned{"gfs"};
    owned.insert(owned.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : owned) argv.push_back(s.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

}  // namespace

TEST(CliIo, NumberFormatting) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(-0.0), "0");
  EXPECT_EQ(parse_double(format_double(1.0 / 3.0)), 1.0 / 3.0);
  EXPECT_THROW(parse_double("0.1x"), DomainError);
  EXPECT_THROW(parse_double("nan"), DomainError);
  EXPECT_THROW(parse_integer("3.5"), DomainError);
}

TEST(CliIo, GridParsing) {
  EXPECT_EQ(parse_grid("0.1,0.2"), (std::vector<double>{0.1, 0.2}));
  const auto r = parse_grid("0:0.1:1");
  ASSERT_EQ(r.size(), 11u);
  EXPECT_DOUBLE_EQ(r.back(), 1.0);
  EXPECT_DOUBLE_EQ(r[3], 0.3);
  EXPECT_THROW(parse_grid(""), DomainError);
}

TEST_F(Cli, MatrixAndResultRoundTrip) {
  Mat m(2, 3);
  m << 1.0, -2.5, 1e-17, 0.1, 3.0, -0.0;
  write_matrix(path("m.csv"), m, {{"note", "x"}});
  EXPECT_EQ(read_matrix(path("m.csv")), m);
  ResultFile r{{{"a", "1"}}, {"x", "y"}, {{"1", "2"}, {"3", "4"}}};
  write_result(path("r.csv"), r);
  const ResultFile back = read_result(path("r.csv"));
  EXPECT_EQ(back.get("a"), "1");
  EXPECT_EQ(back.rows, r.rows);
  EXPECT_EQ(back.column("y"), 1u);
  EXPECT_THROW(back.column("z"), DomainError);
}

TEST_F(Cli, GenerateWritesUnion) {
  ASSERT_EQ(call({"generate", "--n", "100", "--k", "10", "--q", "5", "--d", "100", "--seed", "1",
                  "--out", path("u")}),
            0);
  const Mat x = read_matrix(path("u.data.csv"));
  EXPECT_EQ(x.rows(), 100);
  EXPECT_EQ(x.cols(), 200);
  const auto labels = read_labels(path("u.labels.txt"));
  ASSERT_EQ(labels.size(), 200u);
  for (int l : labels) EXPECT_TRUE(l == 0 || l == 1);
  EXPECT_TRUE(fs::exists(path("u.basis0.csv")));
  EXPECT_TRUE(fs::exists(path("u.basis1.csv")));
}

TEST_F(Cli, OrthogonalUnionReportsZeroCoherence) {
  ASSERT_EQ(call({"generate", "--k", "5", "--q", "0", "--d", "20", "--seed", "2", "--out", path("o")}), 0);
  const ResultFile s = read_result(path("o.summary.csv"));
  const std::size_t q = s.column("quantity"), v = s.column("value");
  bool found = false;
  for (const auto& row : s.rows) {
    if (row[q] == "mutual_coherence") {
      found = true;
      EXPECT_LE(parse_double(row[v]), 1e-12);
    }
  }
  EXPECT_TRUE(found);
}

TEST_F(Cli, GenerateIsByteIdentical) {
  const auto gen = [&] {
    return call({"generate", "--k", "4", "--q", "2", "--d", "10", "--seed", "9", "--out", path("a")});
  };
  ASSERT_EQ(gen(), 0);
  const std::string data = slurp(path("a.data.csv")), labels = slurp(path("a.labels.txt"));
  ASSERT_EQ(gen(), 0);
  EXPECT_EQ(slurp(path("a.data.csv")), data);
  EXPECT_EQ(slurp(path("a.labels.txt")), labels);
}

TEST_F(Cli, ClusterRecoversOrthogonalUnion) {
  ASSERT_EQ(call({"generate", "--k", "5", "--q", "0", "--d", "40", "--seed", "3", "--out", path("c")}), 0);
  for (const std::string method : {"omp", "nn"}) {
    const std::string out = path("clu_" + method + ".csv");
    ASSERT_EQ(call({"cluster", "--data", path("c.data.csv"), "--labels", path("c.labels.txt"),
                    "--method", method, "--sparsity", "5", "--out", out}),
              0);
    const ResultFile r = read_result(out);
    EXPECT_EQ(r.rows.size(), 80u);
    EXPECT_EQ(parse_double(r.get("clustering_error")), 0.0) << method;
    EXPECT_EQ(parse_double(r.get("efs_rate")), 1.0) << method;
  }
}

TEST_F(Cli, PhaseGridShapeAndMethods) {
  ASSERT_EQ(call({"phase", "--k", "4", "--delta-grid", "0,0.5,1", "--rho-grid", "0.2,0.5,1",
                  "--trials", "3", "--seed", "4", "--out", path("p.csv")}),
            0);
  const ResultFile p = read_result(path("p.csv"));
  EXPECT_EQ(p.rows.size(), 9u);
  EXPECT_NO_THROW(p.column("p_efs"));
  EXPECT_FALSE(p.get("rerun").empty());

  ASSERT_EQ(call({"phase", "--k", "4", "--delta-grid", "0,1", "--rho-grid", "0.5", "--trials", "3",
                  "--method", "both", "--seed", "4", "--out", path("b.csv")}),
            0);
  const ResultFile b = read_result(path("b.csv"));
  EXPECT_EQ(b.rows.size(), 2u);
  EXPECT_NO_THROW(b.column("p_efs_omp"));
  EXPECT_NO_THROW(b.column("p_efs_nn"));
  EXPECT_EQ(b.rows[0][b.column("p_efs_omp")], "1");
}

TEST_F(Cli, PhaseRejectsConflictingAxes) {
  EXPECT_NE(call({"phase", "--delta-grid", "0", "--rho-grid", "0.5", "--tau-grid", "0.1",
                  "--seed", "1", "--out", path("x.csv")}),
            0);
  EXPECT_NE(call({"phase", "--delta-grid", "0", "--rho-grid", "0.5", "--out", path("x.csv")}), 0);
}

TEST_F(Cli, DiagnoseNeedsBases) {
  ASSERT_EQ(call({"generate", "--k", "4", "--q", "1", "--d", "10", "--seed", "5", "--out", path("g")}), 0);
  EXPECT_NE(call({"diagnose", "--data", path("g.data.csv"), "--labels", path("g.labels.txt"),
                  "--condition", "thm1", "--seed", "1", "--out", path("d.csv")}),
            0);
  EXPECT_FALSE(fs::exists(path("d.csv")));
}

TEST_F(Cli, DiagnoseReportsViolatedPrecondition) {
  ASSERT_EQ(call({"generate", "--k", "4", "--q", "4", "--d", "12", "--seed", "6", "--out", path("g")}), 0);
  ASSERT_EQ(call({"diagnose", "--data", path("g.data.csv"), "--labels", path("g.labels.txt"),
                  "--bases", path("g.basis0.csv") + "," + path("g.basis1.csv"), "--condition", "cor1",
                  "--dirs", "200", "--seed", "1", "--out", path("d.csv")}),
            0);
  const ResultFile d = read_result(path("d.csv"));
  ASSERT_EQ(d.rows.size(), 2u);
  for (const auto& row : d.rows) {
    EXPECT_EQ(row[d.column("holds")], "0");
    EXPECT_FALSE(row[d.column("note")].empty());
  }
}

TEST_F(Cli, ReportSummarizesPhaseFiles) {
  ASSERT_EQ(call({"phase", "--k", "4", "--delta-grid", "0,0.5,1", "--rho-grid", "0.5", "--trials", "3",
                  "--method", "both", "--seed", "4", "--out", path("b.csv")}),
            0);
  std::ostringstream os;
  cmd_report({path("b.csv")}, os);
  EXPECT_NE(os.str().find("omp"), std::string::npos);
  EXPECT_NE(os.str().find("nn"), std::string::npos);
}
