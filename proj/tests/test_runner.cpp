#include "aniscat/runner.hpp"

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "aniscat/config.hpp"
#include "aniscat/csv.hpp"
#include "aniscat/errors.hpp"
#include "gtest/gtest.h"

namespace aniscat {
namespace {

constexpr double kPi = std::numbers::pi;

const char* kSmallBarrier = R"(
# small circular barrier
[potential]
model = barrier
U0 = 20
a0 = 1

[incident]
q = 1.2

[numerics]
M = 4
N = 600
rho_N = 6
)";

ErrorCategory config_error_category(const std::string& text) {
  try {
    parse_config(text, "inline");
  } catch (const Error& e) {
    return e.category();
  }
  ADD_FAILURE() << "configuration accepted:\n" << text;
  return ErrorCategory::kNumerical;
}

std::string config_error_message(const std::string& text) {
  try {
    parse_config(text, "inline");
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

TEST(ConfigTest, ParsesSectionsAndConvertsAngles) {
  const RunConfig config = parse_config(std::string(kSmallBarrier) +
                                        "[scan]\nvariable = q\nvalues = 0.5, 1, 2\n");
  EXPECT_EQ(config.numerics.M, 4);
  EXPECT_EQ(config.numerics.N, 600);
  EXPECT_DOUBLE_EQ(config.q, 1.2);
  const auto& barrier = std::get<EllipticBarrier>(config.potential.model);
  EXPECT_EQ(barrier.U0, 20.0);
  EXPECT_EQ(barrier.ax, 1.0);
  EXPECT_EQ(barrier.ay, 1.0);
  ASSERT_TRUE(config.scan.has_value());
  EXPECT_EQ(config.scan->values, (std::vector<double>{0.5, 1.0, 2.0}));

  const RunConfig dipole = parse_config(R"(
[potential]
model = dipole_general
units = dipolar
alpha_pi = 0.2
beta = 1.0
gamma_pi = 0.5
[incident]
Dq = 10
[numerics]
M = 4
N = 2000
rho_N = 40
)");
  const auto& d = std::get<DipoleGeneral>(dipole.potential.model);
  EXPECT_DOUBLE_EQ(d.alpha, 0.2 * kPi);
  EXPECT_DOUBLE_EQ(d.beta, 1.0);
  EXPECT_DOUBLE_EQ(d.gamma, 0.5 * kPi);
  EXPECT_DOUBLE_EQ(d.rho_hw, 0.1);
  EXPECT_DOUBLE_EQ(dipole.q, 10.0);
}

TEST(ConfigTest, FieldLevelErrors) {
  EXPECT_EQ(config_error_category("[potential]\nmodel = barrier\nU0 = 1\na0 = 1\nbogus = 3\n"),
            ErrorCategory::kConfig);
  EXPECT_NE(config_error_message(std::string(kSmallBarrier) + "[output]\ncolour = red\n")
                .find("output.colour"),
            std::string::npos);
  EXPECT_NE(config_error_message("[potential]\nmodel = barrier\nU0 = 1\na0 = 1\n[incident]\nq = 1\n[numerics]\nM = -2\n")
                .find("numerics.M"),
            std::string::npos);
  EXPECT_EQ(config_error_category("[potential]\nmodel = helix\n"), ErrorCategory::kConfig);
  EXPECT_EQ(config_error_category("[potential]\nmodel = barrier\nU0 = abc\na0 = 1\n"),
            ErrorCategory::kConfig);
  EXPECT_EQ(config_error_category(std::string(kSmallBarrier) + "[scan]\nvariable = q\n"),
            ErrorCategory::kConfig);
  EXPECT_EQ(config_error_category(std::string(kSmallBarrier) +
                                  "[convergence]\naxis = N\nvalues = 100, 50, 200\n"),
            ErrorCategory::kConfig);
}

TEST(ConfigTest, OverridesAndCanonicalListing) {
  const RunConfig base = parse_config(kSmallBarrier);
  const RunConfig changed = parse_config(kSmallBarrier, "inline", {parse_override("numerics.M=6")});
  EXPECT_EQ(changed.numerics.M, 6);
  EXPECT_NE(config_hash(base), config_hash(changed));
  EXPECT_EQ(config_hash(base), config_hash(parse_config(kSmallBarrier)));
  EXPECT_EQ(config_hash(base).size(), 8u);
  EXPECT_THROW(parse_override("numerics.M"), Error);
  EXPECT_THROW(parse_override("M=3"), Error);
}

TEST(ConfigTest, MissingFileIsAnIoError) {
  try {
    load_config("/nonexistent/run.ini");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::kIo);
  }
}

TEST(PresetTest, EveryBundledPresetParses) {
  const std::vector<PresetInfo> presets = list_presets();
  EXPECT_GE(presets.size(), 10u);
  bool found_table = false;
  for (const PresetInfo& info : presets) {
    EXPECT_NO_THROW(load_preset(info.name)) << info.name;
    EXPECT_FALSE(info.description.empty()) << info.name;
    if (info.name == "table1_u1e4_q0125") found_table = true;
  }
  EXPECT_TRUE(found_table);
  EXPECT_THROW(load_preset("no_such_preset"), Error);
}

TEST(RunnerTest, ZeroPotentialScattersNothing) {
  const RunConfig config = parse_config(kSmallBarrier, "zero", {{"potential.U0", "0"}});
  const SingleResult result = run_single(config);
  EXPECT_LE(result.cross_sections.sigma, 1e-12);
  EXPECT_LT(std::abs(result.forward), 1e-7);
}

TEST(RunnerTest, SingleRunReportsBarrierQuantities) {
  const SingleResult result = run_single(parse_config(kSmallBarrier));
  ASSERT_EQ(result.sets.size(), 1u);
  EXPECT_TRUE(result.scattering_length.has_value());
  EXPECT_FALSE(result.sigma_over_sc.has_value());
  EXPECT_GT(result.cross_sections.sigma, 0.0);
  EXPECT_LT(result.optical_defect, 1e-2);
  EXPECT_NEAR(result.cross_sections.sigma_g + result.cross_sections.sigma_u,
              2 * result.cross_sections.sigma, 1e-10 * result.cross_sections.sigma);
}

TEST(RunnerTest, DirectionAveragedRunUsesUniformDirections) {
  const RunConfig config = parse_config(
      std::string(kSmallBarrier) + "phi_q_count = 4\n", "avg", {{"potential.U0", "30"}});
  const SingleResult result = run_single(config, 2);
  ASSERT_EQ(result.sets.size(), 4u);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(result.sets[k].phi_q, 2 * kPi * k / 4, 1e-15);
}

TEST(RunnerTest, ScanKeepsGridOrderAndRecordsFailures) {
  const RunConfig config = parse_config(std::string(kSmallBarrier) +
                                        "[scan]\nvariable = U0\nvalues = 5, -1, 50\n");
  const ScanResult result = run_scan(config, 3);
  ASSERT_EQ(result.rows.size(), 3u);
  EXPECT_EQ(result.failures, 1);
  EXPECT_EQ(result.rows[0].given, 5.0);
  EXPECT_EQ(result.rows[1].given, -1.0);
  EXPECT_EQ(result.rows[2].given, 50.0);
  EXPECT_TRUE(result.rows[0].result.has_value());
  EXPECT_FALSE(result.rows[1].result.has_value());
  EXPECT_EQ(result.rows[1].error_category, "invalid_argument");
  EXPECT_TRUE(result.rows[2].result.has_value());
  EXPECT_LT(result.rows[0].result->cross_sections.sigma, result.rows[2].result->cross_sections.sigma);

  const CsvTable table = scan_table(config, result);
  EXPECT_EQ(table.rows.size(), 3u);
  const CsvTable parsed = parse_csv(render_csv(table));
  EXPECT_EQ(parsed.columns, table.columns);
  EXPECT_EQ(parsed.rows, table.rows);
  EXPECT_EQ(parsed.comments, table.comments);
}

TEST(RunnerTest, ScanOutputIsIndependentOfWorkerCount) {
  const RunConfig config = parse_config(std::string(kSmallBarrier) +
                                        "[scan]\nvariable = q\nvalues = 0.8, 1.0, 1.4, 2.0\n");
  const std::string serial = render_csv(scan_table(config, run_scan(config, 1)));
  const std::string parallel = render_csv(scan_table(config, run_scan(config, 4)));
  EXPECT_EQ(serial, parallel);
}

TEST(RunnerTest, ConvergenceStudyReportsOrder) {
  const RunConfig config = parse_config(
      std::string(kSmallBarrier) + "[convergence]\naxis = N\nvalues = 300, 600, 1200\n", "conv",
      {{"potential.edge_width", "0.05"}});
  const ConvergenceResult result = run_convergence(config, 2);
  ASSERT_EQ(result.rows.size(), 3u);
  EXPECT_FALSE(result.rows[0].difference.has_value());
  ASSERT_TRUE(result.rows[2].difference.has_value());
  EXPECT_LT(*result.rows[2].difference, *result.rows[1].difference);
  ASSERT_TRUE(result.order.has_value());
  EXPECT_GT(*result.order, 3.0);
  EXPECT_EQ(convergence_table(config, result).rows.size(), 3u);
}

TEST(CsvTest, NumberFormattingAndRoundTrip) {
  EXPECT_EQ(format_number(0.1, 17), "0.1");
  EXPECT_EQ(std::stod(format_number(1.0 / 3.0, 17)), 1.0 / 3.0);
  EXPECT_EQ(format_number(std::nan(""), 17), "nan");
  EXPECT_EQ(format_number(-INFINITY, 17), "-inf");
  EXPECT_EQ(format_number(1234.5678, 4), "1235");
  CsvTable table{{"config_hash = 0000abcd"}, {"a", "b"}, {{"1", "x"}, {"2.5", "y"}}};
  const CsvTable parsed = parse_csv(render_csv(table));
  EXPECT_EQ(parsed.comments, table.comments);
  EXPECT_EQ(parsed.columns, table.columns);
  EXPECT_EQ(parsed.rows, table.rows);
  EXPECT_THROW(write_csv("/nonexistent/dir/out.csv", table), Error);
}

TEST(ParallelTest, EveryIndexRunsOnce) {
  std::vector<int> hits(100, 0);
  parallel_for(100, 7, [&](int i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
}

// Command-line behaviour through the built executable.
class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("aniscat_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  int run(const std::string& args) {
    const std::string command = std::string(ANISCAT_CLI_PATH) + " " + args + " > " +
                                (dir_ / "stdout.txt").string() + " 2> " +
                                (dir_ / "stderr.txt").string();
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string read(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  }
  std::filesystem::path write_config(const std::string& text) {
    const auto path = dir_ / "run.ini";
    std::ofstream(path) << text;
    return path;
  }

  std::filesystem::path dir_;
};

TEST_F(CliTest, SolveWritesDeterministicCsv) {
  const auto config = write_config(kSmallBarrier);
  const auto out1 = dir_ / "a.csv";
  const auto out2 = dir_ / "b.csv";
  ASSERT_EQ(run("solve --config " + config.string() + " --out " + out1.string()), 0);
  ASSERT_EQ(run("solve --config " + config.string() + " --out " + out2.string() + " --workers 3"), 0);
  const std::string first = read(out1);
  EXPECT_FALSE(first.empty());
  EXPECT_EQ(first, read(out2));
  EXPECT_NE(first.find("config_hash"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(dir_ / "a_channels.csv"));
}

TEST_F(CliTest, ErrorsMapToCategoryExitCodes) {
  const auto bad = write_config("[potential]\nmodel = barrier\nU0 = 1\na0 = 1\nnonsense = 2\n");
  EXPECT_EQ(run("solve --config " + bad.string()), 2);
  EXPECT_NE(read(dir_ / "stderr.txt").find("category=config"), std::string::npos);
  EXPECT_EQ(run("solve --config " + (dir_ / "missing.ini").string()), 6);
  EXPECT_NE(read(dir_ / "stderr.txt").find("category=io"), std::string::npos);
  const auto short_box = write_config(R"(
[potential]
model = dipole_isotropic
units = dipolar
[incident]
Dq = 1
[numerics]
M = 2
N = 200
rho_N = 5
)");
  EXPECT_EQ(run("solve --config " + short_box.string()), 4);
  EXPECT_NE(read(dir_ / "stderr.txt").find("category=precondition"), std::string::npos);
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("solve --preset table1_production_q1"), 2);
  EXPECT_EQ(run("solve --preset no_such_preset"), 2);
}

TEST_F(CliTest, PresetsSubcommandListsPresets) {
  EXPECT_EQ(run("presets"), 0);
  EXPECT_NE(read(dir_ / "stdout.txt").find("table2_ratio1.1_M5"), std::string::npos);
}

TEST_F(CliTest, ScanWithFailedPointsExitsWithPartialCode) {
  const auto config =
      write_config(std::string(kSmallBarrier) + "[scan]\nvariable = U0\nvalues = 5, -1\n");
  const auto out = dir_ / "scan.csv";
  EXPECT_EQ(run("scan --config " + config.string() + " --out " + out.string()), 7);
  const CsvTable table = parse_csv(read(out));
  EXPECT_EQ(table.rows.size(), 2u);
}

}  // namespace
}  // namespace aniscat
