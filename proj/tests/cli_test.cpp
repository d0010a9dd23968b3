#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lamvar/experiment.hpp"

using namespace lamvar;
namespace fs = std::filesystem;

namespace {

std::string sample(const std::string& name) { return std::string(LAMVAR_SAMPLES_DIR) + "/" + name; }

ExperimentConfig config(const std::string& command) {
  ExperimentConfig c;
  c.command = command;
  return c;
}

std::vector<std::vector<std::string>> rows(const std::string& csv) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    out.push_back(cells);
  }
  return out;
}

const std::vector<std::string>* find_row(const std::vector<std::vector<std::string>>& table, const std::string& key,
                                         std::size_t column = 0) {
  for (const auto& r : table) {
    if (r.size() > column && r[column] == key) return &r;
  }
  return nullptr;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("lamvar_cli_" + std::to_string(::getpid()) + "_" +
                                                   std::to_string(counter_++))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

int run_cli(const std::string& args) {
  const std::string cmd = std::string(LAMVAR_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Cli, VariationSingleTriangle) {
  auto c = config("variation");
  c.function_path = sample("triangle.json");
  c.sequence_path = sample("lambda_n.json");
  const auto r = run(c);
  ASSERT_EQ(r.exit_code, kExitOk) << r.message;
  const auto table = rows(r.csv);
  EXPECT_EQ(table[0], (std::vector<std::string>{"functional", "p", "alpha", "delta", "value", "refinement"}));
  const auto* row = find_row(table, "lambda_variation");
  ASSERT_NE(row, nullptr);
  EXPECT_EQ(std::stod((*row)[4]), 1.5);
  EXPECT_EQ(r.summary["lambda_variation"].get<double>(), 1.5);
}

TEST(Cli, VariationTwoTriangles) {
  auto c = config("variation");
  c.function_path = sample("two_triangles.json");
  c.sequence_path = sample("lambda_n.json");
  const auto r = run(c);
  ASSERT_EQ(r.exit_code, kExitOk) << r.message;
  EXPECT_NEAR(r.summary["lambda_variation"].get<double>(), 25.0 / 12.0, 1e-15);
}

TEST(Cli, VariationRowsReparseToLibraryValues) {
  auto c = config("variation");
  c.function_path = sample("comb_3_1_2.json");
  c.sequence_path = sample("lambda_sqrt.json");
  c.p = 3.0;
  c.alpha = 0.9;
  c.delta_depth = 5;
  c.refine = 2;
  const auto r = run(c);
  ASSERT_EQ(r.exit_code, kExitOk) << r.message;
  const auto f = io::function_from_json(io::read_json_file(sample("comb_3_1_2.json")));
  const auto lam = io::sequence_from_json(io::read_json_file(sample("lambda_sqrt.json")));
  int checked = 0;
  for (const auto& row : rows(r.csv)) {
    if (row[0] == "functional") continue;
    const double value = std::stod(row[4]);
    double want = 0.0;
    if (row[0] == "p_variation") want = p_variation(f, std::stod(row[1]));
    else if (row[0] == "lambda_variation") want = lambda_variation(f, lam);
    else if (row[0] == "sup_norm") want = sup_norm(f);
    else if (row[0] == "derivative_lp_norm") want = derivative_lp_norm(f, std::stod(row[1]));
    else if (row[0] == "modulus_p_continuity")
      want = modulus_p_continuity(f, std::stod(row[1]), {std::stod(row[3]), std::stoi(row[5])});
    else if (row[0] == "lp_modulus") want = lp_modulus(f, std::stod(row[1]), std::stod(row[3]));
    else if (row[0] == "lip_norm") want = lip_norm(f, std::stod(row[1]), std::stod(row[2]), 5).value;
    else if (row[0] == "p_cont_ratio_norm")
      want = p_cont_ratio_norm(f, std::stod(row[1]), std::stod(row[2]), 5, std::stoi(row[5])).value;
    else FAIL() << "unexpected row " << row[0];
    EXPECT_EQ(value, want) << row[0];
    ++checked;
  }
  EXPECT_EQ(checked, 4 + 2 * 6 + 2);
}

TEST(Cli, CriterionVerdicts) {
  auto c = config("criterion");
  c.sequence_path = sample("lambda_sqrt.json");
  auto r = run(c);
  ASSERT_EQ(r.exit_code, kExitOk) << r.message;
  EXPECT_EQ(r.summary["verdict"], "converges");
  c.sequence_path = sample("lambda_quarter.json");
  r = run(c);
  EXPECT_EQ(r.summary["verdict"], "diverges");
  EXPECT_EQ(r.summary["wang"], "diverges");
  c.sequence_path = sample("lambda_wang_gap.json");
  r = run(c);
  EXPECT_EQ(r.summary["verdict"], "diverges");
  EXPECT_EQ(r.summary["wang"], "converges");
}

TEST(Cli, CriterionRowsReparse) {
  auto c = config("criterion");
  c.sequence_path = sample("lambda_log.json");
  c.blocks = 12;
  const auto r = run(c);
  ASSERT_EQ(r.exit_code, kExitOk) << r.message;
  const auto lam = io::sequence_from_json(io::read_json_file(sample("lambda_log.json")));
  const auto crit = criterion_partial_sums(lam, 2.0, 0.75, 12);
  const auto wang = wang_partial_sums(lam, 0.75, 13);
  const auto table = rows(r.csv);
  ASSERT_EQ(table.size(), 1u + 13 + 13);
  for (std::size_t n = 0; n <= 12; ++n) {
    EXPECT_EQ(std::stod(table[1 + n][4]), crit.partial_sums[n]);
    EXPECT_EQ(std::stod(table[14 + n][4]), wang.partial_sums[n]);
  }
}

TEST(Cli, ExplicitSequenceTooShortForBlocks) {
  auto c = config("criterion");
  c.sequence_path = sample("lambda_explicit.json");
  c.blocks = 5;
  const auto r = run(c);
  EXPECT_EQ(r.exit_code, kExitInvalid);
  EXPECT_EQ(r.message.rfind("--blocks", 0), 0u) << r.message;
  c.blocks = 2;
  EXPECT_EQ(run(c).exit_code, kExitOk);
}

TEST(Cli, ValidationNamesTheField) {
  auto c = config("variation");
  auto r = run(c);
  EXPECT_EQ(r.exit_code, kExitInvalid);
  EXPECT_EQ(r.message.rfind("--function", 0), 0u);

  c.function_path = sample("triangle.json");
  c.p = 0.5;
  r = run(c);
  EXPECT_EQ(r.exit_code, kExitInvalid);
  EXPECT_EQ(r.message.rfind("--p", 0), 0u);

  c = config("criterion");
  c.sequence_path = sample("lambda_n.json");
  c.alpha = 0.4;
  r = run(c);
  EXPECT_EQ(r.exit_code, kExitInvalid);
  EXPECT_EQ(r.message.rfind("--alpha", 0), 0u);

  c = config("nonsense");
  EXPECT_EQ(run(c).message.rfind("--command", 0), 0u);

  c = config("sharpness");
  c.sequence_path = sample("lambda_n.json");
  c.levels = {2, 13};
  r = run(c);
  EXPECT_EQ(r.exit_code, kExitInvalid);
  EXPECT_EQ(r.message.rfind("--levels", 0), 0u);

  c = config("wang-demo");
  c.s = 3.0;
  r = run(c);
  EXPECT_EQ(r.exit_code, kExitInvalid);
  EXPECT_EQ(r.message.rfind("--s", 0), 0u);
}

TEST(Cli, MalformedInputFile) {
  TempDir dir;
  const auto bad = dir.path() / "bad.json";
  std::ofstream(bad) << R"({"breakpoints": [[0.1, 1], [0.1, 2]]})";
  auto c = config("variation");
  c.function_path = bad.string();
  auto r = run(c);
  EXPECT_EQ(r.exit_code, kExitInvalid);
  EXPECT_EQ(r.message.rfind("--function", 0), 0u);
  std::ofstream(bad) << "{ not json";
  r = run(c);
  EXPECT_EQ(r.exit_code, kExitInvalid);
  c.function_path = (dir.path() / "missing.json").string();
  EXPECT_EQ(run(c).exit_code, kExitInvalid);
}

TEST(Cli, LevelRangeParsing) {
  auto r = parse_level_range("4:10");
  EXPECT_EQ(r.lo, 4);
  EXPECT_EQ(r.hi, 10);
  r = parse_level_range("7");
  EXPECT_EQ(r.lo, 7);
  EXPECT_EQ(r.hi, 7);
  EXPECT_TRUE(parse_level_range("5:4").empty());
  EXPECT_THROW(parse_level_range("a:3"), std::invalid_argument);
  EXPECT_THROW(parse_level_range("3:"), std::invalid_argument);
  EXPECT_THROW(parse_level_range("3x"), std::invalid_argument);
}

TEST(Cli, SharpnessEmptyRange) {
  auto c = config("sharpness");
  c.sequence_path = sample("lambda_quarter.json");
  c.levels = {5, 4};
  const auto r = run(c);
  EXPECT_EQ(r.exit_code, kExitOk);
  EXPECT_EQ(rows(r.csv).size(), 1u);  // header only
}

TEST(Cli, SharpnessDivergentAndConvergent) {
  auto c = config("sharpness");
  c.sequence_path = sample("lambda_quarter.json");
  c.levels = {2, 7};
  auto r = run(c);
  ASSERT_EQ(r.exit_code, kExitOk) << r.message;
  auto table = rows(r.csv);
  ASSERT_EQ(table.size(), 7u);
  for (std::size_t i = 2; i < table.size(); ++i) EXPECT_GT(std::stod(table[i][2]), std::stod(table[i - 1][2]));

  c.sequence_path = sample("lambda_n.json");
  c.levels = {4, 9};
  r = run(c);
  ASSERT_EQ(r.exit_code, kExitOk) << r.message;
  table = rows(r.csv);
  const double v_first = std::stod(table[1][2]), v_last = std::stod(table.back()[2]);
  const double v_prev = std::stod(table[table.size() - 2][2]);
  const double ratio_first = std::stod(table[1][4]), ratio_last = std::stod(table.back()[4]);
  // Flattening: the last step adds far less than the whole climb from level 4.
  EXPECT_LT(v_last - v_prev, 0.1 * (v_last - v_first + 1e-300) + 1e-3);
  EXPECT_LE(ratio_last, 2.0 * ratio_first);
}

TEST(Cli, WangDemo) {
  auto c = config("wang-demo");
  c.levels = {3, 6};
  const auto r = run(c);
  ASSERT_EQ(r.exit_code, kExitOk) << r.message;
  EXPECT_EQ(r.summary["wang"], "converges");
  EXPECT_EQ(r.summary["criterion"], "diverges");
}

TEST(Cli, PerlmanDemo) {
  auto c = config("perlman-demo");
  c.terms = 100000;
  const auto r = run(c);
  ASSERT_EQ(r.exit_code, kExitOk) << r.message;
  EXPECT_GT(r.summary["weighted_increase_last"].get<double>(), r.summary["inverse_power_increase_last"].get<double>());
}

TEST(Cli, HardyDemoSeeded) {
  auto c = config("hardy-demo");
  c.instances = 100;
  c.seed = 7;
  const auto a = run(c);
  ASSERT_EQ(a.exit_code, kExitOk) << a.message;
  const auto b = run(c);
  EXPECT_EQ(a.csv, b.csv);
  c.seed = 8;
  EXPECT_NE(run(c).csv, a.csv);
}

TEST(CliBinary, ExitCodesAndFiles) {
  TempDir dir;
  const auto out = (dir.path() / "v.csv").string();
  EXPECT_EQ(run_cli("--command variation --function " + sample("triangle.json") + " --sequence " +
                    sample("lambda_n.json") + " --out " + out),
            0);
  EXPECT_TRUE(fs::exists(out));
  const auto summary = io::read_json_file(out + ".json");
  EXPECT_EQ(summary["lambda_variation"].get<double>(), 1.5);
  EXPECT_EQ(run_cli("--command variation --p 0.5 --function " + sample("triangle.json")), 2);
  EXPECT_EQ(run_cli("--command variation --p abc"), 2);
  EXPECT_EQ(run_cli("--bogus-flag 1"), 2);
  EXPECT_EQ(run_cli("--command sharpness --sequence " + sample("lambda_n.json") + " --levels 1:x"), 2);
}

TEST(CliBinary, ByteIdenticalReruns) {
  TempDir dir;
  const std::vector<std::string> commands{
      "--command variation --function " + sample("comb_3_1_2.json") + " --sequence " + sample("lambda_n.json"),
      "--command criterion --sequence " + sample("lambda_wang_gap.json") + " --blocks 25",
      "--command sharpness --sequence " + sample("lambda_quarter.json") + " --levels 2:5",
      "--command hardy-demo --instances 50 --seed 3",
  };
  int i = 0;
  for (const auto& args : commands) {
    const auto a = (dir.path() / ("a" + std::to_string(i) + ".csv")).string();
    const auto b = (dir.path() / ("b" + std::to_string(i) + ".csv")).string();
    ASSERT_EQ(run_cli(args + " --out " + a), 0) << args;
    ASSERT_EQ(run_cli(args + " --out " + b), 0) << args;
    EXPECT_EQ(read_file(a), read_file(b)) << args;
    EXPECT_FALSE(read_file(a).empty());
    ++i;
  }
}
