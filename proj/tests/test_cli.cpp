#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "cfmetrics/cli.hpp"
#include "cfmetrics/io.hpp"

namespace fs = std::filesystem;

namespace {

struct CapturedRun {
  int exit_code = 0;
  std::string out;
};

CapturedRun run_cli(const std::vector<std::string>& args) {
  std::ostringstream captured;
  std::streambuf* old = std::cout.rdbuf(captured.rdbuf());
  CapturedRun result;
  result.exit_code = cfmetrics::cli::run(args);
  std::cout.rdbuf(old);
  result.out = captured.str();
  return result;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("cfmetrics_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int value = 0;
    return value;
  }
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out);
  out << content;
}

constexpr const char* kTinyLog =
    "userID\tartistID\tweight\n"
    "1\t10\t3\n"
    "1\t11\t5\n"
    "2\t10\t1\n"
    "2\t10\t2\n";

}  // namespace

TEST_CASE("usage errors exit with status 2") {
  CHECK(run_cli({"no-such-command"}).exit_code == 2);
  CHECK(run_cli({}).exit_code == 2);
  CHECK(run_cli({"similarity"}).exit_code == 2);  // missing --in/--out
  CHECK(run_cli({"similarity", "--in", "x", "--out", "y", "--metric", "bogus"})
            .exit_code == 2);
  CHECK(run_cli({"expect", "--formula", "no-such"}).exit_code == 2);
  CHECK(run_cli({"expect", "--bogus-flag", "1"}).exit_code == 2);
}

TEST_CASE("expect prints single values") {
  const auto ratio = run_cli({"expect", "--formula", "item-ratio", "--i", "1",
                              "--j", "2"});
  CHECK(ratio.exit_code == 0);
  CHECK(ratio.out == "2.0\n");

  const auto sim = run_cli({"expect", "--formula", "user-similarity", "--M",
                            "2", "--na", "1", "--nb", "1", "--s", "1",
                            "--mode", "paper-raw", "--union-size", "2"});
  CHECK(sim.exit_code == 0);
  CHECK(sim.out == "0.625\n");

  // mode misuse is a runtime failure, not a usage error
  const auto moments = run_cli({"expect", "--formula", "overlap", "--mode",
                                "paper-raw"});
  CHECK(moments.exit_code == 1);
}

TEST_CASE("expect writes an enveloped JSON report") {
  TempDir tmp;
  const auto report_path = tmp.path / "report.json";
  const auto run = run_cli({"expect", "--M", "6", "--na", "2", "--nb", "3",
                            "--W", "40", "--out", report_path.string()});
  CHECK(run.exit_code == 0);
  const std::string text = slurp(report_path);
  for (const char* key :
       {"\"tool_version\"", "\"seed\"", "\"inputs\"", "\"results\"",
        "\"user_similarity\"", "\"user_neighbors_paper\"",
        "\"neighborhood_ratio\""}) {
    CAPTURE(key);
    CHECK(text.find(key) != std::string::npos);
  }
}

TEST_CASE("ingest normalizes and reports totals") {
  TempDir tmp;
  const auto in_path = tmp.path / "in.tsv";
  const auto out_path = tmp.path / "log.tsv";
  write_file(in_path, kTinyLog);

  const auto run = run_cli(
      {"ingest", "--in", in_path.string(), "--out", out_path.string()});
  CHECK(run.exit_code == 0);
  CHECK(run.out.find("users=2 items=2 records=3") != std::string::npos);
  CHECK(run.out.find("duplicates_merged=1") != std::string::npos);
  CHECK(slurp(out_path) ==
        "userID\tartistID\tweight\n1\t10\t3\n1\t11\t5\n2\t10\t3\n");

  // missing input file is an I/O failure
  const auto missing = run_cli(
      {"ingest", "--in", (tmp.path / "absent.tsv").string(), "--out",
       out_path.string()});
  CHECK(missing.exit_code == 1);
}

TEST_CASE("generate then similarity round-trips through files") {
  TempDir tmp;
  const auto log_path = tmp.path / "syn.tsv";
  CHECK(run_cli({"generate", "--users", "30", "--items", "12", "--clicks",
                 "4", "--seed", "5", "--out", log_path.string()})
            .exit_code == 0);

  const auto sim_path = tmp.path / "sim.csv";
  const auto run = run_cli({"similarity", "--in", log_path.string(), "--out",
                            sim_path.string(), "--axis", "item", "--metric",
                            "l2"});
  CHECK(run.exit_code == 0);
  const std::string csv = slurp(sim_path);
  CHECK(csv.rfind("rank_a,rank_b,score\n", 0) == 0);

  // every row parses back and ranks are ordered
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  std::size_t rows = 0;
  while (std::getline(lines, line)) {
    unsigned long a = 0, b = 0;
    double score = 0.0;
    REQUIRE(std::sscanf(line.c_str(), "%lu,%lu,%lf", &a, &b, &score) == 3);
    CHECK(a >= 1);
    CHECK(a < b);
    CHECK(score >= 0.0);
    ++rows;
  }
  CHECK(rows > 0);
}

TEST_CASE("heatmap and profile emit the declared formats") {
  TempDir tmp;
  const auto log_path = tmp.path / "syn.tsv";
  REQUIRE(run_cli({"generate", "--users", "25", "--items", "10", "--clicks",
                   "3", "--seed", "2", "--out", log_path.string()})
              .exit_code == 0);

  const auto grid_base = tmp.path / "grid";
  CHECK(run_cli({"heatmap", "--in", log_path.string(), "--out",
                 grid_base.string(), "--axis", "user", "--bins", "5"})
            .exit_code == 0);
  CHECK(fs::exists(tmp.path / "grid.csv"));
  CHECK(fs::exists(tmp.path / "grid.svg"));
  const std::string grid_csv = slurp(tmp.path / "grid.csv");
  CHECK(grid_csv.rfind("bin_row,bin_col,mean_score,pair_count\n", 0) == 0);
  // upper triangle of a 5x5 grid plus header
  CHECK(std::count(grid_csv.begin(), grid_csv.end(), '\n') == 15 + 1);

  // bins beyond the population violate a precondition -> exit 1
  CHECK(run_cli({"heatmap", "--in", log_path.string(), "--out",
                 grid_base.string(), "--axis", "user", "--bins", "500"})
            .exit_code == 1);

  const auto profile_base = tmp.path / "profile";
  CHECK(run_cli({"profile", "--in", log_path.string(), "--out",
                 profile_base.string(), "--axis", "item"})
            .exit_code == 0);
  const std::string profile_csv = slurp(tmp.path / "profile.csv");
  CHECK(profile_csv.rfind("rank,count\n", 0) == 0);
  // one row per item actually present in the log
  std::set<std::string> drawn_items;
  std::istringstream log_lines(slurp(log_path));
  std::string log_line;
  std::getline(log_lines, log_line);
  while (std::getline(log_lines, log_line)) {
    const auto first_tab = log_line.find('\t');
    const auto second_tab = log_line.find('\t', first_tab + 1);
    drawn_items.insert(
        log_line.substr(first_tab + 1, second_tab - first_tab - 1));
  }
  CHECK(static_cast<std::size_t>(
            std::count(profile_csv.begin(), profile_csv.end(), '\n')) ==
        drawn_items.size() + 1);
}

TEST_CASE("simulate reports are byte-identical across reruns") {
  TempDir tmp;
  const auto a_path = tmp.path / "a.json";
  const auto b_path = tmp.path / "b.json";
  const std::vector<std::string> base{
      "simulate", "--what", "user-pair", "--M",    "15",  "--na",
      "3",        "--nb",   "4",         "--trials", "500", "--seed",
      "42"};
  auto with_out = [&](const fs::path& p) {
    auto args = base;
    args.push_back("--out");
    args.push_back(p.string());
    return args;
  };
  CHECK(run_cli(with_out(a_path)).exit_code == 0);
  CHECK(run_cli(with_out(b_path)).exit_code == 0);
  CHECK(slurp(a_path) == slurp(b_path));
  const std::string text = slurp(a_path);
  for (const char* key : {"\"tool_version\"", "\"seed\"", "\"inputs\"",
                          "\"results\"", "\"overlap_histogram\"",
                          "\"rng\"", "splitmix64"}) {
    CAPTURE(key);
    CHECK(text.find(key) != std::string::npos);
  }

  // CSV flavor carries the summary schema
  const auto csv_path = tmp.path / "a.csv";
  auto csv_args = with_out(csv_path);
  csv_args.push_back("--format");
  csv_args.push_back("csv");
  CHECK(run_cli(csv_args).exit_code == 0);
  CHECK(slurp(csv_path).rfind("quantity,mean,stderr,ci_low,ci_high,trials,seed\n",
                              0) == 0);
}

TEST_CASE("figures pipeline emits four figures plus a report") {
  TempDir tmp;
  const auto log_path = tmp.path / "tiny.tsv";
  // three users over four items
  write_file(log_path,
             "userID\tartistID\tweight\n"
             "1\t1\t1\n1\t2\t1\n"
             "2\t2\t1\n2\t3\t1\n"
             "3\t1\t1\n3\t2\t1\n3\t3\t1\n3\t4\t1\n");
  const auto out_dir = tmp.path / "figs";
  const std::vector<std::string> args{"figures",        "--in",
                                      log_path.string(), "--out",
                                      out_dir.string(),  "--bins", "100"};
  CHECK(run_cli(args).exit_code == 0);
  for (const char* name : {"fig1.csv", "fig1.svg", "fig2.csv", "fig2.svg",
                           "fig3.csv", "fig3.svg", "fig4.csv", "fig4.svg",
                           "report.json"}) {
    CAPTURE(name);
    CHECK(fs::exists(out_dir / name));
  }
  // bins were clamped to the 3-user population: 3x3 upper triangle
  const std::string fig1 = slurp(out_dir / "fig1.csv");
  CHECK(std::count(fig1.begin(), fig1.end(), '\n') == 6 + 1);
  const std::string report = slurp(out_dir / "report.json");
  CHECK(report.find("\"top_left_block_mean\"") != std::string::npos);
  CHECK(report.find("\"loglog_slope\"") != std::string::npos);

  // reruns are byte-identical, SVGs included
  TempDir tmp2;
  const auto out_dir2 = tmp2.path / "figs";
  std::vector<std::string> args2 = args;
  args2[4] = out_dir2.string();
  CHECK(run_cli(args2).exit_code == 0);
  for (const char* name : {"fig1.csv", "fig2.csv", "fig3.csv", "fig4.csv",
                           "fig1.svg", "fig4.svg"}) {
    CAPTURE(name);
    CHECK(slurp(out_dir / name) == slurp(out_dir2 / name));
  }
}

TEST_CASE("failed writes leave no partial output") {
  TempDir tmp;
  const auto blocker = tmp.path / "blocker";
  write_file(blocker, "plain file\n");
  const auto out_path = blocker / "nested" / "out.tsv";  // parent is a file

  const auto log_path = tmp.path / "syn.tsv";
  REQUIRE(run_cli({"generate", "--users", "3", "--items", "3", "--clicks",
                   "2", "--seed", "1", "--out", log_path.string()})
              .exit_code == 0);
  const auto run = run_cli({"ingest", "--in", log_path.string(), "--out",
                            out_path.string()});
  CHECK(run.exit_code == 1);
  CHECK(!fs::exists(out_path));
}

TEST_CASE("config files feed flags with explicit flags winning") {
  TempDir tmp;
  const auto config_path = tmp.path / "gen.json";
  write_file(config_path,
             "{\"users\": 4, \"items\": 5, \"clicks\": 2, \"seed\": 3}\n");

  const auto from_config = tmp.path / "a.tsv";
  CHECK(run_cli({"generate", "--config", config_path.string(), "--out",
                 from_config.string()})
            .exit_code == 0);
  const auto from_flags = tmp.path / "b.tsv";
  CHECK(run_cli({"generate", "--users", "4", "--items", "5", "--clicks", "2",
                 "--seed", "3", "--out", from_flags.string()})
            .exit_code == 0);
  CHECK(slurp(from_config) == slurp(from_flags));

  // an explicit flag overrides the config value
  const auto overridden = tmp.path / "c.tsv";
  CHECK(run_cli({"generate", "--config", config_path.string(), "--users", "6",
                 "--out", overridden.string()})
            .exit_code == 0);
  std::size_t users = 0;
  std::istringstream lines(slurp(overridden));
  std::string line;
  std::getline(lines, line);
  std::int64_t max_user = 0;
  while (std::getline(lines, line)) {
    max_user = std::max<std::int64_t>(max_user, std::strtoll(line.c_str(),
                                                             nullptr, 10));
    ++users;
  }
  CHECK(max_user == 6);

  CHECK(run_cli({"generate", "--config",
                 (tmp.path / "absent.json").string(), "--out",
                 (tmp.path / "x.tsv").string()})
            .exit_code == 1);
}
