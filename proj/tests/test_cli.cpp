#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "coexist/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(std::initializer_list<std::string> args) {
  std::vector<std::string> store{"sched_sim"};
  store.insert(store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : store) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code =
      coexist::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("sched_sim_test_" + name);
  fs::remove_all(p);
  return p;
}

std::vector<std::string> lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"--scheduler", "optimal"}).code == 2);
  CHECK(cli({"--bogus"}).code == 2);
  CHECK(cli({"--seeds", "0"}).code == 2);
  CHECK(cli({"--set", "n_rb=2"}).code == 2);
  CHECK(cli({"--set", "nonsense=1"}).code == 2);
  CHECK(cli({"--sweep", "arrival_std"}).code == 2);
  CHECK(cli({"--sweep", "arrival_std=1,../x"}).code == 2);
  CHECK(cli({"--config", "/nonexistent/config.txt"}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("summary and ECDF files") {
  const fs::path dir = scratch("summary");
  const CliRun r = cli({"--scheduler", "proposed,eds", "--seeds", "3", "--set", "n_embb=3",
                        "--set", "n_rb=12", "--set", "n_slots=4", "--out", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("2 cells") != std::string::npos);
  const auto rows = lines(dir / "summary.csv");
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] ==
        "scheduler,sweep_key,sweep_value,seeds,mean_mear_bits,mean_fairness,violation_rate");
  CHECK(rows[1].rfind("proposed,none,base,3,", 0) == 0);
  CHECK(rows[2].rfind("eds,none,base,3,", 0) == 0);
  const auto ecdf = lines(dir / "ecdf_proposed_base.csv");
  REQUIRE(ecdf.size() == 4);
  CHECK(ecdf[0] == "mear_bits,cum_prob");
  CHECK(ecdf[3].substr(ecdf[3].find(',')) == ",1.000000000");
  CHECK(fs::exists(dir / "ecdf_eds_base.csv"));
  fs::remove_all(dir);
}

TEST_CASE("sweep writes one row per scheduler and value") {
  const fs::path dir = scratch("sweep");
  const CliRun r = cli({"--scheduler", "ps", "--seeds", "2", "--sweep", "arrival_std=1,4",
                        "--set", "n_embb=3", "--set", "n_rb=12", "--set", "n_slots=3",
                        "--out", dir.string()});
  REQUIRE(r.code == 0);
  const auto rows = lines(dir / "summary.csv");
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].rfind("ps,arrival_std,1,2,", 0) == 0);
  CHECK(rows[2].rfind("ps,arrival_std,4,2,", 0) == 0);
  CHECK(fs::exists(dir / "ecdf_ps_1.csv"));
  CHECK(fs::exists(dir / "ecdf_ps_4.csv"));
  fs::remove_all(dir);
}

TEST_CASE("config file and overrides") {
  const fs::path dir = scratch("config");
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "cell.cfg");
    cfg << "n_embb = 2\nn_rb = 8\nn_slots = 3\n";
  }
  const CliRun r = cli({"--config", (dir / "cell.cfg").string(), "--scheduler", "rs", "--seeds",
                        "1", "--literal-eq10", "--out", (dir / "out").string()});
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "out" / "summary.csv"));
  fs::remove_all(dir);
}
