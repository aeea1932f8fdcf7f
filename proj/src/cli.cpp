#include "coexist/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "coexist/baselines.hpp"
#include "coexist/model.hpp"
#include "coexist/sim.hpp"

namespace coexist {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    if (item.empty()) throw UsageError("empty item in list '" + s + "'");
    out.push_back(item);
  }
  if (out.empty()) throw UsageError("empty list");
  return out;
}

std::pair<std::string, std::string> split_assignment(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == s.size()) {
    throw UsageError("expected key=value, got '" + s + "'");
  }
  return {s.substr(0, eq), s.substr(eq + 1)};
}

struct SweepPoint {
  std::string value;
  SystemConfig cfg;
};

void write_summary_row(std::ostream& os, const CellReport& cell, const std::string& key,
                       const std::string& value) {
  os << policy_name(cell.policy) << ',' << key << ',' << value << ',' << cell.completed << ','
     << std::setprecision(6) << cell.mean_mear << ',' << std::setprecision(9)
     << cell.mean_fairness << ',' << cell.violation_rate << '\n';
}

void write_ecdf(const std::filesystem::path& path, const CellReport& cell) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << std::fixed << "mear_bits,cum_prob\n";
  for (const auto& [v, p] : ecdf(cell.mear_samples)) {
    os << std::setprecision(6) << v << ',' << std::setprecision(9) << p << '\n';
  }
  if (!os) throw std::runtime_error("error writing " + path.string());
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"eMBB/uRLLC puncturing co-scheduling simulator", "sched_sim"};
  std::string config_path, schedulers = "proposed", sweep, out_dir = ".";
  std::size_t n_seeds = 10;
  std::uint64_t base_seed = 1;
  bool literal = false;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "Config file (key = value lines)")
      ->check(CLI::ExistingFile);
  app.add_option("--scheduler", schedulers,
                 "Comma-separated: proposed,heuristic,ps,mups,rs,eds,mbs");
  app.add_option("--seeds", n_seeds, "Runs per cell")->check(CLI::PositiveNumber);
  app.add_option("--base-seed", base_seed, "Seed of the first run; run i uses base + i");
  app.add_option("--sweep", sweep, "key=v1,v2,... swept over the config");
  app.add_option("--out", out_dir, "Output directory");
  app.add_flag("--literal-eq10", literal, "Charge a full slot rate per punctured RB-mini-slot");
  app.add_option("--set", overrides, "key=value config override (repeatable)");

  if (argc <= 1) {
    err << app.help();
    return 2;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "sched_sim: " << e.what() << '\n' << "Run with --help for usage.\n";
    return 2;
  }

  std::vector<SweepPoint> points;
  std::vector<Policy> policies;
  std::string sweep_key = "none";
  try {
    SystemConfig base = config_path.empty() ? SystemConfig{} : load_config(config_path);
    for (const auto& o : overrides) {
      const auto [k, v] = split_assignment(o);
      set_config_value(base, k, v);
    }
    if (literal) base.literal_eq10 = true;
    for (const auto& name : split(schedulers, ',')) {
      const auto p = parse_policy(name);
      if (!p) throw UsageError("unknown scheduler '" + name + "'");
      policies.push_back(*p);
    }
    if (sweep.empty()) {
      points.push_back({"base", validate_config(base)});
    } else {
      const auto [k, vals] = split_assignment(sweep);
      sweep_key = k;
      for (const auto& v : split(vals, ',')) {
        if (v.find_first_of("/\\") != std::string::npos) {
          throw UsageError("sweep value '" + v + "' cannot name a file");
        }
        SystemConfig c = base;
        set_config_value(c, k, v);
        points.push_back({v, validate_config(c)});
      }
    }
  } catch (const UsageError& e) {
    err << "sched_sim: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    err << "sched_sim: invalid configuration: " << e.what() << '\n';
    return 2;
  }

  std::vector<std::uint64_t> seeds(n_seeds);
  for (std::size_t i = 0; i < n_seeds; ++i) seeds[i] = base_seed + i;

  try {
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    std::vector<ExperimentReport> reports;
    for (const auto& pt : points) reports.push_back(run_experiment(pt.cfg, policies, seeds));

    std::ofstream summary(dir / "summary.csv");
    if (!summary) throw std::runtime_error("cannot write " + (dir / "summary.csv").string());
    summary << std::fixed
            << "scheduler,sweep_key,sweep_value,seeds,mean_mear_bits,mean_fairness,"
               "violation_rate\n";
    bool failed = false;
    for (std::size_t p = 0; p < policies.size(); ++p) {
      for (std::size_t s = 0; s < points.size(); ++s) {
        const CellReport& cell = reports[s].cells[p];
        write_summary_row(summary, cell, sweep_key, points[s].value);
        const std::string name = "ecdf_" + std::string(policy_name(cell.policy)) + "_" +
                                 points[s].value + ".csv";
        write_ecdf(dir / name, cell);
        for (const auto& f : cell.failures) {
          err << "sched_sim: " << policy_name(cell.policy) << " @ " << points[s].value << ": "
              << f << '\n';
          failed = true;
        }
      }
    }
    summary.close();
    if (!summary) throw std::runtime_error("error writing summary.csv");
    out << "wrote " << (dir / "summary.csv").string() << " (" << policies.size() * points.size()
        << " cells)\n";
    return failed ? 1 : 0;
  } catch (const std::exception& e) {
    err << "sched_sim: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace coexist
