// Command-line front end: trains the proposed schemes, runs the baselines,
// sweeps IRS element counts and executes the built-in oracle/invariant
// checks. Exit codes: 0 success, 1 configuration/validation error, 2 runtime
// error (including failed checks).

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

#include "irsuav/config.hpp"
#include "irsuav/csvio.hpp"
#include "irsuav/schemes.hpp"
#include "irsuav/selfcheck.hpp"

namespace {

using namespace irsuav;

struct CliOverrides {
  std::string config_path;
  std::string scheme;
  std::string out_dir;
  std::int64_t seed = -1;
  int episodes = 0;
};

RunConfig resolve_config(const CliOverrides& cli) {
  RunConfig cfg = cli.config_path.empty() ? RunConfig{} : load_config(cli.config_path);
  if (const char* env_out = std::getenv("IRSUAV_OUT")) cfg.out_dir = env_out;
  if (!cli.out_dir.empty()) cfg.out_dir = cli.out_dir;
  if (!cli.scheme.empty()) cfg.scheme = scheme_from_tag(cli.scheme);
  if (cli.seed >= 0) cfg.seeds = {static_cast<std::uint64_t>(cli.seed)};
  if (cli.episodes > 0) cfg.episodes = cli.episodes;
  cfg.validate();
  return cfg;
}

TrainOptions train_options(const RunConfig& cfg, std::uint64_t seed) {
  TrainOptions opts;
  opts.episodes = cfg.episodes;
  opts.seed = seed;
  opts.ddpg = cfg.ddpg;
  opts.ppo = cfg.ppo;
  return opts;
}

RunTrace execute_run(const RunConfig& cfg, const EnvConfig& env_cfg, Scheme scheme,
                     std::uint64_t seed, const std::filesystem::path& dir) {
  TrainOptions opts = train_options(cfg, seed);
  const std::string stem = scheme_tag(scheme) + "_" + std::to_string(seed);

  std::ofstream trajectory;
  if (cfg.dump_trajectories) {
    trajectory.open(dir / (stem + "_traj.csv"));
    opts.trajectory_csv = &trajectory;
  }
  std::ofstream checkpoint(dir / (stem + ".ckpt"));
  opts.checkpoint_sink = &checkpoint;

  const RunTrace trace = run_scheme(scheme, env_cfg, opts);

  std::ofstream trace_file(dir / (stem + ".csv"));
  write_trace_csv(trace_file, trace);
  return trace;
}

// Runs all (seed) jobs for one scheme/env pair, up to cfg.jobs at a time.
std::vector<RunTrace> run_seeds(const RunConfig& cfg, const EnvConfig& env_cfg, Scheme scheme,
                                const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<RunTrace> traces(cfg.seeds.size());
  std::mutex log_mutex;
  std::size_t next = 0;
  std::mutex next_mutex;

  const auto worker = [&]() {
    for (;;) {
      std::size_t index;
      {
        std::lock_guard<std::mutex> lock(next_mutex);
        if (next >= cfg.seeds.size()) return;
        index = next++;
      }
      const std::uint64_t seed = cfg.seeds[index];
      traces[index] = execute_run(cfg, env_cfg, scheme, seed, dir);
      std::lock_guard<std::mutex> lock(log_mutex);
      std::cout << scheme_tag(scheme) << " seed " << seed << ": final-100 mean reward "
                << traces[index].final_mean() << '\n';
    }
  };

  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(cfg.jobs), cfg.seeds.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return traces;
}

void append_summary(std::vector<SummaryEntry>& summary, const std::vector<RunTrace>& traces,
                    int irs_elements) {
  double aggregate = 0.0;
  for (const RunTrace& t : traces) {
    summary.push_back({scheme_tag(t.scheme), std::to_string(t.seed), irs_elements,
                       t.final_mean()});
    aggregate += t.final_mean();
  }
  summary.push_back({scheme_tag(traces.front().scheme), "all", irs_elements,
                     aggregate / static_cast<double>(traces.size())});
}

void write_outputs(const std::filesystem::path& dir, const std::vector<RunTrace>& traces,
                   const std::vector<SummaryEntry>& summary) {
  std::ofstream summary_file(dir / "summary.csv");
  write_summary_csv(summary_file, summary);
  std::ofstream plot_file(dir / ("plot_" + scheme_tag(traces.front().scheme) + ".csv"));
  write_plotdata_csv(plot_file, traces);
}

int cmd_train_or_baseline(const CliOverrides& cli, bool baseline) {
  const RunConfig cfg = resolve_config(cli);
  const bool is_baseline = cfg.scheme == Scheme::Mpt || cfg.scheme == Scheme::Rss;
  if (baseline && !is_baseline)
    throw ConfigError("baseline: scheme must be mpt or rss");
  if (!baseline && is_baseline)
    throw ConfigError("train: scheme must be one of c-ddpg, p-ddpg, c-ppo, p-ppo");

  const std::filesystem::path dir(cfg.out_dir);
  const std::vector<RunTrace> traces = run_seeds(cfg, cfg.env_config(), cfg.scheme, dir);
  std::vector<SummaryEntry> summary;
  append_summary(summary, traces, cfg.irs_elements);
  write_outputs(dir, traces, summary);
  return 0;
}

int cmd_sweep(const CliOverrides& cli) {
  const RunConfig cfg = resolve_config(cli);
  const std::filesystem::path root(cfg.out_dir);
  std::filesystem::create_directories(root);
  std::vector<SummaryEntry> summary;
  for (int k : cfg.sweep_k) {
    const std::filesystem::path dir = root / ("K" + std::to_string(k));
    const std::vector<RunTrace> traces = run_seeds(cfg, cfg.env_config_with_k(k), cfg.scheme, dir);
    append_summary(summary, traces, k);
    std::ofstream plot_file(dir / ("plot_" + scheme_tag(cfg.scheme) + ".csv"));
    write_plotdata_csv(plot_file, traces);
  }
  std::ofstream summary_file(root / "summary.csv");
  write_summary_csv(summary_file, summary);
  return 0;
}

int cmd_check() {
  std::vector<CheckResult> results;
  for (auto& r : metric_oracle_suite(200, 20240, 1e-9)) results.push_back(r);
  for (auto& r : gradient_check_suite(20241, 1e-4)) results.push_back(r);
  for (auto& r : invariant_suite(20242)) results.push_back(r);
  bool ok = true;
  for (const CheckResult& r : results) {
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << '\n';
    ok = ok && r.pass;
  }
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IRS-assisted multi-UAV downlink simulator and learning harness"};
  app.require_subcommand(1);

  CliOverrides cli;
  const auto add_common = [&cli](CLI::App* sub, bool with_scheme) {
    sub->add_option("--config", cli.config_path, "configuration file (key = value lines)");
    sub->add_option("--out", cli.out_dir, "output directory (overrides config and IRSUAV_OUT)");
    sub->add_option("--seed", cli.seed, "run a single seed instead of the configured list");
    sub->add_option("--episodes", cli.episodes, "episode count override");
    if (with_scheme) sub->add_option("--scheme", cli.scheme, "scheme tag");
  };

  CLI::App* train = app.add_subcommand("train", "train a proposed scheme per seed");
  add_common(train, true);
  CLI::App* baseline = app.add_subcommand("baseline", "run the mpt or rss baseline per seed");
  add_common(baseline, true);
  CLI::App* sweep = app.add_subcommand("sweep", "train one scheme across sweep_k element counts");
  add_common(sweep, true);
  app.add_subcommand("check", "run the oracle and invariant suites");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) return cmd_train_or_baseline(cli, false);
    if (baseline->parsed()) return cmd_train_or_baseline(cli, true);
    if (sweep->parsed()) return cmd_sweep(cli);
    return cmd_check();
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
