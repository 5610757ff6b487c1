#include "dtcfd/cli.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dtcfd/compare.hpp"
#include "dtcfd/config.hpp"
#include "dtcfd/output.hpp"
#include "dtcfd/verification.hpp"

namespace dtcfd {

namespace {

void set_threads(int requested) {
  int n = requested;
  if (n <= 0) {
    if (const char* env = std::getenv(kThreadsEnv)) n = std::atoi(env);
  }
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct RunOutcome {
  FanRunSummary summary;
  RunStatus status = RunStatus::MaxIterations;
};

RunOutcome run_config(const CaseConfig& cfg, const std::filesystem::path& out, const std::string& label) {
  const Case c = build_case(cfg);
  std::printf("%s: %d x %d x %d cells, %d fans (%s), %.4g m3/s modelled\n", label.c_str(), c.mesh.n(0), c.mesh.n(1),
              c.mesh.n(2), cfg.transformer.fan_count, to_string(cfg.transformer.flow_mode).c_str(),
              cfg.transformer.modelled_flow());
  const auto t0 = std::chrono::steady_clock::now();
  const RunResult r = run_steady(c, cfg.controls, [](int it, const Residuals& res, const FieldSet&) {
    if (it % 100 != 0) return;
    std::printf("  %6d", it);
    for (std::size_t e = 0; e < kEquationCount; ++e) std::printf(" %s=%.2e", kEquationNames[e], res[e]);
    std::printf("\n");
    std::fflush(stdout);
  });
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_bundle(out, emit_config(cfg), cfg.transformer, c, r, seconds);
  RunOutcome o{summarize_fan_run(label, cfg.transformer, c, r), r.status};
  std::printf("%s: %s after %d iterations (%.1f s)%s%s\n", label.c_str(), to_string(r.status).c_str(), r.iterations,
              seconds, r.message.empty() ? "" : ": ", r.message.c_str());
  std::printf("  mean outlet %.2f degC, peak winding %.2f degC, mean channel velocity %.3f m/s\n",
              o.summary.mean_outlet_temperature - 273.15, o.summary.peak_winding_temperature - 273.15,
              o.summary.mean_channel_velocity);
  std::printf("  results written to %s\n", out.string().c_str());
  return o;
}

int cmd_run(const std::string& cfg_path, const std::string& out, int threads) {
  const CaseConfig cfg = load_config(cfg_path);
  set_threads(threads > 0 ? threads : cfg.threads);
  const auto dir = out.empty() ? std::filesystem::path("results") / cfg.name : std::filesystem::path(out);
  const RunOutcome o = run_config(cfg, dir, cfg.name);
  return o.status == RunStatus::Diverged ? kExitDiverged : kExitOk;
}

int cmd_verify(const std::string& level_name, int threads) {
  set_threads(threads);
  const VerificationLevel level = parse_verification_level(level_name);
  std::printf("verification battery (%s)\n", to_string(level).c_str());
  const auto outcomes = run_verification_battery(level, [](const VerificationOutcome& o) {
    std::printf("  %-24s %s (%.1f s)\n", to_string(o.id).c_str(), o.passed() ? "PASS" : "FAIL", o.seconds);
    std::fflush(stdout);
  });
  std::printf("\n%s", format_battery_table(outcomes).c_str());
  bool ok = true;
  for (const auto& o : outcomes) ok = ok && o.passed();
  std::printf("%s\n", ok ? "all cases PASS" : "verification FAILED");
  return ok ? kExitOk : kExitVerificationFailed;
}

int cmd_sweep(const std::string& cfg_path, const std::string& fans, const std::string& flow_mode,
              const std::string& flows, const std::string& out, int threads) {
  CaseConfig base = load_config(cfg_path);
  set_threads(threads > 0 ? threads : base.threads);
  std::vector<int> fan_counts;
  for (const auto& f : split_list(fans)) fan_counts.push_back(std::stoi(f));
  std::vector<std::optional<double>> flow_values{std::nullopt};
  if (!flows.empty()) {
    flow_values.clear();
    for (const auto& f : split_list(flows)) flow_values.push_back(std::stod(f));
  }
  if (!flow_mode.empty()) base.transformer.flow_mode = flow_mode == "total" ? FlowMode::Total : FlowMode::PerFan;

  const std::filesystem::path root =
      out.empty() ? std::filesystem::path("results") / (base.name + "_sweep") : std::filesystem::path(out);
  std::vector<RunOutcome> runs;
  bool diverged = false;
  for (int n : fan_counts) {
    for (const auto& q : flow_values) {
      CaseConfig cfg = base;
      cfg.transformer.fan_count = n;
      if (q) cfg.transformer.fan_flow = *q;
      try {
        cfg.transformer.validate();
      } catch (const Error& e) {
        throw ConfigError({{0, e.what()}});
      }
      std::string label = "fans" + std::to_string(n);
      if (q) {
        char b[32];
        std::snprintf(b, sizeof b, "_flow%g", *q);
        label += b;
      }
      runs.push_back(run_config(cfg, root / label, label));
      diverged = diverged || runs.back().status == RunStatus::Diverged;
    }
  }
  std::ostringstream csv;
  for (std::size_t i = 1; i < runs.size(); ++i) {
    try {
      const FanComparison cmp = compare_fan_configs(runs.front().summary, runs[i].summary);
      std::printf("\n%s", cmp.text().c_str());
      csv << "# " << runs.front().summary.label << " -> " << runs[i].summary.label << "\n" << cmp.csv();
    } catch (const Error& e) {
      std::printf("\ncomparison %s -> %s skipped: %s\n", runs.front().summary.label.c_str(),
                  runs[i].summary.label.c_str(), e.what());
    }
  }
  if (runs.size() > 1) write_text(root / "comparison.csv", csv.str());
  return diverged ? kExitDiverged : kExitOk;
}

int cmd_compare(const std::string& a, const std::string& b, const std::string& csv_path) {
  const FanComparison cmp = compare_fan_configs(read_bundle_summary(a), read_bundle_summary(b));
  std::printf("%s", cmp.text().c_str());
  if (!csv_path.empty()) write_text(csv_path, cmp.csv());
  return kExitOk;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"dtcfd: steady RANS solver for dry-transformer enclosure cooling"};
  app.require_subcommand(1);

  int threads = 0;
  std::string cfg_path, out, level = "coarse", fans = "2,4", flow_mode, flows, dir_a, dir_b, csv_path;

  auto* run = app.add_subcommand("run", "run a configuration and write a result bundle");
  run->add_option("config", cfg_path, "configuration file")->required();
  run->add_option("--out", out, "output directory (default results/<name>)");
  run->add_option("--threads", threads, "worker threads (default $DTCFD_THREADS)");

  auto* verify = app.add_subcommand("verify", "run the verification battery");
  verify->add_option("--level", level, "grid level")->check(CLI::IsMember({"coarse", "full"}));
  verify->add_option("--threads", threads, "worker threads (default $DTCFD_THREADS)");

  auto* sweep = app.add_subcommand("sweep", "run a fan-count / fan-flow matrix and compare against the first run");
  sweep->add_option("config", cfg_path, "configuration file")->required();
  sweep->add_option("--fans", fans, "comma-separated fan counts");
  sweep->add_option("--flow-mode", flow_mode, "per-fan or total")->check(CLI::IsMember({"per-fan", "total"}));
  sweep->add_option("--flows", flows, "comma-separated fan flows [m3/s] (default: the config value)");
  sweep->add_option("--out", out, "output root directory");
  sweep->add_option("--threads", threads, "worker threads (default $DTCFD_THREADS)");

  auto* compare = app.add_subcommand("compare", "compare two result bundles");
  compare->add_option("first", dir_a, "first bundle directory")->required();
  compare->add_option("second", dir_b, "second bundle directory")->required();
  compare->add_option("--csv", csv_path, "also write the comparison as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (*run) return cmd_run(cfg_path, out, threads);
    if (*verify) return cmd_verify(level, threads);
    if (*sweep) return cmd_sweep(cfg_path, fans, flow_mode, flows, out, threads);
    if (*compare) return cmd_compare(dir_a, dir_b, csv_path);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid number in argument list: %s\n", e.what());
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntimeError;
  }
  return kExitConfigError;
}

}  // namespace dtcfd
