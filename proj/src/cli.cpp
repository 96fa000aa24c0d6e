#include "alignfluct/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "alignfluct/config.hpp"
#include "alignfluct/error.hpp"
#include "alignfluct/montecarlo.hpp"
#include "alignfluct/report_io.hpp"
#include "alignfluct/selftest.hpp"

namespace alignfluct {
namespace {

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::string out_path;
  std::string format = "json";
  bool timings = false;
};

RunSettings load_settings(const CommonOptions& opts) {
  if (opts.config_path.empty()) throw ConfigError("--config is required");
  RunSettings settings = load_run_settings(opts.config_path);
  if (opts.seed) {
    settings.experiment.master_seed = *opts.seed;
  } else if (!settings.seed_given) {
    if (const char* env = std::getenv("ALIGNFLUCT_SEED"); env && *env) {
      std::uint64_t value = 0;
      std::string_view text(env);
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
      if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError("ALIGNFLUCT_SEED must be an unsigned integer");
      }
      settings.experiment.master_seed = value;
    }
  }
  if (opts.workers) settings.experiment.workers = *opts.workers;
  return settings;
}

template <class Report>
void emit(const Report& report, const CommonOptions& opts, std::ostream& out) {
  std::ostringstream text;
  if (opts.format == "csv") {
    write_csv(text, report);
  } else {
    text << to_json_text(report, JsonOptions{opts.timings});
  }
  if (opts.out_path.empty()) {
    out << text.str();
    return;
  }
  std::ofstream file(opts.out_path, std::ios::binary);
  if (!file) throw Error("cannot write " + opts.out_path);
  file << text.str();
}

int cmd_estimate(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  const RunSettings settings = load_settings(opts);
  EstimateReport report = run_statistic(settings.experiment);
  if (settings.events) report.events = evaluate_events(report, settings.experiment, *settings.events);
  emit(report, opts, out);
  err << std::setprecision(17) << "estimate: n=" << settings.experiment.n
      << " replicates=" << report.replicates.size() << " mean x=" << report.x.mean
      << " std=" << report.x.std_dev << '\n';
  return kExitOk;
}

int cmd_pvalue(const CommonOptions& opts, std::optional<double> x_flag,
               std::optional<double> reference_flag, std::ostream& out, std::ostream& err) {
  const RunSettings settings = load_settings(opts);
  const auto& cfg = settings.experiment;
  const double n = settings.pvalue_n.value_or(static_cast<double>(cfg.n));
  if (!(n >= 2.0)) throw ConfigError("pvalue needs n >= 2 (c_n is undefined below)");

  std::optional<double> x = x_flag ? x_flag : settings.pvalue_x;
  if (!x) {
    err << "pvalue: no x given, running the estimate inline\n";
    x = run_statistic(cfg).x.mean;
  }
  PValueReport report = pvalue_bound(*x, n, cfg.scoring, cfg.eps, cfg.change_matrix());
  report.reference_pvalue = reference_flag ? reference_flag : settings.pvalue_reference;
  emit(report, opts, out);
  err << std::setprecision(17);
  if (report.inconclusive) {
    err << "INCONCLUSIVE: x=" << report.x << " does not exceed the margin " << report.margin
        << " (delta=" << report.delta << ")\n";
  } else {
    err << "bound=" << report.bound << " delta=" << report.delta << " c_n=" << report.c_n << '\n';
  }
  if (report.reference_pvalue) {
    err << "reference p-value " << *report.reference_pvalue << " vs computed " << report.bound
        << '\n';
  }
  return kExitOk;
}

int cmd_expected_change(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  const RunSettings settings = load_settings(opts);
  const auto report = expected_change_mc(settings.experiment);
  emit(report, opts, out);
  err << std::setprecision(17) << "expected-change: mean=" << report.expected_change.mean
      << " theorem target=" << report.theorem_target << '\n';
  return kExitOk;
}

int cmd_varscan(const CommonOptions& opts, std::optional<std::size_t> replicates_flag,
                std::ostream& out, std::ostream& err) {
  const RunSettings settings = load_settings(opts);
  if (settings.varscan_lengths.empty()) throw ConfigError("missing config key varscan.lengths");
  const auto report = variance_scan(settings.experiment, settings.varscan_lengths,
                                    replicates_flag.value_or(settings.varscan_replicates));
  for (const auto& w : report.warnings) err << "warning: " << w << '\n';
  emit(report, opts, out);
  return kExitOk;
}

int cmd_selftest(const SelfTestOptions& st, std::ostream& out) {
  const auto report = run_selftest(st);
  out << std::left << std::setw(46) << "property" << std::setw(8) << "result" << std::setw(10)
      << "checks" << "seconds\n";
  for (const auto& r : report.results) {
    out << std::setw(46) << r.name << std::setw(8) << (r.passed ? "ok" : "FAIL") << std::setw(10)
        << r.checks << std::fixed << std::setprecision(2) << r.seconds << '\n';
    out.unsetf(std::ios::fixed);
  }
  if (const auto* failed = report.first_failure()) {
    out << "FAILED: " << failed->name << ": " << failed->detail << '\n';
    return kExitSelfTestFailed;
  }
  out << "all " << report.results.size() << " properties passed\n";
  return kExitOk;
}

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "Experiment config file")->required();
  cmd->add_option("--seed", opts.seed, "Master seed (overrides config and ALIGNFLUCT_SEED)");
  cmd->add_option("--workers", opts.workers, "Worker threads for replicates")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", opts.out_path, "Write the report here instead of stdout");
  cmd->add_option("--format", opts.format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_flag("--timings", opts.timings, "Include wall-clock times in JSON reports");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal alignment fluctuation experiments", "alignfluct"};
  app.require_subcommand(1);

  CommonOptions opts;
  auto* estimate = app.add_subcommand("estimate", "Estimate lambda(S) - lambda(S - eps T)");
  add_common(estimate, opts);

  auto* pvalue = app.add_subcommand("pvalue", "Bound the p-value of an observed statistic");
  add_common(pvalue, opts);
  std::optional<double> x_flag, reference_flag;
  pvalue->add_option("--x", x_flag, "Observed statistic (otherwise [pvalue] x or an inline run)");
  pvalue->add_option("--reference", reference_flag, "Published p-value to compare against");

  auto* expected = app.add_subcommand("expected-change",
                                      "Exact conditional expected change on sampled pairs");
  add_common(expected, opts);

  auto* varscan = app.add_subcommand("varscan", "Variance of L_n(S) across lengths");
  add_common(varscan, opts);
  std::optional<std::size_t> varscan_replicates;
  varscan->add_option("--replicates", varscan_replicates, "Replicates per length");

  auto* selftest = app.add_subcommand("selftest", "Run the built-in property checks");
  SelfTestOptions st;
  selftest->add_option("--workers", st.workers, "Worker threads")->check(CLI::PositiveNumber);
  selftest->add_option("--inject-fault", st.inject_fault)->group("");

  std::vector<std::string> storage{"alignfluct"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (*estimate) return cmd_estimate(opts, out, err);
    if (*pvalue) return cmd_pvalue(opts, x_flag, reference_flag, out, err);
    if (*expected) return cmd_expected_change(opts, out, err);
    if (*varscan) return cmd_varscan(opts, varscan_replicates, out, err);
    if (*selftest) return cmd_selftest(st, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntimeError;
  }
  return kExitConfigError;
}

}  // namespace alignfluct
