#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "alignfluct/alphabet.hpp"
#include "alignfluct/perturbation.hpp"
#include "alignfluct/random.hpp"
#include "alignfluct/scoring.hpp"

namespace alignfluct {

/// Everything that determines a Monte Carlo run. Two runs with equal configs
/// produce identical numbers regardless of `workers`.
struct ExperimentConfig {
  LetterDistribution distribution;
  ScoringMatrix scoring;
  PerturbationSpec perturbation;
  double eps = 0.0;
  std::size_t n = 0;
  std::size_t replicates = 1;
  std::uint64_t master_seed = 0;
  unsigned workers = 1;
  std::size_t expected_change_cap = kDefaultExpectedChangeCap;
  /// Also record T_pi of the S-optimal traceback per replicate.
  bool traceback = false;

  const Alphabet& alphabet() const { return scoring.alphabet(); }
  /// Throws ConfigError.
  void validate() const;
  /// T for the configured perturbation.
  ScoringMatrix change_matrix() const;
  /// S - eps * T.
  ScoringMatrix perturbed_scoring() const;
  /// Limit of N/n, the number of changeable letters in both strings per
  /// position: 2 * sum of p over the `from` letters.
  double changeable_density() const;
};

Sequence sample_string(const LetterDistribution& dist, std::size_t n, RandomStream& rng);
std::string sample_text(const LetterDistribution& dist, std::size_t n, RandomStream& rng);

/// The pair a replicate works on: X then Y from derive_seed(master, replicate).
std::pair<Sequence, Sequence> sample_pair(const LetterDistribution& dist, std::size_t n,
                                          std::uint64_t seed);

struct ReplicateRecord {
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  double score_s = 0.0;    // L_n(S)
  double score_smt = 0.0;  // L_n(S - eps T)
  double x = 0.0;          // (L_n(S) - L_n(S - eps T)) / n
  std::size_t occurrences = 0;
  std::optional<double> t_score;  // T_pi(X, Y), traceback runs only
  double wall_ms = 0.0;
  bool operator==(const ReplicateRecord&) const = default;
};

struct Summary {
  double mean = 0.0;
  double std_dev = 0.0;  // (count - 1) denominator; 0 for a single value
  double min = 0.0;
  double max = 0.0;
  bool operator==(const Summary&) const = default;
};

Summary summarize(const std::vector<double>& values);

/// Reference limits the event predicates compare against. No claim is made
/// that they are the true constants.
struct EventReferences {
  double lambda_s = 0.0;
  double lambda_smt = 0.0;
  double density_slack = 1.0;
};

struct EventFlags {
  bool a = false;  // L_n(S)/n >= lambda(S) - ln n / sqrt n
  bool b = false;  // L_n(S - eps T)/n <= lambda(S - eps T) + ln n / sqrt n
  bool c = false;  // N/n <= density + slack ln n / sqrt n
  bool operator==(const EventFlags&) const = default;
};

struct EventsReport {
  std::vector<EventFlags> replicates;
  double freq_a = 0.0;
  double freq_b = 0.0;
  double freq_c = 0.0;
  double freq_all = 0.0;
  bool operator==(const EventsReport&) const = default;
};

/// Parameters echoed into every report.
struct ConfigEcho {
  std::string letters;
  std::vector<double> probs;
  std::vector<double> scoring;  // row-major, gap last
  std::string change_kind;
  std::string change_from;
  std::string change_to;
  int multiplicity = 1;
  double eps = 0.0;
  std::size_t n = 0;
  std::size_t replicates = 0;
  std::uint64_t master_seed = 0;
  bool operator==(const ConfigEcho&) const = default;
};

ConfigEcho echo_of(const ExperimentConfig& cfg);

struct EstimateReport {
  ConfigEcho config;
  std::vector<ReplicateRecord> replicates;
  Summary x;
  std::optional<EventsReport> events;

  std::vector<double> x_values() const;
  bool operator==(const EstimateReport&) const = default;
};

/// Per replicate: sample (X, Y) once, score it under S and S - eps T, record
/// x_r = (L_n(S) - L_n(S - eps T)) / n.
EstimateReport run_statistic(const ExperimentConfig& cfg);

/// sqrt((2 ln 3 + 2 ln(n + 2)) / ln n). Throws std::domain_error for n < 2.
double c_n_constant(double n);

/// c_n ||S||_delta sqrt(ln n / n) + 2 ||S||_inf / n: how far lambda(S) can sit
/// above lambda_n(S).
double lambda_margin(double n, const ScoringMatrix& s);

struct PValueReport {
  double x = 0.0;
  double n = 0.0;
  double eps = 0.0;
  double c_n = 0.0;
  double norm_s = 0.0;    // ||S||_delta
  double norm_smt = 0.0;  // ||S - eps T||_delta
  double norm_sum = 0.0;
  double margin = 0.0;  // c_n ||S - eps T||_delta sqrt(ln n) / sqrt(n)
  double delta = 0.0;   // x - margin
  double bound = 1.0;   // exp(-n delta^2 / norm_sum^2), or 1 when inconclusive
  bool inconclusive = true;
  std::optional<double> reference_pvalue;
  bool operator==(const PValueReport&) const = default;
};

/// Upper bound on P(statistic >= x) if lambda(S) - lambda(S - eps T) were
/// negative. Throws std::domain_error for n < 2.
PValueReport pvalue_bound(double x, double n, const ScoringMatrix& s, double eps,
                          const ScoringMatrix& t);

struct ExpectedChangeRecord {
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  double expected_change = 0.0;  // exact E[L~ - L | X, Y]
  double lower_bound = 0.0;      // T_pi / (multiplicity N)
  double x = 0.0;                // statistic on the same pair
  double chain_bound = 0.0;      // n x / (eps multiplicity N)
  std::size_t occurrences = 0;
  double wall_ms = 0.0;
  bool operator==(const ExpectedChangeRecord&) const = default;
};

struct ExpectedChangeReport {
  ConfigEcho config;
  std::vector<ExpectedChangeRecord> replicates;
  Summary expected_change;
  Summary x;
  double density = 0.0;          // limit of N / n
  double theorem_target = 0.0;   // mean x / (eps multiplicity density)
  bool operator==(const ExpectedChangeReport&) const = default;
};

/// Exact conditional expected change on sampled pairs, with the lower bounds
/// it must dominate. Throws SizeCapExceeded above cfg.expected_change_cap.
ExpectedChangeReport expected_change_mc(const ExperimentConfig& cfg);

struct VarianceRow {
  std::size_t n = 0;
  std::size_t replicates = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double variance_over_n = 0.0;
  bool operator==(const VarianceRow&) const = default;
};

struct VarianceScanReport {
  ConfigEcho config;
  std::vector<VarianceRow> rows;
  std::vector<std::string> warnings;
  bool operator==(const VarianceScanReport&) const = default;
};

/// Sample variance of L_n(S) for each length. Rows with fewer than two
/// replicates are reported as warnings instead.
VarianceScanReport variance_scan(const ExperimentConfig& base, const std::vector<std::size_t>& lengths,
                                 std::size_t replicates);

/// Event predicates per replicate; density is the limit of N/n.
EventFlags evaluate_events(const ReplicateRecord& rec, std::size_t n, double density,
                           const EventReferences& refs);
EventsReport evaluate_events(const EstimateReport& report, const ExperimentConfig& cfg,
                             const EventReferences& refs);

struct TailRow {
  double deviation = 0.0;  // per-argument deviation (the epsilon of the bound)
  double upper_frequency = 0.0;
  double lower_frequency = 0.0;
  double bound = 0.0;      // exp(-2 deviation^2 m / C^2), m = 2n
};

struct McDiarmidReport {
  std::size_t trials = 0;
  std::size_t n = 0;
  double bounded_difference = 0.0;  // ||S||_delta
  double max_observed_change = 0.0;
  std::size_t violations = 0;
  std::vector<TailRow> tails;
};

/// Resamples one random letter of a fresh pair per trial and checks the
/// bounded-difference constant; then compares tail frequencies of L_n (around
/// the sample mean) with the bounded-differences inequality.
McDiarmidReport mcdiarmid_check(const ExperimentConfig& cfg, std::size_t trials,
                                const std::vector<double>& deviations);

}  // namespace alignfluct
