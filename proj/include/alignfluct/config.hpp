#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "alignfluct/montecarlo.hpp"

namespace alignfluct {

/// A parsed experiment file.
///
///   [alphabet]      letters, gap
///   [distribution]  probs (one per letter, alphabet order)
///   [scoring]       builtin = identity | blastz | match_mismatch, or
///                   matrix_file (relative to the config file);
///                   match, mismatch, gap_penalty
///   [perturbation]  kind = single | group, from, to, multiplicity
///   [run]           n, replicates, eps, seed, workers, expected_change_cap,
///                   traceback
///   [pvalue]        x, n, reference
///   [varscan]       lengths, replicates
///   [events]        lambda_s, lambda_smt, density_slack
///
/// Unknown sections or keys are errors.
struct RunSettings {
  ExperimentConfig experiment;
  bool seed_given = false;
  std::optional<double> pvalue_x;
  std::optional<double> pvalue_n;
  std::optional<double> pvalue_reference;
  std::vector<std::size_t> varscan_lengths;
  std::size_t varscan_replicates = 200;
  std::optional<EventReferences> events;
};

/// Longest strings a score-only run accepts.
inline constexpr std::size_t kMaxScoreLength = 200000;

/// Throws ConfigError naming the offending section.key.
RunSettings parse_run_settings(std::istream& in, const std::filesystem::path& base_dir);
RunSettings load_run_settings(const std::filesystem::path& path);

}  // namespace alignfluct
