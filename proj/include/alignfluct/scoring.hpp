#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "alignfluct/alphabet.hpp"

namespace alignfluct {

/// Symmetric score over the augmented alphabet (letters plus gap).
///
/// Entries are stored densely, row-major, with the gap row/column last. The
/// (gap, gap) entry is only meaningful when gap_gap_defined() is true; no
/// alignment ever produces such a column, and the norms skip it otherwise.
/// Immutable once built.
class ScoringMatrix {
 public:
  /// `entries` has augmented_size()^2 values. Throws std::invalid_argument on
  /// a size mismatch or an asymmetric entry.
  ScoringMatrix(Alphabet alphabet, std::vector<double> entries,
                bool gap_gap_defined = false);

  static ScoringMatrix zero(Alphabet alphabet);

  /// Letter block given explicitly, every letter scored -gap_penalty against a gap.
  static ScoringMatrix from_letter_block(
      Alphabet alphabet, const std::vector<std::vector<double>>& block,
      double gap_penalty);

  static ScoringMatrix match_mismatch(Alphabet alphabet, double match,
                                      double mismatch, double gap_penalty);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t dim() const noexcept { return dim_; }
  bool gap_gap_defined() const noexcept { return gap_gap_defined_; }
  const std::vector<double>& entries() const noexcept { return entries_; }

  double operator()(Code c, Code d) const noexcept { return entries_[c * dim_ + d]; }
  double at(char c, char d) const;

  /// Entries times two, when every entry is an exact half-integer of modest
  /// magnitude. Integer DP on these values is exact and deterministic.
  std::optional<std::vector<std::int64_t>> half_units() const;

  bool operator==(const ScoringMatrix& other) const = default;

 private:
  Alphabet alphabet_;
  std::size_t dim_;
  std::vector<double> entries_;
  bool gap_gap_defined_;
};

/// max |S(c,d) - S(c,e)| over the augmented alphabet.
double norm_delta(const ScoringMatrix& s);
/// max |S(c,d)| over the augmented alphabet.
double norm_inf(const ScoringMatrix& s);

/// Entrywise s - eps * t. Throws AlphabetMismatch.
ScoringMatrix linear_combine(const ScoringMatrix& s, double eps, const ScoringMatrix& t);

/// BLASTZ default substitution scores on A,T,C,G; letters score -gap_penalty
/// against a gap.
ScoringMatrix builtin_blastz(double gap_penalty);

/// Match/mismatch scores on the binary alphabet {0,1}.
ScoringMatrix builtin_identity(double gap_penalty, double mismatch = 0.0);

/// Plain-text matrix: a line of letters, then the full square matrix with the
/// gap row and column last. '#' starts a comment. A '*' in the gap/gap slot
/// leaves that entry undefined.
ScoringMatrix parse_scoring_matrix(std::istream& in, char gap = Alphabet::kDefaultGap);
ScoringMatrix load_scoring_matrix(const std::filesystem::path& path,
                                  char gap = Alphabet::kDefaultGap);
void write_scoring_matrix(std::ostream& out, const ScoringMatrix& s);

}  // namespace alignfluct
