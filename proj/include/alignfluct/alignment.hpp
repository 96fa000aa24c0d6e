#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "alignfluct/alphabet.hpp"
#include "alignfluct/scoring.hpp"

namespace alignfluct {

/// One aligned column: x[x_pos] against y[y_pos], both 1-based.
struct AlignedPair {
  std::size_t x_pos;
  std::size_t y_pos;
  bool operator==(const AlignedPair&) const = default;
};

/// Strictly increasing in both coordinates. Letters not mentioned are
/// aligned with a gap.
using Alignment = std::vector<AlignedPair>;

/// Column counts Q(c,d) over the augmented alphabet; (gap,gap) stays 0.
class QMatrix {
 public:
  explicit QMatrix(std::size_t dim) : dim_(dim), counts_(dim * dim, 0) {}

  std::size_t dim() const noexcept { return dim_; }
  std::uint64_t operator()(Code c, Code d) const noexcept { return counts_[c * dim_ + d]; }
  std::uint64_t& operator()(Code c, Code d) noexcept { return counts_[c * dim_ + d]; }
  std::uint64_t total() const noexcept;

  /// Sum of Q(c,d) * S(c,d).
  double contract(const ScoringMatrix& s) const;

  bool operator==(const QMatrix&) const = default;

 private:
  std::size_t dim_;
  std::vector<std::uint64_t> counts_;
};

struct AlignmentResult {
  double score = 0.0;
  Alignment alignment;
  QMatrix q_counts{0};
};

/// Longest strings for which optimal_alignment keeps the full traceback table.
inline constexpr std::size_t kDefaultTracebackCap = 20000;
/// Longest strings the exhaustive oracle will enumerate.
inline constexpr std::size_t kBruteForceMaxLength = 7;

/// Global alignment score with every unaligned letter scored against a gap.
/// Uses two DP rows; exact integer arithmetic when S has half-integer entries.
double optimal_score(const Sequence& x, const Sequence& y, const ScoringMatrix& s);
double optimal_score(std::string_view x, std::string_view y, const ScoringMatrix& s);

/// Optimal scores of the same pair under two matrices over one alphabet,
/// computed in a single sweep.
std::pair<double, double> optimal_score_pair(const Sequence& x, const Sequence& y,
                                             const ScoringMatrix& s1, const ScoringMatrix& s2);

/// Optimal score plus one optimal alignment. Traceback prefers the diagonal,
/// then x-against-gap, then y-against-gap. Throws SizeCapExceeded when either
/// string is longer than max_length.
AlignmentResult optimal_alignment(const Sequence& x, const Sequence& y, const ScoringMatrix& s,
                                  std::size_t max_length = kDefaultTracebackCap);
AlignmentResult optimal_alignment(std::string_view x, std::string_view y, const ScoringMatrix& s,
                                  std::size_t max_length = kDefaultTracebackCap);

/// Throws InvalidAlignment unless pi is strictly increasing and in range.
void validate_alignment(const Alignment& pi, std::size_t x_len, std::size_t y_len);

double alignment_score(const Sequence& x, const Sequence& y, const Alignment& pi,
                       const ScoringMatrix& s);
double alignment_score(std::string_view x, std::string_view y, const Alignment& pi,
                       const ScoringMatrix& s);

QMatrix pair_counts(const Sequence& x, const Sequence& y, const Alignment& pi,
                    const Alphabet& alphabet);
QMatrix pair_counts(std::string_view x, std::string_view y, const Alignment& pi,
                    const Alphabet& alphabet);

/// Maximum of alignment_score over every alignment, by enumeration. Test
/// oracle only; throws SizeCapExceeded beyond kBruteForceMaxLength letters.
double brute_force_score(const Sequence& x, const Sequence& y, const ScoringMatrix& s);
double brute_force_score(std::string_view x, std::string_view y, const ScoringMatrix& s);

/// Tab-separated "x_pos\ty_pos" lines.
std::string format_alignment_tsv(const Alignment& pi);
Alignment parse_alignment_tsv(std::string_view text);

}  // namespace alignfluct
