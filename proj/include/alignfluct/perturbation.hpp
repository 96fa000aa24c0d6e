#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "alignfluct/alignment.hpp"
#include "alignfluct/alphabet.hpp"
#include "alignfluct/random.hpp"
#include "alignfluct/scoring.hpp"

namespace alignfluct {

enum class ChangeKind { single, group };

/// A random letter change: one occurrence of a `from` letter, picked
/// uniformly among all occurrences in both strings, becomes a `to` letter
/// drawn uniformly. `multiplicity` only scales the analytical T matrix; the
/// sampler always changes exactly one letter.
struct PerturbationSpec {
  ChangeKind kind = ChangeKind::single;
  std::string from_letters;
  std::string to_letters;
  int multiplicity = 1;

  static PerturbationSpec single(char from, char to, int multiplicity = 1);
  static PerturbationSpec group(std::string from, std::string to);

  /// Throws std::invalid_argument (bad shape) or SymbolError (unknown letter).
  void validate(const Alphabet& alphabet) const;
  /// from == to: the change leaves every string untouched.
  bool trivial() const;

  bool operator==(const PerturbationSpec&) const = default;
};

std::string to_string(ChangeKind kind);
ChangeKind parse_change_kind(std::string_view text);

struct ChangeOutcome {
  Sequence x_new;
  Sequence y_new;
  bool changed_in_x = false;
  std::size_t position = 0;  // 0-based, in the string that changed
  Code old_letter = 0;
  Code new_letter = 0;
};

/// T for changing one `from` into `to`: row/column `from` holds
/// S(to,c) - S(from,c), T(from,from) = 2(S(to,from) - S(from,from)), zero
/// elsewhere; everything scaled by `multiplicity`.
ScoringMatrix build_single_letter_T(const ScoringMatrix& s, char from, char to,
                                    int multiplicity = 1);

/// T = T_X + T_Y for the grouped change: T_X(U,V) is the mean over t in
/// `to_set` of S(t,V) - S(U,V) when U is in `from_set`, zero otherwise; T_Y
/// is its transpose.
ScoringMatrix build_group_change_T(const ScoringMatrix& s, std::string_view from_set,
                                   std::string_view to_set);

/// Dispatches on spec.kind.
ScoringMatrix build_change_T(const ScoringMatrix& s, const PerturbationSpec& spec);

/// Number of letters of x and y (together) that the change may pick.
std::size_t count_occurrences(const Sequence& x, const Sequence& y, const PerturbationSpec& spec,
                              const Alphabet& alphabet);

/// Throws NoOccurrence when neither string has a `from` letter.
ChangeOutcome apply_random_change(const Sequence& x, const Sequence& y,
                                  const PerturbationSpec& spec, const Alphabet& alphabet,
                                  RandomStream& rng);

/// Exact E[L(x~,y~) - L(x,y) | x, y] as a sum over every equally likely
/// outcome (occurrence x target letter).
struct ExpectedChange {
  double total_change = 0.0;
  std::size_t occurrences = 0;
  std::size_t targets = 0;
  double mean() const { return total_change / static_cast<double>(occurrences * targets); }
};

inline constexpr std::size_t kDefaultExpectedChangeCap = 2000;

/// Re-runs the optimal-score DP once per outcome. Throws NoOccurrence, or
/// SizeCapExceeded when a string is longer than size_cap.
ExpectedChange exact_expected_change(const Sequence& x, const Sequence& y,
                                     const PerturbationSpec& spec, const ScoringMatrix& s,
                                     std::size_t size_cap = kDefaultExpectedChangeCap);
ExpectedChange exact_expected_change(std::string_view x, std::string_view y,
                                     const PerturbationSpec& spec, const ScoringMatrix& s,
                                     std::size_t size_cap = kDefaultExpectedChangeCap);

/// T-score of the traceback-optimal S alignment, per changed letter.
/// value() = t_score / (multiplicity * occurrences), which never exceeds the
/// exact expected change of a single random letter change.
struct ChangeLowerBound {
  double t_score = 0.0;
  std::size_t occurrences = 0;
  int multiplicity = 1;
  double value() const {
    return t_score / (static_cast<double>(multiplicity) * static_cast<double>(occurrences));
  }
};

ChangeLowerBound t_lower_bound(const Sequence& x, const Sequence& y, const ScoringMatrix& t,
                               const ScoringMatrix& s, const PerturbationSpec& spec,
                               std::size_t traceback_cap = kDefaultTracebackCap);
ChangeLowerBound t_lower_bound(std::string_view x, std::string_view y, const ScoringMatrix& t,
                               const ScoringMatrix& s, const PerturbationSpec& spec,
                               std::size_t traceback_cap = kDefaultTracebackCap);

}  // namespace alignfluct
