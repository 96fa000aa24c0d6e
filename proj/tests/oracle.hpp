#pragma once

// Reference implementations used only by the tests. They work on plain
// strings and ScoringMatrix::at() so they share no code with the library
// kernels.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "alignfluct/scoring.hpp"

namespace oracle {

// Top-down recursion over suffixes, memoised.
inline double alignment_score(const std::string& x, const std::string& y,
                              const alignfluct::ScoringMatrix& s) {
  const char gap = s.alphabet().gap();
  std::map<std::pair<std::size_t, std::size_t>, double> memo;
  auto rec = [&](auto&& self, std::size_t i, std::size_t j) -> double {
    if (i == x.size() && j == y.size()) return 0.0;
    if (auto it = memo.find({i, j}); it != memo.end()) return it->second;
    double best = -INFINITY;
    if (i < x.size() && j < y.size()) best = std::max(best, s.at(x[i], y[j]) + self(self, i + 1, j + 1));
    if (i < x.size()) best = std::max(best, s.at(x[i], gap) + self(self, i + 1, j));
    if (j < y.size()) best = std::max(best, s.at(gap, y[j]) + self(self, i, j + 1));
    memo[{i, j}] = best;
    return best;
  };
  return rec(rec, 0, 0);
}

inline std::string symbols(const alignfluct::ScoringMatrix& s) {
  return s.alphabet().letters() + s.alphabet().gap();
}

inline bool skipped(const alignfluct::ScoringMatrix& s, char c, char d) {
  const char gap = s.alphabet().gap();
  return c == gap && d == gap && !s.gap_gap_defined();
}

inline double norm_delta(const alignfluct::ScoringMatrix& s) {
  const std::string a = symbols(s);
  double best = 0.0;
  for (char c : a)
    for (char d : a)
      for (char e : a) {
        if (skipped(s, c, d) || skipped(s, c, e)) continue;
        best = std::max(best, std::abs(s.at(c, d) - s.at(c, e)));
      }
  return best;
}

inline double norm_inf(const alignfluct::ScoringMatrix& s) {
  const std::string a = symbols(s);
  double best = 0.0;
  for (char c : a)
    for (char d : a)
      if (!skipped(s, c, d)) best = std::max(best, std::abs(s.at(c, d)));
  return best;
}

inline long double c_n(long double n) {
  return std::sqrt((2.0L * std::log(3.0L) + 2.0L * std::log(n + 2.0L)) / std::log(n));
}

// Mean of L(x~, y~) - L(x, y) over every single-occurrence change of `from`
// into a letter of `to` (targets equal to the original letter included).
inline double expected_change(const std::string& x, const std::string& y, const std::string& from,
                              const std::string& to, const alignfluct::ScoringMatrix& s) {
  const double base = alignment_score(x, y, s);
  double total = 0.0;
  std::size_t outcomes = 0;
  auto visit = [&](std::string& w, bool in_x) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (from.find(w[i]) == std::string::npos) continue;
      const char original = w[i];
      for (char t : to) {
        w[i] = t;
        total += (in_x ? alignment_score(w, y, s) : alignment_score(x, w, s)) - base;
        ++outcomes;
      }
      w[i] = original;
    }
  };
  std::string xs = x, ys = y;
  visit(xs, true);
  visit(ys, false);
  return total / static_cast<double>(outcomes);
}

}  // namespace oracle
