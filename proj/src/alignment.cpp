#include "alignfluct/alignment.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "alignfluct/error.hpp"

namespace alignfluct {
namespace {

// Per-letter score rows against y, so the inner loop reads contiguous memory.
template <class V>
struct Profile {
  std::vector<V> letter_rows;  // (dim - 1) rows of length |y|
  std::vector<V> gap_vs_y;     // S(gap, y_j)
  std::vector<V> x_vs_gap;     // S(c, gap) per letter c
};

template <class V>
Profile<V> build_profile(const Sequence& y, const std::vector<V>& table, std::size_t dim) {
  const std::size_t m = y.size();
  const std::size_t g = dim - 1;
  Profile<V> p;
  p.letter_rows.resize(g * m);
  p.gap_vs_y.resize(m);
  p.x_vs_gap.resize(g);
  for (std::size_t c = 0; c < g; ++c) {
    for (std::size_t j = 0; j < m; ++j) p.letter_rows[c * m + j] = table[c * dim + y[j]];
    p.x_vs_gap[c] = table[c * dim + g];
  }
  for (std::size_t j = 0; j < m; ++j) p.gap_vs_y[j] = table[g * dim + y[j]];
  return p;
}

template <class V>
V score_kernel(const Sequence& x, const Sequence& y, const std::vector<V>& table,
               std::size_t dim) {
  const std::size_t m = y.size();
  const auto prof = build_profile(y, table, dim);
  std::vector<V> row(m + 1);
  row[0] = V{};
  for (std::size_t j = 1; j <= m; ++j) row[j] = row[j - 1] + prof.gap_vs_y[j - 1];

  const V* gy = prof.gap_vs_y.data();
  V* r = row.data();
  for (Code c : x) {
    const V* sub = prof.letter_rows.data() + c * m;
    const V gx = prof.x_vs_gap[c];
    V diag = r[0];
    r[0] += gx;
    V left = r[0];
    for (std::size_t j = 1; j <= m; ++j) {
      V best = std::max(diag + sub[j - 1], r[j] + gx);
      best = std::max(best, left + gy[j - 1]);
      diag = r[j];
      r[j] = best;
      left = best;
    }
  }
  return r[m];
}

// Two independent recurrences interleaved in one sweep.
template <class V>
std::pair<V, V> score_kernel_pair(const Sequence& x, const Sequence& y,
                                  const std::vector<V>& t1, const std::vector<V>& t2,
                                  std::size_t dim) {
  const std::size_t m = y.size();
  const auto p1 = build_profile(y, t1, dim);
  const auto p2 = build_profile(y, t2, dim);
  std::vector<V> row1(m + 1), row2(m + 1);
  row1[0] = row2[0] = V{};
  for (std::size_t j = 1; j <= m; ++j) {
    row1[j] = row1[j - 1] + p1.gap_vs_y[j - 1];
    row2[j] = row2[j - 1] + p2.gap_vs_y[j - 1];
  }
  V* r1 = row1.data();
  V* r2 = row2.data();
  const V* gy1 = p1.gap_vs_y.data();
  const V* gy2 = p2.gap_vs_y.data();
  for (Code c : x) {
    const V* sub1 = p1.letter_rows.data() + c * m;
    const V* sub2 = p2.letter_rows.data() + c * m;
    const V gx1 = p1.x_vs_gap[c];
    const V gx2 = p2.x_vs_gap[c];
    V diag1 = r1[0], diag2 = r2[0];
    r1[0] += gx1;
    r2[0] += gx2;
    V left1 = r1[0], left2 = r2[0];
    for (std::size_t j = 1; j <= m; ++j) {
      V b1 = std::max(diag1 + sub1[j - 1], r1[j] + gx1);
      V b2 = std::max(diag2 + sub2[j - 1], r2[j] + gx2);
      b1 = std::max(b1, left1 + gy1[j - 1]);
      b2 = std::max(b2, left2 + gy2[j - 1]);
      diag1 = r1[j];
      diag2 = r2[j];
      r1[j] = left1 = b1;
      r2[j] = left2 = b2;
    }
  }
  return {r1[m], r2[m]};
}

void check_codes(const Sequence& s, const Alphabet& alphabet) {
  for (Code c : s) {
    if (c >= alphabet.size()) throw SymbolError("sequence contains a code outside the alphabet");
  }
}

enum Move : std::uint8_t { kDiag = 1, kUp = 2, kLeft = 4 };

template <class V>
std::pair<V, Alignment> traceback_kernel(const Sequence& x, const Sequence& y,
                                 const std::vector<V>& table, std::size_t dim) {
  const std::size_t n = x.size();
  const std::size_t m = y.size();
  const std::size_t g = dim - 1;
  const std::size_t w = m + 1;
  std::vector<std::uint8_t> moves((n + 1) * w, 0);
  std::vector<V> prev(m + 1), cur(m + 1);
  prev[0] = V{};
  for (std::size_t j = 1; j <= m; ++j) {
    prev[j] = prev[j - 1] + table[g * dim + y[j - 1]];
    moves[j] = kLeft;
  }
  for (std::size_t i = 1; i <= n; ++i) {
    const std::size_t xc = x[i - 1];
    const V gx = table[xc * dim + g];
    cur[0] = prev[0] + gx;
    moves[i * w] = kUp;
    for (std::size_t j = 1; j <= m; ++j) {
      const V d = prev[j - 1] + table[xc * dim + y[j - 1]];
      const V u = prev[j] + gx;
      const V l = cur[j - 1] + table[g * dim + y[j - 1]];
      const V best = std::max({d, u, l});
      cur[j] = best;
      moves[i * w + j] = static_cast<std::uint8_t>((d == best ? kDiag : 0) |
                                                   (u == best ? kUp : 0) |
                                                   (l == best ? kLeft : 0));
    }
    std::swap(prev, cur);
  }

  Alignment pi;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    const std::uint8_t mv = moves[i * w + j];
    if (mv & kDiag) {
      pi.push_back({i, j});
      --i;
      --j;
    } else if (mv & kUp) {
      --i;
    } else {
      --j;
    }
  }
  std::reverse(pi.begin(), pi.end());
  return {prev[m], std::move(pi)};
}

template <class F>
auto dispatch(const ScoringMatrix& s, F&& f) {
  if (auto half = s.half_units()) return f(*half, 0.5);
  return f(s.entries(), 1.0);
}

}  // namespace

std::uint64_t QMatrix::total() const noexcept {
  std::uint64_t t = 0;
  for (auto c : counts_) t += c;
  return t;
}

double QMatrix::contract(const ScoringMatrix& s) const {
  if (s.dim() != dim_) throw AlphabetMismatch("Q matrix and scoring matrix differ in size");
  double total = 0.0;
  for (std::size_t c = 0; c < dim_; ++c) {
    for (std::size_t d = 0; d < dim_; ++d) {
      if (auto q = counts_[c * dim_ + d]) {
        total += static_cast<double>(q) * s(static_cast<Code>(c), static_cast<Code>(d));
      }
    }
  }
  return total;
}

double optimal_score(const Sequence& x, const Sequence& y, const ScoringMatrix& s) {
  check_codes(x, s.alphabet());
  check_codes(y, s.alphabet());
  return dispatch(s, [&](const auto& table, double unit) {
    return static_cast<double>(score_kernel(x, y, table, s.dim())) * unit;
  });
}

double optimal_score(std::string_view x, std::string_view y, const ScoringMatrix& s) {
  return optimal_score(s.alphabet().encode(x), s.alphabet().encode(y), s);
}

std::pair<double, double> optimal_score_pair(const Sequence& x, const Sequence& y,
                                             const ScoringMatrix& s1, const ScoringMatrix& s2) {
  if (!(s1.alphabet() == s2.alphabet())) {
    throw AlphabetMismatch("paired scores need matrices over the same alphabet");
  }
  check_codes(x, s1.alphabet());
  check_codes(y, s1.alphabet());
  auto h1 = s1.half_units();
  auto h2 = s2.half_units();
  if (h1 && h2) {
    auto [a, b] = score_kernel_pair(x, y, *h1, *h2, s1.dim());
    return {static_cast<double>(a) * 0.5, static_cast<double>(b) * 0.5};
  }
  if (!h1 && !h2) return score_kernel_pair(x, y, s1.entries(), s2.entries(), s1.dim());
  // Mixed representations: keep each matrix on its own exact path.
  return {optimal_score(x, y, s1), optimal_score(x, y, s2)};
}

AlignmentResult optimal_alignment(const Sequence& x, const Sequence& y, const ScoringMatrix& s,
                                  std::size_t max_length) {
  if (x.size() > max_length || y.size() > max_length) {
    throw SizeCapExceeded("traceback is limited to strings of length " +
                          std::to_string(max_length));
  }
  check_codes(x, s.alphabet());
  check_codes(y, s.alphabet());
  AlignmentResult result;
  result.score = dispatch(s, [&](const auto& table, double unit) {
    auto [score, pi] = traceback_kernel(x, y, table, s.dim());
    result.alignment = std::move(pi);
    return static_cast<double>(score) * unit;
  });
  result.q_counts = pair_counts(x, y, result.alignment, s.alphabet());
  return result;
}

AlignmentResult optimal_alignment(std::string_view x, std::string_view y, const ScoringMatrix& s,
                                  std::size_t max_length) {
  return optimal_alignment(s.alphabet().encode(x), s.alphabet().encode(y), s, max_length);
}

void validate_alignment(const Alignment& pi, std::size_t x_len, std::size_t y_len) {
  std::size_t last_x = 0, last_y = 0;
  for (const auto& p : pi) {
    if (p.x_pos <= last_x || p.y_pos <= last_y) {
      throw InvalidAlignment("alignment pairs must be strictly increasing and 1-based");
    }
    if (p.x_pos > x_len || p.y_pos > y_len) {
      throw InvalidAlignment("alignment pair (" + std::to_string(p.x_pos) + "," +
                             std::to_string(p.y_pos) + ") is out of range");
    }
    last_x = p.x_pos;
    last_y = p.y_pos;
  }
}

double alignment_score(const Sequence& x, const Sequence& y, const Alignment& pi,
                       const ScoringMatrix& s) {
  validate_alignment(pi, x.size(), y.size());
  check_codes(x, s.alphabet());
  check_codes(y, s.alphabet());
  const Code gap = s.alphabet().gap_code();
  std::vector<bool> x_used(x.size(), false), y_used(y.size(), false);
  double total = 0.0;
  for (const auto& p : pi) {
    total += s(x[p.x_pos - 1], y[p.y_pos - 1]);
    x_used[p.x_pos - 1] = true;
    y_used[p.y_pos - 1] = true;
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!x_used[i]) total += s(x[i], gap);
  }
  for (std::size_t j = 0; j < y.size(); ++j) {
    if (!y_used[j]) total += s(gap, y[j]);
  }
  return total;
}

double alignment_score(std::string_view x, std::string_view y, const Alignment& pi,
                       const ScoringMatrix& s) {
  return alignment_score(s.alphabet().encode(x), s.alphabet().encode(y), pi, s);
}

QMatrix pair_counts(const Sequence& x, const Sequence& y, const Alignment& pi,
                    const Alphabet& alphabet) {
  validate_alignment(pi, x.size(), y.size());
  check_codes(x, alphabet);
  check_codes(y, alphabet);
  const Code gap = alphabet.gap_code();
  QMatrix q(alphabet.augmented_size());
  for (Code c : x) ++q(c, gap);
  for (Code d : y) ++q(gap, d);
  for (const auto& p : pi) {
    const Code c = x[p.x_pos - 1];
    const Code d = y[p.y_pos - 1];
    ++q(c, d);
    --q(c, gap);
    --q(gap, d);
  }
  return q;
}

QMatrix pair_counts(std::string_view x, std::string_view y, const Alignment& pi,
                    const Alphabet& alphabet) {
  return pair_counts(alphabet.encode(x), alphabet.encode(y), pi, alphabet);
}

namespace {

void enumerate_alignments(const Sequence& x, const Sequence& y, const ScoringMatrix& s,
                          Alignment& current, double& best) {
  best = std::max(best, alignment_score(x, y, current, s));
  const std::size_t from_x = current.empty() ? 1 : current.back().x_pos + 1;
  const std::size_t from_y = current.empty() ? 1 : current.back().y_pos + 1;
  for (std::size_t i = from_x; i <= x.size(); ++i) {
    for (std::size_t j = from_y; j <= y.size(); ++j) {
      current.push_back({i, j});
      enumerate_alignments(x, y, s, current, best);
      current.pop_back();
    }
  }
}

}  // namespace

double brute_force_score(const Sequence& x, const Sequence& y, const ScoringMatrix& s) {
  if (x.size() > kBruteForceMaxLength || y.size() > kBruteForceMaxLength) {
    throw SizeCapExceeded("brute force enumeration is limited to " +
                          std::to_string(kBruteForceMaxLength) + " letters per string");
  }
  Alignment current;
  double best = -std::numeric_limits<double>::infinity();
  enumerate_alignments(x, y, s, current, best);
  return best;
}

double brute_force_score(std::string_view x, std::string_view y, const ScoringMatrix& s) {
  return brute_force_score(s.alphabet().encode(x), s.alphabet().encode(y), s);
}

std::string format_alignment_tsv(const Alignment& pi) {
  std::ostringstream out;
  for (const auto& p : pi) out << p.x_pos << '\t' << p.y_pos << '\n';
  return out.str();
}

Alignment parse_alignment_tsv(std::string_view text) {
  Alignment pi;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    AlignedPair p{};
    if (!(fields >> p.x_pos >> p.y_pos)) throw InvalidAlignment("bad alignment line: " + line);
    pi.push_back(p);
  }
  return pi;
}

}  // namespace alignfluct
