#include "alignfluct/scoring.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "alignfluct/error.hpp"

namespace alignfluct {
namespace {

// Keeps |entry * 2| * (number of alignment columns) well inside int64.
constexpr double kHalfUnitLimit = 1099511627776.0;  // 2^40

bool reads_gap_gap(const ScoringMatrix& s, std::size_t c, std::size_t d) {
  const std::size_t g = s.dim() - 1;
  return !s.gap_gap_defined() && c == g && d == g;
}

}  // namespace

ScoringMatrix::ScoringMatrix(Alphabet alphabet, std::vector<double> entries,
                             bool gap_gap_defined)
    : alphabet_(std::move(alphabet)),
      dim_(alphabet_.augmented_size()),
      entries_(std::move(entries)),
      gap_gap_defined_(gap_gap_defined) {
  if (entries_.size() != dim_ * dim_) {
    throw std::invalid_argument("scoring matrix needs " + std::to_string(dim_ * dim_) +
                                " entries, got " + std::to_string(entries_.size()));
  }
  const std::size_t g = dim_ - 1;
  if (!gap_gap_defined_) entries_[g * dim_ + g] = 0.0;
  for (std::size_t c = 0; c < dim_; ++c) {
    for (std::size_t d = 0; d < c; ++d) {
      double a = entries_[c * dim_ + d];
      double b = entries_[d * dim_ + c];
      if (!std::isfinite(a) || a != b) {
        std::ostringstream msg;
        msg << "scoring matrix is not symmetric at (" << alphabet_.symbol_of(static_cast<Code>(c))
            << ',' << alphabet_.symbol_of(static_cast<Code>(d)) << "): " << a << " vs " << b;
        throw std::invalid_argument(msg.str());
      }
    }
    if (!std::isfinite(entries_[c * dim_ + c])) {
      throw std::invalid_argument("scoring matrix has a non-finite entry");
    }
  }
}

ScoringMatrix ScoringMatrix::zero(Alphabet alphabet) {
  std::size_t d = alphabet.augmented_size();
  return ScoringMatrix(std::move(alphabet), std::vector<double>(d * d, 0.0));
}

ScoringMatrix ScoringMatrix::from_letter_block(Alphabet alphabet,
                                               const std::vector<std::vector<double>>& block,
                                               double gap_penalty) {
  const std::size_t k = alphabet.size();
  const std::size_t d = k + 1;
  if (block.size() != k) throw std::invalid_argument("letter block has wrong row count");
  std::vector<double> entries(d * d, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    if (block[i].size() != k) throw std::invalid_argument("letter block has wrong column count");
    for (std::size_t j = 0; j < k; ++j) entries[i * d + j] = block[i][j];
    entries[i * d + k] = -gap_penalty;
    entries[k * d + i] = -gap_penalty;
  }
  return ScoringMatrix(std::move(alphabet), std::move(entries));
}

ScoringMatrix ScoringMatrix::match_mismatch(Alphabet alphabet, double match, double mismatch,
                                            double gap_penalty) {
  const std::size_t k = alphabet.size();
  std::vector<std::vector<double>> block(k, std::vector<double>(k, mismatch));
  for (std::size_t i = 0; i < k; ++i) block[i][i] = match;
  return from_letter_block(std::move(alphabet), block, gap_penalty);
}

double ScoringMatrix::at(char c, char d) const {
  return (*this)(alphabet_.code_of(c), alphabet_.code_of(d));
}

std::optional<std::vector<std::int64_t>> ScoringMatrix::half_units() const {
  std::vector<std::int64_t> out(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    double twice = entries_[i] * 2.0;
    if (std::abs(twice) > kHalfUnitLimit || twice != std::nearbyint(twice)) return std::nullopt;
    out[i] = static_cast<std::int64_t>(twice);
  }
  return out;
}

double norm_delta(const ScoringMatrix& s) {
  const std::size_t n = s.dim();
  double best = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t d = 0; d < n; ++d) {
      if (reads_gap_gap(s, c, d)) continue;
      for (std::size_t e = d + 1; e < n; ++e) {
        if (reads_gap_gap(s, c, e)) continue;
        best = std::max(best, std::abs(s(static_cast<Code>(c), static_cast<Code>(d)) -
                                       s(static_cast<Code>(c), static_cast<Code>(e))));
      }
    }
  }
  return best;
}

double norm_inf(const ScoringMatrix& s) {
  const std::size_t n = s.dim();
  double best = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t d = 0; d < n; ++d) {
      if (reads_gap_gap(s, c, d)) continue;
      best = std::max(best, std::abs(s(static_cast<Code>(c), static_cast<Code>(d))));
    }
  }
  return best;
}

ScoringMatrix linear_combine(const ScoringMatrix& s, double eps, const ScoringMatrix& t) {
  if (!(s.alphabet() == t.alphabet())) {
    throw AlphabetMismatch("cannot combine scoring matrices over \"" + s.alphabet().letters() +
                           "\" and \"" + t.alphabet().letters() + "\"");
  }
  std::vector<double> out(s.entries().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = s.entries()[i] - eps * t.entries()[i];
  return ScoringMatrix(s.alphabet(), std::move(out), s.gap_gap_defined() && t.gap_gap_defined());
}

ScoringMatrix builtin_blastz(double gap_penalty) {
  // Rows and columns in the order A, T, C, G.
  return ScoringMatrix::from_letter_block(Alphabet::dna(),
                                          {{91, -31, -114, -123},
                                           {-31, 100, -125, -114},
                                           {-114, -125, 100, -31},
                                           {-123, -114, -31, 91}},
                                          gap_penalty);
}

ScoringMatrix builtin_identity(double gap_penalty, double mismatch) {
  return ScoringMatrix::match_mismatch(Alphabet::binary(), 1.0, mismatch, gap_penalty);
}

ScoringMatrix parse_scoring_matrix(std::istream& in, char gap) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::vector<std::string> row;
    for (std::string tok; tokens >> tok;) row.push_back(tok);
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError("scoring matrix file is empty");

  std::string letters;
  for (const auto& tok : rows.front()) {
    if (tok.size() != 1) throw ConfigError("letters must be single characters, got '" + tok + "'");
    letters += tok;
  }
  auto alphabet = [&] {
    try {
      return Alphabet(letters, gap);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }();
  const std::size_t d = alphabet.augmented_size();
  if (rows.size() != d + 1) {
    throw ConfigError("scoring matrix needs " + std::to_string(d) + " rows after the letters, got " +
                      std::to_string(rows.size() - 1));
  }
  std::vector<double> entries(d * d, 0.0);
  bool gap_gap_defined = true;
  for (std::size_t i = 0; i < d; ++i) {
    const auto& row = rows[i + 1];
    if (row.size() != d) {
      throw ConfigError("scoring matrix row " + std::to_string(i + 1) + " has " +
                        std::to_string(row.size()) + " values, expected " + std::to_string(d));
    }
    for (std::size_t j = 0; j < d; ++j) {
      if (row[j] == "*") {
        if (i != d - 1 || j != d - 1) throw ConfigError("'*' is only allowed in the gap/gap slot");
        gap_gap_defined = false;
        continue;
      }
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(row[j], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != row[j].size()) throw ConfigError("bad number '" + row[j] + "' in scoring matrix");
      entries[i * d + j] = v;
    }
  }
  try {
    return ScoringMatrix(std::move(alphabet), std::move(entries), gap_gap_defined);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

ScoringMatrix load_scoring_matrix(const std::filesystem::path& path, char gap) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scoring matrix file " + path.string());
  return parse_scoring_matrix(in, gap);
}

void write_scoring_matrix(std::ostream& out, const ScoringMatrix& s) {
  const auto& letters = s.alphabet().letters();
  for (std::size_t i = 0; i < letters.size(); ++i) out << (i ? " " : "") << letters[i];
  out << '\n';
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  const std::size_t d = s.dim();
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (j) out << ' ';
      if (i == d - 1 && j == d - 1 && !s.gap_gap_defined()) {
        out << '*';
      } else {
        out << s(static_cast<Code>(i), static_cast<Code>(j));
      }
    }
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace alignfluct
