#include "alignfluct/alphabet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "alignfluct/error.hpp"

namespace alignfluct {

Alphabet::Alphabet(std::string letters, char gap) : letters_(std::move(letters)), gap_(gap) {
  if (letters_.size() < 2) {
    throw std::invalid_argument("alphabet needs at least two letters");
  }
  if (letters_.size() > kMaxLetters) {
    throw std::invalid_argument("alphabet has too many letters");
  }
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (letters_[i] == gap_) {
      throw std::invalid_argument(std::string("gap symbol '") + gap_ + "' used as a letter");
    }
    if (letters_.find(letters_[i], i + 1) != std::string::npos) {
      throw std::invalid_argument(std::string("duplicate letter '") + letters_[i] + "'");
    }
  }
}

std::optional<Code> Alphabet::find(char symbol) const noexcept {
  auto pos = letters_.find(symbol);
  if (pos == std::string::npos) return std::nullopt;
  return static_cast<Code>(pos);
}

Code Alphabet::code_of(char symbol) const {
  if (symbol == gap_) return gap_code();
  if (auto c = find(symbol)) return *c;
  throw SymbolError(std::string("symbol '") + symbol + "' is not in alphabet \"" + letters_ + "\"");
}

char Alphabet::symbol_of(Code code) const {
  if (code == gap_code()) return gap_;
  if (code > gap_code()) throw SymbolError("code out of range");
  return letters_[code];
}

Sequence Alphabet::encode(std::string_view text) const {
  Sequence out;
  out.reserve(text.size());
  for (char ch : text) {
    auto c = find(ch);
    if (!c) {
      throw SymbolError(std::string("symbol '") + ch + "' is not a letter of \"" + letters_ + "\"");
    }
    out.push_back(*c);
  }
  return out;
}

std::string Alphabet::decode(const Sequence& seq) const {
  std::string out;
  out.reserve(seq.size());
  for (Code c : seq) out.push_back(symbol_of(c));
  return out;
}

LetterDistribution::LetterDistribution(Alphabet alphabet, std::vector<double> probs)
    : alphabet_(std::move(alphabet)), probs_(std::move(probs)) {
  if (probs_.size() != alphabet_.size()) {
    throw std::invalid_argument("distribution must give one probability per letter");
  }
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw std::invalid_argument("letter probabilities must be finite and non-negative");
    }
  }
  double total = std::accumulate(probs_.begin(), probs_.end(), 0.0);
  if (std::abs(total - 1.0) > kSumTolerance) {
    throw std::invalid_argument("letter probabilities must sum to 1");
  }
}

LetterDistribution LetterDistribution::uniform(Alphabet alphabet) {
  std::vector<double> probs(alphabet.size(), 1.0 / static_cast<double>(alphabet.size()));
  // Push the rounding residue into the last letter so the sum check holds.
  double head = std::accumulate(probs.begin(), probs.end() - 1, 0.0);
  probs.back() = 1.0 - head;
  return LetterDistribution(std::move(alphabet), std::move(probs));
}

double LetterDistribution::prob(char letter) const {
  auto c = alphabet_.find(letter);
  if (!c) throw SymbolError(std::string("symbol '") + letter + "' is not in the distribution");
  return probs_[*c];
}

}  // namespace alignfluct
