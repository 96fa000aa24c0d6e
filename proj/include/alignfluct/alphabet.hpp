#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace alignfluct {

// Letters are addressed by their position in the alphabet; the gap symbol
// always takes the code one past the last letter.
using Code = std::uint8_t;
using Sequence = std::vector<Code>;

class Alphabet {
 public:
  static constexpr char kDefaultGap = '-';
  static constexpr std::size_t kMaxLetters = 64;

  Alphabet(std::string letters, char gap = kDefaultGap);

  static Alphabet binary() { return Alphabet("01"); }
  static Alphabet dna() { return Alphabet("ATCG"); }

  const std::string& letters() const noexcept { return letters_; }
  char gap() const noexcept { return gap_; }
  std::size_t size() const noexcept { return letters_.size(); }
  std::size_t augmented_size() const noexcept { return letters_.size() + 1; }
  Code gap_code() const noexcept { return static_cast<Code>(letters_.size()); }

  std::optional<Code> find(char symbol) const noexcept;
  // Accepts the gap symbol as well; throws SymbolError otherwise.
  Code code_of(char symbol) const;
  char symbol_of(Code code) const;

  // Strings must not contain the gap symbol.
  Sequence encode(std::string_view text) const;
  std::string decode(const Sequence& seq) const;

  bool operator==(const Alphabet& other) const = default;

 private:
  std::string letters_;
  char gap_;
};

// Probabilities p_a for each letter, in alphabet order.
class LetterDistribution {
 public:
  static constexpr double kSumTolerance = 1e-12;

  LetterDistribution(Alphabet alphabet, std::vector<double> probs);

  static LetterDistribution uniform(Alphabet alphabet);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  const std::vector<double>& probs() const noexcept { return probs_; }
  double prob(char letter) const;

 private:
  Alphabet alphabet_;
  std::vector<double> probs_;
};

}  // namespace alignfluct
