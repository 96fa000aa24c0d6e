#include <doctest.h>

#include <sstream>

#include "alignfluct/error.hpp"
#include "alignfluct/random.hpp"
#include "alignfluct/scoring.hpp"
#include "oracle.hpp"

using namespace alignfluct;

namespace {

ScoringMatrix random_symmetric(RandomStream& rng, const Alphabet& a) {
  const std::size_t dim = a.augmented_size();
  std::vector<double> e(dim * dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i; j < dim; ++j) {
      if (i == dim - 1 && j == dim - 1) continue;
      const double v = static_cast<double>(static_cast<int>(rng.below(41)) - 20) / 2.0;
      e[i * dim + j] = e[j * dim + i] = v;
    }
  return ScoringMatrix(a, std::move(e));
}

ScoringMatrix permuted(const ScoringMatrix& s, const std::string& letters) {
  const Alphabet a(letters, s.alphabet().gap());
  const std::string syms = letters + a.gap();
  std::vector<double> e;
  for (char c : syms)
    for (char d : syms) e.push_back(s.at(c, d));
  return ScoringMatrix(a, std::move(e), s.gap_gap_defined());
}

}  // namespace

TEST_CASE("alphabet rejects repeated letters and the gap symbol") {
  CHECK_THROWS_AS(Alphabet("aba"), std::invalid_argument);
  CHECK_THROWS_AS(Alphabet("a-"), std::invalid_argument);
  CHECK_THROWS_AS(Alphabet("a"), std::invalid_argument);
  const Alphabet dna = Alphabet::dna();
  CHECK(dna.augmented_size() == 5);
  CHECK(dna.gap_code() == 4);
  CHECK(dna.decode(dna.encode("GATTACA")) == "GATTACA");
  CHECK_THROWS_AS(dna.encode("GATXACA"), SymbolError);
  CHECK_THROWS_AS(dna.encode("GA-T"), SymbolError);
}

TEST_CASE("letter distribution must be a probability vector") {
  const Alphabet bin = Alphabet::binary();
  CHECK_NOTHROW(LetterDistribution(bin, {0.2, 0.8}));
  CHECK_THROWS_AS(LetterDistribution(bin, {0.2, 0.7}), std::invalid_argument);
  CHECK_THROWS_AS(LetterDistribution(bin, {-0.2, 1.2}), std::invalid_argument);
  CHECK_THROWS_AS(LetterDistribution(bin, {1.0}), std::invalid_argument);
  CHECK(LetterDistribution::uniform(Alphabet::dna()).prob('G') == doctest::Approx(0.25));
}

TEST_CASE("asymmetric entries are rejected") {
  std::vector<double> e(9, 0.0);
  e[1] = 1.0;
  CHECK_THROWS_AS(ScoringMatrix(Alphabet::binary(), e), std::invalid_argument);
  CHECK_THROWS_AS(ScoringMatrix(Alphabet::binary(), std::vector<double>(8, 0.0)), std::invalid_argument);
}

TEST_CASE("norm_delta examples") {
  CHECK(norm_delta(builtin_identity(6)) == 7);
  CHECK(norm_delta(ScoringMatrix(Alphabet::binary(), std::vector<double>(9, 3.0), true)) == 0);
  CHECK(norm_delta(builtin_blastz(1200)) == 1300);
}

TEST_CASE("norm_inf examples") {
  CHECK(norm_inf(ScoringMatrix::zero(Alphabet::dna())) == 0);
  CHECK(norm_inf(builtin_identity(6)) == 6);
  CHECK(norm_inf(builtin_blastz(1200)) == 1200);
}

TEST_CASE("undefined gap/gap entry is ignored by the norms") {
  std::vector<double> e = builtin_identity(6).entries();
  e.back() = 1e9;
  const ScoringMatrix s(Alphabet::binary(), e);
  CHECK(s(2, 2) == 0.0);
  CHECK(norm_inf(s) == 6);
  CHECK(norm_delta(s) == 7);
}

TEST_CASE("linear_combine examples") {
  const ScoringMatrix s = builtin_identity(6);
  const ScoringMatrix t =
      ScoringMatrix::from_letter_block(Alphabet::binary(), {{-4, 2}, {2, 0}}, 0.0);
  const ScoringMatrix r = linear_combine(s, 0.5, t);
  CHECK(r.at('0', '0') == 3);
  CHECK(r.at('0', '1') == -1);
  CHECK(r.at('1', '1') == 1);
  CHECK(r.at('0', '-') == -6);
  CHECK(r.at('-', '1') == -6);
  CHECK(linear_combine(s, 0.0, t) == s);
  CHECK_THROWS_AS(linear_combine(s, 0.5, builtin_blastz(1200)), AlphabetMismatch);
}

TEST_CASE("BLASTZ entries") {
  const ScoringMatrix s = builtin_blastz(1200);
  CHECK(s.at('A', 'A') == 91);
  CHECK(s.at('T', 'C') == -125);
  CHECK(s.at('G', 'A') == -123);
  CHECK(s.at('A', 'G') == -123);
  CHECK(s.at('C', '-') == -1200);
  CHECK(s.half_units().has_value());
}

TEST_CASE("half units only for half-integer matrices") {
  const ScoringMatrix s = ScoringMatrix::from_letter_block(Alphabet::binary(), {{1.5, -0.5}, {-0.5, 2}}, 1);
  REQUIRE(s.half_units().has_value());
  CHECK((*s.half_units())[0] == 3);
  CHECK_FALSE(ScoringMatrix::from_letter_block(Alphabet::binary(), {{0.1, 0}, {0, 1}}, 1).half_units());
}

TEST_CASE("norm properties on random matrices") {
  RandomStream rng(17);
  const Alphabet dna = Alphabet::dna();
  for (int trial = 0; trial < 200; ++trial) {
    const ScoringMatrix s = random_symmetric(rng, dna);
    const ScoringMatrix t = random_symmetric(rng, dna);
    const double eps = rng.uniform() * 3.0;
    CAPTURE(trial);
    CHECK(norm_delta(s) == oracle::norm_delta(s));
    CHECK(norm_inf(s) == oracle::norm_inf(s));
    const ScoringMatrix c = linear_combine(s, eps, t);
    CHECK(norm_delta(c) <= norm_delta(s) + eps * norm_delta(t) + 1e-9);
    CHECK(linear_combine(s, eps, ScoringMatrix::zero(dna)) == s);
    const ScoringMatrix p = permuted(s, "GCAT");
    CHECK(norm_delta(p) == norm_delta(s));
    CHECK(norm_inf(p) == norm_inf(s));
    for (char a : std::string("ATCG-"))
      for (char b : std::string("ATCG-")) CHECK(c.at(a, b) == c.at(b, a));
  }
}

TEST_CASE("matrix file round trip") {
  std::stringstream buf;
  write_scoring_matrix(buf, builtin_blastz(1200));
  const ScoringMatrix back = parse_scoring_matrix(buf);
  CHECK(back == builtin_blastz(1200));
  CHECK_FALSE(back.gap_gap_defined());
}

TEST_CASE("matrix file errors") {
  std::istringstream missing_row("0 1\n1 0 -6\n0 1 -6\n");
  CHECK_THROWS_AS(parse_scoring_matrix(missing_row), ConfigError);
  std::istringstream asym("0 1\n1 2 -6\n0 1 -6\n-6 -6 *\n");
  CHECK_THROWS_AS(parse_scoring_matrix(asym), ConfigError);
  std::istringstream dup("0 0\n1 0 -6\n0 1 -6\n-6 -6 *\n");
  CHECK_THROWS_AS(parse_scoring_matrix(dup), ConfigError);
  std::istringstream junk("0 1\n1 x -6\n0 1 -6\n-6 -6 *\n");
  CHECK_THROWS_AS(parse_scoring_matrix(junk), ConfigError);
  CHECK_THROWS_AS(load_scoring_matrix("/nonexistent/matrix.txt"), ConfigError);
}

TEST_CASE("matrix file comments and defined gap/gap") {
  std::istringstream in("# identity\n0 1\n1 0 -6  # row 0\n0 1 -6\n-6 -6 2\n");
  const ScoringMatrix s = parse_scoring_matrix(in);
  CHECK(s.gap_gap_defined());
  CHECK(s.at('-', '-') == 2);
  CHECK(norm_inf(s) == 6);
}
