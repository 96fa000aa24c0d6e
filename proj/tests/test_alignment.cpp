#include <doctest.h>

#include "alignfluct/alignment.hpp"
#include "alignfluct/error.hpp"
#include "alignfluct/random.hpp"
#include "oracle.hpp"

using namespace alignfluct;

namespace {

const ScoringMatrix& dna_unit() {
  static const ScoringMatrix s = ScoringMatrix::match_mismatch(Alphabet::dna(), 1, -1, 1);
  return s;
}

std::string random_text(RandomStream& rng, const std::string& letters, std::size_t max_len) {
  std::string s(rng.below(max_len + 1), ' ');
  for (auto& c : s) c = letters[rng.below(letters.size())];
  return s;
}

std::vector<ScoringMatrix> binary_matrices() {
  const Alphabet bin = Alphabet::binary();
  return {builtin_identity(6), builtin_identity(1, -1), ScoringMatrix::match_mismatch(bin, 2, -3, 0.5),
          ScoringMatrix::from_letter_block(bin, {{0.3, -1.7}, {-1.7, 2.2}}, 0.9)};
}

// Every alignment of short strings, as a list of pair sets.
void all_alignments(std::size_t lx, std::size_t ly, Alignment& cur, std::vector<Alignment>& out) {
  out.push_back(cur);
  const std::size_t i0 = cur.empty() ? 1 : cur.back().x_pos + 1;
  const std::size_t j0 = cur.empty() ? 1 : cur.back().y_pos + 1;
  for (std::size_t i = i0; i <= lx; ++i)
    for (std::size_t j = j0; j <= ly; ++j) {
      cur.push_back({i, j});
      all_alignments(lx, ly, cur, out);
      cur.pop_back();
    }
}

}  // namespace

TEST_CASE("DNA example scores 1") {
  CHECK(optimal_score("AGTTCG", "AATTAC", dna_unit()) == 1);
  CHECK(brute_force_score("AGTTCG", "AATTAC", dna_unit()) == 1);
  const Alignment shown{{1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 6}};
  CHECK(alignment_score("AGTTCG", "AATTAC", shown, dna_unit()) == 1);

  const AlignmentResult r = optimal_alignment("AGTTCG", "AATTAC", dna_unit());
  CHECK(r.score == 1);
  CHECK(alignment_score("AGTTCG", "AATTAC", r.alignment, dna_unit()) == 1);
  CHECK(r.q_counts.contract(dna_unit()) == 1);
}

TEST_CASE("degenerate inputs") {
  const ScoringMatrix id = builtin_identity(6);
  CHECK(optimal_score("", "", id) == 0);
  CHECK(optimal_score("0110", "", id) == -24);
  CHECK(optimal_score("", "01", id) == -12);
  CHECK(optimal_score("0110100", "0110100", ScoringMatrix::match_mismatch(Alphabet::binary(), 1, 0, 0)) == 7);
  const Alphabet a("ab");
  const AlignmentResult r = optimal_alignment("a", "a", ScoringMatrix::match_mismatch(a, 1, -1, 1));
  CHECK(r.score == 1);
  CHECK(r.alignment == Alignment{{1, 1}});
  CHECK_THROWS_AS(optimal_score("012", "0", id), SymbolError);
}

TEST_CASE("brute force on single letters has two alignments") {
  for (const auto& s : binary_matrices())
    for (char a : std::string("01"))
      for (char b : std::string("01")) {
        const std::string x(1, a), y(1, b);
        CHECK(brute_force_score(x, y, s) == std::max(s.at(a, b), s.at(a, '-') + s.at('-', b)));
      }
  CHECK_THROWS_AS(brute_force_score("01010101", "0", builtin_identity(6)), SizeCapExceeded);
}

TEST_CASE("alignment counts match the number of paths") {
  // Alignments of lengths m, n are counted by sum_k C(m,k) C(n,k).
  for (std::size_t lx = 0; lx <= 4; ++lx)
    for (std::size_t ly = 0; ly <= 4; ++ly) {
      Alignment cur;
      std::vector<Alignment> all;
      all_alignments(lx, ly, cur, all);
      auto choose = [](std::size_t n, std::size_t k) {
        std::size_t r = 1;
        for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
        return r;
      };
      std::size_t expected = 0;
      for (std::size_t k = 0; k <= std::min(lx, ly); ++k) expected += choose(lx, k) * choose(ly, k);
      CHECK(all.size() == expected);
    }
}

TEST_CASE("DP agrees with enumeration on every binary pair up to length 4") {
  for (const auto& s : binary_matrices()) {
    for (std::size_t lx = 0; lx <= 4; ++lx)
      for (std::size_t ly = 0; ly <= 4; ++ly)
        for (unsigned bx = 0; bx < (1U << lx); ++bx)
          for (unsigned by = 0; by < (1U << ly); ++by) {
            std::string x, y;
            for (std::size_t i = 0; i < lx; ++i) x += ((bx >> i) & 1U) ? '1' : '0';
            for (std::size_t i = 0; i < ly; ++i) y += ((by >> i) & 1U) ? '1' : '0';
            const double dp = optimal_score(x, y, s);
            // Half-integer matrices are scored exactly; others up to rounding.
            if (s.half_units()) {
              REQUIRE(dp == brute_force_score(x, y, s));
              REQUIRE(dp == oracle::alignment_score(x, y, s));
            } else {
              REQUIRE(dp == doctest::Approx(brute_force_score(x, y, s)).epsilon(1e-12));
              REQUIRE(dp == doctest::Approx(oracle::alignment_score(x, y, s)).epsilon(1e-12));
            }
          }
  }
}

TEST_CASE("DP agrees with enumeration on random DNA pairs") {
  RandomStream rng(101);
  const ScoringMatrix blastz = builtin_blastz(400);
  for (int trial = 0; trial < 500; ++trial) {
    const std::string x = random_text(rng, "ATCG", 6);
    const std::string y = random_text(rng, "ATCG", 6);
    CAPTURE(x);
    CAPTURE(y);
    REQUIRE(optimal_score(x, y, dna_unit()) == brute_force_score(x, y, dna_unit()));
    REQUIRE(optimal_score(x, y, blastz) == brute_force_score(x, y, blastz));
  }
}

TEST_CASE("DP agrees with the recursive oracle on longer strings") {
  RandomStream rng(202);
  const ScoringMatrix odd = ScoringMatrix::from_letter_block(
      Alphabet::dna(), {{1.1, -0.3, -0.7, 0.2}, {-0.3, 0.9, 0.4, -1.3}, {-0.7, 0.4, 2.0, -0.1}, {0.2, -1.3, -0.1, 0.6}},
      0.8);
  for (int trial = 0; trial < 60; ++trial) {
    const std::string x = random_text(rng, "ATCG", 40);
    const std::string y = random_text(rng, "ATCG", 40);
    CHECK(optimal_score(x, y, odd) == doctest::Approx(oracle::alignment_score(x, y, odd)).epsilon(1e-12));
    CHECK(optimal_score(x, y, builtin_blastz(1200)) == oracle::alignment_score(x, y, builtin_blastz(1200)));
  }
}

TEST_CASE("paired sweep equals two separate sweeps") {
  RandomStream rng(303);
  const ScoringMatrix s = builtin_blastz(1200);
  const ScoringMatrix t = ScoringMatrix::match_mismatch(Alphabet::dna(), 0.7, -0.2, 1.9);
  const Alphabet& a = s.alphabet();
  for (int trial = 0; trial < 50; ++trial) {
    const Sequence x = a.encode(random_text(rng, "ATCG", 80));
    const Sequence y = a.encode(random_text(rng, "ATCG", 80));
    const auto [p, q] = optimal_score_pair(x, y, s, t);
    CHECK(p == optimal_score(x, y, s));
    CHECK(q == optimal_score(x, y, t));
  }
  CHECK_THROWS_AS(optimal_score_pair({}, {}, s, builtin_identity(1)), AlphabetMismatch);
}

TEST_CASE("Q counts of the two-letter example") {
  const Alphabet ab("ab");
  const std::string x = "babbababbba", y = "bbbbabbbabb";
  const Alignment pi{{1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 5}, {6, 6}, {7, 7}, {8, 8}, {9, 10}, {10, 11}};
  const QMatrix q = pair_counts(x, y, pi, ab);
  const Code a = 0, b = 1, g = ab.gap_code();
  CHECK(q(b, b) == 7);
  CHECK(q(a, b) == 2);
  CHECK(q(a, a) == 1);
  CHECK(q(g, a) == 1);
  CHECK(q(a, g) == 1);
  CHECK(q.total() == 12);
  const ScoringMatrix s = ScoringMatrix::from_letter_block(ab, {{5, -2}, {-2, 3}}, 4);
  CHECK(alignment_score(x, y, pi, s) == q.contract(s));
  CHECK(alignment_score(x, y, pi, s) == 7 * 3 + 2 * -2 + 5 - 8);
}

TEST_CASE("empty and identity alignments") {
  const ScoringMatrix s = builtin_blastz(1200);
  const std::string x = "GATTACA", y = "CAT";
  CHECK(alignment_score(x, y, {}, s) == -1200.0 * 10);
  const QMatrix q = pair_counts(x, y, {}, s.alphabet());
  const Code gap = s.alphabet().gap_code();
  CHECK(q(s.alphabet().code_of('A'), gap) == 3);
  CHECK(q(gap, s.alphabet().code_of('C')) == 1);
  Alignment id;
  for (std::size_t i = 1; i <= x.size(); ++i) id.push_back({i, i});
  double diag = 0;
  for (char c : x) diag += s.at(c, c);
  CHECK(alignment_score(x, x, id, s) == diag);
}

TEST_CASE("alignment validation") {
  CHECK_THROWS_AS(validate_alignment({{0, 1}}, 3, 3), InvalidAlignment);
  CHECK_THROWS_AS(validate_alignment({{1, 1}, {1, 2}}, 3, 3), InvalidAlignment);
  CHECK_THROWS_AS(validate_alignment({{2, 2}, {1, 3}}, 3, 3), InvalidAlignment);
  CHECK_THROWS_AS(validate_alignment({{4, 1}}, 3, 3), InvalidAlignment);
  CHECK_NOTHROW(validate_alignment({{1, 2}, {3, 3}}, 3, 3));
  CHECK_THROWS_AS(alignment_score("01", "01", {{3, 1}}, builtin_identity(6)), InvalidAlignment);
}

TEST_CASE("Q identity and linearity for every alignment of random short pairs") {
  RandomStream rng(404);
  const ScoringMatrix s = builtin_blastz(1200);
  const ScoringMatrix t = ScoringMatrix::match_mismatch(Alphabet::dna(), 3, -1, 0.5);
  const ScoringMatrix smt = linear_combine(s, 0.5, t);
  for (int trial = 0; trial < 40; ++trial) {
    const std::string x = random_text(rng, "ATCG", 4);
    const std::string y = random_text(rng, "ATCG", 4);
    Alignment cur;
    std::vector<Alignment> all;
    all_alignments(x.size(), y.size(), cur, all);
    for (const auto& pi : all) {
      const QMatrix q = pair_counts(x, y, pi, s.alphabet());
      REQUIRE(alignment_score(x, y, pi, s) == q.contract(s));
      REQUIRE(alignment_score(x, y, pi, smt) ==
              alignment_score(x, y, pi, s) - 0.5 * alignment_score(x, y, pi, t));
      for (Code c = 0; c < 4; ++c) {
        std::uint64_t row = 0, col = 0;
        for (Code d = 0; d < 5; ++d) {
          row += q(c, d);
          col += q(d, c);
        }
        REQUIRE(row == static_cast<std::uint64_t>(std::count(x.begin(), x.end(), s.alphabet().symbol_of(c))));
        REQUIRE(col == static_cast<std::uint64_t>(std::count(y.begin(), y.end(), s.alphabet().symbol_of(c))));
      }
    }
  }
}

TEST_CASE("traceback is an optimality witness") {
  RandomStream rng(505);
  for (const auto& s : {builtin_blastz(1200), dna_unit()}) {
    for (int trial = 0; trial < 100; ++trial) {
      const std::string x = random_text(rng, "ATCG", 60);
      const std::string y = random_text(rng, "ATCG", 60);
      const AlignmentResult r = optimal_alignment(x, y, s);
      CHECK_NOTHROW(validate_alignment(r.alignment, x.size(), y.size()));
      CHECK(r.score == optimal_score(x, y, s));
      CHECK(alignment_score(x, y, r.alignment, s) == r.score);
    }
  }
  CHECK_THROWS_AS(optimal_alignment("ATCG", "A", dna_unit(), 3), SizeCapExceeded);
}

TEST_CASE("score is symmetric in its arguments") {
  RandomStream rng(606);
  for (int trial = 0; trial < 100; ++trial) {
    const std::string x = random_text(rng, "ATCG", 50);
    const std::string y = random_text(rng, "ATCG", 50);
    CHECK(optimal_score(x, y, builtin_blastz(300)) == optimal_score(y, x, builtin_blastz(300)));
  }
}

TEST_CASE("single replacement moves the score by at most the delta norm") {
  RandomStream rng(707);
  for (const auto& s : {builtin_identity(6), builtin_blastz(1200), dna_unit()}) {
    const std::string letters = s.alphabet().letters();
    const double nd = norm_delta(s);
    for (int trial = 0; trial < 150; ++trial) {
      std::string x = random_text(rng, letters, 25);
      const std::string y = random_text(rng, letters, 25);
      const double base = optimal_score(x, y, s);
      for (std::size_t i = 0; i < x.size(); ++i) {
        const char keep = x[i];
        for (char c : letters) {
          x[i] = c;
          REQUIRE(std::abs(optimal_score(x, y, s) - base) <= nd);
        }
        x[i] = keep;
      }
    }
  }
}

TEST_CASE("appending a letter can move the score past the largest entry") {
  // Against a gapped y-letter the new column gains S(c,d) - S(gap,d).
  const ScoringMatrix id = builtin_identity(6);
  CHECK(optimal_score("", "1", id) == -6);
  CHECK(optimal_score("1", "1", id) == 1);
  CHECK(std::abs(optimal_score("1", "1", id) - optimal_score("", "1", id)) > norm_inf(id));

  RandomStream rng(808);
  for (const auto& s : {id, builtin_blastz(1200), dna_unit()}) {
    const std::string letters = s.alphabet().letters();
    const double bound = std::max(norm_delta(s), norm_inf(s));
    for (int trial = 0; trial < 300; ++trial) {
      const std::string x = random_text(rng, letters, 25);
      const std::string y = random_text(rng, letters, 25);
      const double base = optimal_score(x, y, s);
      for (char c : letters) REQUIRE(std::abs(optimal_score(x + c, y, s) - base) <= bound);
    }
  }
}

TEST_CASE("concatenation is superadditive") {
  RandomStream rng(909);
  for (const auto& s : {builtin_identity(6), builtin_blastz(1200)}) {
    const std::string letters = s.alphabet().letters();
    for (int trial = 0; trial < 300; ++trial) {
      const std::string x1 = random_text(rng, letters, 20), x2 = random_text(rng, letters, 20);
      const std::string y1 = random_text(rng, letters, 20), y2 = random_text(rng, letters, 20);
      REQUIRE(optimal_score(x1 + x2, y1 + y2, s) >= optimal_score(x1, y1, s) + optimal_score(x2, y2, s));
    }
  }
}

TEST_CASE("alignment TSV round trip") {
  const Alignment pi{{1, 2}, {3, 3}, {7, 10}};
  const std::string text = format_alignment_tsv(pi);
  CHECK(text == "1\t2\n3\t3\n7\t10\n");
  CHECK(parse_alignment_tsv(text) == pi);
  CHECK_THROWS_AS(parse_alignment_tsv("1 x\n"), InvalidAlignment);
}
