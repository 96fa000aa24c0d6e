#include "alignfluct/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "alignfluct/alignment.hpp"
#include "alignfluct/montecarlo.hpp"
#include "alignfluct/perturbation.hpp"
#include "alignfluct/random.hpp"
#include "alignfluct/scoring.hpp"

namespace alignfluct {
namespace {

constexpr std::uint64_t kSeed = 0x5E1F7E57ULL;

struct Check {
  std::size_t count = 0;
  std::string failure;

  bool expect(bool ok, const std::function<std::string()>& describe) {
    ++count;
    if (!ok && failure.empty()) failure = describe();
    return ok;
  }
};

Sequence random_sequence(RandomStream& rng, std::size_t alphabet_size, std::size_t max_len) {
  Sequence s(rng.below(max_len + 1));
  for (auto& c : s) c = static_cast<Code>(rng.below(alphabet_size));
  return s;
}

Sequence sequence_from_bits(unsigned bits, std::size_t len) {
  Sequence s(len);
  for (std::size_t i = 0; i < len; ++i) s[i] = static_cast<Code>((bits >> i) & 1U);
  return s;
}

std::string show(const Alphabet& a, const Sequence& x, const Sequence& y) {
  return "x=\"" + a.decode(x) + "\" y=\"" + a.decode(y) + "\"";
}

std::vector<ScoringMatrix> binary_matrices() {
  const Alphabet bin = Alphabet::binary();
  return {builtin_identity(6.0), ScoringMatrix::match_mismatch(bin, 1, -1, 1),
          ScoringMatrix::from_letter_block(bin, {{3, -2}, {-2, 0.5}}, 1.5)};
}

Check dp_vs_brute_binary() {
  Check ck;
  for (const auto& s : binary_matrices()) {
    for (std::size_t lx = 0; lx <= 4; ++lx) {
      for (std::size_t ly = 0; ly <= 4; ++ly) {
        for (unsigned bx = 0; bx < (1U << lx); ++bx) {
          for (unsigned by = 0; by < (1U << ly); ++by) {
            const auto x = sequence_from_bits(bx, lx);
            const auto y = sequence_from_bits(by, ly);
            const double dp = optimal_score(x, y, s);
            const double bf = brute_force_score(x, y, s);
            ck.expect(dp == bf, [&] {
              std::ostringstream m;
              m << show(s.alphabet(), x, y) << ": DP " << dp << " vs enumeration " << bf;
              return m.str();
            });
          }
        }
      }
    }
  }
  return ck;
}

Check dp_vs_brute_dna() {
  Check ck;
  RandomStream rng(kSeed);
  const auto s = builtin_blastz(400);
  for (int trial = 0; trial < 500; ++trial) {
    const auto x = random_sequence(rng, 4, 6);
    const auto y = random_sequence(rng, 4, 6);
    const double dp = optimal_score(x, y, s);
    const double bf = brute_force_score(x, y, s);
    ck.expect(dp == bf, [&] { return show(s.alphabet(), x, y) + ": DP differs from enumeration"; });
  }
  return ck;
}

Check t_blastz(const SelfTestOptions& opts) {
  Check ck;
  ScoringMatrix s = builtin_blastz(1200);
  if (opts.inject_fault == "blastz") {
    auto entries = s.entries();
    entries[0] = 90.0;  // S(A,A)
    s = ScoringMatrix(s.alphabet(), entries);
  }
  const auto t = build_group_change_T(s, "CG", "AT");
  // Rows/columns A, T, C, G.
  const double expected[4][4] = {{0, 0, 144, 153},
                                 {0, 0, 159.5, 148.5},
                                 {144, 159.5, -439, -176},
                                 {153, 148.5, -176, -419}};
  for (Code c = 0; c < 4; ++c) {
    for (Code d = 0; d < 4; ++d) {
      ck.expect(t(c, d) == expected[c][d], [&] {
        std::ostringstream m;
        m << "entry (" << s.alphabet().symbol_of(c) << ',' << s.alphabet().symbol_of(d) << ") is "
          << t(c, d) << ", expected " << expected[c][d];
        return m.str();
      });
    }
    ck.expect(t(c, 4) == 0.0, [] { return std::string("gap column of T_BLASTZ is not zero"); });
  }
  return ck;
}

Check t_2() {
  Check ck;
  const auto t = build_single_letter_T(builtin_identity(6.0), '0', '1', 2);
  const double expected[3][3] = {{-4, 2, 0}, {2, 0, 0}, {0, 0, 0}};
  for (Code c = 0; c < 3; ++c) {
    for (Code d = 0; d < 3; ++d) {
      ck.expect(t(c, d) == expected[c][d], [&] {
        std::ostringstream m;
        m << "T_2 entry (" << int(c) << ',' << int(d) << ") is " << t(c, d);
        return m.str();
      });
    }
  }
  return ck;
}

// Q-identity, linearity in S, and optimality of the traceback alignment.
Check q_identity_and_linearity() {
  Check ck;
  RandomStream rng(kSeed + 1);
  const auto s = builtin_identity(6.0);
  const auto t = build_single_letter_T(s, '0', '1', 2);
  const auto smt = linear_combine(s, 0.5, t);
  for (int trial = 0; trial < 300; ++trial) {
    const auto x = random_sequence(rng, 2, 40);
    const auto y = random_sequence(rng, 2, 40);
    const auto best = optimal_alignment(x, y, s);
    const double direct = alignment_score(x, y, best.alignment, s);
    ck.expect(direct == best.q_counts.contract(s),
              [&] { return show(s.alphabet(), x, y) + ": score differs from sum Q*S"; });
    ck.expect(direct == best.score,
              [&] { return show(s.alphabet(), x, y) + ": traceback alignment is not optimal"; });
    ck.expect(best.score == optimal_score(x, y, s),
              [&] { return show(s.alphabet(), x, y) + ": traceback score differs from score DP"; });
    ck.expect(alignment_score(x, y, best.alignment, smt) ==
                  direct - 0.5 * alignment_score(x, y, best.alignment, t),
              [&] { return show(s.alphabet(), x, y) + ": alignment score is not linear in S"; });
  }
  return ck;
}

// For a fixed alignment, the mean effect of every equally likely letter
// change equals T_pi / N.
Check expected_change_identity() {
  Check ck;
  RandomStream rng(kSeed + 2);
  struct Case {
    ScoringMatrix s;
    PerturbationSpec spec;
  };
  const std::vector<Case> cases{{builtin_identity(6.0), PerturbationSpec::single('0', '1')},
                                {builtin_blastz(1200), PerturbationSpec::group("CG", "AT")},
                                {builtin_blastz(400), PerturbationSpec::single('A', 'G')}};
  for (const auto& [s, spec] : cases) {
    const auto t = build_change_T(s, spec);
    const std::size_t k = s.alphabet().size();
    for (int trial = 0; trial < 100; ++trial) {
      const auto x = random_sequence(rng, k, 30);
      const auto y = random_sequence(rng, k, 30);
      const std::size_t n_occ = count_occurrences(x, y, spec, s.alphabet());
      if (n_occ == 0) continue;
      // Random alignment: keep each traceback pair with probability 1/2.
      Alignment pi;
      for (const auto& p : optimal_alignment(x, y, s).alignment) {
        if (rng.below(2)) pi.push_back(p);
      }
      const double base = alignment_score(x, y, pi, s);
      double total = 0.0;
      for (int side = 0; side < 2; ++side) {
        Sequence xs = x, ys = y;
        Sequence& work = side == 0 ? xs : ys;
        for (std::size_t i = 0; i < work.size(); ++i) {
          const char letter = s.alphabet().symbol_of(work[i]);
          if (spec.from_letters.find(letter) == std::string::npos) continue;
          const Code original = work[i];
          for (char to : spec.to_letters) {
            work[i] = *s.alphabet().find(to);
            total += alignment_score(xs, ys, pi, s) - base;
          }
          work[i] = original;
        }
      }
      const double t_pi = alignment_score(x, y, pi, t);
      const double targets = static_cast<double>(spec.to_letters.size());
      ck.expect(total == targets * t_pi, [&] {
        std::ostringstream m;
        m << show(s.alphabet(), x, y) << ": summed change " << total << " vs " << targets
          << " * T_pi = " << targets * t_pi;
        return m.str();
      });
    }
  }
  return ck;
}

// E[L~ - L] >= T_pi / N and eps T_pi >= L(S) - L(S - eps T).
Check inequality_chain() {
  Check ck;
  RandomStream rng(kSeed + 3);
  const auto s = builtin_identity(6.0);
  const auto spec = PerturbationSpec::single('0', '1', 2);
  const auto t = build_change_T(s, spec);
  const double eps = 0.5;
  const auto smt = linear_combine(s, eps, t);
  const LetterDistribution dist(Alphabet::binary(), {0.2, 0.8});
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = sample_string(dist, 40, rng);
    const auto y = sample_string(dist, 40, rng);
    if (count_occurrences(x, y, spec, s.alphabet()) == 0) continue;
    const auto change = exact_expected_change(x, y, spec, s);
    const auto bound = t_lower_bound(x, y, t, s, spec);
    ck.expect(change.total_change * bound.multiplicity >=
                  static_cast<double>(change.targets) * bound.t_score,
              [&] { return show(s.alphabet(), x, y) + ": expected change below T_pi / N"; });
    const double gap = optimal_score(x, y, s) - optimal_score(x, y, smt);
    ck.expect(eps * bound.t_score >= gap,
              [&] { return show(s.alphabet(), x, y) + ": eps T_pi below L(S) - L(S - eps T)"; });
  }
  return ck;
}

Check change_bounds() {
  Check ck;
  RandomStream rng(kSeed + 4);
  for (const auto& s : {builtin_identity(6.0), builtin_blastz(1200)}) {
    const double nd = norm_delta(s);
    const double ni = norm_inf(s);
    const std::size_t k = s.alphabet().size();
    for (int trial = 0; trial < 100; ++trial) {
      auto x = random_sequence(rng, k, 20);
      const auto y = random_sequence(rng, k, 20);
      const double base = optimal_score(x, y, s);
      for (std::size_t i = 0; i < x.size(); ++i) {
        const Code original = x[i];
        for (Code c = 0; c < k; ++c) {
          x[i] = c;
          ck.expect(std::abs(optimal_score(x, y, s) - base) <= nd,
                    [&] { return show(s.alphabet(), x, y) + ": replacement moved score past ||S||_delta"; });
        }
        x[i] = original;
      }
      // Appending a letter can also un-gap a letter of y, so the change is
      // bounded by max(||S||_delta, ||S||_inf) rather than ||S||_inf alone.
      for (Code c = 0; c < k; ++c) {
        auto ext = x;
        ext.push_back(c);
        ck.expect(std::abs(optimal_score(ext, y, s) - base) <= std::max(nd, ni),
                  [&] { return show(s.alphabet(), ext, y) + ": extension moved score past max(||S||_delta, ||S||_inf)"; });
      }
    }
  }
  return ck;
}

Check superadditivity() {
  Check ck;
  RandomStream rng(kSeed + 5);
  for (const auto& s : {builtin_identity(6.0), builtin_blastz(400)}) {
    const std::size_t k = s.alphabet().size();
    for (int trial = 0; trial < 200; ++trial) {
      const auto x1 = random_sequence(rng, k, 15);
      const auto x2 = random_sequence(rng, k, 15);
      const auto y1 = random_sequence(rng, k, 15);
      const auto y2 = random_sequence(rng, k, 15);
      Sequence x = x1, y = y1;
      x.insert(x.end(), x2.begin(), x2.end());
      y.insert(y.end(), y2.begin(), y2.end());
      ck.expect(optimal_score(x, y, s) >= optimal_score(x1, y1, s) + optimal_score(x2, y2, s),
                [&] { return show(s.alphabet(), x, y) + ": concatenation lost score"; });
    }
  }
  return ck;
}

Check c_n_values() {
  Check ck;
  ck.expect(std::abs(c_n_constant(1e5) - 1.4802) <= 1e-4,
            [] { return "c_n(1e5) = " + std::to_string(c_n_constant(1e5)); });
  // The approach to sqrt 2 is only logarithmic: c_n^2 - 2 ~ 2 ln 3 / ln n.
  double prev = c_n_constant(2.0);
  for (double n = 10.0; n <= 1e300; n *= 1e10) {
    const double c = c_n_constant(n);
    ck.expect(c < prev && c > std::sqrt(2.0),
              [n, c] { return "c_n not decreasing towards sqrt 2 at n = " + std::to_string(n) + ": " + std::to_string(c); });
    ck.expect(std::abs(c * c - 2.0 - (2.0 * std::log(3.0) + 2.0 * std::log1p(2.0 / n)) / std::log(n)) <= 1e-12,
              [n] { return "c_n^2 - 2 mismatch at n = " + std::to_string(n); });
    prev = c;
  }
  return ck;
}

Check bounded_differences(unsigned workers) {
  Check ck;
  const auto s = builtin_identity(6.0);
  ExperimentConfig cfg{LetterDistribution(Alphabet::binary(), {0.2, 0.8}), s,
                       PerturbationSpec::single('0', '1', 2)};
  cfg.eps = 0.5;
  cfg.n = 100;
  cfg.master_seed = kSeed;
  cfg.workers = workers;
  const auto report = mcdiarmid_check(cfg, 300, {0.05, 0.1, 0.2});
  ck.expect(report.violations == 0, [&] {
    return "largest single-letter change " + std::to_string(report.max_observed_change) +
           " exceeds ||S||_delta";
  });
  for (const auto& row : report.tails) {
    ck.expect(row.upper_frequency <= row.bound && row.lower_frequency <= row.bound,
              [&] { return "tail frequency above the bounded-differences bound"; });
  }
  return ck;
}

}  // namespace

bool SelfTestReport::all_passed() const { return first_failure() == nullptr; }

const PropertyResult* SelfTestReport::first_failure() const {
  for (const auto& r : results) {
    if (!r.passed) return &r;
  }
  return nullptr;
}

SelfTestReport run_selftest(const SelfTestOptions& opts) {
  const std::vector<std::pair<std::string, std::function<Check()>>> properties{
      {"DP vs enumeration (binary, exhaustive)", dp_vs_brute_binary},
      {"DP vs enumeration (random DNA)", dp_vs_brute_dna},
      {"T_BLASTZ reproduction", [&] { return t_blastz(opts); }},
      {"T_2 reproduction", t_2},
      {"Q identity, linearity, traceback optimality", q_identity_and_linearity},
      {"Expected-change identity", expected_change_identity},
      {"Inequality chain", inequality_chain},
      {"Single-letter change bounds", change_bounds},
      {"Superadditivity", superadditivity},
      {"c_n constant", c_n_values},
      {"Bounded differences", [&] { return bounded_differences(opts.workers); }},
  };
  SelfTestReport report;
  for (const auto& [name, run] : properties) {
    const auto start = std::chrono::steady_clock::now();
    PropertyResult r;
    r.name = name;
    try {
      Check ck = run();
      r.checks = ck.count;
      r.passed = ck.failure.empty();
      r.detail = ck.failure;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.results.push_back(std::move(r));
  }
  return report;
}

}  // namespace alignfluct
