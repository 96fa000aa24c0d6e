#include "alignfluct/perturbation.hpp"

#include <algorithm>
#include <stdexcept>

#include "alignfluct/error.hpp"

namespace alignfluct {
namespace {

std::vector<Code> codes_of(std::string_view letters, const Alphabet& alphabet) {
  std::vector<Code> out;
  for (char ch : letters) {
    auto c = alphabet.find(ch);
    if (!c) throw SymbolError(std::string("perturbation letter '") + ch + "' is not in the alphabet");
    out.push_back(*c);
  }
  return out;
}

bool has_duplicates(std::string_view s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.find(s[i], i + 1) != std::string_view::npos) return true;
  }
  return false;
}

std::vector<bool> membership(const std::vector<Code>& codes, std::size_t dim) {
  std::vector<bool> in(dim, false);
  for (Code c : codes) in[c] = true;
  return in;
}

}  // namespace

PerturbationSpec PerturbationSpec::single(char from, char to, int multiplicity) {
  return {ChangeKind::single, std::string(1, from), std::string(1, to), multiplicity};
}

PerturbationSpec PerturbationSpec::group(std::string from, std::string to) {
  return {ChangeKind::group, std::move(from), std::move(to), 1};
}

void PerturbationSpec::validate(const Alphabet& alphabet) const {
  if (from_letters.empty() || to_letters.empty()) {
    throw std::invalid_argument("perturbation needs non-empty from and to letter sets");
  }
  if (kind == ChangeKind::single && (from_letters.size() != 1 || to_letters.size() != 1)) {
    throw std::invalid_argument("a single-letter change takes exactly one from and one to letter");
  }
  if (multiplicity < 1) throw std::invalid_argument("perturbation multiplicity must be positive");
  if (has_duplicates(from_letters) || has_duplicates(to_letters)) {
    throw std::invalid_argument("perturbation letter sets must not repeat letters");
  }
  codes_of(from_letters, alphabet);
  codes_of(to_letters, alphabet);
  std::string a = from_letters, b = to_letters;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a == b) return;
  for (char ch : a) {
    if (b.find(ch) != std::string::npos) {
      throw std::invalid_argument("perturbation from and to sets must be disjoint or identical");
    }
  }
}

bool PerturbationSpec::trivial() const {
  std::string from = from_letters, to = to_letters;
  std::sort(from.begin(), from.end());
  std::sort(to.begin(), to.end());
  return from == to;
}

std::string to_string(ChangeKind kind) {
  return kind == ChangeKind::single ? "single" : "group";
}

ChangeKind parse_change_kind(std::string_view text) {
  if (text == "single") return ChangeKind::single;
  if (text == "group") return ChangeKind::group;
  throw std::invalid_argument("unknown perturbation kind '" + std::string(text) + "'");
}

ScoringMatrix build_single_letter_T(const ScoringMatrix& s, char from, char to, int multiplicity) {
  const Alphabet& alphabet = s.alphabet();
  const Code a = *codes_of(std::string_view(&from, 1), alphabet).begin();
  const Code b = *codes_of(std::string_view(&to, 1), alphabet).begin();
  const std::size_t d = s.dim();
  const double scale = multiplicity;
  std::vector<double> t(d * d, 0.0);
  for (std::size_t c = 0; c < d; ++c) {
    const auto cc = static_cast<Code>(c);
    if (cc == a) continue;
    const double v = scale * (s(b, cc) - s(a, cc));
    t[a * d + c] = v;
    t[c * d + a] = v;
  }
  t[a * d + a] = scale * 2.0 * (s(b, a) - s(a, a));
  return ScoringMatrix(alphabet, std::move(t));
}

ScoringMatrix build_group_change_T(const ScoringMatrix& s, std::string_view from_set,
                                   std::string_view to_set) {
  const Alphabet& alphabet = s.alphabet();
  if (from_set.empty() || to_set.empty()) {
    throw std::invalid_argument("group change needs non-empty letter sets");
  }
  const auto from = codes_of(from_set, alphabet);
  const auto to = codes_of(to_set, alphabet);
  const std::size_t d = s.dim();
  const auto in_from = membership(from, d);
  const double weight = 1.0 / static_cast<double>(to.size());

  // T_X(U,V): the x-letter U is the one that changes.
  auto t_x = [&](Code u, Code v) {
    if (!in_from[u]) return 0.0;
    double sum = 0.0;
    for (Code t : to) sum += weight * (s(t, v) - s(u, v));
    return sum;
  };
  std::vector<double> t(d * d, 0.0);
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t e = 0; e < d; ++e) {
      const auto cc = static_cast<Code>(c);
      const auto ee = static_cast<Code>(e);
      // T_Y(c,e) = T_X(e,c) by symmetry of S.
      t[c * d + e] = t_x(cc, ee) + t_x(ee, cc);
    }
  }
  return ScoringMatrix(alphabet, std::move(t));
}

ScoringMatrix build_change_T(const ScoringMatrix& s, const PerturbationSpec& spec) {
  spec.validate(s.alphabet());
  if (spec.trivial()) return ScoringMatrix::zero(s.alphabet());
  if (spec.kind == ChangeKind::single) {
    return build_single_letter_T(s, spec.from_letters[0], spec.to_letters[0], spec.multiplicity);
  }
  auto t = build_group_change_T(s, spec.from_letters, spec.to_letters);
  if (spec.multiplicity == 1) return t;
  return linear_combine(ScoringMatrix::zero(s.alphabet()), -spec.multiplicity, t);
}

std::size_t count_occurrences(const Sequence& x, const Sequence& y, const PerturbationSpec& spec,
                              const Alphabet& alphabet) {
  const auto in_from = membership(codes_of(spec.from_letters, alphabet), alphabet.size());
  std::size_t n = 0;
  for (Code c : x) n += in_from[c];
  for (Code c : y) n += in_from[c];
  return n;
}

ChangeOutcome apply_random_change(const Sequence& x, const Sequence& y,
                                  const PerturbationSpec& spec, const Alphabet& alphabet,
                                  RandomStream& rng) {
  spec.validate(alphabet);
  const auto in_from = membership(codes_of(spec.from_letters, alphabet), alphabet.size());
  const auto to = codes_of(spec.to_letters, alphabet);
  const std::size_t total = count_occurrences(x, y, spec, alphabet);
  if (total == 0) {
    throw NoOccurrence("no letter from \"" + spec.from_letters + "\" occurs in either string");
  }
  std::size_t pick = rng.below(total);
  const Code drawn = to[rng.below(to.size())];

  ChangeOutcome out{x, y, false, 0, 0, 0};
  auto change_in = [&](Sequence& seq) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
      if (!in_from[seq[i]]) continue;
      if (pick-- == 0) {
        out.position = i;
        out.old_letter = seq[i];
        out.new_letter = spec.trivial() ? seq[i] : drawn;
        seq[i] = out.new_letter;
        return true;
      }
    }
    return false;
  };
  out.changed_in_x = change_in(out.x_new);
  if (!out.changed_in_x) change_in(out.y_new);
  return out;
}

ExpectedChange exact_expected_change(const Sequence& x, const Sequence& y,
                                     const PerturbationSpec& spec, const ScoringMatrix& s,
                                     std::size_t size_cap) {
  const Alphabet& alphabet = s.alphabet();
  spec.validate(alphabet);
  if (x.size() > size_cap || y.size() > size_cap) {
    throw SizeCapExceeded("exact expected change is limited to strings of length " +
                          std::to_string(size_cap));
  }
  const auto in_from = membership(codes_of(spec.from_letters, alphabet), alphabet.size());
  const auto to = codes_of(spec.to_letters, alphabet);
  ExpectedChange result;
  result.targets = to.size();
  result.occurrences = count_occurrences(x, y, spec, alphabet);
  if (result.occurrences == 0) {
    throw NoOccurrence("no letter from \"" + spec.from_letters + "\" occurs in either string");
  }
  if (spec.trivial()) return result;
  const double base = optimal_score(x, y, s);
  Sequence x_work = x, y_work = y;
  auto sweep = [&](Sequence& work, bool is_x) {
    for (std::size_t i = 0; i < work.size(); ++i) {
      const Code original = work[i];
      if (!in_from[original]) continue;
      for (Code t : to) {
        if (t == original) continue;
        work[i] = t;
        const double changed = is_x ? optimal_score(work, y, s) : optimal_score(x, work, s);
        result.total_change += changed - base;
      }
      work[i] = original;
    }
  };
  sweep(x_work, true);
  sweep(y_work, false);
  return result;
}

ExpectedChange exact_expected_change(std::string_view x, std::string_view y,
                                     const PerturbationSpec& spec, const ScoringMatrix& s,
                                     std::size_t size_cap) {
  return exact_expected_change(s.alphabet().encode(x), s.alphabet().encode(y), spec, s, size_cap);
}

ChangeLowerBound t_lower_bound(const Sequence& x, const Sequence& y, const ScoringMatrix& t,
                               const ScoringMatrix& s, const PerturbationSpec& spec,
                               std::size_t traceback_cap) {
  spec.validate(s.alphabet());
  if (!(t.alphabet() == s.alphabet())) {
    throw AlphabetMismatch("T and S must share an alphabet");
  }
  ChangeLowerBound result;
  result.multiplicity = spec.multiplicity;
  result.occurrences = count_occurrences(x, y, spec, s.alphabet());
  if (result.occurrences == 0) {
    throw NoOccurrence("no letter from \"" + spec.from_letters + "\" occurs in either string");
  }
  const auto best = optimal_alignment(x, y, s, traceback_cap);
  result.t_score = alignment_score(x, y, best.alignment, t);
  return result;
}

ChangeLowerBound t_lower_bound(std::string_view x, std::string_view y, const ScoringMatrix& t,
                               const ScoringMatrix& s, const PerturbationSpec& spec,
                               std::size_t traceback_cap) {
  return t_lower_bound(s.alphabet().encode(x), s.alphabet().encode(y), t, s, spec, traceback_cap);
}

}  // namespace alignfluct
