#include "alignfluct/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "alignfluct/alignment.hpp"
#include "alignfluct/error.hpp"

namespace alignfluct {
namespace {

// Runs fn(i) for i in [0, count) on up to `workers` threads. Each index is
// handled exactly once; the first exception is rethrown after all joins.
template <class Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
  const unsigned threads = static_cast<unsigned>(
      std::max<std::size_t>(1, std::min<std::size_t>(workers == 0 ? 1 : workers, count)));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto body = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

std::vector<double> cumulative(const std::vector<double>& probs) {
  std::vector<double> cum(probs.size());
  std::partial_sum(probs.begin(), probs.end(), cum.begin());
  return cum;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!(distribution.alphabet() == scoring.alphabet())) {
    throw ConfigError("distribution and scoring matrix use different alphabets");
  }
  try {
    perturbation.validate(scoring.alphabet());
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw ConfigError("eps must be finite and non-negative");
  if (n < 1) throw ConfigError("n must be at least 1");
  if (replicates < 1) throw ConfigError("replicates must be at least 1");
  if (traceback && n > kDefaultTracebackCap) {
    throw ConfigError("traceback needs the full DP table; use n <= " +
                      std::to_string(kDefaultTracebackCap) + " or turn traceback off");
  }
}

ScoringMatrix ExperimentConfig::change_matrix() const {
  return build_change_T(scoring, perturbation);
}

ScoringMatrix ExperimentConfig::perturbed_scoring() const {
  return linear_combine(scoring, eps, change_matrix());
}

double ExperimentConfig::changeable_density() const {
  double p = 0.0;
  for (char ch : perturbation.from_letters) p += distribution.prob(ch);
  return 2.0 * p;
}

Sequence sample_string(const LetterDistribution& dist, std::size_t n, RandomStream& rng) {
  const auto cum = cumulative(dist.probs());
  const auto last = static_cast<Code>(cum.size() - 1);
  Sequence out(n);
  for (auto& c : out) {
    const double u = rng.uniform();
    Code k = 0;
    while (k < last && !(u < cum[k])) ++k;
    c = k;
  }
  return out;
}

std::string sample_text(const LetterDistribution& dist, std::size_t n, RandomStream& rng) {
  return dist.alphabet().decode(sample_string(dist, n, rng));
}

std::pair<Sequence, Sequence> sample_pair(const LetterDistribution& dist, std::size_t n,
                                          std::uint64_t seed) {
  RandomStream rng(seed);
  Sequence x = sample_string(dist, n, rng);
  Sequence y = sample_string(dist, n, rng);
  return {std::move(x), std::move(y)};
}

Summary summarize(const std::vector<double>& values) {
  Summary s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std_dev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.min = *lo;
  s.max = *hi;
  return s;
}

ConfigEcho echo_of(const ExperimentConfig& cfg) {
  ConfigEcho e;
  e.letters = cfg.alphabet().letters();
  e.probs = cfg.distribution.probs();
  e.scoring = cfg.scoring.entries();
  e.change_kind = to_string(cfg.perturbation.kind);
  e.change_from = cfg.perturbation.from_letters;
  e.change_to = cfg.perturbation.to_letters;
  e.multiplicity = cfg.perturbation.multiplicity;
  e.eps = cfg.eps;
  e.n = cfg.n;
  e.replicates = cfg.replicates;
  e.master_seed = cfg.master_seed;
  return e;
}

std::vector<double> EstimateReport::x_values() const {
  std::vector<double> out;
  out.reserve(replicates.size());
  for (const auto& r : replicates) out.push_back(r.x);
  return out;
}

EstimateReport run_statistic(const ExperimentConfig& cfg) {
  cfg.validate();
  const ScoringMatrix t = cfg.change_matrix();
  const ScoringMatrix smt = linear_combine(cfg.scoring, cfg.eps, t);
  EstimateReport report;
  report.config = echo_of(cfg);
  report.replicates.resize(cfg.replicates);
  const double n = static_cast<double>(cfg.n);
  parallel_for(cfg.replicates, cfg.workers, [&](std::size_t r) {
    const auto start = std::chrono::steady_clock::now();
    ReplicateRecord rec;
    rec.replicate = r;
    rec.seed = derive_seed(cfg.master_seed, r);
    const auto [x, y] = sample_pair(cfg.distribution, cfg.n, rec.seed);
    std::tie(rec.score_s, rec.score_smt) = optimal_score_pair(x, y, cfg.scoring, smt);
    rec.x = (rec.score_s - rec.score_smt) / n;
    rec.occurrences = count_occurrences(x, y, cfg.perturbation, cfg.alphabet());
    if (cfg.traceback) {
      const auto best = optimal_alignment(x, y, cfg.scoring);
      rec.t_score = alignment_score(x, y, best.alignment, t);
    }
    rec.wall_ms = elapsed_ms(start);
    report.replicates[r] = rec;
  });
  report.x = summarize(report.x_values());
  return report;
}

double c_n_constant(double n) {
  if (!(n >= 2.0)) throw std::domain_error("c_n needs n >= 2");
  return std::sqrt((2.0 * std::log(3.0) + 2.0 * std::log(n + 2.0)) / std::log(n));
}

double lambda_margin(double n, const ScoringMatrix& s) {
  return c_n_constant(n) * norm_delta(s) * std::sqrt(std::log(n) / n) + 2.0 * norm_inf(s) / n;
}

PValueReport pvalue_bound(double x, double n, const ScoringMatrix& s, double eps,
                          const ScoringMatrix& t) {
  if (!std::isfinite(x)) throw std::domain_error("statistic must be finite");
  PValueReport r;
  r.x = x;
  r.n = n;
  r.eps = eps;
  r.c_n = c_n_constant(n);
  r.norm_s = norm_delta(s);
  r.norm_smt = norm_delta(linear_combine(s, eps, t));
  r.norm_sum = r.norm_s + r.norm_smt;
  r.margin = r.c_n * r.norm_smt * std::sqrt(std::log(n)) / std::sqrt(n);
  r.delta = x - r.margin;
  r.inconclusive = !(r.delta > 0.0) || r.norm_sum == 0.0;
  r.bound = r.inconclusive ? 1.0 : std::exp(-n * r.delta * r.delta / (r.norm_sum * r.norm_sum));
  return r;
}

ExpectedChangeReport expected_change_mc(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.n > cfg.expected_change_cap) {
    throw SizeCapExceeded("expected-change runs are limited to n <= " +
                          std::to_string(cfg.expected_change_cap));
  }
  const ScoringMatrix t = cfg.change_matrix();
  const ScoringMatrix smt = linear_combine(cfg.scoring, cfg.eps, t);
  const double n = static_cast<double>(cfg.n);
  const double mult = cfg.perturbation.multiplicity;

  ExpectedChangeReport report;
  report.config = echo_of(cfg);
  report.replicates.resize(cfg.replicates);
  parallel_for(cfg.replicates, cfg.workers, [&](std::size_t r) {
    const auto start = std::chrono::steady_clock::now();
    ExpectedChangeRecord rec;
    rec.replicate = r;
    rec.seed = derive_seed(cfg.master_seed, r);
    const auto [x, y] = sample_pair(cfg.distribution, cfg.n, rec.seed);
    const auto change = exact_expected_change(x, y, cfg.perturbation, cfg.scoring,
                                              cfg.expected_change_cap);
    const auto bound = t_lower_bound(x, y, t, cfg.scoring, cfg.perturbation);
    const auto [ls, lsmt] = optimal_score_pair(x, y, cfg.scoring, smt);
    rec.expected_change = change.mean();
    rec.lower_bound = bound.value();
    rec.x = (ls - lsmt) / n;
    rec.occurrences = change.occurrences;
    rec.chain_bound = cfg.eps > 0.0
                          ? (ls - lsmt) / (cfg.eps * mult * static_cast<double>(rec.occurrences))
                          : 0.0;
    rec.wall_ms = elapsed_ms(start);
    report.replicates[r] = rec;
  });

  std::vector<double> changes, xs;
  for (const auto& rec : report.replicates) {
    changes.push_back(rec.expected_change);
    xs.push_back(rec.x);
  }
  report.expected_change = summarize(changes);
  report.x = summarize(xs);
  report.density = cfg.changeable_density();
  report.theorem_target =
      cfg.eps > 0.0 ? report.x.mean / (cfg.eps * mult * report.density) : 0.0;
  return report;
}

VarianceScanReport variance_scan(const ExperimentConfig& base,
                                 const std::vector<std::size_t>& lengths,
                                 std::size_t replicates) {
  VarianceScanReport report;
  report.config = echo_of(base);
  report.config.replicates = replicates;
  if (replicates < 30) {
    report.warnings.push_back("fewer than 30 replicates per length; variance estimates are noisy");
  }
  for (std::size_t li = 0; li < lengths.size(); ++li) {
    const std::size_t n = lengths[li];
    if (n < 1) throw ConfigError("variance scan lengths must be positive");
    if (replicates < 2) {
      report.warnings.push_back("n=" + std::to_string(n) +
                                ": variance needs at least two replicates; row omitted");
      continue;
    }
    const std::uint64_t length_seed = derive_seed(base.master_seed, n);
    std::vector<double> scores(replicates);
    parallel_for(replicates, base.workers, [&](std::size_t r) {
      const auto [x, y] = sample_pair(base.distribution, n, derive_seed(length_seed, r));
      scores[r] = optimal_score(x, y, base.scoring);
    });
    const Summary s = summarize(scores);
    VarianceRow row;
    row.n = n;
    row.replicates = replicates;
    row.mean = s.mean;
    row.variance = s.std_dev * s.std_dev;
    row.variance_over_n = row.variance / static_cast<double>(n);
    report.rows.push_back(row);
  }
  return report;
}

EventFlags evaluate_events(const ReplicateRecord& rec, std::size_t n, double density,
                           const EventReferences& refs) {
  const double nn = static_cast<double>(n);
  const double slack = std::log(nn) / std::sqrt(nn);
  EventFlags f;
  f.a = rec.score_s / nn >= refs.lambda_s - slack;
  f.b = rec.score_smt / nn <= refs.lambda_smt + slack;
  f.c = static_cast<double>(rec.occurrences) / nn <= density + refs.density_slack * slack;
  return f;
}

EventsReport evaluate_events(const EstimateReport& report, const ExperimentConfig& cfg,
                             const EventReferences& refs) {
  EventsReport out;
  const double density = cfg.changeable_density();
  std::size_t a = 0, b = 0, c = 0, all = 0;
  for (const auto& rec : report.replicates) {
    const auto f = evaluate_events(rec, cfg.n, density, refs);
    out.replicates.push_back(f);
    a += f.a;
    b += f.b;
    c += f.c;
    all += f.a && f.b && f.c;
  }
  const double total = std::max<std::size_t>(1, report.replicates.size());
  out.freq_a = a / total;
  out.freq_b = b / total;
  out.freq_c = c / total;
  out.freq_all = all / total;
  return out;
}

McDiarmidReport mcdiarmid_check(const ExperimentConfig& cfg, std::size_t trials,
                                const std::vector<double>& deviations) {
  cfg.validate();
  McDiarmidReport report;
  report.trials = trials;
  report.n = cfg.n;
  report.bounded_difference = norm_delta(cfg.scoring);

  std::vector<double> scores(trials), changes(trials);
  parallel_for(trials, cfg.workers, [&](std::size_t r) {
    RandomStream rng(derive_seed(cfg.master_seed, r));
    Sequence x = sample_string(cfg.distribution, cfg.n, rng);
    Sequence y = sample_string(cfg.distribution, cfg.n, rng);
    scores[r] = optimal_score(x, y, cfg.scoring);
    // Resample one of the 2n independent letters.
    const std::size_t pos = rng.below(2 * cfg.n);
    Sequence& target = pos < cfg.n ? x : y;
    const std::size_t i = pos < cfg.n ? pos : pos - cfg.n;
    RandomStream letter_rng(rng.next());
    target[i] = sample_string(cfg.distribution, 1, letter_rng)[0];
    changes[r] = std::abs(optimal_score(x, y, cfg.scoring) - scores[r]);
  });
  for (double c : changes) {
    report.max_observed_change = std::max(report.max_observed_change, c);
    report.violations += c > report.bounded_difference;
  }

  const double mean = summarize(scores).mean;
  const double m = 2.0 * static_cast<double>(cfg.n);
  const double c2 = report.bounded_difference * report.bounded_difference;
  for (double dev : deviations) {
    TailRow row;
    row.deviation = dev;
    std::size_t up = 0, down = 0;
    for (double s : scores) {
      up += s - mean >= dev * m;
      down += mean - s >= dev * m;
    }
    row.upper_frequency = static_cast<double>(up) / static_cast<double>(trials);
    row.lower_frequency = static_cast<double>(down) / static_cast<double>(trials);
    row.bound = c2 > 0.0 ? std::exp(-2.0 * dev * dev * m / c2) : 0.0;
    report.tails.push_back(row);
  }
  return report;
}

}  // namespace alignfluct
