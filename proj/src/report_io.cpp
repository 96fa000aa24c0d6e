#include "alignfluct/report_io.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "alignfluct/error.hpp"

namespace alignfluct {
namespace {

using Json = nlohmann::ordered_json;

Json echo_json(const ConfigEcho& e) {
  return Json{{"letters", e.letters},
              {"probs", e.probs},
              {"scoring", e.scoring},
              {"change_kind", e.change_kind},
              {"change_from", e.change_from},
              {"change_to", e.change_to},
              {"multiplicity", e.multiplicity},
              {"eps", e.eps},
              {"n", e.n},
              {"replicates", e.replicates},
              {"master_seed", e.master_seed}};
}

ConfigEcho echo_from(const Json& j) {
  ConfigEcho e;
  j.at("letters").get_to(e.letters);
  j.at("probs").get_to(e.probs);
  j.at("scoring").get_to(e.scoring);
  j.at("change_kind").get_to(e.change_kind);
  j.at("change_from").get_to(e.change_from);
  j.at("change_to").get_to(e.change_to);
  j.at("multiplicity").get_to(e.multiplicity);
  j.at("eps").get_to(e.eps);
  j.at("n").get_to(e.n);
  j.at("replicates").get_to(e.replicates);
  j.at("master_seed").get_to(e.master_seed);
  return e;
}

Json summary_json(const Summary& s) {
  return Json{{"mean", s.mean}, {"std_dev", s.std_dev}, {"min", s.min}, {"max", s.max}};
}

Summary summary_from(const Json& j) {
  Summary s;
  j.at("mean").get_to(s.mean);
  j.at("std_dev").get_to(s.std_dev);
  j.at("min").get_to(s.min);
  j.at("max").get_to(s.max);
  return s;
}

double wall_from(const Json& j) { return j.contains("wall_ms") ? j["wall_ms"].get<double>() : 0.0; }

Json parse(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(std::string("malformed report JSON: ") + e.what());
  }
}

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw Error(std::string("report JSON is missing or mistyping a field: ") + e.what());
  }
}

class CsvPrecision {
 public:
  explicit CsvPrecision(std::ostream& out) : out_(out), old_(out.precision(17)) {}
  ~CsvPrecision() { out_.precision(old_); }

 private:
  std::ostream& out_;
  std::streamsize old_;
};

}  // namespace

std::string to_json_text(const EstimateReport& report, const JsonOptions& opts) {
  Json reps = Json::array();
  for (const auto& r : report.replicates) {
    Json row{{"replicate", r.replicate},
             {"seed", r.seed},
             {"L_S", r.score_s},
             {"L_SmT", r.score_smt},
             {"x", r.x},
             {"occurrences", r.occurrences}};
    if (r.t_score) row["T_pi"] = *r.t_score;
    if (opts.include_timings) row["wall_ms"] = r.wall_ms;
    reps.push_back(std::move(row));
  }
  Json j{{"report", "estimate"},
         {"config", echo_json(report.config)},
         {"x_values", report.x_values()},
         {"summary", summary_json(report.x)},
         {"replicates", std::move(reps)}};
  if (report.events) {
    const auto& ev = *report.events;
    Json flags = Json::array();
    for (const auto& f : ev.replicates) flags.push_back(Json{{"A", f.a}, {"B", f.b}, {"C", f.c}});
    j["events"] = Json{{"freq_A", ev.freq_a},
                       {"freq_B", ev.freq_b},
                       {"freq_C", ev.freq_c},
                       {"freq_all", ev.freq_all},
                       {"replicates", std::move(flags)}};
  }
  return j.dump(opts.indent) + "\n";
}

EstimateReport estimate_report_from_json(std::string_view text) {
  const Json j = parse(text);
  return guarded([&] {
    EstimateReport r;
    r.config = echo_from(j.at("config"));
    r.x = summary_from(j.at("summary"));
    for (const auto& row : j.at("replicates")) {
      ReplicateRecord rec;
      row.at("replicate").get_to(rec.replicate);
      row.at("seed").get_to(rec.seed);
      row.at("L_S").get_to(rec.score_s);
      row.at("L_SmT").get_to(rec.score_smt);
      row.at("x").get_to(rec.x);
      row.at("occurrences").get_to(rec.occurrences);
      if (row.contains("T_pi")) rec.t_score = row["T_pi"].get<double>();
      rec.wall_ms = wall_from(row);
      r.replicates.push_back(rec);
    }
    if (j.contains("events")) {
      const auto& ev = j["events"];
      EventsReport e;
      ev.at("freq_A").get_to(e.freq_a);
      ev.at("freq_B").get_to(e.freq_b);
      ev.at("freq_C").get_to(e.freq_c);
      ev.at("freq_all").get_to(e.freq_all);
      for (const auto& f : ev.at("replicates")) {
        e.replicates.push_back({f.at("A").get<bool>(), f.at("B").get<bool>(), f.at("C").get<bool>()});
      }
      r.events = std::move(e);
    }
    return r;
  });
}

std::string to_json_text(const PValueReport& r, const JsonOptions& opts) {
  Json j{{"report", "pvalue"},
         {"x", r.x},
         {"n", r.n},
         {"eps", r.eps},
         {"c_n", r.c_n},
         {"norm_delta_S", r.norm_s},
         {"norm_delta_SmT", r.norm_smt},
         {"norm_sum", r.norm_sum},
         {"margin", r.margin},
         {"delta", r.delta},
         {"bound", r.bound},
         {"inconclusive", r.inconclusive},
         {"verdict", r.inconclusive ? "INCONCLUSIVE" : "BOUNDED"}};
  if (r.reference_pvalue) {
    j["reference_pvalue"] = *r.reference_pvalue;
    j["log10_bound_over_reference"] = std::log10(r.bound / *r.reference_pvalue);
  }
  return j.dump(opts.indent) + "\n";
}

PValueReport pvalue_report_from_json(std::string_view text) {
  const Json j = parse(text);
  return guarded([&] {
    PValueReport r;
    j.at("x").get_to(r.x);
    j.at("n").get_to(r.n);
    j.at("eps").get_to(r.eps);
    j.at("c_n").get_to(r.c_n);
    j.at("norm_delta_S").get_to(r.norm_s);
    j.at("norm_delta_SmT").get_to(r.norm_smt);
    j.at("norm_sum").get_to(r.norm_sum);
    j.at("margin").get_to(r.margin);
    j.at("delta").get_to(r.delta);
    j.at("bound").get_to(r.bound);
    j.at("inconclusive").get_to(r.inconclusive);
    if (j.contains("reference_pvalue")) r.reference_pvalue = j["reference_pvalue"].get<double>();
    return r;
  });
}

std::string to_json_text(const ExpectedChangeReport& report, const JsonOptions& opts) {
  Json reps = Json::array();
  for (const auto& r : report.replicates) {
    Json row{{"replicate", r.replicate},
             {"seed", r.seed},
             {"expected_change", r.expected_change},
             {"lower_bound", r.lower_bound},
             {"x", r.x},
             {"chain_bound", r.chain_bound},
             {"occurrences", r.occurrences}};
    if (opts.include_timings) row["wall_ms"] = r.wall_ms;
    reps.push_back(std::move(row));
  }
  Json j{{"report", "expected-change"},
         {"config", echo_json(report.config)},
         {"expected_change", summary_json(report.expected_change)},
         {"x", summary_json(report.x)},
         {"density", report.density},
         {"theorem_target", report.theorem_target},
         {"replicates", std::move(reps)}};
  return j.dump(opts.indent) + "\n";
}

ExpectedChangeReport expected_change_report_from_json(std::string_view text) {
  const Json j = parse(text);
  return guarded([&] {
    ExpectedChangeReport r;
    r.config = echo_from(j.at("config"));
    r.expected_change = summary_from(j.at("expected_change"));
    r.x = summary_from(j.at("x"));
    j.at("density").get_to(r.density);
    j.at("theorem_target").get_to(r.theorem_target);
    for (const auto& row : j.at("replicates")) {
      ExpectedChangeRecord rec;
      row.at("replicate").get_to(rec.replicate);
      row.at("seed").get_to(rec.seed);
      row.at("expected_change").get_to(rec.expected_change);
      row.at("lower_bound").get_to(rec.lower_bound);
      row.at("x").get_to(rec.x);
      row.at("chain_bound").get_to(rec.chain_bound);
      row.at("occurrences").get_to(rec.occurrences);
      rec.wall_ms = wall_from(row);
      r.replicates.push_back(rec);
    }
    return r;
  });
}

std::string to_json_text(const VarianceScanReport& report, const JsonOptions& opts) {
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    rows.push_back(Json{{"n", r.n},
                        {"replicates", r.replicates},
                        {"mean", r.mean},
                        {"variance", r.variance},
                        {"variance_over_n", r.variance_over_n}});
  }
  Json j{{"report", "varscan"},
         {"config", echo_json(report.config)},
         {"rows", std::move(rows)},
         {"warnings", report.warnings}};
  return j.dump(opts.indent) + "\n";
}

VarianceScanReport variance_report_from_json(std::string_view text) {
  const Json j = parse(text);
  return guarded([&] {
    VarianceScanReport r;
    r.config = echo_from(j.at("config"));
    j.at("warnings").get_to(r.warnings);
    for (const auto& row : j.at("rows")) {
      VarianceRow v;
      row.at("n").get_to(v.n);
      row.at("replicates").get_to(v.replicates);
      row.at("mean").get_to(v.mean);
      row.at("variance").get_to(v.variance);
      row.at("variance_over_n").get_to(v.variance_over_n);
      r.rows.push_back(v);
    }
    return r;
  });
}

void write_csv(std::ostream& out, const EstimateReport& report) {
  CsvPrecision guard(out);
  out << "replicate,seed,L_S,L_SmT,x_r,wall_ms\n";
  for (const auto& r : report.replicates) {
    out << r.replicate << ',' << r.seed << ',' << r.score_s << ',' << r.score_smt << ','
        << r.x << ',' << r.wall_ms << '\n';
  }
}

void write_csv(std::ostream& out, const PValueReport& r) {
  CsvPrecision guard(out);
  out << "x,n,eps,c_n,norm_delta_S,norm_delta_SmT,norm_sum,margin,delta,bound,verdict,"
         "reference_pvalue\n";
  out << r.x << ',' << r.n << ',' << r.eps << ',' << r.c_n << ',' << r.norm_s << ','
      << r.norm_smt << ',' << r.norm_sum << ',' << r.margin << ',' << r.delta << ',' << r.bound
      << ',' << (r.inconclusive ? "INCONCLUSIVE" : "BOUNDED") << ',';
  if (r.reference_pvalue) out << *r.reference_pvalue;
  out << '\n';
}

void write_csv(std::ostream& out, const ExpectedChangeReport& report) {
  CsvPrecision guard(out);
  out << "replicate,seed,expected_change,lower_bound,x_r,chain_bound,occurrences,wall_ms\n";
  for (const auto& r : report.replicates) {
    out << r.replicate << ',' << r.seed << ',' << r.expected_change << ',' << r.lower_bound
        << ',' << r.x << ',' << r.chain_bound << ',' << r.occurrences << ',' << r.wall_ms << '\n';
  }
}

void write_csv(std::ostream& out, const VarianceScanReport& report) {
  CsvPrecision guard(out);
  out << "n,replicates,mean,variance,variance_over_n\n";
  for (const auto& r : report.rows) {
    out << r.n << ',' << r.replicates << ',' << r.mean << ',' << r.variance << ','
        << r.variance_over_n << '\n';
  }
}

EstimateReport estimate_report_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "replicate,seed,L_S,L_SmT,x_r,wall_ms") {
    throw Error("estimate CSV has an unexpected header");
  }
  EstimateReport report;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    ReplicateRecord r;
    char c1, c2, c3, c4, c5;
    if (!(fields >> r.replicate >> c1 >> r.seed >> c2 >> r.score_s >> c3 >> r.score_smt >> c4 >>
          r.x >> c5 >> r.wall_ms)) {
      throw Error("bad estimate CSV row: " + line);
    }
    report.replicates.push_back(r);
  }
  report.x = summarize(report.x_values());
  return report;
}

}  // namespace alignfluct
