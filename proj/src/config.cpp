#include "alignfluct/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "alignfluct/error.hpp"

namespace alignfluct {
namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"alphabet", {"letters", "gap"}},
      {"distribution", {"probs"}},
      {"scoring", {"builtin", "matrix_file", "match", "mismatch", "gap_penalty"}},
      {"perturbation", {"kind", "from", "to", "multiplicity"}},
      {"run", {"n", "replicates", "eps", "seed", "workers", "expected_change_cap", "traceback"}},
      {"pvalue", {"x", "n", "reference"}},
      {"varscan", {"lengths", "replicates"}},
      {"events", {"lambda_s", "lambda_smt", "density_slack"}},
  };
  return keys;
}

std::string trim(std::string s) {
  if (auto hash = s.find('#'); hash != std::string::npos) s.erase(hash);
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

class Sections {
 public:
  explicit Sections(const pt::ptree& tree) {
    for (const auto& [section, body] : tree) {
      auto known = known_keys().find(section);
      if (known == known_keys().end()) throw ConfigError("unknown config section [" + section + "]");
      for (const auto& [key, value] : body) {
        if (!known->second.count(key)) {
          throw ConfigError("unknown config key " + section + "." + key);
        }
        values_[section + "." + key] = trim(value.get_value<std::string>());
      }
    }
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  const std::string& text(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing config key " + key);
    return it->second;
  }

  template <class T>
  T number(const std::string& key) const {
    return parse_number<T>(key, text(key));
  }

  template <class T>
  T number_or(const std::string& key, T fallback) const {
    return has(key) ? number<T>(key) : fallback;
  }

  template <class T>
  std::vector<T> list(const std::string& key) const {
    std::istringstream in(text(key));
    std::vector<T> out;
    for (std::string tok; in >> tok;) out.push_back(parse_number<T>(key, tok));
    return out;
  }

  bool flag(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const auto& v = text(key);
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw ConfigError("config key " + key + " must be true or false, got '" + v + "'");
  }

 private:
  template <class T>
  static T parse_number(const std::string& key, const std::string& tok) {
    T value{};
    const char* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), end, value);
    if (ec != std::errc() || ptr != end || tok.empty()) {
      throw ConfigError("config key " + key + " has invalid value '" + tok + "'");
    }
    return value;
  }

  std::map<std::string, std::string> values_;
};

std::string letters_of(const std::string& text) {
  std::string out;
  for (char ch : text) {
    if (ch != ' ' && ch != '\t' && ch != ',') out += ch;
  }
  return out;
}

ScoringMatrix scoring_from(const Sections& cfg, const Alphabet& alphabet,
                           const std::filesystem::path& base_dir) {
  const bool has_builtin = cfg.has("scoring.builtin");
  const bool has_file = cfg.has("scoring.matrix_file");
  if (has_builtin == has_file) {
    throw ConfigError("set exactly one of scoring.builtin and scoring.matrix_file");
  }
  if (has_file) {
    if (cfg.has("scoring.gap_penalty") || cfg.has("scoring.match") || cfg.has("scoring.mismatch")) {
      throw ConfigError("scoring.matrix_file already fixes every score; drop match/mismatch/gap_penalty");
    }
    std::filesystem::path file = cfg.text("scoring.matrix_file");
    if (file.is_relative()) file = base_dir / file;
    if (!std::filesystem::exists(file)) {
      throw ConfigError("scoring.matrix_file: no such file " + file.string());
    }
    auto s = load_scoring_matrix(file, alphabet.gap());
    if (!(s.alphabet() == alphabet)) {
      throw ConfigError("scoring.matrix_file letters \"" + s.alphabet().letters() +
                        "\" differ from alphabet.letters \"" + alphabet.letters() + "\"");
    }
    return s;
  }

  const std::string& builtin = cfg.text("scoring.builtin");
  const double gap_penalty = cfg.number<double>("scoring.gap_penalty");
  if (builtin == "blastz") {
    if (cfg.has("scoring.match") || cfg.has("scoring.mismatch")) {
      throw ConfigError("scoring.builtin = blastz takes only gap_penalty");
    }
    auto s = builtin_blastz(gap_penalty);
    if (!(s.alphabet() == alphabet)) {
      throw ConfigError("scoring.builtin = blastz needs alphabet.letters = ATCG");
    }
    return s;
  }
  if (builtin == "identity" || builtin == "match_mismatch") {
    const double match = cfg.number_or<double>("scoring.match", 1.0);
    const double mismatch = cfg.number_or<double>("scoring.mismatch", 0.0);
    return ScoringMatrix::match_mismatch(alphabet, match, mismatch, gap_penalty);
  }
  throw ConfigError("scoring.builtin must be identity, match_mismatch or blastz, got '" + builtin + "'");
}

}  // namespace

RunSettings parse_run_settings(std::istream& in, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax error: ") + e.what());
  }
  const Sections cfg(tree);

  try {
    const std::string gap_text = cfg.has("alphabet.gap") ? cfg.text("alphabet.gap") : "-";
    if (gap_text.size() != 1) throw ConfigError("alphabet.gap must be one character");
    Alphabet alphabet(letters_of(cfg.text("alphabet.letters")), gap_text[0]);

    LetterDistribution dist(alphabet, cfg.list<double>("distribution.probs"));
    ScoringMatrix scoring = scoring_from(cfg, alphabet, base_dir);

    PerturbationSpec spec;
    spec.kind = parse_change_kind(cfg.text("perturbation.kind"));
    spec.from_letters = letters_of(cfg.text("perturbation.from"));
    spec.to_letters = letters_of(cfg.text("perturbation.to"));
    spec.multiplicity = cfg.number_or<int>("perturbation.multiplicity", 1);

    RunSettings out{ExperimentConfig{std::move(dist), std::move(scoring), std::move(spec)},
                    false, std::nullopt, std::nullopt, std::nullopt, {}, 200, std::nullopt};
    auto& e = out.experiment;
    e.eps = cfg.number<double>("run.eps");
    e.n = cfg.number<std::size_t>("run.n");
    e.replicates = cfg.number_or<std::size_t>("run.replicates", 1);
    e.workers = cfg.number_or<unsigned>("run.workers", 1);
    e.expected_change_cap =
        cfg.number_or<std::size_t>("run.expected_change_cap", kDefaultExpectedChangeCap);
    e.traceback = cfg.flag("run.traceback", false);
    if (cfg.has("run.seed")) {
      e.master_seed = cfg.number<std::uint64_t>("run.seed");
      out.seed_given = true;
    }
    if (e.n > kMaxScoreLength) {
      throw ConfigError("run.n above " + std::to_string(kMaxScoreLength) + " is not supported");
    }
    e.validate();

    if (cfg.has("pvalue.x")) out.pvalue_x = cfg.number<double>("pvalue.x");
    if (cfg.has("pvalue.n")) out.pvalue_n = cfg.number<double>("pvalue.n");
    if (cfg.has("pvalue.reference")) out.pvalue_reference = cfg.number<double>("pvalue.reference");

    if (cfg.has("varscan.lengths")) out.varscan_lengths = cfg.list<std::size_t>("varscan.lengths");
    out.varscan_replicates = cfg.number_or<std::size_t>("varscan.replicates", 200);

    if (cfg.has("events.lambda_s") || cfg.has("events.lambda_smt")) {
      EventReferences refs;
      refs.lambda_s = cfg.number<double>("events.lambda_s");
      refs.lambda_smt = cfg.number<double>("events.lambda_smt");
      refs.density_slack = cfg.number_or<double>("events.density_slack", 1.0);
      out.events = refs;
    }
    return out;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

RunSettings load_run_settings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_run_settings(in, path.parent_path());
}

}  // namespace alignfluct
