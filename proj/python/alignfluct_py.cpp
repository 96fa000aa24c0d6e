#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "alignfluct/alignment.hpp"
#include "alignfluct/alphabet.hpp"
#include "alignfluct/cli.hpp"
#include "alignfluct/config.hpp"
#include "alignfluct/error.hpp"
#include "alignfluct/montecarlo.hpp"
#include "alignfluct/perturbation.hpp"
#include "alignfluct/report_io.hpp"
#include "alignfluct/scoring.hpp"

namespace py = pybind11;
using namespace alignfluct;

namespace {

py::object json_to_python(const std::string& text) {
  return py::module_::import("json").attr("loads")(text);
}

py::list matrix_rows(const ScoringMatrix& s) {
  py::list rows;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    py::list row;
    for (std::size_t j = 0; j < s.dim(); ++j) row.append(s(static_cast<Code>(i), static_cast<Code>(j)));
    rows.append(row);
  }
  return rows;
}

ScoringMatrix matrix_from_rows(const std::string& letters, const std::vector<std::vector<double>>& rows,
                               char gap) {
  Alphabet alphabet(letters, gap);
  std::vector<double> entries;
  for (const auto& row : rows) {
    if (row.size() != rows.size()) throw std::invalid_argument("scoring matrix must be square");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return ScoringMatrix(alphabet, std::move(entries));
}

ExperimentConfig load_experiment(const std::string& path) { return load_run_settings(path).experiment; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Optimal alignment scores under perturbed scoring matrices";

  auto base = py::register_exception<Error>(m, "AlignFluctError", PyExc_RuntimeError);
  py::register_exception<SymbolError>(m, "SymbolError", base.ptr());
  py::register_exception<AlphabetMismatch>(m, "AlphabetMismatch", base.ptr());
  py::register_exception<InvalidAlignment>(m, "InvalidAlignment", base.ptr());
  py::register_exception<NoOccurrence>(m, "NoOccurrence", base.ptr());
  py::register_exception<SizeCapExceeded>(m, "SizeCapExceeded", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  py::class_<Alphabet>(m, "Alphabet")
      .def(py::init<std::string, char>(), py::arg("letters"), py::arg("gap") = Alphabet::kDefaultGap)
      .def_static("binary", &Alphabet::binary)
      .def_static("dna", &Alphabet::dna)
      .def_property_readonly("letters", &Alphabet::letters)
      .def_property_readonly("gap", &Alphabet::gap)
      .def("__len__", &Alphabet::size)
      .def("__repr__", [](const Alphabet& a) { return "Alphabet('" + a.letters() + "')"; });

  py::class_<ScoringMatrix>(m, "ScoringMatrix")
      .def(py::init(&matrix_from_rows), py::arg("letters"), py::arg("rows"),
           py::arg("gap") = Alphabet::kDefaultGap,
           "Full augmented matrix, gap row and column last.")
      .def_static("identity", &builtin_identity, py::arg("gap_penalty"), py::arg("mismatch") = 0.0)
      .def_static("blastz", &builtin_blastz, py::arg("gap_penalty"))
      .def_static("match_mismatch", &ScoringMatrix::match_mismatch, py::arg("alphabet"),
                  py::arg("match"), py::arg("mismatch"), py::arg("gap_penalty"))
      .def_static("from_file",
                  [](const std::string& path) { return load_scoring_matrix(path); }, py::arg("path"))
      .def_property_readonly("alphabet", &ScoringMatrix::alphabet)
      .def("at", &ScoringMatrix::at)
      .def("rows", &matrix_rows)
      .def("__eq__", [](const ScoringMatrix& a, const ScoringMatrix& b) { return a == b; })
      .def("__sub__",
           [](const ScoringMatrix& a, const ScoringMatrix& b) { return linear_combine(a, 1.0, b); })
      .def("__repr__", [](const ScoringMatrix& s) {
        std::ostringstream out;
        write_scoring_matrix(out, s);
        return out.str();
      });

  m.def("norm_delta", &norm_delta, py::arg("s"));
  m.def("norm_inf", &norm_inf, py::arg("s"));
  m.def("linear_combine", &linear_combine, py::arg("s"), py::arg("eps"), py::arg("t"),
        "S - eps T");

  m.def("optimal_score",
        py::overload_cast<std::string_view, std::string_view, const ScoringMatrix&>(&optimal_score),
        py::arg("x"), py::arg("y"), py::arg("s"));
  m.def("brute_force_score",
        py::overload_cast<std::string_view, std::string_view, const ScoringMatrix&>(&brute_force_score),
        py::arg("x"), py::arg("y"), py::arg("s"));
  m.def(
      "optimal_alignment",
      [](std::string_view x, std::string_view y, const ScoringMatrix& s) {
        auto result = optimal_alignment(x, y, s);
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (const auto& p : result.alignment) pairs.emplace_back(p.x_pos, p.y_pos);
        return py::make_tuple(result.score, pairs);
      },
      py::arg("x"), py::arg("y"), py::arg("s"),
      "(score, [(x_pos, y_pos), ...]) with 1-based positions.");

  m.def("single_letter_T", &build_single_letter_T, py::arg("s"), py::arg("from_letter"),
        py::arg("to_letter"), py::arg("multiplicity") = 1);
  m.def("group_change_T", &build_group_change_T, py::arg("s"), py::arg("from_set"),
        py::arg("to_set"));
  m.def(
      "expected_change",
      [](std::string_view x, std::string_view y, const ScoringMatrix& s, const std::string& from,
         const std::string& to, const std::string& kind) {
        PerturbationSpec spec{parse_change_kind(kind), from, to, 1};
        return exact_expected_change(x, y, spec, s).mean();
      },
      py::arg("x"), py::arg("y"), py::arg("s"), py::arg("from_letters"), py::arg("to_letters"),
      py::arg("kind") = "single");

  m.def("c_n", &c_n_constant, py::arg("n"));
  m.def("lambda_margin", &lambda_margin, py::arg("n"), py::arg("s"));
  m.def(
      "pvalue_bound",
      [](double x, double n, const ScoringMatrix& s, double eps, const ScoringMatrix& t) {
        return json_to_python(to_json_text(pvalue_bound(x, n, s, eps, t)));
      },
      py::arg("x"), py::arg("n"), py::arg("s"), py::arg("eps"), py::arg("t"));

  m.def(
      "estimate",
      [](const std::string& config_path, std::optional<std::uint64_t> seed,
         std::optional<std::size_t> n, std::optional<std::size_t> replicates, unsigned workers) {
        ExperimentConfig cfg = load_experiment(config_path);
        if (seed) cfg.master_seed = *seed;
        if (n) cfg.n = *n;
        if (replicates) cfg.replicates = *replicates;
        cfg.workers = workers;
        EstimateReport report;
        {
          py::gil_scoped_release release;
          report = run_statistic(cfg);
        }
        return json_to_python(to_json_text(report));
      },
      py::arg("config_path"), py::arg("seed") = py::none(), py::arg("n") = py::none(),
      py::arg("replicates") = py::none(), py::arg("workers") = 1,
      "Runs the statistic for an experiment file and returns the report as a dict.");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = run_cli(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line tool in-process: (exit_code, stdout, stderr).");
}
