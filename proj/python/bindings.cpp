#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "automode/biasgen.hpp"
#include "automode/coverage.hpp"
#include "automode/errors.hpp"
#include "automode/eval.hpp"
#include "automode/fixtures.hpp"
#include "automode/learner.hpp"
#include "automode/lgg.hpp"
#include "automode/profiler.hpp"

namespace py = pybind11;
using namespace automode;

namespace {

Tuple to_tuple(DatabaseInstance& db, const std::vector<std::string>& values) {
  Tuple t;
  for (const auto& v : values) t.push_back(db.symbols().intern(v));
  return t;
}

std::vector<std::vector<std::string>> to_strings(const DatabaseInstance& db, const std::vector<Tuple>& tuples) {
  std::vector<std::vector<std::string>> out;
  for (const auto& t : tuples) {
    auto& row = out.emplace_back();
    for (Constant c : t) row.push_back(db.symbols().name(c));
  }
  return out;
}

std::vector<std::string> clause_texts(const HornDefinition& def, const DatabaseInstance& db) {
  std::vector<std::string> out;
  for (const auto& c : def.clauses) out.push_back(format_clause(c, db.symbols()));
  return out;
}

}  // namespace

PYBIND11_MODULE(_automode, m) {
  m.doc() = "Bias induction and relational rule learning";
  m.attr("__version__") = "0.1.0";

  py::register_exception<LoadError>(m, "LoadError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<DatabaseInstance>(m, "Database")
      .def(py::init<>())
      .def_property_readonly("tuple_count", &DatabaseInstance::tuple_count)
      .def_property_readonly("relations",
                             [](const DatabaseInstance& db) {
                               std::vector<std::string> out;
                               for (std::size_t r = 0; r < db.relation_count(); ++r)
                                 out.push_back(db.relation(r).name());
                               return out;
                             })
      .def("add_relation",
           [](DatabaseInstance& db, const std::string& name, const std::vector<std::string>& attributes) {
             db.add_relation({name, attributes});
           })
      .def("insert", py::overload_cast<std::string_view, const std::vector<std::string>&>(&DatabaseInstance::insert))
      .def("tuples", [](const DatabaseInstance& db, const std::string& relation) {
        const auto& rel = db.relation(relation);
        std::vector<Tuple> rows;
        for (std::size_t i = 0; i < rel.size(); ++i) rows.emplace_back(rel.tuple(i).begin(), rel.tuple(i).end());
        return to_strings(db, rows);
      });

  py::class_<ExampleSet>(m, "Examples")
      .def_property_readonly("target", [](const ExampleSet& e) { return e.target.name; })
      .def_property_readonly("positive_count", [](const ExampleSet& e) { return e.positives.size(); })
      .def_property_readonly("negative_count", [](const ExampleSet& e) { return e.negatives.size(); });

  py::class_<BiasSpec>(m, "Bias")
      .def_property_readonly("target", &BiasSpec::target)
      .def_property_readonly("predicates",
                             [](const BiasSpec& b) {
                               std::vector<std::string> out;
                               for (const auto& p : b.predicates) out.push_back(p.to_string());
                               return out;
                             })
      .def_property_readonly("modes",
                             [](const BiasSpec& b) {
                               std::vector<std::string> out;
                               for (const auto& md : b.modes) out.push_back(md.to_string());
                               return out;
                             })
      .def("__str__", &format_bias);

  py::enum_<Generalizer>(m, "Generalizer").value("ARMG", Generalizer::Armg).value("LGG", Generalizer::Lgg);

  py::class_<LearnConfig>(m, "LearnConfig")
      .def(py::init<>())
      .def_readwrite("iterations", &LearnConfig::iterations)
      .def_readwrite("beam_width", &LearnConfig::beam_width)
      .def_readwrite("sample_size", &LearnConfig::sample_size)
      .def_readwrite("min_precision", &LearnConfig::min_precision)
      .def_readwrite("min_positives", &LearnConfig::min_positives)
      .def_readwrite("per_relation_cap", &LearnConfig::per_relation_cap)
      .def_readwrite("seed", &LearnConfig::rng_seed)
      .def_readwrite("negative_reduction", &LearnConfig::negative_reduction)
      .def_readwrite("deep_reduce", &LearnConfig::deep_reduce)
      .def_readwrite("generalizer", &LearnConfig::generalizer)
      .def_readwrite("max_lgg_tuples", &LearnConfig::max_lgg_tuples)
      .def_readwrite("jobs", &LearnConfig::jobs);

  m.def("load_database", &load_database, py::arg("schema_file"), py::arg("facts_dir"));
  m.def(
      "load_examples",
      [](const std::filesystem::path& path, DatabaseInstance& db) {
        auto ex = load_examples(path, db);
        attach_target(db, ex);
        return ex;
      },
      py::arg("path"), py::arg("db"), "Reads examples and adds the positives to the target relation.");
  m.def(
      "parse_examples",
      [](const std::string& text, DatabaseInstance& db) {
        auto ex = parse_examples(text, db);
        attach_target(db, ex);
        return ex;
      },
      py::arg("text"), py::arg("db"));

  m.def(
      "discover_inds",
      [](const DatabaseInstance& db, double alpha) {
        std::vector<std::tuple<std::string, std::string, double>> out;
        for (const auto& ind : discover_inds(db, alpha).inds)
          out.emplace_back(ind.lhs.to_string(), ind.rhs.to_string(), ind.error);
        return out;
      },
      py::arg("db"), py::arg("alpha") = kDefaultApproxIndThreshold,
      "List of (lhs, rhs, error) for every IND with error at most alpha.");
  m.def("induce_bias", &induce_bias, py::arg("db"), py::arg("alpha") = kDefaultApproxIndThreshold,
        py::arg("threshold") = kDefaultConstantThreshold, py::arg("target"));
  m.def("parse_bias", [](const std::string& text) { return parse_bias(text); }, py::arg("text"));

  m.def(
      "bottom_clause",
      [](DatabaseInstance& db, const std::vector<std::string>& example, const BiasSpec& bias,
         const LearnConfig& cfg) {
        const auto t = to_tuple(db, example);
        return format_clause(build_bottom_clause(t, db, bias, cfg).clause, db.symbols());
      },
      py::arg("db"), py::arg("example"), py::arg("bias"), py::arg("config") = LearnConfig{});
  m.def(
      "lgg",
      [](DatabaseInstance& db, const std::string& c1, const std::string& c2, bool reduce) {
        auto& s = db.symbols();
        return format_clause(lgg_clauses(parse_clause(c1, s), parse_clause(c2, s), reduce), s);
      },
      py::arg("db"), py::arg("c1"), py::arg("c2"), py::arg("reduce") = true);
  m.def(
      "covers",
      [](DatabaseInstance& db, const std::string& clause, const std::vector<std::string>& example) {
        const auto c = parse_clause(clause, db.symbols());
        return covers(c, to_tuple(db, example), db);
      },
      py::arg("db"), py::arg("clause"), py::arg("example"));

  m.def(
      "learn",
      [](const DatabaseInstance& db, const ExampleSet& examples, const BiasSpec& bias, const LearnConfig& cfg) {
        py::gil_scoped_release release;
        const auto def = train(db, examples, bias, cfg);
        const auto [p, r] = precision_recall(def, examples.positives, examples.negatives, db);
        return std::make_tuple(clause_texts(def, db), p, r);
      },
      py::arg("db"), py::arg("examples"), py::arg("bias"), py::arg("config") = LearnConfig{},
      "Returns (clauses, train_precision, train_recall).");
  m.def(
      "cross_validate",
      [](const DatabaseInstance& db, const ExampleSet& examples, const BiasSpec& bias, const LearnConfig& cfg,
         int folds, std::uint64_t seed) {
        EvalReport rep;
        {
          py::gil_scoped_release release;
          rep = cross_validate(db, examples, bias, cfg, folds, seed);
        }
        return rep.to_json().dump();
      },
      py::arg("db"), py::arg("examples"), py::arg("bias"), py::arg("config") = LearnConfig{}, py::arg("folds") = 5,
      py::arg("seed") = 1, "Report as a JSON string.");
  m.def(
      "generate_negatives",
      [](DatabaseInstance& db, const std::vector<std::vector<std::string>>& positives, int ratio,
         std::uint64_t seed) {
        std::vector<Tuple> pos;
        for (const auto& p : positives) pos.push_back(to_tuple(db, p));
        return to_strings(db, generate_negatives(pos, ratio, seed));
      },
      py::arg("db"), py::arg("positives"), py::arg("ratio") = 2, py::arg("seed") = 1);

  m.def(
      "write_fixture",
      [](const std::filesystem::path& dir, const std::string& name) {
        if (name == "uwcse_fragment") write_fixture(uwcse_fragment(), dir);
        else if (name == "author_overlap") write_fixture(author_overlap_fixture(), dir);
        else throw ConfigError("unknown fixture " + name + " (uwcse_fragment, author_overlap)");
      },
      py::arg("dir"), py::arg("name") = "uwcse_fragment",
      "Writes a packaged fixture: schema.txt, facts/, and examples.txt / bias_manual.txt when present.");
  m.def("fragment_database", [] { return load_fixture(uwcse_fragment()); });
  m.def("fragment_bias_text", [] { return uwcse_fragment().bias; });
  m.def("fragment_examples_text", [] { return uwcse_fragment().examples; });
}
