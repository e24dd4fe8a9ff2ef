#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "semgame/bench.hpp"
#include "semgame/construction.hpp"
#include "semgame/solver_si.hpp"
#include "semgame/trueness.hpp"

namespace py = pybind11;
using namespace semgame;

namespace {

py::dict record_dict(const BenchRecord& r) {
  py::dict d;
  d["algo"] = r.algo;
  d["seed"] = r.seed;
  d["winner"] = r.winner.empty() ? py::object(py::none()) : py::object(py::str(r.winner));
  d["eval_steps"] = r.eval_steps;
  d["solution_size"] = r.solution_size;
  d["immediate"] = r.immediate;
  d["timeout"] = r.timeout;
  return d;
}

}  // namespace

PYBIND11_MODULE(_semgame, m) {
  m.doc() = "Parity games from LTL with trueness-guided solvers";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<BuildError>(m, "BuildError", PyExc_ValueError);
  py::register_exception<SchemaError>(m, "SchemaError", PyExc_ValueError);

  m.def("normalize", [](const std::string& f) { return to_string(parse(f)); },
        "Parse a formula and print it back in canonical syntax.");
  m.def("simplify", [](const std::string& f) { return to_string(simplify(parse(f))); });
  m.def("classify", [](const std::string& f) { return std::string(to_string(classify(parse(f)))); });
  m.def(
      "trueness",
      [](const std::string& f, unsigned cap) {
        TruenessValue t = trueness(parse(f), cap);
        return py::make_tuple(t.to_string(), t.to_double());
      },
      py::arg("formula"), py::arg("var_cap") = kDefaultTruenessVarCap,
      "Trueness as (exact fraction string, float).");
  m.def("random_formula", [](const std::string& cls, std::uint64_t seed, unsigned size, unsigned aps) {
    FormulaClassSpec spec = builtin_class(cls);
    spec.size = size;
    spec.aps = aps;
    return to_string(random_formula(spec, seed));
  }, py::arg("cls"), py::arg("seed"), py::arg("size") = 12, py::arg("aps") = 4);

  py::class_<Game>(m, "Game")
      .def_property_readonly("vertex_count", &Game::vertex_count)
      .def_property_readonly("edge_count", &Game::edge_count)
      .def_property_readonly("start", &Game::start)
      .def_property_readonly("max_priority", &Game::max_priority)
      .def_property_readonly("inputs", &Game::inputs)
      .def_property_readonly("outputs", &Game::outputs)
      .def("to_json", [](const Game& g) { return game_to_json(g); })
      .def("validate", [](const Game& g) { return validate(g); })
      .def("__repr__", [](const Game& g) {
        return "<semgame.Game " + std::to_string(g.vertex_count()) + " vertices, " + std::to_string(g.edge_count()) +
               " edges>";
      });

  m.def("game_from_json", &game_from_json);
  m.def("load_game", &load_game);
  m.def(
      "build_game",
      [](const std::string& f, std::vector<std::string> inputs, std::vector<std::string> outputs,
         const std::string& order, std::size_t max_vertices) {
        BuildOptions o;
        o.inputs = std::move(inputs);
        o.outputs = std::move(outputs);
        if (order != "env" && order != "sys")
          throw py::value_error("order must be 'env' or 'sys'");
        o.order = order == "env" ? MoveOrder::EnvFirst : MoveOrder::SysFirst;
        o.max_vertices = max_vertices;
        return build_game(parse(f), o);
      },
      py::arg("formula"), py::arg("inputs"), py::arg("outputs"), py::arg("order") = "env",
      py::arg("max_vertices") = 10000);

  m.def("zielonka_winner", [](const Game& g) { return std::string(to_string(zielonka(g).winner[g.start()])); });
  m.def(
      "solve",
      [](const Game& g, const std::string& algo, std::uint64_t seed, double alpha, double epsilon,
         unsigned check_period, std::uint64_t budget, double timeout_seconds) {
        SuiteOptions o;
        o.timeout_seconds = timeout_seconds;
        o.ql.alpha = alpha;
        o.ql.epsilon = epsilon;
        o.ql.check_period = check_period;
        o.ql.budget = budget;
        Model model{"game", "", Formula::tt(), g};
        return record_dict(run_cell(model, parse_algo(algo), 0, seed, o));
      },
      py::arg("game"), py::arg("algo") = "si-sem", py::arg("seed") = 0, py::arg("alpha") = 0.1,
      py::arg("epsilon") = 0.1, py::arg("check_period") = 10, py::arg("budget") = 100000,
      py::arg("timeout_seconds") = 60.0,
      "Solve with one of si, si-sem, ql-win, ql-pri, ql-sem; returns a result dict.");
}
