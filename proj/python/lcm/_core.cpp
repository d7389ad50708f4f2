#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lcm/eval.hpp"
#include "lcm/parse.hpp"
#include "lcm/pretty.hpp"
#include "lcm/runtime.hpp"
#include "lcm/typecheck.hpp"

namespace py = pybind11;
using namespace lcm;

namespace {

py::dict error_dict(const TypeError& e) {
  py::dict d;
  d["code"] = std::string(to_string(e.code()));
  d["line"] = e.span().line;
  d["col"] = e.span().col;
  d["message"] = std::string(e.what());
  return d;
}

// Throws TypeError with the first problem, so callers never see an ill-typed program.
CheckedProgram checked(const Program& p) {
  auto c = check_program(p);
  if (!c.ok()) throw c.errors.front();
  return c;
}

py::list check(const std::string& source) {
  py::list out;
  for (auto& e : check_program(parse_program(source)).errors) out.append(error_dict(e));
  return out;
}

py::dict run(const std::string& source, std::size_t max_steps, std::size_t quantum) {
  Program p = parse_program(source);
  checked(p);
  Globals g = globals_of(p);
  auto main = g.find("main");
  if (main == g.end()) throw py::value_error("no main");
  RunOptions o;
  o.max_steps = max_steps;
  o.quantum = quantum;
  auto r = run_config(main->second, g, o);
  std::vector<std::string> trace;
  for (std::size_t i = 0; i < r.trace.size(); ++i) trace.push_back(render_event(i + 1, r.trace[i]));
  py::dict d;
  d["status"] = to_string(r.status);
  d["trace"] = trace;
  d["steps"] = r.steps;
  d["report"] = r.report;
  return d;
}

py::dict evaluate(const std::string& source, const std::string& expr, std::size_t max_steps) {
  Program p = parse_program(source);
  auto c = checked(p);
  TermRef m = parse_term(expr);
  TypingCtx ctx = c.globals();
  check_term(ctx, m, c.aliases);
  EvalOptions o;
  o.max_steps = max_steps;
  auto r = eval(m, globals_of(p), o);
  static const char* names[] = {"value", "timeout", "comm", "stuck"};
  py::dict d;
  d["status"] = names[static_cast<int>(r.status)];
  d["term"] = pretty(r.term);
  d["steps"] = r.steps;
  return d;
}

std::string dual_of(const std::string& source, const std::string& alias) {
  auto c = checked(parse_program(source));
  return pretty_type(resolve_type(types::dual(types::named(alias)), c.aliases));
}

bool equiv(const std::string& source, const std::string& a, const std::string& b) {
  auto c = checked(parse_program(source));
  return type_equiv(resolve_type(parse_type(a), c.aliases), resolve_type(parse_type(b), c.aliases));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Linear contextual-modal calculus with session types";

  static py::exception<ParseError> parse_exc(m, "ParseError", PyExc_ValueError);
  static py::exception<TypeError> type_exc(m, "TypeError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ParseError& e) {
      PyErr_SetString(parse_exc.ptr(), e.what());
    } catch (const TypeError& e) {
      PyErr_SetString(type_exc.ptr(), e.render().c_str());
    }
  });

  m.def("pretty_term", [](const std::string& s) { return pretty(parse_term(s)); });
  m.def("pretty_type", [](const std::string& s) { return pretty_type(parse_type(s)); });
  m.def("pretty_program", [](const std::string& s) { return pretty_program(parse_program(s)); });
  m.def("check", &check, py::arg("source"));
  m.def("run", &run, py::arg("source"), py::arg("max_steps") = 1000000, py::arg("quantum") = 256);
  m.def("eval", &evaluate, py::arg("source"), py::arg("expr"), py::arg("max_steps") = 100000);
  m.def("dual", &dual_of, py::arg("source"), py::arg("alias"));
  m.def("type_equiv", &equiv, py::arg("source"), py::arg("a"), py::arg("b"));
}
