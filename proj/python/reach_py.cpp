/*
 * Copyright 2026 The Reach Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Python bindings. Programs cross the boundary as surface text or as opaque
// Term handles; results come back as plain dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "reach/harness.hpp"
#include "reach/monitor.hpp"
#include "reach/parser.hpp"
#include "reach/qualifiers.hpp"
#include "reach/rewrite.hpp"

namespace py = pybind11;

namespace reach {
namespace {

using Bindings = std::vector<std::pair<std::string, std::string>>;

// pybind11 holders cannot point to const, so terms travel in a small box.
struct PyTerm {
  TermPtr term;
};
using Program = std::variant<PyTerm, std::string>;

TermPtr as_term(const Program& p) {
  if (const auto* t = std::get_if<PyTerm>(&p)) return t->term;
  return parse_term(std::get<std::string>(p));
}

Mode as_mode(const std::string& s) {
  auto m = parse_mode(s);
  if (!m) throw py::value_error("mode must be 'base' or 'full', got '" + s + "'");
  return *m;
}

// Every binding is observable.
TypeEnv as_env(const Bindings& bindings) {
  TypeEnv env;
  NameSet all;
  for (const auto& [x, ty] : bindings) {
    env = env.extend(x, parse_qualified_type(ty));
    all.insert(x);
  }
  return env.observe(all);
}

py::dict witnesses_dict(const Witnesses& ws) {
  py::dict d;
  for (const auto& [label, set] : ws) d[py::str(label)] = set;
  return d;
}

py::dict outcome_dict(const EvalOutcome& o) {
  py::dict d;
  switch (o.status) {
    case EvalOutcome::Status::Done:
      d["status"] = "done";
      d["value"] = to_string(o.value);
      break;
    case EvalOutcome::Status::Timeout:
      d["status"] = "timeout";
      break;
    case EvalOutcome::Status::Stuck:
      d["status"] = "stuck";
      d["stuck"] = stuck_name(o.stuck);
      d["detail"] = o.detail;
      break;
  }
  std::vector<std::string> store;
  for (const auto& v : o.store) store.push_back(to_string(v));
  d["store"] = store;
  d["steps"] = o.steps;
  return d;
}

void define_errors(py::module_& m) {
  static py::exception<ParseError> parse_error(m, "ParseError", PyExc_ValueError);
  static py::exception<TypeError> type_error(m, "ReachTypeError", PyExc_Exception);
  static py::exception<InvariantError> invariant_error(m, "InvariantError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ParseError& e) {
      auto msg = std::to_string(e.span().line) + ":" + std::to_string(e.span().column) + ": " +
                 e.what();
      PyErr_SetString(parse_error.ptr(), msg.c_str());
    } catch (const TypeError& e) {
      // Carry the rule and code as exception attributes.
      py::object exc = static_cast<const py::object&>(type_error)(e.what());
      exc.attr("rule") = e.rule();
      exc.attr("code") = e.code();
      py::dict ws;
      for (const auto& [label, set] : e.witnesses) ws[py::str(label)] = set;
      exc.attr("witnesses") = ws;
      PyErr_SetObject(type_error.ptr(), exc.ptr());
    } catch (const InvariantError& e) {
      py::object exc = static_cast<const py::object&>(invariant_error)(e.what());
      exc.attr("rule") = e.rule();
      PyErr_SetObject(invariant_error.ptr(), exc.ptr());
    }
  });
}

void define_syntax(py::module_& m) {
  py::class_<PyTerm>(m, "Term")
      .def("__str__", [](const PyTerm& t) { return to_string(*t.term); })
      .def("__repr__", [](const PyTerm& t) { return "Term(" + to_string(*t.term) + ")"; })
      .def("__eq__", [](const PyTerm& a, const PyTerm& b) {
        return to_string(*a.term) == to_string(*b.term);
      })
      .def_property_readonly("size", [](const PyTerm& t) { return term_size(*t.term); })
      .def_property_readonly("depth", [](const PyTerm& t) { return term_depth(*t.term); })
      .def_property_readonly("free_vars", [](const PyTerm& t) { return free_vars(*t.term); })
      .def("subterm", [](const PyTerm& t, const std::string& path) {
        return PyTerm{subterm_at(t.term, parse_path(path))};
      });
  m.def("parse", [](const std::string& src) { return PyTerm{parse_term(src)}; },
        py::arg("source"), "Parse a term in surface syntax.");
}

void define_qualifiers(py::module_& m) {
  m.def(
      "saturate",
      [](const Bindings& env, const NameSet& names) { return saturate(as_env(env), names); },
      py::arg("env"), py::arg("names"),
      "Close `names` under the qualifiers of the bindings in `env`.");
  m.def(
      "subqual",
      [](const Bindings& env, const std::string& a, const std::string& b) {
        return subqual(as_env(env), parse_qualifier(a), parse_qualifier(b));
      },
      py::arg("env"), py::arg("lhs"), py::arg("rhs"));
}

void define_check(py::module_& m) {
  m.def(
      "check",
      [](const Program& p, const std::string& mode, const Bindings& env) {
        auto e = typecheck(as_env(env), as_term(p), as_mode(mode));
        py::dict d;
        d["type"] = to_string(e.typing.type);
        d["effect"] = to_string(e.typing.effect);
        d["rules"] = e.rule_hits;
        d["warnings"] = e.warnings;
        return d;
      },
      py::arg("program"), py::arg("mode") = "full", py::arg("env") = Bindings{},
      "Typecheck a program. Raises ReachTypeError on rejection.");
}

void define_run(py::module_& m) {
  m.def(
      "run",
      [](const Program& p, std::size_t fuel) { return outcome_dict(eval({}, {}, as_term(p), fuel)); },
      py::arg("program"), py::arg("fuel") = kDefaultFuel,
      "Evaluate a closed program from an empty store without typechecking.");
  m.def(
      "monitor",
      [](const Program& p, const std::string& mode, std::size_t fuel, bool call_boundary) {
        auto e = typecheck({}, as_term(p), as_mode(mode));
        auto r = monitored_eval(e, {}, {}, {}, MonitorOptions{fuel, call_boundary});
        py::dict d = outcome_dict(r.outcome);
        py::list violations;
        for (const auto& v : r.violations) {
          py::dict vd;
          vd["kind"] = violation_name(v.kind);
          vd["message"] = v.message;
          vd["node"] = v.node;
          vd["step"] = v.step;
          violations.append(vd);
        }
        d["violations"] = violations;
        d["checks"] = r.checks;
        d["sigma"] = r.sigma;
        d["modified"] = r.modified;
        return d;
      },
      py::arg("program"), py::arg("mode") = "full", py::arg("fuel") = kDefaultFuel,
      py::arg("call_boundary") = false,
      "Typecheck, then evaluate while checking runtime invariants at every node.");
}

void define_rewrite(py::module_& m) {
  m.def(
      "rewrite",
      [](const Program& p, const std::string& rule, const std::string& path,
         const std::string& mode) {
        auto r = parse_rule(rule);
        if (!r) throw py::value_error("rule must be 'reorder' or 'beta', got '" + rule + "'");
        auto out = rewrite_at({}, as_term(p), *r, parse_path(path), as_mode(mode));
        py::dict d;
        d["ok"] = out.ok;
        if (out.ok) {
          d["term"] = PyTerm{out.term};
        } else {
          d["reason"] = out.reason;
          d["witnesses"] = witnesses_dict(out.witnesses);
        }
        return d;
      },
      py::arg("program"), py::arg("rule"), py::arg("path"), py::arg("mode") = "full");
}

void define_harness(py::module_& m) {
  m.def(
      "difftest",
      [](const Program& a, const Program& b, std::size_t fuel) {
        auto r = difftest(as_term(a), as_term(b), fuel);
        py::dict d;
        d["verdict"] = verdict_name(r.verdict);
        d["left"] = r.left;
        d["right"] = r.right;
        return d;
      },
      py::arg("left"), py::arg("right"), py::arg("fuel") = kDefaultFuel);
  m.def(
      "generate",
      [](std::uint64_t seed, int depth, const std::string& mode) {
        return PyTerm{generate(GenConfig{seed, depth, as_mode(mode)})};
      },
      py::arg("seed"), py::arg("depth") = 8, py::arg("mode") = "full",
      "A closed, well-typed Bool program. Deterministic in its arguments.");
}

}  // namespace
}  // namespace reach

PYBIND11_MODULE(_reach, m) {
  m.doc() = "Reachability types: checker, interpreter, monitor and rewriter.";
  reach::define_errors(m);
  reach::define_syntax(m);
  reach::define_qualifiers(m);
  reach::define_check(m);
  reach::define_run(m);
  reach::define_rewrite(m);
  reach::define_harness(m);
}
