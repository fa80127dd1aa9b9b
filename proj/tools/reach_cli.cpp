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

// Command-line front end. Exit codes:
//   0 success, 1 rejected (type error, refused rewrite, Unequal),
//   2 unreadable or malformed input, 3 monitor violations,
//   4 fuel exhausted, 5 evaluation stuck.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "reach/harness.hpp"
#include "reach/monitor.hpp"
#include "reach/parser.hpp"
#include "reach/rewrite.hpp"
#include "report.hpp"

namespace {

using namespace reach;
using nlohmann::json;

enum Exit { kOk = 0, kRejected = 1, kInput = 2, kViolation = 3, kTimeout = 4, kStuck = 5 };

struct Options {
  std::string mode = "full";
  std::size_t fuel = kDefaultFuel;
  bool json = false;
};

// A failed load has already been reported.
struct Failure {
  int code;
};

void emit(const Options& o, const json& j, const std::string& text) {
  if (o.json) {
    std::cout << j.dump() << "\n";
  } else {
    std::cout << text;
  }
}

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Mode mode_of(const Options& o) { return *parse_mode(o.mode); }

TermPtr load(const std::string& path, const Options& o, const std::string& cmd) {
  try {
    return parse_term(read_file(path));
  } catch (const ParseError& e) {
    json j = report::record(cmd);
    j["status"] = "parse-error";
    j["message"] = e.what();
    j["span"] = report::span(e.span());
    emit(o, j,
         "error[parse] " + std::to_string(e.span().line) + ":" + std::to_string(e.span().column) +
             ": " + e.what() + "\n");
    throw Failure{kInput};
  } catch (const InvariantError& e) {
    json j = report::record(cmd);
    j["status"] = "type-error";
    j["error"] = {{"code", "ill-formed"}, {"rule", e.rule()}, {"message", e.what()},
                  {"span", report::span(e.span())}};
    emit(o, j, "error[ill-formed] " + e.rule() + ": " + e.what() + "\n");
    throw Failure{kRejected};
  } catch (const std::runtime_error& e) {
    json j = report::record(cmd);
    j["status"] = "input-error";
    j["message"] = e.what();
    emit(o, j, std::string("error[input] ") + e.what() + "\n");
    throw Failure{kInput};
  }
}

Elaborated check_or_fail(const TermPtr& t, const Options& o, const std::string& cmd) {
  try {
    Elaborated e = typecheck(TypeEnv{}, t, mode_of(o));
    if (!o.json) {
      for (const auto& w : e.warnings) std::cerr << "warning: " << w << "\n";
    }
    return e;
  } catch (const TypeError& e) {
    json j = report::record(cmd);
    j["status"] = "type-error";
    j["error"] = report::type_error(e);
    emit(o, j, report::describe(e));
    throw Failure{kRejected};
  }
}

int outcome_code(const EvalOutcome& r) {
  switch (r.status) {
    case EvalOutcome::Status::Done: return kOk;
    case EvalOutcome::Status::Timeout: return kTimeout;
    case EvalOutcome::Status::Stuck: return kStuck;
  }
  return kStuck;
}

json outcome_json(const EvalOutcome& r) {
  json j;
  switch (r.status) {
    case EvalOutcome::Status::Done:
      j["outcome"] = "done";
      j["value"] = to_string(r.value);
      break;
    case EvalOutcome::Status::Timeout:
      j["outcome"] = "timeout";
      break;
    case EvalOutcome::Status::Stuck:
      j["outcome"] = "stuck";
      j["stuck"] = stuck_name(r.stuck);
      break;
  }
  j["steps"] = r.steps;
  j["cells"] = r.store.size();
  return j;
}

std::string outcome_text(const EvalOutcome& r) {
  switch (r.status) {
    case EvalOutcome::Status::Done: return to_string(r.value) + "\n";
    case EvalOutcome::Status::Timeout: return "timeout: " + r.detail + "\n";
    case EvalOutcome::Status::Stuck:
      return std::string("stuck[") + stuck_name(r.stuck) + "]: " + r.detail + "\n";
  }
  return "";
}

int cmd_check(const std::string& file, const Options& o) {
  Elaborated e = check_or_fail(load(file, o, "check"), o, "check");
  json j = report::record("check");
  j["status"] = "ok";
  j["mode"] = o.mode;
  j["typing"] = report::typing(e.typing);
  j["warnings"] = e.warnings;
  emit(o, j, to_string(e.typing.type) + "\neffect: " + to_string(e.typing.effect) + "\n");
  return kOk;
}

int cmd_run(const std::string& file, const Options& o, bool unchecked) {
  TermPtr t = load(file, o, "run");
  // Accepted programs never get stuck, so exit code 5 needs this escape hatch.
  if (!unchecked) check_or_fail(t, o, "run");
  EvalOutcome r = eval(ValueEnv{}, Store{}, t, o.fuel);
  json j = report::record("run");
  j.update(outcome_json(r));
  emit(o, j, outcome_text(r));
  return outcome_code(r);
}

int cmd_monitor(const std::string& file, const Options& o, bool call_boundary,
                const std::vector<std::string>& overrides) {
  TermPtr t = load(file, o, "monitor");
  Elaborated e = check_or_fail(t, o, "monitor");
  for (const auto& ov : overrides) {
    auto eq = ov.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--override-referent", "expected PATH=QUAL");
    TermPtr node = subterm_at(e.term, parse_path(ov.substr(0, eq)));
    auto it = e.nodes.find(node.get());
    if (!node->as<RefAlloc>() || it == e.nodes.end()) {
      throw CLI::ValidationError("--override-referent", "path does not name an allocation");
    }
    it->second.referent = parse_qualifier(ov.substr(eq + 1));
  }
  MonitorResult m = monitored_eval(e, ValueEnv{}, Store{}, StoreTyping{},
                                   MonitorOptions{o.fuel, call_boundary});
  json j = report::record("monitor");
  j.update(outcome_json(m.outcome));
  j["checks"] = m.checks;
  j["violations"] = json::array();
  std::string text = outcome_text(m.outcome);
  text += "checks: " + std::to_string(m.checks) + "\n";
  text += "violations: " + std::to_string(m.violations.size()) + "\n";
  for (const auto& v : m.violations) {
    j["violations"].push_back(report::violation(v));
    text += std::string("  ") + violation_name(v.kind) + " at step " + std::to_string(v.step) +
            ": " + v.message + "\n    in " + v.node + "\n";
  }
  emit(o, j, text);
  if (!m.violations.empty()) return kViolation;
  return outcome_code(m.outcome);
}

int cmd_rewrite(const std::string& file, const Options& o, const std::string& rule_name,
                const std::string& at) {
  TermPtr t = load(file, o, "rewrite");
  check_or_fail(t, o, "rewrite");
  RewriteRule rule = *parse_rule(rule_name);
  TermPath path = parse_path(at);
  RewriteOutcome r = rewrite_at(TypeEnv{}, t, rule, path, mode_of(o));
  json j = report::record("rewrite");
  j["rule"] = rule_name;
  j["path"] = path_to_string(path);
  j["before"] = to_string(*t);
  j["witnesses"] = report::witnesses(r.witnesses);
  std::string text = "rule: " + rule_name + " at " + path_to_string(path) + "\n";
  for (const auto& [k, v] : r.witnesses) text += "  " + k + " = " + to_string(v) + "\n";
  if (!r.ok) {
    j["status"] = "refused";
    j["reason"] = r.reason;
    emit(o, j, text + "refused: " + r.reason + "\n");
    return kRejected;
  }
  j["status"] = "ok";
  j["after"] = to_string(*r.term);
  j["typing"] = report::typing(r.typing);
  emit(o, j, text + "before: " + to_string(*t) + "\nafter:  " + to_string(*r.term) + "\n");
  return kOk;
}

int cmd_difftest(const std::string& a, const std::string& b, const Options& o) {
  TermPtr ta = load(a, o, "difftest");
  TermPtr tb = load(b, o, "difftest");
  DiffResult d = difftest(ta, tb, o.fuel);
  json j = report::record("difftest");
  j["verdict"] = verdict_name(d.verdict);
  j["left"] = d.left;
  j["right"] = d.right;
  std::string text = std::string(verdict_name(d.verdict));
  text += d.verdict == DiffVerdict::Equal ? "(" + d.left + ")\n"
                                          : "(" + d.left + ", " + d.right + ")\n";
  emit(o, j, text);
  switch (d.verdict) {
    case DiffVerdict::Equal: return kOk;
    case DiffVerdict::Unequal: return kRejected;
    case DiffVerdict::Inconclusive: return kTimeout;
  }
  return kRejected;
}

int cmd_gen(const Options& o, std::size_t count, std::uint64_t seed, int depth) {
  for (std::size_t i = 0; i < count; ++i) {
    TermPtr t = generate(GenConfig{seed + i, depth, mode_of(o)});
    if (o.json) {
      json j = report::record("gen");
      j["seed"] = seed + i;
      j["term"] = to_string(*t);
      std::cout << j.dump() << "\n";
    } else {
      std::cout << to_string(*t) << "\n";
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reachability type checker, interpreter, monitor and rewriter"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* c, bool fuel) {
    c->add_option("--mode", o.mode, "Calculus: base or full")
        ->check(CLI::IsMember({"base", "full"}));
    c->add_flag("--json", o.json, "Line-delimited JSON output");
    if (fuel) c->add_option("--fuel", o.fuel, "Evaluation fuel");
  };

  std::string file, file2, rule = "reorder", at = ".";
  bool call_boundary = false;
  bool unchecked = false;
  std::vector<std::string> overrides;
  std::size_t count = 10;
  std::uint64_t seed = 0;
  int depth = 8;

  auto* check = app.add_subcommand("check", "Typecheck a program");
  check->add_option("file", file, "Program file or -")->required();
  common(check, false);

  auto* run = app.add_subcommand("run", "Typecheck and evaluate a program");
  run->add_option("file", file, "Program file or -")->required();
  common(run, true);
  run->add_flag("--unchecked", unchecked, "Evaluate without typechecking first");

  auto* mon = app.add_subcommand("monitor", "Evaluate under the runtime monitor");
  mon->add_option("file", file, "Program file or -")->required();
  common(mon, true);
  mon->add_flag("--call-boundary", call_boundary, "Also check writes against latent effects");
  mon->add_option("--override-referent", overrides,
                  "Replace the declared referent of the allocation at PATH (PATH=QUAL)");

  auto* rw = app.add_subcommand("rewrite", "Apply a rewrite rule");
  rw->add_option("file", file, "Program file or -")->required();
  common(rw, false);
  rw->add_option("--rule", rule, "reorder or beta")->check(CLI::IsMember({"reorder", "beta"}));
  rw->add_option("--at", at, "Subterm path, dot separated child indices");

  auto* dt = app.add_subcommand("difftest", "Compare two closed programs");
  dt->add_option("left", file, "First program")->required();
  dt->add_option("right", file2, "Second program")->required();
  common(dt, true);

  auto* gen = app.add_subcommand("gen", "Generate well-typed programs");
  common(gen, false);
  gen->add_option("--count", count, "Number of programs");
  gen->add_option("--seed", seed, "First seed");
  gen->add_option("--depth", depth, "Maximum term depth");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInput;
  }

  try {
    if (*check) return cmd_check(file, o);
    if (*run) return cmd_run(file, o, unchecked);
    if (*mon) return cmd_monitor(file, o, call_boundary, overrides);
    if (*rw) return cmd_rewrite(file, o, rule, at);
    if (*dt) return cmd_difftest(file, file2, o);
    if (*gen) return cmd_gen(o, count, seed, depth);
  } catch (const Failure& f) {
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  }
  return kInput;
}
