// Acceptance criteria 1-8; one PASS/FAIL line each.
#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "enumerate.hpp"
#include "lcm/eval.hpp"
#include "lcm/parse.hpp"
#include "lcm/pretty.hpp"
#include "lcm/runtime.hpp"
#include "lcm/subst.hpp"
#include "lcm/typecheck.hpp"
#include "oracle.hpp"

using namespace lcm;
using namespace lcm::testing;
namespace fs = std::filesystem;

namespace {

const fs::path kPrograms = fs::path(LCM_SOURCE_DIR) / "programs";

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Loaded {
  Program program;
  CheckedProgram checked;
};

Loaded load(const fs::path& p) {
  Loaded l;
  l.program = parse_program(slurp(p));
  l.checked = check_program(l.program);
  return l;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto at = hay.find(needle); at != std::string::npos; at = hay.find(needle, at + 1)) ++n;
  return n;
}

TypeRef int_t() { return types::integer(); }

// ---------------------------------------------------------------------------

Outcome moebius() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  TermRef m = parse_term(
      "let box r = box (y. y + 2) in "
      "let box u = box (c, x. 3 * z + c[2 * x]) in "
      "box (y. u[y. r[y], y])");
  auto ctx_z = [] {
    TypingCtx ctx;
    ctx.push(CtxEntry{"z", 3, types::plain(int_t()), Mult::Linear, false});
    return ctx;
  };

  TypeRef stated = types::box(types::plain(int_t()));
  try {
    TypingCtx ctx = ctx_z();
    check_term_against(ctx, m, stated);
    o.require(ctx.fully_consumed(), "z not consumed at the stated type");
  } catch (const TypeError& e) {
    o.require(false, "stated type [|- Int] rejected: " + e.render());
  }
  TypeRef actual;
  try {
    TypingCtx ctx = ctx_z();
    actual = check_term(ctx, m);
    o.require(ctx.fully_consumed(), "z not consumed");
    o.detail += std::string(o.detail.empty() ? "" : "; ") + "synthesized " + pretty_type(actual);
  } catch (const TypeError& e) {
    o.require(false, "term rejected: " + e.render());
  }

  std::vector<TermRef> seen;
  EvalOptions opts;
  opts.on_step = [&](std::size_t, const std::string& rule, const TermRef& t) {
    o.require(rule == "let-box", "unexpected rule " + rule);
    seen.push_back(t);
  };
  auto r = eval(m, {}, opts);
  o.require(r.status == EvalResult::Status::Value, "did not reach a value");
  o.require(r.steps == 2, "took " + std::to_string(r.steps) + " steps");
  if (seen.size() == 2) {
    o.require(alpha_equiv(seen[0], parse_term("let box u = box (c, x. 3 * z + c[2 * x]) in "
                                              "box (y. u[y. y + 2, y])")),
              "first intermediate differs: " + pretty(seen[0]));
    o.require(alpha_equiv(seen[1], parse_term("box (y. 3 * z + 2 * y + 2)")),
              "final term differs: " + pretty(seen[1]));
  }
  o.require(seconds_since(t0) < 1.0, "slower than 1 s");
  return o;
}

// Beta or let-box redexes anywhere in `m`, including under binders.
std::size_t residual_redexes(const TermRef& m) {
  std::size_t n = 0;
  std::function<void(const TermRef&)> walk;
  std::function<void(const CtxValue&)> walk_cv = [&](const CtxValue& cv) { walk(cv.body); };
  walk = [&](const TermRef& t) {
    std::visit(overloaded{
                   [&](const node::App& x) {
                     n += x.fn->is<node::Lam>();
                     walk(x.fn);
                     walk(x.arg);
                   },
                   [&](const node::LetBox& x) {
                     ++n;
                     walk(x.bound);
                     walk(x.body);
                   },
                   [&](const node::Lam& x) { walk(x.body); },
                   [&](const node::LetUnit& x) {
                     walk(x.scrut);
                     walk(x.body);
                   },
                   [&](const node::BoxVal& x) { walk_cv(x.code); },
                   [&](const node::Var& x) {
                     for (auto& a : x.args) walk_cv(a);
                   },
                   [&](const node::Arith& x) {
                     walk(x.lhs);
                     walk(x.rhs);
                   },
                   [&](const node::Pair& x) {
                     walk(x.fst);
                     walk(x.snd);
                   },
                   [&](const node::LetPair& x) {
                     walk(x.scrut);
                     walk(x.body);
                   },
                   [&](const node::Match& x) {
                     walk(x.scrut);
                     for (auto& b : x.branches) walk(b.body);
                   },
                   [&](const auto&) {},
               },
               t->node);
  };
  walk(m);
  return n;
}

Outcome send_fives() {
  Outcome o;
  Loaded l = load(kPrograms / "main.lcm");
  o.require(l.checked.ok(), "main.lcm rejected");
  auto r = eval(parse_term("sendFives 4"), globals_of(l.program));
  o.require(r.status == EvalResult::Status::Value, "no value: " + r.reason);
  auto b = r.term->as<node::BoxVal>();
  o.require(b != nullptr, "not a box: " + pretty(r.term));
  if (!b) return o;
  std::string text = pretty(r.term);
  o.require(count(text, "send 5") == 4, "send 5 count " + std::to_string(count(text, "send 5")));
  o.require(count(text, "select More") == 4, "select More count");
  o.require(text.find("close (select Done (send 5 (select More (") != std::string::npos,
            "nesting differs: " + text);
  o.require(residual_redexes(b->code.body) == 0, "residual redexes in " + text);
  o.require(alpha_equiv(r.term, parse_term("box (c. close (select Done (send 5 (select More "
                                           "(send 5 (select More (send 5 (select More (send 5 "
                                           "(select More c))))))))))")),
            "differs from the printed value: " + text);
  return o;
}

Outcome main_program() {
  Outcome o;
  Loaded l = load(kPrograms / "main.lcm");
  o.require(l.checked.ok(), "main.lcm rejected");
  auto globals = globals_of(l.program);
  auto first = run_config(globals.at("main"), globals);
  auto second = run_config(globals.at("main"), globals);
  o.require(first.status == RunResult::Status::Success, "status " + to_string(first.status));
  std::size_t halted = 0;
  for (auto& t : first.threads) halted += t.status == Thread::Status::Done;
  o.require(first.threads.size() == 3 && halted == 3, "threads not all halted");
  o.require(first.channels.empty(), "channels left open");

  std::size_t send4 = 0, send5 = 0, sendbox = 0, closes = 0, other_sends = 0;
  std::vector<std::string> labels;
  for (auto& e : first.trace) {
    using K = TraceEvent::Kind;
    if (e.kind == K::Sent) {
      if (e.payload == "4") ++send4;
      else if (e.payload == "5") ++send5;
      else if (e.payload.rfind("box ", 0) == 0) ++sendbox;
      else ++other_sends;
    }
    if (e.kind == K::Selected) labels.push_back(e.payload);
    if (e.kind == K::Closed) ++closes;
  }
  o.require(send4 == 1 && sendbox == 1 && send5 == 4 && other_sends == 0, "send counts differ");
  o.require(labels == std::vector<std::string>{"More", "More", "More", "More", "Done"},
            "labels differ");
  o.require(closes == 2, "close count " + std::to_string(closes));
  std::string a = render_trace(first.trace), b = render_trace(second.trace);
  o.require(a == b, "traces differ between runs");
  o.require(a == slurp(kPrograms / "golden" / "main.trace"), "trace differs from golden file");
  return o;
}

constexpr std::size_t kMaxSize = 12;

struct Corpus {
  std::vector<TermRef> candidates;
  std::vector<TermRef> well_typed;
  double seconds = 0;
};

std::optional<TypeRef> algorithmic(const TermRef& m) {
  try {
    TypingCtx ctx;
    return check_term(ctx, m);
  } catch (const TypeError&) {
    return std::nullopt;
  }
}

const Corpus& corpus() {
  static const Corpus c = [] {
    Corpus c;
    auto t0 = std::chrono::steady_clock::now();
    for (auto& t : universe())
      for (auto& m : enumerate_terms({}, t, kMaxSize)) {
        c.candidates.push_back(m);
        if (oracle_synth({}, m)) c.well_typed.push_back(m);
      }
    c.seconds = seconds_since(t0);
    return c;
  }();
  return c;
}

Outcome preservation_progress() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  const Corpus& c = corpus();
  std::size_t violations = 0, steps = 0;
  std::string first;
  auto violate = [&](const std::string& what) {
    if (violations++ == 0) first = what;
  };
  for (auto& m : c.well_typed) {
    auto t = algorithmic(m);
    if (!t) {
      violate("checker rejects " + pretty(m));
      continue;
    }
    TermRef cur = m;
    for (std::size_t k = 0;; ++k) {
      if (k == 10000) {
        violate("no value after 10000 steps: " + pretty(m));
        break;
      }
      auto s = step(cur);
      if (std::holds_alternative<step_result::IsValue>(s)) break;
      auto st = std::get_if<step_result::Stepped>(&s);
      if (!st) {
        violate("no step from " + pretty(cur));
        break;
      }
      ++steps;
      auto u = algorithmic(st->term);
      if (!u || !type_equiv(*u, *t)) {
        violate(st->rule + " step changes the type: " + pretty(cur) + " ~> " + pretty(st->term));
        break;
      }
      cur = st->term;
    }
  }
  double secs = seconds_since(t0);
  o.detail = std::to_string(c.well_typed.size()) + " terms, " + std::to_string(steps) +
             " steps, " + std::to_string(violations) + " violations, " +
             std::to_string(static_cast<int>(secs)) + " s";
  if (violations) o.require(false, "first: " + first);
  o.require(c.well_typed.size() >= 1000, "corpus too small");
  o.require(secs < 60, "slower than 60 s");
  return o;
}

TypingCtx ctx_of(const std::vector<ScopeEntry>& scope) {
  TypingCtx ctx;
  for (auto& e : scope) ctx.push(CtxEntry{e.name, e.level, e.type, Mult::Linear, false});
  return ctx;
}

std::optional<TypeRef> algorithmic_in(const std::vector<ScopeEntry>& scope, const TermRef& m) {
  try {
    TypingCtx ctx = ctx_of(scope);
    TypeRef t = check_term(ctx, m);
    if (!ctx.fully_consumed()) return std::nullopt;
    return t;
  } catch (const TypeError&) {
    return std::nullopt;
  }
}

Outcome substitution_principle() {
  Outcome o;
  std::size_t instances = 0, violations = 0;
  std::string first;
  const ScopeEntry gamma_extra{"g", 0, types::plain(int_t())};
  for (unsigned n = 0; n < 3; ++n)
    for (auto& tau : boxed_universe())
      for (bool with_gamma : {false, true}) {
        std::vector<ScopeEntry> gamma;
        if (with_gamma) gamma.push_back(gamma_extra);
        std::vector<ScopeEntry> with_x = gamma;
        with_x.push_back(ScopeEntry{"x", n, tau});

        std::vector<std::pair<std::vector<ScopeEntry>, CtxValue>> sigmas;
        std::vector<std::vector<ScopeEntry>> deltas{{}};
        for (unsigned m = n; m < n + 2; ++m) deltas.push_back({ScopeEntry{"d", m, types::plain(int_t())}});
        for (auto& delta : deltas)
          for (auto& cv : enumerate_ctx_values(delta, tau, 5)) {
            try {
              TypingCtx ctx = ctx_of(delta);
              check_ctx_value(ctx, cv, n, &tau);
              if (ctx.fully_consumed()) sigmas.push_back({delta, cv});
            } catch (const TypeError&) {
            }
          }

        for (auto& t : universe())
          for (auto& m : enumerate_terms(with_x, t, 6)) {
            auto mt = algorithmic_in(with_x, m);
            if (!mt) continue;
            for (auto& [delta, sigma] : sigmas) {
              ++instances;
              std::vector<ScopeEntry> after = gamma;
              after.insert(after.end(), delta.begin(), delta.end());
              std::string what = "[" + pretty(sigma) + "/x]" + pretty(m);
              try {
                TermRef r = subst(sigma, "x", m);
                auto rt = algorithmic_in(after, r);
                if (!rt || !type_equiv(*rt, *mt)) {
                  if (violations++ == 0) first = what + " = " + pretty(r);
                }
              } catch (const SubstError& e) {
                if (violations++ == 0) first = what + ": " + e.what();
              }
            }
          }
      }
  o.detail = std::to_string(instances) + " instances, " + std::to_string(violations) + " violations";
  if (violations) o.require(false, "first: " + first);
  o.require(instances >= 500, "fewer than 500 instances");
  return o;
}

Outcome agreement() {
  Outcome o;
  const Corpus& c = corpus();
  std::size_t checked = 0, mutant_count = 0, rejected_mutants = 0, disagreements = 0;
  std::string first;
  auto compare = [&](const TermRef& m) {
    ++checked;
    bool declarative = oracle_synth({}, m).has_value();
    bool algo = false;
    try {
      TypingCtx ctx;
      check_term(ctx, m);
      algo = true;
    } catch (const TypeError&) {
    }
    if (declarative != algo && disagreements++ == 0)
      first = std::string(declarative ? "oracle" : "checker") + " alone accepts " + pretty(m);
    return declarative;
  };
  std::size_t k = 0;
  for (auto& m : c.candidates) {
    compare(m);
    // Every mutant of the smaller terms; a fixed sample of the larger ones.
    if (term_size(m) > 10 && k++ % 16 != 0) continue;
    for (auto& mu : mutants(m)) {
      ++mutant_count;
      rejected_mutants += !compare(mu);
    }
  }
  o.detail = std::to_string(c.candidates.size()) + " enumerated, " + std::to_string(mutant_count) +
             " mutants (" + std::to_string(rejected_mutants) + " ill-typed), " +
             std::to_string(disagreements) + " disagreements";
  if (disagreements) o.require(false, "first: " + first);
  return o;
}

Outcome duality() {
  Outcome o;
  Loaded l = load(kPrograms / "main.lcm");
  const AliasTable& aliases = l.checked.aliases;
  auto named = [&](const std::string& n) { return resolve_type(types::named(n), aliases); };
  TypeRef builder = named("Builder");
  TypeRef stream = named("Stream");
  TypeRef expected = resolve_type(parse_type("!Int.?[Stream |- Unit].Close"), aliases);
  o.require(type_equiv(dual(builder), expected), "dual Builder is " + pretty_type(dual(builder)));
  o.require(type_equiv(stream, unfold(stream)), "Stream differs from its unfolding");

  std::size_t sessions = 0;
  std::function<void(const TypeRef&)> visit = [&](const TypeRef& s) {
    if (!is_session(*s)) return;
    ++sessions;
    o.require(type_equiv(dual(dual(s)), s), "dual not an involution on " + pretty_type(s));
    o.require(!type_equiv(dual(s), s), "self-dual " + pretty_type(s));
  };
  for (auto& entry : fs::directory_iterator(kPrograms)) {
    if (entry.path().extension() != ".lcm") continue;
    Loaded p = load(entry.path());
    for (auto& [name, raw] : p.checked.aliases) {
      TypeRef t = resolve_type(types::named(name), p.checked.aliases);
      visit(t);
      visit(unfold(t));
    }
    for (auto& [name, t] : p.checked.signatures) {
      std::function<void(const TypeRef&)> parts = [&](const TypeRef& x) {
        visit(x);
        if (auto a = x->as<ty::Arrow>()) {
          parts(a->from);
          parts(a->to);
        }
      };
      parts(t);
    }
  }
  o.detail = std::to_string(sessions) + " session types" + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

std::optional<std::string> pinned_code(const std::string& text) {
  const std::string tag = "-- expect: ";
  auto at = text.find(tag);
  if (at == std::string::npos) return std::nullopt;
  auto end = text.find('\n', at);
  return text.substr(at + tag.size(), end - at - tag.size());
}

Outcome rejection_suite() {
  Outcome o;
  std::size_t fixtures = 0;
  std::set<std::string> codes;
  std::vector<fs::path> neg;
  for (auto& e : fs::directory_iterator(kPrograms / "neg")) neg.push_back(e.path());
  std::sort(neg.begin(), neg.end());
  for (auto& path : neg) {
    std::string text = slurp(path);
    auto want = pinned_code(text);
    o.require(want.has_value(), path.filename().string() + " has no pinned code");
    if (!want) continue;
    ++fixtures;
    codes.insert(*want);
    std::string got = "accepted";
    try {
      CheckedProgram c = check_program(parse_program(text));
      if (!c.ok()) got = std::string(to_string(c.errors.front().code()));
    } catch (const ParseError&) {
      got = "ParseError";
    }
    o.require(got == *want, path.filename().string() + ": " + got + " instead of " + *want);
  }
  o.require(fixtures >= 10, "fewer than 10 fixtures");
  for (auto code : {"UnusedLinear", "ReusedLinear", "LevelTooLow", "LevelNotBelow", "ArityMismatch",
                    "PayloadRecursion"})
    o.require(codes.count(code) == 1, std::string("no fixture for ") + code);

  std::size_t positive = 0;
  for (auto& e : fs::directory_iterator(kPrograms)) {
    if (e.path().extension() != ".lcm") continue;
    ++positive;
    std::string cmd = std::string(LCM_CLI) + " check " + e.path().string() + " > /dev/null";
    o.require(std::system(cmd.c_str()) == 0, e.path().filename().string() + " does not check");
  }
  o.detail = std::to_string(fixtures) + " fixtures, " + std::to_string(positive) + " positive programs" +
             (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"moebius typing and two-step evaluation", moebius},
      {"sendFives 4 builds the printed code", send_fives},
      {"main runs to completion with the expected trace", main_program},
      {"preservation and progress on the enumeration", preservation_progress},
      {"substitution principle", substitution_principle},
      {"algorithmic and declarative checkers agree", agreement},
      {"duality", duality},
      {"rejection suite and positive corpus", rejection_suite},
  };
  int failures = 0;
  int index = 0;
  for (auto& c : criteria) {
    ++index;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << index << " " << c.name;
    if (!o.detail.empty()) std::cout << " (" << o.detail << ")";
    std::cout << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
