#include "lcm/eval.hpp"

#include <cstdint>

#include "lcm/pretty.hpp"
#include "lcm/subst.hpp"

namespace lcm {

Globals globals_of(const Program& p) {
  Globals g;
  for (auto& d : p.terms) g[d.name] = d.body;
  return g;
}

namespace {

const node::Const* partial_send(const TermRef& m) {
  auto a = m->as<node::App>();
  if (!a) return nullptr;
  auto c = a->fn->as<node::Const>();
  return c && c->kind == ConstKind::Send ? c : nullptr;
}

TermRef with_child(const TermRef& parent, int slot, TermRef t) {
  Span s = parent->span;
  return std::visit(
      overloaded{
          [&](const node::App& x) {
            return make(slot == 0 ? node::App{t, x.arg} : node::App{x.fn, t}, s);
          },
          [&](const node::LetUnit& x) { return make(node::LetUnit{t, x.body}, s); },
          [&](const node::LetBox& x) { return make(node::LetBox{x.binder, x.level, t, x.body}, s); },
          [&](const node::LetPair& x) { return make(node::LetPair{x.fst, x.snd, t, x.body}, s); },
          [&](const node::Match& x) { return make(node::Match{t, x.branches}, s); },
          [&](const node::Arith& x) {
            return make(slot == 0 ? node::Arith{x.op, t, x.rhs} : node::Arith{x.op, x.lhs, t}, s);
          },
          [&](const node::Pair& x) {
            return make(slot == 0 ? node::Pair{t, x.snd} : node::Pair{x.fst, t}, s);
          },
          [&](const auto&) { return parent; },
      },
      parent->node);
}

// Finds the redex in evaluation position; null when `m` is a value.
TermRef decompose(const TermRef& m, EvalCtx& ctx) {
  TermRef cur = m;
  for (;;) {
    if (is_value(cur)) return nullptr;
    TermRef next;
    int slot = 0;
    std::visit(overloaded{
                   [&](const node::App& x) {
                     if (!is_value(x.fn)) {
                       next = x.fn;
                     } else if (!is_value(x.arg)) {
                       next = x.arg;
                       slot = 1;
                     }
                   },
                   [&](const node::LetUnit& x) {
                     if (!is_value(x.scrut)) next = x.scrut;
                   },
                   [&](const node::LetBox& x) {
                     if (!is_value(x.bound)) next = x.bound;
                   },
                   [&](const node::LetPair& x) {
                     if (!is_value(x.scrut)) next = x.scrut;
                   },
                   [&](const node::Match& x) {
                     if (!is_value(x.scrut)) next = x.scrut;
                   },
                   [&](const node::Arith& x) {
                     if (!is_value(x.lhs)) {
                       next = x.lhs;
                     } else if (!is_value(x.rhs)) {
                       next = x.rhs;
                       slot = 1;
                     }
                   },
                   [&](const node::Pair& x) {
                     if (!is_value(x.fst)) {
                       next = x.fst;
                     } else {
                       next = x.snd;
                       slot = 1;
                     }
                   },
                   [&](const auto&) {},
               },
               cur->node);
    if (!next) return cur;
    ctx.push_back(Frame{cur, slot});
    cur = next;
  }
}

std::int64_t wrap(ArithOp op, std::int64_t a, std::int64_t b) {
  auto ua = static_cast<std::uint64_t>(a);
  auto ub = static_cast<std::uint64_t>(b);
  std::uint64_t r = op == ArithOp::Add ? ua + ub : op == ArithOp::Sub ? ua - ub : ua * ub;
  return static_cast<std::int64_t>(r);
}

class Reducer {
 public:
  Reducer(const Globals& globals, EvalStats* stats) : globals_(globals), stats_(stats) {}

  // Substitutes `v` (or code `cv`) for `x` in `body`, skipping binders that
  // do not occur.
  TermRef bind(const CtxValue& cv, const std::string& x, const TermRef& body, Mult mult) {
    if (!occurs_free(x, body)) {
      if (mult == Mult::Linear && x != "_" && stats_) ++stats_->vacuous_substitutions;
      return body;
    }
    return subst(cv, x, body, names_, mult == Mult::Linear ? SubstMode::Linear : SubstMode::Shared);
  }

  StepResult contract(const EvalCtx& ctx, const TermRef& r) {
    using namespace step_result;
    auto done = [&](TermRef t, const char* rule) -> StepResult {
      return Stepped{plug(ctx, std::move(t)), rule};
    };
    auto comm = [&]() -> StepResult { return NeedsComm{ctx, r}; };
    return std::visit(
        overloaded{
            [&](const node::App& x) -> StepResult {
              if (auto lam = x.fn->as<node::Lam>())
                return done(bind(closed(x.arg), lam->binder, lam->body, lam->mult), "beta");
              const Term* head = x.fn.get();
              if (auto inner = head->as<node::App>()) head = inner->fn.get();
              if (head->is<node::Const>()) return comm();
              return Stuck{"cannot apply " + pretty(x.fn)};
            },
            [&](const node::LetUnit& x) -> StepResult {
              if (!x.scrut->is<node::Unit>()) return Stuck{"let * expects *"};
              return done(x.body, "let-unit");
            },
            [&](const node::LetBox& x) -> StepResult {
              auto b = x.bound->as<node::BoxVal>();
              if (!b) return Stuck{"let box expects a box"};
              return done(bind(b->code, x.binder, x.body, Mult::Linear), "let-box");
            },
            [&](const node::LetPair& x) -> StepResult {
              auto p = x.scrut->as<node::Pair>();
              if (!p) return Stuck{"let pair expects a pair"};
              TermRef body = bind(closed(p->snd), x.snd, x.body, Mult::Linear);
              return done(bind(closed(p->fst), x.fst, body, Mult::Linear), "let-pair");
            },
            [&](const node::Match& x) -> StepResult {
              if (x.scrut->is<node::Chan>()) return comm();
              auto k = x.scrut->as<node::IntLit>();
              if (!k) return Stuck{"match expects an integer or a channel"};
              for (auto& b : x.branches) {
                if (b.kind == PatternKind::Int && b.value == k->value) return done(b.body, "match-int");
                if (b.kind == PatternKind::Default)
                  return done(bind(closed(x.scrut), b.binder, b.body, b.mult), "match-int");
              }
              return Stuck{"no branch for " + std::to_string(k->value)};
            },
            [&](const node::Arith& x) -> StepResult {
              auto a = x.lhs->as<node::IntLit>();
              auto b = x.rhs->as<node::IntLit>();
              if (!a || !b) return Stuck{"arithmetic expects integers"};
              return done(int_lit(wrap(x.op, a->value, b->value), r->span), "arith");
            },
            [&](const node::Var& x) -> StepResult {
              auto it = globals_.find(x.name);
              if (it == globals_.end() || !x.args.empty())
                return Stuck{"free variable " + x.name};
              return done(it->second, "delta");
            },
            [&](const node::Const& x) -> StepResult {
              if (x.kind == ConstKind::New) return comm();
              return Stuck{"unexpected constant"};
            },
            [&](const auto&) -> StepResult { return Stuck{"no rule applies"}; },
        },
        r->node);
  }

 private:
  const Globals& globals_;
  EvalStats* stats_;
  NameSupply names_;
};

}  // namespace

bool is_value(const TermRef& m) {
  return std::visit(overloaded{
                        [](const node::Unit&) { return true; },
                        [](const node::IntLit&) { return true; },
                        [](const node::Lam&) { return true; },
                        [](const node::BoxVal&) { return true; },
                        [](const node::Chan&) { return true; },
                        [](const node::Pair& x) { return is_value(x.fst) && is_value(x.snd); },
                        [](const node::Const& x) { return x.kind != ConstKind::New; },
                        [&](const node::App& x) { return partial_send(m) && is_value(x.arg); },
                        [](const auto&) { return false; },
                    },
                    m->node);
}

TermRef plug(const EvalCtx& ctx, TermRef t) {
  for (std::size_t i = ctx.size(); i-- > 0;) t = with_child(ctx[i].parent, ctx[i].slot, std::move(t));
  return t;
}

StepResult step(const TermRef& m, const Globals& globals, EvalStats* stats) {
  EvalCtx ctx;
  TermRef r = decompose(m, ctx);
  if (!r) return step_result::IsValue{};
  return Reducer(globals, stats).contract(ctx, r);
}

EvalResult eval(const TermRef& m, const Globals& globals, const EvalOptions& opts, EvalStats* stats) {
  EvalResult out;
  out.term = m;
  for (;;) {
    StepResult s = step(out.term, globals, stats);
    if (std::holds_alternative<step_result::IsValue>(s)) return out;
    if (auto stuck = std::get_if<step_result::Stuck>(&s)) {
      out.status = EvalResult::Status::Stuck;
      out.reason = stuck->reason;
      return out;
    }
    if (std::holds_alternative<step_result::NeedsComm>(s)) {
      out.status = EvalResult::Status::CommRequired;
      out.reason = "session operation outside the runtime";
      return out;
    }
    if (out.steps == opts.max_steps) {
      out.status = EvalResult::Status::Timeout;
      return out;
    }
    auto& st = std::get<step_result::Stepped>(s);
    out.term = st.term;
    ++out.steps;
    if (stats) ++stats->steps;
    if (opts.on_step) opts.on_step(out.steps, st.rule, out.term);
  }
}

std::string trace_line(std::size_t k, const std::string& rule, const TermRef& t) {
  std::string text = pretty(t);
  if (text.size() > 120) text = text.substr(0, 117) + "...";
  return std::to_string(k) + ": " + rule + "  " + text;
}

}  // namespace lcm
