#include "lcm/typecheck.hpp"

#include <algorithm>

#include "lcm/subst.hpp"

namespace lcm {

bool discardable(const TypeRef& t) {
  if (t->is<ty::Unit>() || t->is<ty::Int>()) return true;
  if (auto p = t->as<ty::Prod>()) return discardable(p->fst) && discardable(p->snd);
  return false;
}

namespace {

[[noreturn]] void fail(ErrorCode code, Span span, std::string msg) {
  throw TypeError(code, span, std::move(msg));
}

bool is_wildcard(const std::string& name) { return name == "_"; }

std::string quote(const std::string& name) { return "'" + name + "'"; }

// Largest level written anywhere in a term.
unsigned max_written_level(const TermRef& m) {
  unsigned top = 0;
  auto cv = [&](const CtxValue& c) {
    for (auto& b : c.binders) top = std::max(top, b.level);
    top = std::max(top, max_written_level(c.body));
  };
  std::visit(overloaded{
                 [&](const node::Var& x) {
                   for (auto& a : x.args) cv(a);
                 },
                 [&](const node::Lam& x) { top = std::max(top, max_written_level(x.body)); },
                 [&](const node::App& x) {
                   top = std::max({top, max_written_level(x.fn), max_written_level(x.arg)});
                 },
                 [&](const node::LetUnit& x) {
                   top = std::max({top, max_written_level(x.scrut), max_written_level(x.body)});
                 },
                 [&](const node::BoxVal& x) { cv(x.code); },
                 [&](const node::LetBox& x) {
                   top = std::max({top, x.level.value_or(0), max_written_level(x.bound),
                                   max_written_level(x.body)});
                 },
                 [&](const node::Arith& x) {
                   top = std::max({top, max_written_level(x.lhs), max_written_level(x.rhs)});
                 },
                 [&](const node::Pair& x) {
                   top = std::max({top, max_written_level(x.fst), max_written_level(x.snd)});
                 },
                 [&](const node::LetPair& x) {
                   top = std::max({top, max_written_level(x.scrut), max_written_level(x.body)});
                 },
                 [&](const node::Match& x) {
                   top = std::max(top, max_written_level(x.scrut));
                   for (auto& b : x.branches) top = std::max(top, max_written_level(b.body));
                 },
                 [&](const auto&) {},
             },
             m->node);
  return top;
}

std::size_t const_arity(ConstKind k) {
  switch (k) {
    case ConstKind::Send: return 2;
    case ConstKind::New: return 0;
    default: return 1;
  }
}

std::string const_name(const node::Const& c) {
  switch (c.kind) {
    case ConstKind::Send: return "send";
    case ConstKind::Receive: return "receive";
    case ConstKind::Select: return "select " + c.label;
    case ConstKind::Close: return "close";
    case ConstKind::Wait: return "wait";
    case ConstKind::Fork: return "fork";
    case ConstKind::ForkWith: return "forkWith";
    case ConstKind::New: return "new";
  }
  return "?";
}

class Checker {
 public:
  Checker(TypingCtx& ctx, const AliasTable& aliases) : ctx_(ctx), aliases_(aliases) {}

  // Synthesizes when `expected` is null, checks otherwise.
  TypeRef go(const TermRef& m, const TypeRef& expected) {
    TypeRef got = std::visit(
        overloaded{
            [&](const node::Unit&) { return types::unit(); },
            [&](const node::IntLit&) { return types::integer(); },
            [&](const node::Var& v) { return variable(v, expected, m->span); },
            [&](const node::Lam& v) { return lambda(v, expected, m->span); },
            [&](const node::App& v) { return application(v, expected, m->span); },
            [&](const node::LetUnit& v) {
              go(v.scrut, types::unit());
              return go(v.body, expected);
            },
            [&](const node::BoxVal& v) { return boxed(v, expected, m->span); },
            [&](const node::LetBox& v) { return let_box(v, expected, m->span); },
            [&](const node::Arith& v) {
              go(v.lhs, types::integer());
              go(v.rhs, types::integer());
              return types::integer();
            },
            [&](const node::Pair& v) {
              const ty::Prod* want = expected ? expected->as<ty::Prod>() : nullptr;
              TypeRef a = go(v.fst, want ? want->fst : nullptr);
              TypeRef b = go(v.snd, want ? want->snd : nullptr);
              return types::prod(a, b);
            },
            [&](const node::LetPair& v) { return let_pair(v, expected, m->span); },
            [&](const node::Match& v) { return match(v, expected, m->span); },
            [&](const node::Const& v) { return constant(v, {}, m->span); },
            [&](const node::Chan&) -> TypeRef {
              fail(ErrorCode::TypeMismatch, m->span, "channel endpoints cannot appear in programs");
            },
        },
        m->node);
    if (expected && !type_equiv(got, expected))
      fail(ErrorCode::TypeMismatch, m->span,
           "expected " + pretty_type(expected) + ", found " + pretty_type(got));
    return got;
  }

  CtxType ctx_value(const CtxValue& cv, std::optional<unsigned> level, const CtxType* expected,
                    Span span) {
    if (expected && expected->params.size() != cv.binders.size())
      fail(ErrorCode::ArityMismatch, span,
           "contextual value binds " + std::to_string(cv.binders.size()) + " variable(s), expected " +
               std::to_string(expected->params.size()));
    unsigned n = 0;
    if (level) {
      n = *level;
    } else {
      for (auto& b : cv.binders) n = std::max(n, b.level + 1);
    }
    for (auto& b : cv.binders)
      if (b.level >= n)
        fail(ErrorCode::LevelNotBelow, span,
             "binder " + quote(b.name) + " has level " + std::to_string(b.level) +
                 ", not below the fragment level " + std::to_string(n));

    ctx_.hide_below(n, true);
    for (std::size_t i = 0; i < cv.binders.size(); ++i) {
      auto& b = cv.binders[i];
      std::optional<CtxType> t;
      if (b.annot) t = resolve_ctx_type(*b.annot, aliases_, span);
      if (expected) {
        if (b.level != expected->level(i))
          fail(ErrorCode::TypeMismatch, span,
               "binder " + quote(b.name) + " has level " + std::to_string(b.level) + " but " +
                   std::to_string(expected->level(i)) + " is expected");
        if (t && !ctx_type_equiv(*t, expected->params[i]))
          fail(ErrorCode::TypeMismatch, span,
               "binder " + quote(b.name) + " is annotated " + pretty_ctx_type(*t) + " but " +
                   pretty_ctx_type(expected->params[i]) + " is expected");
        t = expected->params[i];
      }
      ctx_.push(CtxEntry{b.name, b.level, t, Mult::Linear, false});
    }
    TypeRef result = go(cv.body, expected ? expected->result : nullptr);
    CtxType out{std::vector<CtxType>(cv.binders.size()), result, {}};
    for (std::size_t i = cv.binders.size(); i-- > 0;) {
      CtxEntry e = pop_binder(span);
      out.params[i] = *e.type;
      out.set_level(i, e.level);
    }
    ctx_.unhide();
    return out;
  }

 private:
  TypeRef resolve(const TypeRef& t, Span span) { return resolve_type(t, aliases_, span); }

  CtxEntry pop_binder(Span span) {
    CtxEntry e = ctx_.pop();
    if (e.mult == Mult::Unrestricted || e.used) return e;
    if (is_wildcard(e.name)) {
      if (!e.type)
        fail(ErrorCode::TypeMismatch, span, "cannot infer the type of a discarded binder");
      if (e.type->params.empty() && discardable(e.type->result)) return e;
    }
    fail(ErrorCode::UnusedLinear, span, "linear variable " + quote(e.name) + " is never used");
  }

  TypeRef variable(const node::Var& v, const TypeRef& expected, Span span) {
    auto idx = ctx_.lookup(v.name);
    if (!idx) fail(ErrorCode::UnknownVariable, span, "unknown variable " + quote(v.name));
    const CtxEntry& e = ctx_.at(*idx);
    if (auto h = ctx_.hider(*idx)) {
      if (h->code && e.level > 0)
        fail(ErrorCode::LevelNotBelow, span,
             "code of level " + std::to_string(h->level) + " cannot use " + quote(v.name) +
                 " of level " + std::to_string(e.level) + "; its binders must be below " +
                 std::to_string(e.level));
      fail(ErrorCode::LevelTooLow, span,
           quote(v.name) + " has level " + std::to_string(e.level) +
               " but only entries of level >= " + std::to_string(h->level) + " are visible here");
    }
    if (e.mult == Mult::Linear) {
      if (e.used) fail(ErrorCode::ReusedLinear, span, "linear variable " + quote(v.name) + " is used twice");
      ctx_.at(*idx).used = true;
    }
    if (!ctx_.at(*idx).type) {
      if (!expected)
        fail(ErrorCode::TypeMismatch, span,
             "cannot infer the type of " + quote(v.name) + "; add an annotation");
      CtxType t{{}, expected, {}};
      for (auto& a : v.args) t.params.push_back(ctx_value(a, std::nullopt, nullptr, span));
      ctx_.at(*idx).type = t;
      return expected;
    }
    CtxType t = *ctx_.at(*idx).type;
    if (t.params.size() != v.args.size())
      fail(ErrorCode::ArityMismatch, span,
           quote(v.name) + " has type " + pretty_ctx_type(t) + " and needs " +
               std::to_string(t.params.size()) + " argument(s), got " +
               std::to_string(v.args.size()));
    // An argument replaces a binder of level k, so it may only use outer
    // entries of level >= k.
    for (std::size_t i = 0; i < v.args.size(); ++i) {
      unsigned n = t.level(i);
      for (auto& b : v.args[i].binders) n = std::max(n, b.level + 1);
      ctx_value(v.args[i], n, &t.params[i], span);
    }
    return t.result;
  }

  // Checks the body of `v` with its parameter typed `dom` (null when unknown
  // until its use). Returns the parameter and body types.
  std::pair<TypeRef, TypeRef> lam_body(const node::Lam& v, TypeRef dom, const TypeRef& result,
                                       Span span) {
    if (v.annot) {
      TypeRef ann = resolve(v.annot, span);
      if (dom && !type_equiv(ann, dom))
        fail(ErrorCode::TypeMismatch, span,
             "parameter " + quote(v.binder) + " is annotated " + pretty_type(ann) + " but receives " +
                 pretty_type(dom));
      if (!dom) dom = ann;
    }
    if (v.mult == Mult::Unrestricted && (!dom || !discardable(dom)))
      fail(ErrorCode::TypeMismatch, span,
           "unrestricted parameter " + quote(v.binder) + " must have type Int or Unit");
    std::optional<CtxType> t;
    if (dom) t = types::plain(dom);
    ctx_.push(CtxEntry{v.binder, 0, t, v.mult, false});
    TypeRef r = go(v.body, result);
    CtxEntry e = pop_binder(span);
    if (!e.type)
      fail(ErrorCode::TypeMismatch, span, "cannot infer the type of " + quote(v.binder));
    if (!e.type->params.empty())
      fail(ErrorCode::ArityMismatch, span,
           "lambda-bound " + quote(v.binder) + " cannot take contextual arguments");
    return {e.type->result, r};
  }

  TypeRef lambda(const node::Lam& v, const TypeRef& expected, Span span) {
    const ty::Arrow* arrow = nullptr;
    if (expected) {
      TypeRef want = unfold_head(expected);
      arrow = want->as<ty::Arrow>();
      if (!arrow)
        fail(ErrorCode::TypeMismatch, span, "expected " + pretty_type(expected) + ", found a function");
    }
    auto [dom, res] = lam_body(v, arrow ? arrow->from : nullptr, arrow ? arrow->to : nullptr, span);
    return types::arrow(dom, res);
  }

  TypeRef application(const node::App& v, const TypeRef& expected, Span span) {
    std::vector<TermRef> args{v.arg};
    TermRef head = v.fn;
    while (auto a = head->as<node::App>()) {
      args.push_back(a->arg);
      head = a->fn;
    }
    std::reverse(args.begin(), args.end());
    if (auto c = head->as<node::Const>()) return constant(*c, args, span);

    if (auto l = v.fn->as<node::Lam>(); l && !l->annot) {
      TypeRef a = go(v.arg, nullptr);
      return lam_body(*l, a, expected, v.fn->span).second;
    }
    TypeRef ft = unfold_head(go(v.fn, nullptr));
    auto arrow = ft->as<ty::Arrow>();
    if (!arrow)
      fail(ErrorCode::TypeMismatch, span, "cannot apply a term of type " + pretty_type(ft));
    go(v.arg, arrow->from);
    return arrow->to;
  }

  TypeRef boxed(const node::BoxVal& v, const TypeRef& expected, Span span) {
    if (!expected) return types::box(ctx_value(v.code, std::nullopt, nullptr, span));
    TypeRef want = unfold_head(expected);
    auto b = want->as<ty::Box>();
    if (!b) fail(ErrorCode::TypeMismatch, span, "expected " + pretty_type(expected) + ", found a box");
    return types::box(ctx_value(v.code, std::nullopt, &b->ctx, span));
  }

  // The highest level the bound term's free linear entries allow; it leaves
  // the unboxed variable visible to the most code in the body.
  unsigned infer_box_level(const node::LetBox& v) {
    unsigned n = 1 + std::max(max_written_level(v.bound), max_written_level(v.body));
    for (auto& e : ctx_.entries()) n = std::max(n, e.level + 1);
    for (auto& x : free_vars(v.bound)) {
      auto i = ctx_.lookup(x);
      if (!i) continue;
      auto& e = ctx_.at(*i);
      if (e.live() && !ctx_.hidden(*i)) n = std::min(n, e.level);
    }
    return n;
  }

  TypeRef let_box(const node::LetBox& v, const TypeRef& expected, Span span) {
    unsigned n = v.level ? *v.level : infer_box_level(v);
    ctx_.hide_below(n);
    TypeRef bt = unfold_head(go(v.bound, nullptr));
    ctx_.unhide();
    auto b = bt->as<ty::Box>();
    if (!b) fail(ErrorCode::TypeMismatch, v.bound->span, "let box expects a box, found " + pretty_type(bt));
    ctx_.push(CtxEntry{v.binder, n, b->ctx, Mult::Linear, false});
    TypeRef r = go(v.body, expected);
    pop_binder(span);
    return r;
  }

  TypeRef let_pair(const node::LetPair& v, const TypeRef& expected, Span span) {
    TypeRef st = unfold_head(go(v.scrut, nullptr));
    auto p = st->as<ty::Prod>();
    if (!p) fail(ErrorCode::TypeMismatch, v.scrut->span, "expected a pair, found " + pretty_type(st));
    ctx_.push(CtxEntry{v.fst, 0, types::plain(p->fst), Mult::Linear, false});
    ctx_.push(CtxEntry{v.snd, 0, types::plain(p->snd), Mult::Linear, false});
    TypeRef r = go(v.body, expected);
    pop_binder(span);
    pop_binder(span);
    return r;
  }

  TypeRef match(const node::Match& v, const TypeRef& expected, Span span) {
    bool labelled = std::any_of(v.branches.begin(), v.branches.end(),
                                [](const MatchBranch& b) { return b.kind == PatternKind::Label; });
    const Branches* choices = nullptr;
    TypeRef scrut_type;
    if (labelled) {
      scrut_type = unfold_head(go(v.scrut, nullptr));
      auto b = scrut_type->as<ty::Branch>();
      if (!b)
        fail(ErrorCode::TypeMismatch, v.scrut->span,
             "matching on labels needs an external choice, found " + pretty_type(scrut_type));
      choices = &b->branches;
      std::set<std::string> seen;
      for (auto& br : v.branches) {
        if (br.kind != PatternKind::Label)
          fail(ErrorCode::TypeMismatch, br.body->span, "label and integer patterns cannot be mixed");
        if (!choices->count(br.label))
          fail(ErrorCode::UnknownLabel, br.body->span,
               "label " + br.label + " is not offered by " + pretty_type(scrut_type));
        if (!seen.insert(br.label).second)
          fail(ErrorCode::TypeMismatch, br.body->span, "label " + br.label + " is matched twice");
      }
      for (auto& [label, _] : *choices)
        if (!seen.count(label)) fail(ErrorCode::TypeMismatch, span, "no branch for label " + label);
    } else {
      go(v.scrut, types::integer());
      std::size_t defaults = 0;
      for (auto& br : v.branches) defaults += br.kind == PatternKind::Default;
      if (defaults != 1 || v.branches.back().kind != PatternKind::Default)
        fail(ErrorCode::TypeMismatch, span, "integer match needs exactly one final catch-all branch");
    }

    std::vector<bool> before;
    for (auto& e : ctx_.entries()) before.push_back(e.used);
    std::vector<bool> first_used;
    TypeRef result = expected;
    for (std::size_t i = 0; i < v.branches.size(); ++i) {
      auto& br = v.branches[i];
      for (std::size_t j = 0; j < before.size(); ++j) ctx_.at(j).used = before[j];
      bool binds = br.kind != PatternKind::Int;
      if (br.kind == PatternKind::Label)
        ctx_.push(CtxEntry{br.binder, 0, types::plain(choices->at(br.label)), Mult::Linear, false});
      else if (br.kind == PatternKind::Default)
        ctx_.push(CtxEntry{br.binder, 0, types::plain(types::integer()), br.mult, false});
      TypeRef t = go(br.body, result);
      if (binds) pop_binder(br.body->span);
      if (!result) result = t;
      std::vector<bool> used;
      for (auto& e : ctx_.entries()) used.push_back(e.used);
      if (i == 0) {
        first_used = used;
        continue;
      }
      for (std::size_t j = 0; j < used.size(); ++j)
        if (used[j] != first_used[j])
          fail(ErrorCode::UnusedLinear, br.body->span,
               "linear variable " + quote(ctx_.at(j).name) +
                   " is consumed by some branches of the match but not by others");
    }
    for (std::size_t j = 0; j < first_used.size(); ++j) ctx_.at(j).used = first_used[j];
    return result;
  }

  TypeRef session_of(const TermRef& m) { return unfold_head(go(m, nullptr)); }

  TypeRef dual_at(const TypeRef& s, Span span) {
    try {
      return dual(s);
    } catch (const TypeError& e) {
      fail(e.code(), span, e.what());
    }
  }

  [[noreturn]] void wrong_channel(const node::Const& c, const TypeRef& t, Span span) {
    fail(ErrorCode::TypeMismatch, span, const_name(c) + " cannot act on a channel of type " + pretty_type(t));
  }

  // The function's result type when it is applied to `dom`.
  TypeRef apply_to_domain(const TermRef& f, const TypeRef& dom) {
    if (auto l = f->as<node::Lam>(); l && !l->annot) return lam_body(*l, dom, nullptr, f->span).second;
    TypeRef ft = unfold_head(go(f, nullptr));
    auto arrow = ft->as<ty::Arrow>();
    if (!arrow || !type_equiv(arrow->from, dom))
      fail(ErrorCode::TypeMismatch, f->span,
           "expected a function from " + pretty_type(dom) + ", found " + pretty_type(ft));
    return arrow->to;
  }

  TypeRef constant(const node::Const& c, const std::vector<TermRef>& args, Span span) {
    std::size_t arity = const_arity(c.kind);
    if (args.size() < arity)
      fail(ErrorCode::TypeMismatch, span,
           const_name(c) + " must be applied to " + std::to_string(arity) + " argument(s)");
    TypeRef out;
    switch (c.kind) {
      case ConstKind::Send: {
        TypeRef s = session_of(args[1]);
        auto op = s->as<ty::Send>();
        if (!op) wrong_channel(c, s, args[1]->span);
        go(args[0], op->payload);
        out = op->cont;
        break;
      }
      case ConstKind::Receive: {
        TypeRef s = session_of(args[0]);
        auto op = s->as<ty::Recv>();
        if (!op) wrong_channel(c, s, args[0]->span);
        out = types::prod(op->payload, op->cont);
        break;
      }
      case ConstKind::Select: {
        TypeRef s = session_of(args[0]);
        auto op = s->as<ty::Select>();
        if (!op) wrong_channel(c, s, args[0]->span);
        auto it = op->branches.find(c.label);
        if (it == op->branches.end())
          fail(ErrorCode::UnknownLabel, span, "label " + c.label + " is not offered by " + pretty_type(s));
        out = it->second;
        break;
      }
      case ConstKind::Close:
      case ConstKind::Wait: {
        TypeRef s = session_of(args[0]);
        bool ok = c.kind == ConstKind::Close ? s->is<ty::Close>() : s->is<ty::Wait>();
        if (!ok) wrong_channel(c, s, args[0]->span);
        out = types::unit();
        break;
      }
      case ConstKind::Fork:
        go(args[0], types::arrow(types::unit(), types::unit()));
        out = types::unit();
        break;
      case ConstKind::ForkWith: {
        TypeRef r = unfold_head(apply_to_domain(args[0], types::unit()));
        auto arrow = r->as<ty::Arrow>();
        if (!arrow || !is_session(*arrow->from) || !type_equiv(arrow->to, types::unit()))
          fail(ErrorCode::TypeMismatch, args[0]->span,
               "forkWith expects a function of type Unit -o S -o Unit, found one returning " +
                   pretty_type(r));
        out = dual_at(arrow->from, span);
        break;
      }
      case ConstKind::New: {
        TypeRef s = resolve(c.session, span);
        if (!is_session(*s)) fail(ErrorCode::TypeMismatch, span, "new expects a session type, found " + pretty_type(s));
        out = types::prod(s, dual_at(s, span));
        break;
      }
    }
    for (std::size_t i = arity; i < args.size(); ++i) {
      auto arrow = unfold_head(out)->as<ty::Arrow>();
      if (!arrow) fail(ErrorCode::TypeMismatch, span, "cannot apply a term of type " + pretty_type(out));
      go(args[i], arrow->from);
      out = arrow->to;
    }
    return out;
  }

  TypingCtx& ctx_;
  const AliasTable& aliases_;
};

}  // namespace

TypeRef check_term(TypingCtx& ctx, const TermRef& m, const AliasTable& aliases) {
  return Checker(ctx, aliases).go(m, nullptr);
}

void check_term_against(TypingCtx& ctx, const TermRef& m, const TypeRef& expected,
                        const AliasTable& aliases) {
  Checker(ctx, aliases).go(m, expected);
}

CtxType check_ctx_value(TypingCtx& ctx, const CtxValue& cv, std::optional<unsigned> level,
                        const CtxType* expected, const AliasTable& aliases) {
  return Checker(ctx, aliases).ctx_value(cv, level, expected, cv.body ? cv.body->span : Span{});
}

// ----------------------------------------------------------------------------
// Programs

namespace {

bool mentions(const TypeRef& t, const std::set<std::string>& names) {
  if (!t) return false;
  return std::visit(overloaded{
                        [&](const ty::Named& x) { return names.count(x.name) > 0; },
                        [&](const ty::Arrow& x) { return mentions(x.from, names) || mentions(x.to, names); },
                        [&](const ty::Prod& x) { return mentions(x.fst, names) || mentions(x.snd, names); },
                        [&](const ty::Box& x) {
                          std::vector<const CtxType*> todo{&x.ctx};
                          while (!todo.empty()) {
                            const CtxType* c = todo.back();
                            todo.pop_back();
                            if (mentions(c->result, names)) return true;
                            for (auto& p : c->params) todo.push_back(&p);
                          }
                          return false;
                        },
                        [&](const ty::Send& x) { return mentions(x.payload, names) || mentions(x.cont, names); },
                        [&](const ty::Recv& x) { return mentions(x.payload, names) || mentions(x.cont, names); },
                        [&](const ty::Select& x) {
                          return std::any_of(x.branches.begin(), x.branches.end(),
                                             [&](auto& b) { return mentions(b.second, names); });
                        },
                        [&](const ty::Branch& x) {
                          return std::any_of(x.branches.begin(), x.branches.end(),
                                             [&](auto& b) { return mentions(b.second, names); });
                        },
                        [&](const ty::Mu& x) { return mentions(x.body, names); },
                        [&](const ty::Dual& x) { return mentions(x.of, names); },
                        [&](const auto&) { return false; },
                    },
                    t->node);
}

}  // namespace

TypingCtx CheckedProgram::globals() const {
  TypingCtx ctx;
  for (auto& [name, t] : signatures)
    ctx.push(CtxEntry{name, 0, types::plain(t), Mult::Unrestricted, false});
  return ctx;
}

CheckedProgram check_program(const Program& p) {
  CheckedProgram out;
  AliasTable raw;
  for (auto& d : p.types) {
    if (raw.count(d.name))
      out.errors.emplace_back(ErrorCode::TypeMismatch, d.span, "type " + d.name + " is declared twice");
    raw[d.name] = d.body;
  }
  std::set<std::string> broken;
  for (auto& d : p.types) {
    try {
      resolve_type(types::named(d.name), raw, d.span);
    } catch (const TypeError& e) {
      out.errors.push_back(e);
      broken.insert(d.name);
    }
  }
  for (auto& [name, body] : raw)
    if (!broken.count(name)) out.aliases.emplace(name, body);

  for (auto& d : p.terms) {
    if (mentions(d.type, broken)) continue;
    try {
      out.signatures[d.name] = resolve_type(d.type, out.aliases, d.span);
    } catch (const TypeError& e) {
      out.errors.push_back(e);
    }
  }

  TypingCtx globals = out.globals();
  for (auto& d : p.terms) {
    auto it = out.signatures.find(d.name);
    if (it == out.signatures.end()) continue;
    TypingCtx ctx = globals;
    try {
      check_term_against(ctx, d.body, it->second, out.aliases);
    } catch (const TypeError& e) {
      out.errors.push_back(e);
    }
  }
  std::stable_sort(out.errors.begin(), out.errors.end(),
                   [](const TypeError& a, const TypeError& b) { return a.span() < b.span(); });
  return out;
}

}  // namespace lcm
