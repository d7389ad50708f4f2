#include "lcm/subst.hpp"

#include <algorithm>

namespace lcm {

std::string NameSupply::fresh(const std::string& base, const std::set<std::string>& avoid) {
  std::string stem = base.substr(0, base.find('$'));
  for (;;) {
    std::string cand = stem + "$" + std::to_string(next_++);
    if (!avoid.count(cand)) return cand;
  }
}

// ----------------------------------------------------------------------------
// Free variables

namespace {

void collect_free(const TermRef& m, std::set<std::string>& out);

void collect_free(const CtxValue& cv, std::set<std::string>& out) {
  std::set<std::string> inner;
  collect_free(cv.body, inner);
  for (auto& b : cv.binders) inner.erase(b.name);
  out.insert(inner.begin(), inner.end());
}

void collect_scoped(const TermRef& m, std::initializer_list<std::string> bound,
                    std::set<std::string>& out) {
  std::set<std::string> inner;
  collect_free(m, inner);
  for (auto& b : bound) inner.erase(b);
  out.insert(inner.begin(), inner.end());
}

void collect_free(const TermRef& m, std::set<std::string>& out) {
  std::visit(overloaded{
                 [&](const node::Var& x) {
                   out.insert(x.name);
                   for (auto& a : x.args) collect_free(a, out);
                 },
                 [&](const node::Lam& x) { collect_scoped(x.body, {x.binder}, out); },
                 [&](const node::App& x) {
                   collect_free(x.fn, out);
                   collect_free(x.arg, out);
                 },
                 [&](const node::LetUnit& x) {
                   collect_free(x.scrut, out);
                   collect_free(x.body, out);
                 },
                 [&](const node::BoxVal& x) { collect_free(x.code, out); },
                 [&](const node::LetBox& x) {
                   collect_free(x.bound, out);
                   collect_scoped(x.body, {x.binder}, out);
                 },
                 [&](const node::Arith& x) {
                   collect_free(x.lhs, out);
                   collect_free(x.rhs, out);
                 },
                 [&](const node::Pair& x) {
                   collect_free(x.fst, out);
                   collect_free(x.snd, out);
                 },
                 [&](const node::LetPair& x) {
                   collect_free(x.scrut, out);
                   collect_scoped(x.body, {x.fst, x.snd}, out);
                 },
                 [&](const node::Match& x) {
                   collect_free(x.scrut, out);
                   for (auto& b : x.branches) {
                     if (b.kind == PatternKind::Int)
                       collect_free(b.body, out);
                     else
                       collect_scoped(b.body, {b.binder}, out);
                   }
                 },
                 [&](const auto&) {},
             },
             m->node);
}

void collect_all_names(const TermRef& m, std::set<std::string>& out);

void collect_all_names(const CtxValue& cv, std::set<std::string>& out) {
  for (auto& b : cv.binders) out.insert(b.name);
  collect_all_names(cv.body, out);
}

void collect_all_names(const TermRef& m, std::set<std::string>& out) {
  std::visit(overloaded{
                 [&](const node::Var& x) {
                   out.insert(x.name);
                   for (auto& a : x.args) collect_all_names(a, out);
                 },
                 [&](const node::Lam& x) {
                   out.insert(x.binder);
                   collect_all_names(x.body, out);
                 },
                 [&](const node::App& x) {
                   collect_all_names(x.fn, out);
                   collect_all_names(x.arg, out);
                 },
                 [&](const node::LetUnit& x) {
                   collect_all_names(x.scrut, out);
                   collect_all_names(x.body, out);
                 },
                 [&](const node::BoxVal& x) { collect_all_names(x.code, out); },
                 [&](const node::LetBox& x) {
                   out.insert(x.binder);
                   collect_all_names(x.bound, out);
                   collect_all_names(x.body, out);
                 },
                 [&](const node::Arith& x) {
                   collect_all_names(x.lhs, out);
                   collect_all_names(x.rhs, out);
                 },
                 [&](const node::Pair& x) {
                   collect_all_names(x.fst, out);
                   collect_all_names(x.snd, out);
                 },
                 [&](const node::LetPair& x) {
                   out.insert(x.fst);
                   out.insert(x.snd);
                   collect_all_names(x.scrut, out);
                   collect_all_names(x.body, out);
                 },
                 [&](const node::Match& x) {
                   collect_all_names(x.scrut, out);
                   for (auto& b : x.branches) {
                     if (!b.binder.empty()) out.insert(b.binder);
                     collect_all_names(b.body, out);
                   }
                 },
                 [&](const auto&) {},
             },
             m->node);
}

}  // namespace

std::set<std::string> free_vars(const TermRef& m) {
  std::set<std::string> out;
  collect_free(m, out);
  return out;
}

std::set<std::string> free_vars(const CtxValue& cv) {
  std::set<std::string> out;
  collect_free(cv, out);
  return out;
}

bool occurs_free(const std::string& x, const TermRef& m) { return free_vars(m).count(x) > 0; }

// ----------------------------------------------------------------------------
// Renaming

namespace {

CtxValue rename_cv(const CtxValue& cv, const std::string& from, const std::string& to) {
  for (auto& b : cv.binders)
    if (b.name == from) return cv;
  return CtxValue{cv.binders, rename_free(cv.body, from, to)};
}

}  // namespace

TermRef rename_free(const TermRef& m, const std::string& from, const std::string& to) {
  auto r = [&](const TermRef& t) { return rename_free(t, from, to); };
  auto scoped = [&](const TermRef& t, std::initializer_list<std::string> bound) {
    for (auto& b : bound)
      if (b == from) return t;
    return r(t);
  };
  Span s = m->span;
  return std::visit(
      overloaded{
          [&](const node::Var& x) -> TermRef {
            node::Var out{x.name == from ? to : x.name, {}};
            for (auto& a : x.args) out.args.push_back(rename_cv(a, from, to));
            return make(std::move(out), s);
          },
          [&](const node::Lam& x) -> TermRef {
            return make(node::Lam{x.binder, x.mult, x.annot, scoped(x.body, {x.binder})}, s);
          },
          [&](const node::App& x) -> TermRef { return make(node::App{r(x.fn), r(x.arg)}, s); },
          [&](const node::LetUnit& x) -> TermRef {
            return make(node::LetUnit{r(x.scrut), r(x.body)}, s);
          },
          [&](const node::BoxVal& x) -> TermRef {
            return make(node::BoxVal{rename_cv(x.code, from, to)}, s);
          },
          [&](const node::LetBox& x) -> TermRef {
            return make(node::LetBox{x.binder, x.level, r(x.bound), scoped(x.body, {x.binder})}, s);
          },
          [&](const node::Arith& x) -> TermRef {
            return make(node::Arith{x.op, r(x.lhs), r(x.rhs)}, s);
          },
          [&](const node::Pair& x) -> TermRef { return make(node::Pair{r(x.fst), r(x.snd)}, s); },
          [&](const node::LetPair& x) -> TermRef {
            return make(node::LetPair{x.fst, x.snd, r(x.scrut), scoped(x.body, {x.fst, x.snd})}, s);
          },
          [&](const node::Match& x) -> TermRef {
            node::Match out{r(x.scrut), x.branches};
            for (auto& b : out.branches)
              b.body = b.kind == PatternKind::Int ? r(b.body) : scoped(b.body, {b.binder});
            return make(std::move(out), s);
          },
          [&](const auto&) -> TermRef { return m; },
      },
      m->node);
}

// ----------------------------------------------------------------------------
// Substitution

namespace {

class Substituter {
 public:
  Substituter(const CtxValue& sigma, std::string x, NameSupply& names, SubstMode mode)
      : sigma_(sigma), x_(std::move(x)), names_(names), mode_(mode), sigma_fv_(free_vars(sigma)) {}

  TermRef go(const TermRef& m) {
    if (!occurs_free(x_, m)) return m;
    Span s = m->span;
    return std::visit(
        overloaded{
            [&](const node::Var& v) -> TermRef { return applied(v, s); },
            [&](const node::Lam& v) -> TermRef {
              auto [y, body] = under(v.binder, v.body);
              return make(node::Lam{y, v.mult, v.annot, body}, s);
            },
            [&](const node::App& v) -> TermRef {
              auto [f, a] = two(v.fn, v.arg);
              return make(node::App{f, a}, s);
            },
            [&](const node::LetUnit& v) -> TermRef {
              auto [a, b] = two(v.scrut, v.body);
              return make(node::LetUnit{a, b}, s);
            },
            [&](const node::BoxVal& v) -> TermRef { return make(node::BoxVal{go(v.code)}, s); },
            [&](const node::LetBox& v) -> TermRef {
              check_two(occurs_free(x_, v.bound), binds_free(v.body, {v.binder}));
              auto bound = go(v.bound);
              auto [y, body] = under(v.binder, v.body);
              return make(node::LetBox{y, v.level, bound, body}, s);
            },
            [&](const node::Arith& v) -> TermRef {
              auto [a, b] = two(v.lhs, v.rhs);
              return make(node::Arith{v.op, a, b}, s);
            },
            [&](const node::Pair& v) -> TermRef {
              auto [a, b] = two(v.fst, v.snd);
              return make(node::Pair{a, b}, s);
            },
            [&](const node::LetPair& v) -> TermRef {
              check_two(occurs_free(x_, v.scrut), binds_free(v.body, {v.fst, v.snd}));
              auto scrut = go(v.scrut);
              if (v.fst == x_ || v.snd == x_) return make(node::LetPair{v.fst, v.snd, scrut, v.body}, s);
              auto [y1, body1] = rename_if_clash(v.fst, v.body);
              auto [y2, body2] = rename_if_clash(v.snd, body1);
              return make(node::LetPair{y1, y2, scrut, go(body2)}, s);
            },
            [&](const node::Match& v) -> TermRef {
              bool in_branches = false;
              for (auto& b : v.branches)
                in_branches = in_branches || (b.kind == PatternKind::Int ? occurs_free(x_, b.body)
                                                                         : binds_free(b.body, {b.binder}));
              check_two(occurs_free(x_, v.scrut), in_branches);
              node::Match out{go(v.scrut), v.branches};
              for (auto& b : out.branches) {
                if (b.kind == PatternKind::Int) {
                  b.body = go(b.body);
                } else {
                  auto [y, body] = under(b.binder, b.body);
                  b.binder = y;
                  b.body = body;
                }
              }
              return make(std::move(out), s);
            },
            [&](const auto&) -> TermRef { return m; },
        },
        m->node);
  }

  CtxValue go(const CtxValue& cv) {
    for (auto& b : cv.binders)
      if (b.name == x_) return cv;
    CtxValue out = cv;
    for (auto& b : out.binders) {
      auto [y, body] = rename_if_clash(b.name, out.body);
      b.name = y;
      out.body = body;
    }
    out.body = go(out.body);
    return out;
  }

 private:
  TermRef applied(const node::Var& v, Span s) {
    std::size_t hits = 0;
    for (auto& a : v.args)
      if (free_vars(a).count(x_)) ++hits;
    if (mode_ == SubstMode::Linear && (hits > 1 || (hits == 1 && v.name == x_)))
      throw SubstError(SubstError::Kind::AmbiguousOccurrence,
                       "'" + x_ + "' occurs in more than one argument position");
    std::vector<CtxValue> args;
    for (auto& a : v.args) args.push_back(go(a));
    if (v.name != x_) return make(node::Var{v.name, std::move(args)}, s);
    if (args.size() != sigma_.binders.size())
      throw SubstError(SubstError::Kind::ArityMismatch,
                       "'" + x_ + "' expects " + std::to_string(sigma_.binders.size()) +
                           " argument(s), got " + std::to_string(args.size()));
    std::vector<std::string> zs;
    for (auto& b : sigma_.binders) zs.push_back(b.name);
    return simul_subst(args, zs, sigma_.body, names_, mode_);
  }

  bool binds_free(const TermRef& body, std::initializer_list<std::string> bound) {
    for (auto& b : bound)
      if (b == x_) return false;
    return occurs_free(x_, body);
  }

  void check_two(bool left, bool right) {
    if (mode_ == SubstMode::Linear && left && right)
      throw SubstError(SubstError::Kind::AmbiguousOccurrence,
                       "'" + x_ + "' occurs in both premises of an eliminator");
  }

  std::pair<TermRef, TermRef> two(const TermRef& a, const TermRef& b) {
    check_two(occurs_free(x_, a), occurs_free(x_, b));
    return {go(a), go(b)};
  }

  std::pair<std::string, TermRef> rename_if_clash(const std::string& y, const TermRef& body) {
    if (!sigma_fv_.count(y)) return {y, body};
    std::set<std::string> avoid = sigma_fv_;
    collect_all_names(body, avoid);
    avoid.insert(x_);
    std::string fresh = names_.fresh(y, avoid);
    return {fresh, rename_free(body, y, fresh)};
  }

  std::pair<std::string, TermRef> under(const std::string& y, const TermRef& body) {
    if (y == x_) return {y, body};
    auto [y2, body2] = rename_if_clash(y, body);
    return {y2, go(body2)};
  }

  const CtxValue& sigma_;
  std::string x_;
  NameSupply& names_;
  SubstMode mode_;
  std::set<std::string> sigma_fv_;
};

}  // namespace

TermRef subst(const CtxValue& sigma, const std::string& x, const TermRef& m, NameSupply& names,
              SubstMode mode) {
  return Substituter(sigma, x, names, mode).go(m);
}

TermRef subst(const CtxValue& sigma, const std::string& x, const TermRef& m, SubstMode mode) {
  NameSupply names;
  return subst(sigma, x, m, names, mode);
}

TermRef simul_subst(const std::vector<CtxValue>& args, const std::vector<std::string>& binders,
                    const TermRef& m, NameSupply& names, SubstMode mode) {
  if (args.size() != binders.size())
    throw SubstError(SubstError::Kind::ArityMismatch,
                     "expected " + std::to_string(binders.size()) + " argument(s), got " +
                         std::to_string(args.size()));
  std::set<std::string> arg_fv;
  for (auto& a : args) collect_free(a, arg_fv);
  std::set<std::string> avoid = arg_fv;
  collect_all_names(m, avoid);
  avoid.insert(binders.begin(), binders.end());

  TermRef body = m;
  std::vector<std::string> zs = binders;
  for (auto& z : zs) {
    if (!arg_fv.count(z)) continue;
    std::string fresh = names.fresh(z, avoid);
    avoid.insert(fresh);
    body = rename_free(body, z, fresh);
    z = fresh;
  }
  for (std::size_t i = 0; i < zs.size(); ++i)
    if (occurs_free(zs[i], body)) body = subst(args[i], zs[i], body, names, mode);
  return body;
}

TermRef simul_subst(const std::vector<CtxValue>& args, const std::vector<std::string>& binders,
                    const TermRef& m, SubstMode mode) {
  NameSupply names;
  return simul_subst(args, binders, m, names, mode);
}

// ----------------------------------------------------------------------------
// Alpha equivalence

namespace {

bool same_annot(const TypeRef& a, const TypeRef& b) {
  if (!a || !b) return !a && !b;
  return same_type(a, b);
}

class Alpha {
 public:
  bool term(const TermRef& a, const TermRef& b) {
    if (a->node.index() != b->node.index()) return false;
    return std::visit(
        overloaded{
            [&](const node::Unit&) { return true; },
            [&](const node::IntLit& x) { return x.value == b->as<node::IntLit>()->value; },
            [&](const node::Var& x) {
              auto& y = *b->as<node::Var>();
              if (!same_var(x.name, y.name) || x.args.size() != y.args.size()) return false;
              for (std::size_t i = 0; i < x.args.size(); ++i)
                if (!ctx_value(x.args[i], y.args[i])) return false;
              return true;
            },
            [&](const node::Lam& x) {
              auto& y = *b->as<node::Lam>();
              return x.mult == y.mult && same_annot(x.annot, y.annot) &&
                     scoped({{x.binder, y.binder}}, x.body, y.body);
            },
            [&](const node::App& x) {
              auto& y = *b->as<node::App>();
              return term(x.fn, y.fn) && term(x.arg, y.arg);
            },
            [&](const node::LetUnit& x) {
              auto& y = *b->as<node::LetUnit>();
              return term(x.scrut, y.scrut) && term(x.body, y.body);
            },
            [&](const node::BoxVal& x) { return ctx_value(x.code, b->as<node::BoxVal>()->code); },
            [&](const node::LetBox& x) {
              auto& y = *b->as<node::LetBox>();
              return x.level == y.level && term(x.bound, y.bound) &&
                     scoped({{x.binder, y.binder}}, x.body, y.body);
            },
            [&](const node::Arith& x) {
              auto& y = *b->as<node::Arith>();
              return x.op == y.op && term(x.lhs, y.lhs) && term(x.rhs, y.rhs);
            },
            [&](const node::Pair& x) {
              auto& y = *b->as<node::Pair>();
              return term(x.fst, y.fst) && term(x.snd, y.snd);
            },
            [&](const node::LetPair& x) {
              auto& y = *b->as<node::LetPair>();
              return term(x.scrut, y.scrut) &&
                     scoped({{x.fst, y.fst}, {x.snd, y.snd}}, x.body, y.body);
            },
            [&](const node::Match& x) {
              auto& y = *b->as<node::Match>();
              if (!term(x.scrut, y.scrut) || x.branches.size() != y.branches.size()) return false;
              for (std::size_t i = 0; i < x.branches.size(); ++i) {
                auto& p = x.branches[i];
                auto& q = y.branches[i];
                if (p.kind != q.kind || p.label != q.label || p.value != q.value || p.mult != q.mult)
                  return false;
                bool ok = p.kind == PatternKind::Int ? term(p.body, q.body)
                                                     : scoped({{p.binder, q.binder}}, p.body, q.body);
                if (!ok) return false;
              }
              return true;
            },
            [&](const node::Const& x) {
              auto& y = *b->as<node::Const>();
              return x.kind == y.kind && x.label == y.label && same_annot(x.session, y.session);
            },
            [&](const node::Chan& x) { return x.endpoint == b->as<node::Chan>()->endpoint; },
        },
        a->node);
  }

  bool ctx_value(const CtxValue& a, const CtxValue& b) {
    if (a.binders.size() != b.binders.size()) return false;
    std::vector<std::pair<std::string, std::string>> bound;
    for (std::size_t i = 0; i < a.binders.size(); ++i) {
      auto& p = a.binders[i];
      auto& q = b.binders[i];
      if (p.level != q.level || p.annot.has_value() != q.annot.has_value()) return false;
      if (p.annot && !same_ctx_type(*p.annot, *q.annot)) return false;
      bound.emplace_back(p.name, q.name);
    }
    return scoped(bound, a.body, b.body);
  }

 private:
  bool scoped(const std::vector<std::pair<std::string, std::string>>& bound, const TermRef& a,
              const TermRef& b) {
    for (auto& p : bound) env_.push_back(p);
    bool ok = term(a, b);
    env_.resize(env_.size() - bound.size());
    return ok;
  }

  bool same_var(const std::string& a, const std::string& b) const {
    long ia = -1, ib = -1;
    for (long i = static_cast<long>(env_.size()) - 1; i >= 0; --i) {
      if (ia < 0 && env_[i].first == a) ia = i;
      if (ib < 0 && env_[i].second == b) ib = i;
    }
    return ia == ib && (ia >= 0 || a == b);
  }

  std::vector<std::pair<std::string, std::string>> env_;
};

}  // namespace

bool alpha_equiv(const TermRef& a, const TermRef& b) { return Alpha().term(a, b); }
bool alpha_equiv(const CtxValue& a, const CtxValue& b) { return Alpha().ctx_value(a, b); }

std::size_t term_size(const TermRef& m) {
  std::size_t n = 1;
  auto cv = [&](const CtxValue& c) { n += term_size(c.body); };
  std::visit(overloaded{
                 [&](const node::Var& x) {
                   for (auto& a : x.args) cv(a);
                 },
                 [&](const node::Lam& x) { n += term_size(x.body); },
                 [&](const node::App& x) { n += term_size(x.fn) + term_size(x.arg); },
                 [&](const node::LetUnit& x) { n += term_size(x.scrut) + term_size(x.body); },
                 [&](const node::BoxVal& x) { cv(x.code); },
                 [&](const node::LetBox& x) { n += term_size(x.bound) + term_size(x.body); },
                 [&](const node::Arith& x) { n += term_size(x.lhs) + term_size(x.rhs); },
                 [&](const node::Pair& x) { n += term_size(x.fst) + term_size(x.snd); },
                 [&](const node::LetPair& x) { n += term_size(x.scrut) + term_size(x.body); },
                 [&](const node::Match& x) {
                   n += term_size(x.scrut);
                   for (auto& b : x.branches) n += term_size(b.body);
                 },
                 [&](const auto&) {},
             },
             m->node);
  return n;
}

}  // namespace lcm
