#include "lcm/types.hpp"

#include <algorithm>
#include <utility>

namespace lcm {

namespace types {
namespace {
TypeRef mk(Type::Node n) { return std::make_shared<const Type>(Type{std::move(n)}); }
}  // namespace

TypeRef unit() {
  static const TypeRef t = mk(ty::Unit{});
  return t;
}
TypeRef integer() {
  static const TypeRef t = mk(ty::Int{});
  return t;
}
TypeRef arrow(TypeRef a, TypeRef b) { return mk(ty::Arrow{std::move(a), std::move(b)}); }
TypeRef prod(TypeRef a, TypeRef b) { return mk(ty::Prod{std::move(a), std::move(b)}); }
TypeRef box(CtxType c) { return mk(ty::Box{std::move(c)}); }
TypeRef send(TypeRef p, TypeRef c) { return mk(ty::Send{std::move(p), std::move(c)}); }
TypeRef recv(TypeRef p, TypeRef c) { return mk(ty::Recv{std::move(p), std::move(c)}); }
TypeRef select(Branches b) { return mk(ty::Select{std::move(b)}); }
TypeRef branch(Branches b) { return mk(ty::Branch{std::move(b)}); }
TypeRef close() {
  static const TypeRef t = mk(ty::Close{});
  return t;
}
TypeRef wait() {
  static const TypeRef t = mk(ty::Wait{});
  return t;
}
TypeRef mu(std::string v, TypeRef body) { return mk(ty::Mu{std::move(v), std::move(body)}); }
TypeRef var(std::string name) { return mk(ty::Var{std::move(name)}); }
TypeRef named(std::string name) { return mk(ty::Named{std::move(name)}); }
TypeRef dual(TypeRef of) { return mk(ty::Dual{std::move(of)}); }
CtxType plain(TypeRef t) { return CtxType{{}, std::move(t), {}}; }
}  // namespace types

bool is_session(const Type& t) {
  return t.is<ty::Send>() || t.is<ty::Recv>() || t.is<ty::Select>() || t.is<ty::Branch>() ||
         t.is<ty::Close>() || t.is<ty::Wait>() || t.is<ty::Mu>() || t.is<ty::Var>();
}

// ----------------------------------------------------------------------------
// Structural helpers

namespace {

bool same_branches(const Branches& a, const Branches& b) {
  if (a.size() != b.size()) return false;
  for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib)
    if (ia->first != ib->first || !same_type(ia->second, ib->second)) return false;
  return true;
}

}  // namespace

bool same_ctx_type(const CtxType& a, const CtxType& b) {
  if (a.params.size() != b.params.size()) return false;
  for (std::size_t i = 0; i < a.params.size(); ++i)
    if (a.level(i) != b.level(i) || !same_ctx_type(a.params[i], b.params[i])) return false;
  return same_type(a.result, b.result);
}

bool same_type(const TypeRef& a, const TypeRef& b) {
  if (a == b) return true;
  if (!a || !b || a->node.index() != b->node.index()) return false;
  return std::visit(
      overloaded{
          [&](const ty::Arrow& x) {
            auto& y = *b->as<ty::Arrow>();
            return same_type(x.from, y.from) && same_type(x.to, y.to);
          },
          [&](const ty::Prod& x) {
            auto& y = *b->as<ty::Prod>();
            return same_type(x.fst, y.fst) && same_type(x.snd, y.snd);
          },
          [&](const ty::Box& x) { return same_ctx_type(x.ctx, b->as<ty::Box>()->ctx); },
          [&](const ty::Send& x) {
            auto& y = *b->as<ty::Send>();
            return same_type(x.payload, y.payload) && same_type(x.cont, y.cont);
          },
          [&](const ty::Recv& x) {
            auto& y = *b->as<ty::Recv>();
            return same_type(x.payload, y.payload) && same_type(x.cont, y.cont);
          },
          [&](const ty::Select& x) { return same_branches(x.branches, b->as<ty::Select>()->branches); },
          [&](const ty::Branch& x) { return same_branches(x.branches, b->as<ty::Branch>()->branches); },
          [&](const ty::Mu& x) {
            auto& y = *b->as<ty::Mu>();
            return x.var == y.var && same_type(x.body, y.body);
          },
          [&](const ty::Var& x) { return x.name == b->as<ty::Var>()->name; },
          [&](const ty::Named& x) { return x.name == b->as<ty::Named>()->name; },
          [&](const ty::Dual& x) { return same_type(x.of, b->as<ty::Dual>()->of); },
          [](const auto&) { return true; },
      },
      a->node);
}

namespace {

void canon(const TypeRef& t, std::vector<std::string>& env, std::string& out);

void canon_ctx(const CtxType& c, std::vector<std::string>& env, std::string& out) {
  out += '[';
  for (std::size_t i = 0; i < c.params.size(); ++i) {
    canon_ctx(c.params[i], env, out);
    out += '^' + std::to_string(c.level(i)) + ',';
  }
  out += "|-";
  canon(c.result, env, out);
  out += ']';
}

void canon_branches(const Branches& bs, std::vector<std::string>& env, std::string& out) {
  out += '{';
  for (auto& [l, s] : bs) {
    out += l;
    out += ':';
    canon(s, env, out);
    out += ',';
  }
  out += '}';
}

void canon(const TypeRef& t, std::vector<std::string>& env, std::string& out) {
  std::visit(overloaded{
                 [&](const ty::Unit&) { out += 'U'; },
                 [&](const ty::Int&) { out += 'I'; },
                 [&](const ty::Close&) { out += 'C'; },
                 [&](const ty::Wait&) { out += 'W'; },
                 [&](const ty::Arrow& x) {
                   out += '(';
                   canon(x.from, env, out);
                   out += "->";
                   canon(x.to, env, out);
                   out += ')';
                 },
                 [&](const ty::Prod& x) {
                   out += '(';
                   canon(x.fst, env, out);
                   out += '*';
                   canon(x.snd, env, out);
                   out += ')';
                 },
                 [&](const ty::Box& x) { canon_ctx(x.ctx, env, out); },
                 [&](const ty::Send& x) {
                   out += '!';
                   canon(x.payload, env, out);
                   out += '.';
                   canon(x.cont, env, out);
                 },
                 [&](const ty::Recv& x) {
                   out += '?';
                   canon(x.payload, env, out);
                   out += '.';
                   canon(x.cont, env, out);
                 },
                 [&](const ty::Select& x) {
                   out += '+';
                   canon_branches(x.branches, env, out);
                 },
                 [&](const ty::Branch& x) {
                   out += '&';
                   canon_branches(x.branches, env, out);
                 },
                 [&](const ty::Mu& x) {
                   out += "mu.";
                   env.push_back(x.var);
                   canon(x.body, env, out);
                   env.pop_back();
                 },
                 [&](const ty::Var& x) {
                   for (std::size_t i = env.size(); i-- > 0;) {
                     if (env[i] == x.name) {
                       out += '#';
                       out += std::to_string(env.size() - 1 - i);
                       return;
                     }
                   }
                   out += "$" + x.name;
                 },
                 [&](const ty::Named& x) { out += "N:" + x.name; },
                 [&](const ty::Dual& x) {
                   out += "D(";
                   canon(x.of, env, out);
                   out += ')';
                 },
             },
             t->node);
}

void collect_free(const TypeRef& t, std::vector<std::string>& bound, std::set<std::string>& out);

void collect_free_ctx(const CtxType& c, std::vector<std::string>& bound,
                      std::set<std::string>& out) {
  for (auto& p : c.params) collect_free_ctx(p, bound, out);
  collect_free(c.result, bound, out);
}

void collect_free(const TypeRef& t, std::vector<std::string>& bound, std::set<std::string>& out) {
  std::visit(overloaded{
                 [&](const ty::Arrow& x) {
                   collect_free(x.from, bound, out);
                   collect_free(x.to, bound, out);
                 },
                 [&](const ty::Prod& x) {
                   collect_free(x.fst, bound, out);
                   collect_free(x.snd, bound, out);
                 },
                 [&](const ty::Box& x) { collect_free_ctx(x.ctx, bound, out); },
                 [&](const ty::Send& x) {
                   collect_free(x.payload, bound, out);
                   collect_free(x.cont, bound, out);
                 },
                 [&](const ty::Recv& x) {
                   collect_free(x.payload, bound, out);
                   collect_free(x.cont, bound, out);
                 },
                 [&](const ty::Select& x) {
                   for (auto& [l, s] : x.branches) collect_free(s, bound, out);
                 },
                 [&](const ty::Branch& x) {
                   for (auto& [l, s] : x.branches) collect_free(s, bound, out);
                 },
                 [&](const ty::Mu& x) {
                   bound.push_back(x.var);
                   collect_free(x.body, bound, out);
                   bound.pop_back();
                 },
                 [&](const ty::Var& x) {
                   if (std::find(bound.begin(), bound.end(), x.name) == bound.end())
                     out.insert(x.name);
                 },
                 [&](const ty::Dual& x) { collect_free(x.of, bound, out); },
                 [](const auto&) {},
             },
             t->node);
}

}  // namespace

std::string canonical(const TypeRef& t) {
  std::vector<std::string> env;
  std::string out;
  canon(t, env, out);
  return out;
}

std::set<std::string> free_type_vars(const TypeRef& t) {
  std::vector<std::string> bound;
  std::set<std::string> out;
  collect_free(t, bound, out);
  return out;
}

// ----------------------------------------------------------------------------
// Substitution and unfolding

namespace {

CtxType subst_ctx(const CtxType& c, const std::string& v, const TypeRef& r) {
  CtxType out;
  for (auto& p : c.params) out.params.push_back(subst_ctx(p, v, r));
  out.result = subst_type_var(c.result, v, r);
  out.levels = c.levels;
  return out;
}

Branches subst_branches(const Branches& bs, const std::string& v, const TypeRef& r) {
  Branches out;
  for (auto& [l, s] : bs) out.emplace(l, subst_type_var(s, v, r));
  return out;
}

}  // namespace

TypeRef subst_type_var(const TypeRef& t, const std::string& v, const TypeRef& r) {
  return std::visit(
      overloaded{
          [&](const ty::Arrow& x) {
            return types::arrow(subst_type_var(x.from, v, r), subst_type_var(x.to, v, r));
          },
          [&](const ty::Prod& x) {
            return types::prod(subst_type_var(x.fst, v, r), subst_type_var(x.snd, v, r));
          },
          [&](const ty::Box& x) { return types::box(subst_ctx(x.ctx, v, r)); },
          [&](const ty::Send& x) {
            return types::send(subst_type_var(x.payload, v, r), subst_type_var(x.cont, v, r));
          },
          [&](const ty::Recv& x) {
            return types::recv(subst_type_var(x.payload, v, r), subst_type_var(x.cont, v, r));
          },
          [&](const ty::Select& x) { return types::select(subst_branches(x.branches, v, r)); },
          [&](const ty::Branch& x) { return types::branch(subst_branches(x.branches, v, r)); },
          [&](const ty::Mu& x) -> TypeRef {
            if (x.var == v) return t;
            auto fv = free_type_vars(r);
            if (!fv.count(x.var)) return types::mu(x.var, subst_type_var(x.body, v, r));
            std::string fresh = x.var + "'";
            auto body_fv = free_type_vars(x.body);
            while (fv.count(fresh) || body_fv.count(fresh)) fresh += "'";
            auto renamed = subst_type_var(x.body, x.var, types::var(fresh));
            return types::mu(fresh, subst_type_var(renamed, v, r));
          },
          [&](const ty::Var& x) { return x.name == v ? r : t; },
          [&](const ty::Dual& x) { return types::dual(subst_type_var(x.of, v, r)); },
          [&](const auto&) { return t; },
      },
      t->node);
}

TypeRef unfold(const TypeRef& s) {
  if (auto m = s->as<ty::Mu>()) return subst_type_var(m->body, m->var, s);
  return s;
}

TypeRef unfold_head(TypeRef s) {
  // Contractivity (checked at resolution) bounds this loop.
  for (int guard = 0; s->is<ty::Mu>() && guard < 10000; ++guard) s = unfold(s);
  return s;
}

// ----------------------------------------------------------------------------
// Duality

namespace {

TypeRef dual_rec(const TypeRef& s, std::vector<std::string>& bound) {
  auto check_payload = [&](const TypeRef& p) {
    for (auto& v : free_type_vars(p))
      if (std::find(bound.begin(), bound.end(), v) != bound.end())
        throw TypeError(ErrorCode::DualityUndefined, {},
                        "recursion variable '" + v + "' occurs in a message payload");
  };
  auto dual_branches = [&](const Branches& bs) {
    Branches out;
    for (auto& [l, c] : bs) out.emplace(l, dual_rec(c, bound));
    return out;
  };
  return std::visit(
      overloaded{
          [&](const ty::Send& x) {
            check_payload(x.payload);
            return types::recv(x.payload, dual_rec(x.cont, bound));
          },
          [&](const ty::Recv& x) {
            check_payload(x.payload);
            return types::send(x.payload, dual_rec(x.cont, bound));
          },
          [&](const ty::Select& x) { return types::branch(dual_branches(x.branches)); },
          [&](const ty::Branch& x) { return types::select(dual_branches(x.branches)); },
          [&](const ty::Close&) { return types::wait(); },
          [&](const ty::Wait&) { return types::close(); },
          [&](const ty::Mu& x) {
            bound.push_back(x.var);
            auto body = dual_rec(x.body, bound);
            bound.pop_back();
            return types::mu(x.var, body);
          },
          [&](const ty::Var&) { return s; },
          [&](const auto&) -> TypeRef {
            throw TypeError(ErrorCode::DualityUndefined, {},
                            "Dual applied to non-session type " + pretty_type(s));
          },
      },
      s->node);
}

}  // namespace

TypeRef dual(const TypeRef& s) {
  std::vector<std::string> bound;
  return dual_rec(s, bound);
}

// ----------------------------------------------------------------------------
// Equi-recursive equality

namespace {

struct Bisim {
  std::set<std::pair<std::string, std::string>> assumed;

  bool ctx(const CtxType& a, const CtxType& b) {
    if (a.params.size() != b.params.size()) return false;
    for (std::size_t i = 0; i < a.params.size(); ++i)
      if (a.level(i) != b.level(i) || !ctx(a.params[i], b.params[i])) return false;
    return eq(a.result, b.result);
  }

  bool branches(const Branches& a, const Branches& b) {
    if (a.size() != b.size()) return false;
    for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib)
      if (ia->first != ib->first || !eq(ia->second, ib->second)) return false;
    return true;
  }

  bool eq(TypeRef a, TypeRef b) {
    a = unfold_head(std::move(a));
    b = unfold_head(std::move(b));
    if (a->node.index() != b->node.index()) return false;
    if (!assumed.emplace(canonical(a), canonical(b)).second) return true;
    return std::visit(
        overloaded{
            [&](const ty::Arrow& x) {
              auto& y = *b->as<ty::Arrow>();
              return eq(x.from, y.from) && eq(x.to, y.to);
            },
            [&](const ty::Prod& x) {
              auto& y = *b->as<ty::Prod>();
              return eq(x.fst, y.fst) && eq(x.snd, y.snd);
            },
            [&](const ty::Box& x) { return ctx(x.ctx, b->as<ty::Box>()->ctx); },
            [&](const ty::Send& x) {
              auto& y = *b->as<ty::Send>();
              return eq(x.payload, y.payload) && eq(x.cont, y.cont);
            },
            [&](const ty::Recv& x) {
              auto& y = *b->as<ty::Recv>();
              return eq(x.payload, y.payload) && eq(x.cont, y.cont);
            },
            [&](const ty::Select& x) { return branches(x.branches, b->as<ty::Select>()->branches); },
            [&](const ty::Branch& x) { return branches(x.branches, b->as<ty::Branch>()->branches); },
            [&](const ty::Var& x) { return x.name == b->as<ty::Var>()->name; },
            [&](const ty::Named& x) { return x.name == b->as<ty::Named>()->name; },
            [&](const ty::Dual& x) { return eq(x.of, b->as<ty::Dual>()->of); },
            [](const auto&) { return true; },
        },
        a->node);
  }
};

}  // namespace

bool type_equiv(const TypeRef& a, const TypeRef& b) {
  Bisim bisim;
  return bisim.eq(a, b);
}

bool ctx_type_equiv(const CtxType& a, const CtxType& b) {
  Bisim bisim;
  return bisim.ctx(a, b);
}

// ----------------------------------------------------------------------------
// Alias resolution

namespace {

struct Resolver {
  const AliasTable& aliases;
  Span where;

  struct Scope {
    std::vector<std::pair<std::string, bool>> vars;  // name, usable here
    Scope payload() const {
      Scope s = *this;
      for (auto& v : s.vars) v.second = false;
      return s;
    }
    Scope with(const std::string& name) const {
      Scope s = *this;
      s.vars.emplace_back(name, true);
      return s;
    }
  };

  [[noreturn]] void fail(ErrorCode code, std::string msg) const {
    throw TypeError(code, where, std::move(msg));
  }

  TypeRef session(const TypeRef& t, const Scope& sc) {
    auto r = go(t, sc);
    if (!is_session(*r)) fail(ErrorCode::TypeMismatch, "expected a session type, got " + pretty_type(r));
    return r;
  }

  void contractive(const std::string& var, const TypeRef& body) {
    std::vector<std::string> chain{var};
    TypeRef b = body;
    while (auto m = b->as<ty::Mu>()) {
      chain.push_back(m->var);
      b = m->body;
    }
    if (auto v = b->as<ty::Var>())
      if (std::find(chain.begin(), chain.end(), v->name) != chain.end())
        fail(ErrorCode::NonContractive, "recursive type '" + var + "' is not contractive");
  }

  TypeRef recursive(const std::string& name, const TypeRef& body, const Scope& sc, bool force_mu) {
    auto r = go(body, sc.with(name));
    bool recurs = free_type_vars(r).count(name) > 0;
    if (!recurs && !force_mu) return r;
    if (!is_session(*r))
      fail(ErrorCode::TypeMismatch, "recursive type '" + name + "' must be a session type");
    contractive(name, r);
    return types::mu(name, r);
  }

  CtxType ctx(const CtxType& c, const Scope& sc) {
    CtxType out;
    auto p = sc.payload();
    for (auto& param : c.params) out.params.push_back(ctx(param, p));
    out.result = go(c.result, p);
    out.levels = c.levels;
    return out;
  }

  Branches branches(const Branches& bs, const Scope& sc) {
    Branches out;
    for (auto& [l, s] : bs) out.emplace(l, session(s, sc));
    return out;
  }

  TypeRef name_ref(const std::string& name, const Scope& sc) {
    for (auto it = sc.vars.rbegin(); it != sc.vars.rend(); ++it) {
      if (it->first != name) continue;
      if (!it->second)
        fail(ErrorCode::PayloadRecursion,
             "recursion variable '" + name + "' occurs outside a session continuation position");
      return types::var(name);
    }
    auto a = aliases.find(name);
    if (a == aliases.end()) fail(ErrorCode::UnknownVariable, "unknown type name '" + name + "'");
    return recursive(name, a->second, sc, false);
  }

  TypeRef go(const TypeRef& t, const Scope& sc) {
    return std::visit(
        overloaded{
            [&](const ty::Named& x) { return name_ref(x.name, sc); },
            [&](const ty::Var& x) { return name_ref(x.name, sc); },
            [&](const ty::Mu& x) { return recursive(x.var, x.body, sc, true); },
            [&](const ty::Dual& x) {
              auto r = go(x.of, sc);
              if (!free_type_vars(r).empty())
                fail(ErrorCode::DualityUndefined,
                     "Dual applied to an open recursive type " + pretty_type(r));
              try {
                return dual(r);
              } catch (const TypeError& e) {
                fail(e.code(), e.what());
              }
            },
            [&](const ty::Arrow& x) {
              auto p = sc.payload();
              return types::arrow(go(x.from, p), go(x.to, p));
            },
            [&](const ty::Prod& x) {
              auto p = sc.payload();
              return types::prod(go(x.fst, p), go(x.snd, p));
            },
            [&](const ty::Box& x) { return types::box(ctx(x.ctx, sc)); },
            [&](const ty::Send& x) { return types::send(go(x.payload, sc.payload()), session(x.cont, sc)); },
            [&](const ty::Recv& x) { return types::recv(go(x.payload, sc.payload()), session(x.cont, sc)); },
            [&](const ty::Select& x) { return types::select(branches(x.branches, sc)); },
            [&](const ty::Branch& x) { return types::branch(branches(x.branches, sc)); },
            [&](const auto&) { return t; },
        },
        t->node);
  }
};

}  // namespace

TypeRef resolve_type(const TypeRef& t, const AliasTable& aliases, Span where) {
  Resolver r{aliases, where};
  return r.go(t, {});
}

CtxType resolve_ctx_type(const CtxType& c, const AliasTable& aliases, Span where) {
  Resolver r{aliases, where};
  return r.ctx(c, {});
}

AliasTable resolve_aliases(const AliasTable& raw) {
  AliasTable out;
  for (auto& [name, body] : raw) out.emplace(name, resolve_type(types::named(name), raw));
  return out;
}

// ----------------------------------------------------------------------------
// Typing contexts

CtxEntry TypingCtx::pop() {
  CtxEntry e = std::move(entries_.back());
  entries_.pop_back();
  return e;
}

std::optional<std::size_t> TypingCtx::lookup(const std::string& name) const {
  for (std::size_t i = entries_.size(); i-- > 0;)
    if (entries_[i].name == name) return i;
  return std::nullopt;
}

const TypingCtx::Hide* TypingCtx::hider(std::size_t index) const {
  const auto& e = entries_[index];
  if (e.mult == Mult::Unrestricted) return nullptr;
  for (auto& h : hides_)
    if (index < h.limit && e.level < h.level) return &h;
  return nullptr;
}

bool TypingCtx::fully_consumed() const {
  return std::none_of(entries_.begin(), entries_.end(), [](const CtxEntry& e) { return e.live(); });
}

bool ctx_below(const TypingCtx& ctx, unsigned n) {
  unsigned top = 0;
  for (auto& e : ctx.entries())
    if (e.live()) top = std::max(top, e.level);
  return top < n;
}

bool ctx_at_least(const TypingCtx& ctx, unsigned n) {
  return std::all_of(ctx.entries().begin(), ctx.entries().end(),
                     [n](const CtxEntry& e) { return !e.live() || e.level >= n; });
}

// ----------------------------------------------------------------------------
// Rendering

namespace {

enum class TPrec { Arrow, Prod, Atom };

void print(const TypeRef& t, TPrec ctx, std::string& out);

void print_ctx_params(const CtxType& c, std::string& out) {
  for (std::size_t i = 0; i < c.params.size(); ++i) {
    if (i) out += ", ";
    auto& p = c.params[i];
    if (p.params.empty() && c.level(i) == 0)
      print(p.result, TPrec::Arrow, out);
    else if (p.params.empty())
      print(p.result, TPrec::Atom, out);
    else
      out += "(" + pretty_ctx_type(p) + ")";
    if (c.level(i) > 0) out += "^" + std::to_string(c.level(i));
  }
}

void print_branches(const char* open, const Branches& bs, std::string& out) {
  out += open;
  bool first = true;
  for (auto& [l, s] : bs) {
    if (!first) out += ", ";
    first = false;
    out += l + ": ";
    print(s, TPrec::Arrow, out);
  }
  out += "}";
}

void print(const TypeRef& t, TPrec ctx, std::string& out) {
  std::visit(overloaded{
                 [&](const ty::Unit&) { out += "Unit"; },
                 [&](const ty::Int&) { out += "Int"; },
                 [&](const ty::Close&) { out += "Close"; },
                 [&](const ty::Wait&) { out += "Wait"; },
                 [&](const ty::Arrow& x) {
                   bool paren = ctx != TPrec::Arrow;
                   if (paren) out += "(";
                   print(x.from, TPrec::Prod, out);
                   out += " -o ";
                   print(x.to, TPrec::Arrow, out);
                   if (paren) out += ")";
                 },
                 [&](const ty::Prod& x) {
                   bool paren = ctx == TPrec::Atom;
                   if (paren) out += "(";
                   print(x.fst, TPrec::Atom, out);
                   out += " * ";
                   print(x.snd, TPrec::Prod, out);
                   if (paren) out += ")";
                 },
                 [&](const ty::Box& x) {
                   out += "[";
                   print_ctx_params(x.ctx, out);
                   out += x.ctx.params.empty() ? "|- " : " |- ";
                   print(x.ctx.result, TPrec::Arrow, out);
                   out += "]";
                 },
                 [&](const ty::Send& x) {
                   out += "!";
                   print(x.payload, TPrec::Atom, out);
                   out += ".";
                   print(x.cont, TPrec::Atom, out);
                 },
                 [&](const ty::Recv& x) {
                   out += "?";
                   print(x.payload, TPrec::Atom, out);
                   out += ".";
                   print(x.cont, TPrec::Atom, out);
                 },
                 [&](const ty::Select& x) { print_branches("+{", x.branches, out); },
                 [&](const ty::Branch& x) { print_branches("&{", x.branches, out); },
                 [&](const ty::Mu& x) {
                   out += "rec " + x.var + ". ";
                   print(x.body, TPrec::Atom, out);
                 },
                 [&](const ty::Var& x) { out += x.name; },
                 [&](const ty::Named& x) { out += x.name; },
                 [&](const ty::Dual& x) {
                   out += "Dual ";
                   print(x.of, TPrec::Atom, out);
                 },
             },
             t->node);
}

}  // namespace

std::string pretty_type(const TypeRef& t) {
  std::string out;
  print(t, TPrec::Arrow, out);
  return out;
}

std::string pretty_ctx_type(const CtxType& c) {
  std::string out;
  print_ctx_params(c, out);
  out += c.params.empty() ? "|- " : " |- ";
  print(c.result, TPrec::Arrow, out);
  return out;
}

}  // namespace lcm
