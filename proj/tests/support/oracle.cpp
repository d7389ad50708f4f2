#include "oracle.hpp"

#include <algorithm>
#include <functional>

namespace lcm::testing {
namespace {

using Split = std::pair<OracleCtx, OracleCtx>;

std::vector<Split> splits(const OracleCtx& g) {
  std::vector<Split> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << g.size()); ++mask) {
    Split s;
    for (std::size_t i = 0; i < g.size(); ++i) (mask >> i & 1 ? s.first : s.second).push_back(g[i]);
    out.push_back(std::move(s));
  }
  return out;
}

// Assigns each entry of `g` to one of `k` parts.
std::vector<std::vector<OracleCtx>> partitions(const OracleCtx& g, std::size_t k) {
  std::vector<std::vector<OracleCtx>> out;
  if (k == 0) {
    if (g.empty()) out.emplace_back();
    return out;
  }
  std::size_t total = 1;
  for (std::size_t i = 0; i < g.size(); ++i) total *= k;
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<OracleCtx> parts(k);
    std::size_t c = code;
    for (auto& e : g) {
      parts[c % k].push_back(e);
      c /= k;
    }
    out.push_back(std::move(parts));
  }
  return out;
}

bool has_name(const OracleCtx& g, const std::string& x) {
  return std::any_of(g.begin(), g.end(), [&](auto& e) { return e.name == x; });
}

bool all_at_least(const OracleCtx& g, unsigned n) {
  return std::all_of(g.begin(), g.end(), [&](auto& e) { return e.level >= n; });
}

unsigned max_level(const OracleCtx& g) {
  unsigned m = 0;
  for (auto& e : g) m = std::max(m, e.level);
  return m;
}

// A binder that shadows an entry of the context it extends leaves that entry
// unreachable, so no derivation can consume it.
std::optional<OracleCtx> extend(OracleCtx g, OracleEntry e) {
  if (has_name(g, e.name)) return std::nullopt;
  g.push_back(std::move(e));
  return g;
}

std::optional<TypeRef> synth(const OracleCtx& g, const TermRef& m);

std::optional<CtxType> synth_ctx_at(const OracleCtx& g, const CtxValue& cv, unsigned n) {
  if (!all_at_least(g, n)) return std::nullopt;
  OracleCtx inner = g;
  CtxType out;
  for (auto& b : cv.binders) {
    if (!b.annot || b.level >= n) return std::nullopt;
    auto next = extend(inner, OracleEntry{b.name, b.level, *b.annot});
    if (!next) return std::nullopt;
    inner = std::move(*next);
    out.params.push_back(*b.annot);
    out.set_level(out.params.size() - 1, b.level);
  }
  auto t = synth(inner, cv.body);
  if (!t) return std::nullopt;
  out.result = *t;
  return out;
}

std::optional<CtxType> synth_ctx(const OracleCtx& g, const CtxValue& cv) {
  unsigned top = max_level(g);
  for (auto& b : cv.binders) top = std::max(top, b.level);
  for (unsigned n = 0; n <= top + 1; ++n)
    if (auto c = synth_ctx_at(g, cv, n)) return c;
  return std::nullopt;
}

std::optional<TypeRef> synth_var(const OracleCtx& g, const node::Var& v) {
  auto it = std::find_if(g.begin(), g.end(), [&](auto& e) { return e.name == v.name; });
  if (it == g.end()) return std::nullopt;
  const CtxType& t = it->type;
  if (t.params.size() != v.args.size()) return std::nullopt;
  OracleCtx rest;
  for (auto& e : g)
    if (&e != &*it) rest.push_back(e);
  for (auto& parts : partitions(rest, v.args.size())) {
    bool ok = true;
    for (std::size_t i = 0; ok && i < v.args.size(); ++i) {
      if (!all_at_least(parts[i], t.level(i))) {
        ok = false;
        break;
      }
      auto c = synth_ctx(parts[i], v.args[i]);
      ok = c && ctx_type_equiv(*c, t.params[i]);
    }
    if (ok) return t.result;
  }
  return std::nullopt;
}

std::optional<TypeRef> synth(const OracleCtx& g, const TermRef& m) {
  using R = std::optional<TypeRef>;
  return std::visit(
      overloaded{
          [&](const node::Unit&) -> R {
            if (!g.empty()) return std::nullopt;
            return types::unit();
          },
          [&](const node::IntLit&) -> R {
            if (!g.empty()) return std::nullopt;
            return types::integer();
          },
          [&](const node::Var& v) -> R { return synth_var(g, v); },
          [&](const node::Lam& l) -> R {
            if (!l.annot || l.mult != Mult::Linear) return std::nullopt;
            auto inner = extend(g, OracleEntry{l.binder, 0, types::plain(l.annot)});
            if (!inner) return std::nullopt;
            auto body = synth(*inner, l.body);
            if (!body) return std::nullopt;
            return types::arrow(l.annot, *body);
          },
          [&](const node::App& a) -> R {
            for (auto& [g1, g2] : splits(g)) {
              auto f = synth(g1, a.fn);
              if (!f) continue;
              auto arrow = (*f)->as<ty::Arrow>();
              if (!arrow) continue;
              auto x = synth(g2, a.arg);
              if (x && type_equiv(*x, arrow->from)) return arrow->to;
            }
            return std::nullopt;
          },
          [&](const node::LetUnit& l) -> R {
            for (auto& [g1, g2] : splits(g)) {
              auto s = synth(g1, l.scrut);
              if (!s || !(*s)->is<ty::Unit>()) continue;
              if (auto b = synth(g2, l.body)) return b;
            }
            return std::nullopt;
          },
          [&](const node::BoxVal& b) -> R {
            auto c = synth_ctx(g, b.code);
            if (!c) return std::nullopt;
            return types::box(*c);
          },
          [&](const node::LetBox& l) -> R {
            unsigned lo = l.level.value_or(0);
            unsigned hi = l.level ? *l.level : max_level(g) + 1;
            for (unsigned n = lo; n <= hi; ++n)
              for (auto& [g1, g2] : splits(g)) {
                if (!all_at_least(g1, n)) continue;
                auto s = synth(g1, l.bound);
                if (!s) continue;
                auto bx = (*s)->as<ty::Box>();
                if (!bx) continue;
                auto inner = extend(g2, OracleEntry{l.binder, n, bx->ctx});
                if (!inner) continue;
                if (auto body = synth(*inner, l.body)) return body;
              }
            return std::nullopt;
          },
          [&](const node::Arith& a) -> R {
            for (auto& [g1, g2] : splits(g)) {
              auto x = synth(g1, a.lhs);
              if (!x || !(*x)->is<ty::Int>()) continue;
              auto y = synth(g2, a.rhs);
              if (y && (*y)->is<ty::Int>()) return types::integer();
            }
            return std::nullopt;
          },
          [&](const auto&) -> R { return std::nullopt; },
      },
      m->node);
}

}  // namespace

std::optional<TypeRef> oracle_synth(const OracleCtx& g, const TermRef& m) { return synth(g, m); }

std::optional<CtxType> oracle_synth_ctx(const OracleCtx& g, const CtxValue& cv) {
  return synth_ctx(g, cv);
}

std::optional<CtxType> oracle_synth_ctx_at(const OracleCtx& g, const CtxValue& cv, unsigned n) {
  return synth_ctx_at(g, cv, n);
}

}  // namespace lcm::testing
