#include "enumerate.hpp"

#include <cstdint>
#include <map>
#include <set>

#include "lcm/subst.hpp"

namespace lcm::testing {

std::vector<TypeRef> universe() {
  using namespace types;
  return {unit(),
          integer(),
          arrow(integer(), integer()),
          arrow(unit(), unit()),
          box(plain(integer())),
          box(CtxType{{plain(integer())}, integer(), {}}),
          box(CtxType{{plain(integer())}, integer(), {1}})};
}

std::vector<CtxType> boxed_universe() {
  std::vector<CtxType> out;
  for (auto& t : universe())
    if (auto b = t->as<ty::Box>()) out.push_back(b->ctx);
  return out;
}

namespace {

using Mask = std::uint32_t;

constexpr unsigned kLetBoxLevels = 3;

struct Gen {
  TermRef term;
  Mask used;
};

struct GenCtx {
  CtxValue value;
  Mask used;
};

std::string name_at(unsigned depth) { return "v" + std::to_string(depth); }

class Enumerator {
 public:
  explicit Enumerator(std::vector<ScopeEntry> scope) : scope_(std::move(scope)) {}

  std::vector<Gen> gen(Mask avail, const TypeRef& t, std::size_t size, unsigned depth) {
    std::string key = memo_key(avail, canonical(t), size, depth);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<Gen> out;
    build(out, avail, t, size, depth);
    memo_[key] = out;
    return out;
  }

  std::vector<GenCtx> gen_ctx(Mask avail, const CtxType& t, std::size_t size, unsigned depth) {
    std::vector<GenCtx> out;
    std::size_t k = t.params.size();
    {
      CtxValue cv;
      Mask fresh = 0;
      for (std::size_t i = 0; i < k; ++i) {
        unsigned level = t.level(i);
        std::string name = name_at(depth + static_cast<unsigned>(i));
        cv.binders.push_back(Binder{name, level, t.params[i]});
        fresh |= Mask{1} << scope_.size();
        scope_.push_back(ScopeEntry{name, level, t.params[i]});
      }
      for (auto& body : gen(avail | fresh, t.result, size, depth + static_cast<unsigned>(k))) {
        if ((body.used & fresh) != fresh) continue;
        CtxValue v = cv;
        v.body = body.term;
        out.push_back(GenCtx{std::move(v), body.used & ~fresh});
      }
      scope_.resize(scope_.size() - k);
    }
    return out;
  }

 private:
  std::string memo_key(Mask avail, const std::string& t, std::size_t size, unsigned depth) const {
    std::string key = t + "#" + std::to_string(size) + "#" + std::to_string(depth);
    for (std::size_t i = 0; i < scope_.size(); ++i) {
      key += "|" + scope_[i].name + "^" + std::to_string(scope_[i].level) + ":" +
             pretty_ctx_type(scope_[i].type) + (avail >> i & 1 ? "+" : "-");
    }
    return key;
  }

  void build(std::vector<Gen>& out, Mask avail, const TypeRef& t, std::size_t size,
             unsigned depth) {
    if (size == 0) return;
    if (size == 1 && t->is<ty::Unit>()) out.push_back({unit_val(), 0});
    if (size == 1 && t->is<ty::Int>()) out.push_back({int_lit(1), 0});
    vars(out, avail, t, size, depth);
    if (auto a = t->as<ty::Arrow>(); a && size >= 2) {
      Mask bit = Mask{1} << scope_.size();
      scope_.push_back(ScopeEntry{name_at(depth), 0, types::plain(a->from)});
      for (auto& body : gen(avail | bit, a->to, size - 1, depth + 1))
        if (body.used & bit) out.push_back({lam(name_at(depth), body.term, a->from), body.used & ~bit});
      scope_.pop_back();
    }
    if (auto b = t->as<ty::Box>(); b && size >= 2)
      for (auto& cv : gen_ctx(avail, b->ctx, size - 1, depth)) out.push_back({box(cv.value), cv.used});
    if (size < 3) return;
    for (auto& f : universe()) {
      auto a = f->as<ty::Arrow>();
      if (!a || !type_equiv(a->to, t)) continue;
      binary(out, avail, f, a->from, size, depth, [](TermRef x, TermRef y) { return app(x, y); });
    }
    binary(out, avail, types::unit(), t, size, depth,
           [](TermRef x, TermRef y) { return let_unit(x, y); });
    if (t->is<ty::Int>())
      binary(out, avail, t, t, size, depth,
             [](TermRef x, TermRef y) { return arith(ArithOp::Add, x, y); });
    for (auto& ctx : boxed_universe())
      for (unsigned n = 0; n < kLetBoxLevels; ++n)
        for (std::size_t k = 1; k + 2 <= size; ++k)
          for (auto& bound : gen(avail, types::box(ctx), k, depth)) {
            Mask bit = Mask{1} << scope_.size();
            scope_.push_back(ScopeEntry{name_at(depth), n, ctx});
            for (auto& body : gen((avail & ~bound.used) | bit, t, size - 1 - k, depth + 1))
              if (body.used & bit)
                out.push_back({let_box(name_at(depth), n, bound.term, body.term),
                               bound.used | (body.used & ~bit)});
            scope_.pop_back();
          }
  }

  template <class F>
  void binary(std::vector<Gen>& out, Mask avail, const TypeRef& lt, const TypeRef& rt,
              std::size_t size, unsigned depth, F mk) {
    for (std::size_t k = 1; k + 2 <= size; ++k)
      for (auto& l : gen(avail, lt, k, depth))
        for (auto& r : gen(avail & ~l.used, rt, size - 1 - k, depth))
          out.push_back({mk(l.term, r.term), l.used | r.used});
  }

  void vars(std::vector<Gen>& out, Mask avail, const TypeRef& t, std::size_t size, unsigned depth) {
    for (std::size_t i = 0; i < scope_.size(); ++i) {
      if (!(avail >> i & 1)) continue;
      const CtxType& ct = scope_[i].type;
      if (!type_equiv(ct.result, t)) continue;
      Mask self = Mask{1} << i;
      if (ct.params.empty()) {
        if (size == 1) out.push_back({var(scope_[i].name), self});
        continue;
      }
      std::vector<std::pair<std::vector<CtxValue>, Mask>> partial{{{}, self}};
      args(partial, 0, ct, size - 1, avail, depth, scope_[i].name, out);
    }
  }

  // Fills the arguments from `j` on, spending exactly `budget` nodes.
  void args(std::vector<std::pair<std::vector<CtxValue>, Mask>> partial, std::size_t j,
            const CtxType& ct, std::size_t budget, Mask avail, unsigned depth,
            const std::string& x, std::vector<Gen>& out) {
    if (j == ct.params.size()) {
      if (budget != 0) return;
      for (auto& [as, used] : partial) out.push_back({var(x, as), used});
      return;
    }
    std::size_t rest = ct.params.size() - j - 1;
    for (std::size_t k = 1; k + rest <= budget; ++k) {
      std::vector<std::pair<std::vector<CtxValue>, Mask>> next;
      for (auto& [as, used] : partial)
        for (auto& cv : gen_ctx(avail & ~used, ct.params[j], k, depth)) {
          auto more = as;
          more.push_back(cv.value);
          next.push_back({std::move(more), used | cv.used});
        }
      args(std::move(next), j + 1, ct, budget - k, avail, depth, x, out);
    }
  }

  std::vector<ScopeEntry> scope_;
  std::map<std::string, std::vector<Gen>> memo_;
};

}  // namespace

namespace {

Mask all_of(std::size_t n) { return n == 0 ? 0 : (Mask{1} << n) - 1; }

}  // namespace

std::vector<TermRef> enumerate_terms(const std::vector<ScopeEntry>& scope, const TypeRef& t,
                                     std::size_t max_size) {
  Enumerator e(scope);
  Mask all = all_of(scope.size());
  auto depth = static_cast<unsigned>(scope.size());
  std::vector<TermRef> out;
  for (std::size_t size = 1; size <= max_size; ++size)
    for (auto& g : e.gen(all, t, size, depth))
      if (g.used == all) out.push_back(g.term);
  return out;
}

std::vector<CtxValue> enumerate_ctx_values(const std::vector<ScopeEntry>& scope, const CtxType& t,
                                           std::size_t max_size) {
  Enumerator e(scope);
  Mask all = all_of(scope.size());
  auto depth = static_cast<unsigned>(scope.size());
  std::vector<CtxValue> out;
  for (std::size_t size = 1; size <= max_size; ++size)
    for (auto& g : e.gen_ctx(all, t, size, depth))
      if (g.used == all) out.push_back(g.value);
  return out;
}

// ----------------------------------------------------------------------------
// Mutants

namespace {

void bound_names(const TermRef& m, std::set<std::string>& out);

void bound_names(const CtxValue& cv, std::set<std::string>& out) {
  for (auto& b : cv.binders) out.insert(b.name);
  bound_names(cv.body, out);
}

void bound_names(const TermRef& m, std::set<std::string>& out) {
  std::visit(overloaded{
                 [&](const node::Lam& x) {
                   out.insert(x.binder);
                   bound_names(x.body, out);
                 },
                 [&](const node::App& x) {
                   bound_names(x.fn, out);
                   bound_names(x.arg, out);
                 },
                 [&](const node::LetUnit& x) {
                   bound_names(x.scrut, out);
                   bound_names(x.body, out);
                 },
                 [&](const node::BoxVal& x) { bound_names(x.code, out); },
                 [&](const node::LetBox& x) {
                   out.insert(x.binder);
                   bound_names(x.bound, out);
                   bound_names(x.body, out);
                 },
                 [&](const node::Var& x) {
                   for (auto& a : x.args) bound_names(a, out);
                 },
                 [&](const node::Arith& x) {
                   bound_names(x.lhs, out);
                   bound_names(x.rhs, out);
                 },
                 [&](const auto&) {},
             },
             m->node);
}

TypeRef other_base(const TypeRef& t) {
  return t->is<ty::Int>() ? types::unit() : types::integer();
}

class Mutator {
 public:
  explicit Mutator(std::set<std::string> names) : names_(std::move(names)) {}

  std::vector<TermRef> term(const TermRef& m) {
    std::vector<TermRef> out;
    if (!m->is<node::Unit>()) out.push_back(unit_val());
    std::visit(overloaded{
                   [&](const node::Unit&) { out.push_back(int_lit(1)); },
                   [&](const node::IntLit&) {},
                   [&](const node::Lam& x) {
                     if (x.annot) out.push_back(lam(x.binder, x.body, other_base(x.annot)));
                     for (auto& b : term(x.body)) out.push_back(lam(x.binder, b, x.annot, x.mult));
                   },
                   [&](const node::App& x) {
                     for (auto& f : term(x.fn)) out.push_back(app(f, x.arg));
                     for (auto& a : term(x.arg)) out.push_back(app(x.fn, a));
                   },
                   [&](const node::LetUnit& x) {
                     for (auto& s : term(x.scrut)) out.push_back(let_unit(s, x.body));
                     for (auto& b : term(x.body)) out.push_back(let_unit(x.scrut, b));
                   },
                   [&](const node::BoxVal& x) {
                     for (auto& cv : ctx(x.code)) out.push_back(box(cv));
                   },
                   [&](const node::LetBox& x) {
                     if (x.level) {
                       out.push_back(let_box(x.binder, *x.level + 1, x.bound, x.body));
                       if (*x.level > 0) out.push_back(let_box(x.binder, *x.level - 1, x.bound, x.body));
                     }
                     for (auto& s : term(x.bound)) out.push_back(let_box(x.binder, x.level, s, x.body));
                     for (auto& b : term(x.body)) out.push_back(let_box(x.binder, x.level, x.bound, b));
                   },
                   [&](const node::Var& x) {
                     for (auto& n : names_)
                       if (n != x.name) out.push_back(var(n, x.args));
                     auto more = x.args;
                     more.push_back(closed(int_lit(1)));
                     out.push_back(var(x.name, more));
                     if (!x.args.empty()) {
                       auto fewer = x.args;
                       fewer.pop_back();
                       out.push_back(var(x.name, fewer));
                     }
                     for (std::size_t i = 0; i < x.args.size(); ++i)
                       for (auto& cv : ctx(x.args[i])) {
                         auto as = x.args;
                         as[i] = cv;
                         out.push_back(var(x.name, as));
                       }
                   },
                   [&](const node::Arith& x) {
                     for (auto& l : term(x.lhs)) out.push_back(arith(x.op, l, x.rhs));
                     for (auto& r : term(x.rhs)) out.push_back(arith(x.op, x.lhs, r));
                   },
                   [&](const auto&) {},
               },
               m->node);
    return out;
  }

  std::vector<CtxValue> ctx(const CtxValue& cv) {
    std::vector<CtxValue> out;
    for (std::size_t i = 0; i < cv.binders.size(); ++i) {
      auto up = cv;
      ++up.binders[i].level;
      out.push_back(up);
      if (cv.binders[i].level > 0) {
        auto down = cv;
        --down.binders[i].level;
        out.push_back(down);
      }
      auto& a = cv.binders[i].annot;
      if (a && a->params.empty()) {
        auto swapped = cv;
        swapped.binders[i].annot = types::plain(other_base(a->result));
        out.push_back(swapped);
      }
    }
    for (auto& b : term(cv.body)) out.push_back(CtxValue{cv.binders, b});
    return out;
  }

 private:
  std::set<std::string> names_;
};

}  // namespace

std::vector<TermRef> mutants(const TermRef& m) {
  std::set<std::string> names{"ghost"};
  bound_names(m, names);
  return Mutator(std::move(names)).term(m);
}

}  // namespace lcm::testing
