// Abstract syntax for the linear contextual-modal calculus with sessions.
//
// Terms are immutable and shared: every constructor returns a TermRef and
// rewriting builds new nodes around unchanged subterms.
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lcm/diagnostics.hpp"
#include "lcm/types.hpp"

namespace lcm {

struct Term;
using TermRef = std::shared_ptr<const Term>;

/// A binder of a contextual value: `y`, `y^2`, `(y^1 : T)` or
/// `(y : (Int |- Int))`.
struct Binder {
  std::string name;
  unsigned level = 0;
  std::optional<CtxType> annot;
};

/// A code fragment closed over its binders, written `x1, ..., xn. M`.
struct CtxValue {
  std::vector<Binder> binders;
  TermRef body;
};

enum class ArithOp { Add, Sub, Mul };

enum class ConstKind { Send, Receive, Select, Close, Wait, Fork, ForkWith, New };

enum class PatternKind { Label, Int, Default };

struct MatchBranch {
  PatternKind kind = PatternKind::Label;
  std::string label;    // Label
  std::int64_t value{};  // Int
  std::string binder;   // Label, Default
  Mult mult = Mult::Linear;  // Default only
  TermRef body;
};

namespace node {
struct Unit {};
struct Lam {
  std::string binder;
  Mult mult = Mult::Linear;
  TypeRef annot;  // may be null
  TermRef body;
};
struct App {
  TermRef fn, arg;
};
struct LetUnit {
  TermRef scrut, body;
};
struct BoxVal {
  CtxValue code;
};
struct LetBox {
  std::string binder;
  std::optional<unsigned> level;  // absent when the source omits `^n`
  TermRef bound, body;
};
/// Applied variable `x[s1, ..., sn]`; a bare `x` has no arguments.
struct Var {
  std::string name;
  std::vector<CtxValue> args;
};
struct IntLit {
  std::int64_t value{};
};
struct Arith {
  ArithOp op{};
  TermRef lhs, rhs;
};
struct Pair {
  TermRef fst, snd;
};
struct LetPair {
  std::string fst, snd;
  TermRef scrut, body;
};
struct Match {
  TermRef scrut;
  std::vector<MatchBranch> branches;
};
struct Const {
  ConstKind kind{};
  std::string label;  // select
  TypeRef session;    // new
};
/// Runtime-only channel endpoint.
struct Chan {
  int endpoint = 0;
};
}  // namespace node

struct Term {
  using Node = std::variant<node::Unit, node::Lam, node::App, node::LetUnit, node::BoxVal,
                            node::LetBox, node::Var, node::IntLit, node::Arith, node::Pair,
                            node::LetPair, node::Match, node::Const, node::Chan>;
  Node node;
  Span span;

  template <class T>
  const T* as() const {
    return std::get_if<T>(&node);
  }
  template <class T>
  bool is() const {
    return std::holds_alternative<T>(node);
  }
};

inline TermRef make(Term::Node n, Span s = {}) {
  return std::make_shared<const Term>(Term{std::move(n), s});
}

// Convenience builders, used mostly by tests and desugaring.
inline TermRef unit_val(Span s = {}) { return make(node::Unit{}, s); }
inline TermRef int_lit(std::int64_t v, Span s = {}) { return make(node::IntLit{v}, s); }
inline TermRef var(std::string x, std::vector<CtxValue> args = {}, Span s = {}) {
  return make(node::Var{std::move(x), std::move(args)}, s);
}
inline TermRef lam(std::string x, TermRef body, TypeRef annot = nullptr, Mult m = Mult::Linear) {
  return make(node::Lam{std::move(x), m, std::move(annot), std::move(body)});
}
inline TermRef app(TermRef f, TermRef a) { return make(node::App{std::move(f), std::move(a)}); }
inline TermRef arith(ArithOp op, TermRef l, TermRef r) {
  return make(node::Arith{op, std::move(l), std::move(r)});
}
inline TermRef box(CtxValue cv) { return make(node::BoxVal{std::move(cv)}); }
inline TermRef let_box(std::string x, std::optional<unsigned> n, TermRef m, TermRef body) {
  return make(node::LetBox{std::move(x), n, std::move(m), std::move(body)});
}
inline TermRef let_unit(TermRef m, TermRef body) {
  return make(node::LetUnit{std::move(m), std::move(body)});
}
inline TermRef pair(TermRef a, TermRef b) { return make(node::Pair{std::move(a), std::move(b)}); }
inline TermRef constant(ConstKind k, std::string label = {}, TypeRef s = nullptr) {
  return make(node::Const{k, std::move(label), std::move(s)});
}
inline TermRef chan(int endpoint) { return make(node::Chan{endpoint}); }

/// `ε.M`
inline CtxValue closed(TermRef body) { return CtxValue{{}, std::move(body)}; }
inline CtxValue code(std::vector<std::string> names, TermRef body) {
  CtxValue cv;
  for (auto& n : names) cv.binders.push_back(Binder{std::move(n), 0, std::nullopt});
  cv.body = std::move(body);
  return cv;
}

// ----------------------------------------------------------------------------
// Programs

struct Pattern {
  enum class Kind { Var, Int, Label } kind = Kind::Var;
  std::string name;  // Var binder, or Label binder
  std::string label;
  std::int64_t value{};
};

struct Clause {
  std::vector<Pattern> patterns;
  TermRef body;
  Span span;
};

struct TermDecl {
  std::string name;
  TypeRef type;
  Mult mult = Mult::Linear;  // `un` in the signature
  std::vector<Clause> clauses;
  TermRef body;  // clauses desugared into lambdas and matches
  Span span;
};

struct TypeDecl {
  std::string name;
  TypeRef body;
  Span span;
};

struct Program {
  std::vector<TypeDecl> types;
  std::vector<TermDecl> terms;

  const TermDecl* find(const std::string& name) const {
    for (auto& d : terms)
      if (d.name == name) return &d;
    return nullptr;
  }
};

}  // namespace lcm
