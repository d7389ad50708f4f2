#include "lcm/pretty.hpp"

namespace lcm {

namespace {

// Binding strength, weakest first. Binder forms extend as far right as
// possible, so they only appear bare where nothing follows them.
enum Prec { kExpr, kSum, kDiff, kProd, kApp, kAtom };

class Printer {
 public:
  std::string out;

  void term(const TermRef& t, Prec p) {
    std::visit(overloaded{
                   [&](const node::Unit&) { out += p == kAtom ? "(*)" : "*"; },
                   [&](const node::IntLit& x) {
                     if (x.value < 0)
                       out += "(" + std::to_string(x.value) + ")";
                     else
                       out += std::to_string(x.value);
                   },
                   [&](const node::Var& x) {
                     out += x.name;
                     if (x.args.empty()) return;
                     out += "[";
                     for (std::size_t i = 0; i < x.args.size(); ++i) {
                       if (i) out += ", ";
                       ctx_value(x.args[i]);
                     }
                     out += "]";
                   },
                   [&](const node::Lam& x) {
                     open(p > kExpr);
                     out += "\\";
                     if (x.mult == Mult::Unrestricted) out += "un ";
                     if (x.annot)
                       out += "(" + x.binder + " : " + pretty_type(x.annot) + ")";
                     else
                       out += x.binder;
                     out += ". ";
                     term(x.body, kExpr);
                     close(p > kExpr);
                   },
                   [&](const node::App& x) {
                     open(p > kApp);
                     term(x.fn, kApp);
                     out += " ";
                     term(x.arg, kAtom);
                     close(p > kApp);
                   },
                   [&](const node::LetUnit& x) {
                     open(p > kExpr);
                     out += "let * = ";
                     term(x.scrut, kExpr);
                     out += " in ";
                     term(x.body, kExpr);
                     close(p > kExpr);
                   },
                   [&](const node::BoxVal& x) {
                     out += "box (";
                     ctx_value(x.code);
                     out += ")";
                   },
                   [&](const node::LetBox& x) {
                     open(p > kExpr);
                     out += "let box " + x.binder;
                     if (x.level) out += " ^" + std::to_string(*x.level);
                     out += " = ";
                     term(x.bound, kExpr);
                     out += " in ";
                     term(x.body, kExpr);
                     close(p > kExpr);
                   },
                   [&](const node::Arith& x) {
                     Prec own = x.op == ArithOp::Add ? kSum : x.op == ArithOp::Sub ? kDiff : kProd;
                     Prec left = x.op == ArithOp::Add ? kDiff : x.op == ArithOp::Sub ? kDiff : kApp;
                     Prec right = x.op == ArithOp::Add ? kSum : x.op == ArithOp::Sub ? kProd : kProd;
                     open(p > own);
                     term(x.lhs, left);
                     out += x.op == ArithOp::Add ? " + " : x.op == ArithOp::Sub ? " - " : " * ";
                     term(x.rhs, right);
                     close(p > own);
                   },
                   [&](const node::Pair& x) {
                     out += "(";
                     term(x.fst, kExpr);
                     out += ", ";
                     term(x.snd, kExpr);
                     out += ")";
                   },
                   [&](const node::LetPair& x) {
                     open(p > kExpr);
                     out += "let (" + x.fst + ", " + x.snd + ") = ";
                     term(x.scrut, kExpr);
                     out += " in ";
                     term(x.body, kExpr);
                     close(p > kExpr);
                   },
                   [&](const node::Match& x) {
                     open(p > kExpr);
                     out += "match ";
                     term(x.scrut, kExpr);
                     out += " with {";
                     for (std::size_t i = 0; i < x.branches.size(); ++i) {
                       auto& b = x.branches[i];
                       out += i ? ", " : "";
                       switch (b.kind) {
                         case PatternKind::Label: out += b.label + " " + b.binder; break;
                         case PatternKind::Int: out += std::to_string(b.value); break;
                         case PatternKind::Default:
                           out += (b.mult == Mult::Unrestricted ? "un " : "") + b.binder;
                           break;
                       }
                       out += " -> ";
                       term(b.body, kExpr);
                     }
                     out += "}";
                     close(p > kExpr);
                   },
                   [&](const node::Const& x) {
                     switch (x.kind) {
                       case ConstKind::Send: out += "send"; break;
                       case ConstKind::Receive: out += "receive"; break;
                       case ConstKind::Select: out += "select " + x.label; break;
                       case ConstKind::Close: out += "close"; break;
                       case ConstKind::Wait: out += "wait"; break;
                       case ConstKind::Fork: out += "fork"; break;
                       case ConstKind::ForkWith: out += "forkWith"; break;
                       case ConstKind::New: out += "new (" + pretty_type(x.session) + ")"; break;
                     }
                   },
                   [&](const node::Chan& x) { out += "#" + std::to_string(x.endpoint); },
               },
               t->node);
  }

  void ctx_value(const CtxValue& cv) {
    for (std::size_t i = 0; i < cv.binders.size(); ++i) {
      auto& b = cv.binders[i];
      if (i) out += ", ";
      std::string s = b.name;
      if (b.level) s += "^" + std::to_string(b.level);
      if (b.annot) {
        s += " : ";
        s += b.annot->params.empty() ? pretty_type(b.annot->result) : "(" + pretty_ctx_type(*b.annot) + ")";
        s = "(" + s + ")";
      }
      out += s;
    }
    if (!cv.binders.empty()) out += ". ";
    term(cv.body, kExpr);
  }

 private:
  void open(bool paren) {
    if (paren) out += "(";
  }
  void close(bool paren) {
    if (paren) out += ")";
  }
};

}  // namespace

std::string pretty(const TermRef& t) {
  Printer p;
  p.term(t, kExpr);
  return p.out;
}

std::string pretty(const CtxValue& cv) {
  Printer p;
  p.ctx_value(cv);
  return p.out;
}

std::string pretty_program(const Program& prog) {
  std::string out;
  for (auto& t : prog.types) out += "type " + t.name + " = " + pretty_type(t.body) + "\n";
  for (auto& d : prog.terms) {
    out += d.name + " : " + (d.mult == Mult::Unrestricted ? "un " : "") + pretty_type(d.type) + "\n";
    out += d.name + " = " + pretty(d.body) + "\n";
  }
  return out;
}

}  // namespace lcm
