#include "lcm/parse.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace lcm {

namespace {

std::string join_expected(const std::vector<std::string>& expected) {
  std::string out;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i) out += i + 1 == expected.size() ? " or " : ", ";
    out += expected[i];
  }
  return out;
}

}  // namespace

ParseError::ParseError(Span span, std::size_t offset, std::vector<std::string> expected,
                       std::string found)
    : std::runtime_error("parse error at " + std::to_string(span.line) + ":" +
                         std::to_string(span.col) + ": expected " + join_expected(expected) +
                         ", found " + found),
      span_(span),
      offset_(offset),
      expected_(std::move(expected)) {}

namespace {

// ----------------------------------------------------------------------------
// Lexer

enum class Tok { Ident, Int, Sym, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::int64_t value = 0;
  Span span;
  std::size_t offset = 0;
};

const std::set<std::string, std::less<>> kKeywords = {
    "let",  "in",   "box",     "match", "with", "send", "receive", "select",
    "close", "wait", "fork",   "forkWith", "new", "type", "rec",   "Dual",
    "Unit", "Int",  "Wait",    "Close", "un"};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '$';
}

bool ends_operand(const Token& t) {
  if (t.kind == Tok::Int) return true;
  if (t.kind == Tok::Ident) return !kKeywords.count(t.text);
  return t.kind == Tok::Sym && (t.text == ")" || t.text == "]");
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (true) {
    while (i < src.size()) {
      if (std::isspace(static_cast<unsigned char>(src[i]))) {
        advance(1);
      } else if (src.substr(i, 2) == "--") {
        while (i < src.size() && src[i] != '\n') advance(1);
      } else {
        break;
      }
    }
    Token t;
    t.span = {line, col};
    t.offset = i;
    if (i >= src.size()) {
      t.kind = Tok::End;
      out.push_back(t);
      return out;
    }
    char c = src[i];
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      t.kind = Tok::Ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '-' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])) &&
                (out.empty() || !ends_operand(out.back())))) {
      std::size_t j = i + 1;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tok::Int;
      t.text = std::string(src.substr(i, j - i));
      try {
        t.value = std::stoll(t.text);
      } catch (const std::out_of_range&) {
        throw ParseError(t.span, t.offset, {"integer literal in range"}, "'" + t.text + "'");
      }
      advance(j - i);
    } else {
      static const char* kTwo[] = {"-o", "|-", "->"};
      t.kind = Tok::Sym;
      for (auto two : kTwo) {
        if (src.substr(i, 2) == two && !(two[1] == 'o' && i + 2 < src.size() && ident_char(src[i + 2]))) {
          t.text = two;
          break;
        }
      }
      if (t.text.empty()) {
        static const std::string kOne = "\\.()[]{},;=:^*+-?!&#";
        if (kOne.find(c) == std::string::npos)
          throw ParseError(t.span, t.offset, {"a token"}, std::string("'") + c + "'");
        t.text = std::string(1, c);
      }
      advance(t.text.size());
    }
    out.push_back(std::move(t));
  }
}

// ----------------------------------------------------------------------------
// Parser

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  // -- helpers ---------------------------------------------------------------

  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  bool at_end() const { return peek().kind == Tok::End; }
  bool is_sym(const char* s, std::size_t k = 0) const {
    return peek(k).kind == Tok::Sym && peek(k).text == s;
  }
  bool is_kw(const char* s, std::size_t k = 0) const {
    return peek(k).kind == Tok::Ident && peek(k).text == s;
  }
  bool is_name(std::size_t k = 0) const {
    return peek(k).kind == Tok::Ident && !kKeywords.count(peek(k).text);
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(t.span, t.offset, std::move(expected), found);
  }

  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  void expect_sym(const char* s) {
    if (!is_sym(s)) fail({std::string("'") + s + "'"});
    next();
  }
  void expect_kw(const char* s) {
    if (!is_kw(s)) fail({std::string("'") + s + "'"});
    next();
  }
  std::string expect_name(const char* what = "identifier") {
    if (!is_name()) fail({what});
    return next().text;
  }
  unsigned expect_nat() {
    if (peek().kind != Tok::Int || peek().value < 0) fail({"level"});
    return static_cast<unsigned>(next().value);
  }
  void expect_end() {
    if (!at_end()) fail({"end of input"});
  }

  // -- types -----------------------------------------------------------------

  TypeRef type() {
    auto lhs = prod_type();
    if (is_sym("-o")) {
      next();
      return types::arrow(lhs, type());
    }
    return lhs;
  }

  TypeRef prod_type() {
    auto lhs = type_atom();
    if (is_sym("*")) {
      next();
      return types::prod(lhs, prod_type());
    }
    return lhs;
  }

  Branches branches() {
    expect_sym("{");
    Branches out;
    do {
      Span at = peek().span;
      std::size_t off = peek().offset;
      std::string label = expect_name("label");
      expect_sym(":");
      if (!out.emplace(label, type()).second)
        throw ParseError(at, off, {"distinct labels"}, "'" + label + "'");
    } while (is_sym(",") && (next(), true));
    expect_sym("}");
    return out;
  }

  TypeRef type_atom() {
    const Token& t = peek();
    if (t.kind == Tok::Ident) {
      if (t.text == "Unit") return next(), types::unit();
      if (t.text == "Int") return next(), types::integer();
      if (t.text == "Close") return next(), types::close();
      if (t.text == "Wait") return next(), types::wait();
      if (t.text == "Dual") return next(), types::dual(type_atom());
      if (t.text == "rec") {
        next();
        auto v = expect_name("recursion variable");
        expect_sym(".");
        return types::mu(v, type_atom());
      }
      if (is_name()) return types::named(next().text);
    }
    if (is_sym("?") || is_sym("!")) {
      bool out = next().text == "!";
      auto payload = type_atom();
      expect_sym(".");
      auto cont = type_atom();
      return out ? types::send(payload, cont) : types::recv(payload, cont);
    }
    if (is_sym("&")) return next(), types::branch(branches());
    if (is_sym("+")) return next(), types::select(branches());
    if (is_sym("[")) {
      next();
      CtxType c = ctx_list("]");
      expect_sym("]");
      return types::box(std::move(c));
    }
    if (is_sym("(")) {
      next();
      auto t2 = type();
      expect_sym(")");
      return t2;
    }
    fail({"type"});
  }

  /// Looks for `|-` at bracket depth 0 before the `(` at the cursor closes.
  bool paren_holds_turnstile() const {
    int depth = 0;
    for (std::size_t k = 0;; ++k) {
      const Token& t = peek(k);
      if (t.kind == Tok::End) return false;
      if (t.kind != Tok::Sym) continue;
      if (t.text == "(" || t.text == "[" || t.text == "{") ++depth;
      else if (t.text == ")" || t.text == "]" || t.text == "}") {
        if (--depth == 0) return false;
      } else if (t.text == "|-" && depth == 1) {
        return true;
      }
    }
  }

  CtxType ctx_type() {
    if (is_sym("(") && paren_holds_turnstile()) {
      next();
      CtxType c = ctx_list(")");
      expect_sym(")");
      return c;
    }
    return types::plain(type());
  }

  /// `ctx |- type`
  CtxType ctx_list(const char*) {
    CtxType c;
    if (!is_sym("|-")) {
      for (;;) {
        c.params.push_back(ctx_type());
        if (is_sym("^")) {
          next();
          c.set_level(c.params.size() - 1, expect_nat());
        }
        if (!is_sym(",")) break;
        next();
      }
    }
    expect_sym("|-");
    c.result = type();
    return c;
  }

  // -- terms -----------------------------------------------------------------

  TermRef seq() {
    Span at = peek().span;
    auto lhs = expr();
    if (is_sym(";")) {
      next();
      return make(node::LetUnit{lhs, seq()}, at);
    }
    return lhs;
  }

  std::pair<std::string, TypeRef> lam_binder() {
    if (is_sym("(")) {
      next();
      auto name = binder_name();
      expect_sym(":");
      auto t = type();
      expect_sym(")");
      return {name, t};
    }
    return {binder_name(), nullptr};
  }

  std::string binder_name() {
    if (is_kw("_") || is_name()) return next().text;
    fail({"binder"});
  }

  TermRef expr() {
    Span at = peek().span;
    if (is_sym("\\")) {
      next();
      Mult m = Mult::Linear;
      if (is_kw("un")) {
        next();
        m = Mult::Unrestricted;
      }
      auto [name, annot] = lam_binder();
      expect_sym(".");
      return make(node::Lam{name, m, annot, seq()}, at);
    }
    if (is_kw("let")) {
      next();
      if (is_sym("*")) {
        next();
        expect_sym("=");
        auto m = seq();
        expect_kw("in");
        return make(node::LetUnit{m, seq()}, at);
      }
      if (is_kw("box")) {
        next();
        auto x = binder_name();
        std::optional<unsigned> level;
        if (is_sym("^")) {
          next();
          level = expect_nat();
        }
        expect_sym("=");
        auto m = seq();
        expect_kw("in");
        return make(node::LetBox{x, level, m, seq()}, at);
      }
      if (is_sym("(")) {
        next();
        auto x = binder_name();
        expect_sym(",");
        auto y = binder_name();
        expect_sym(")");
        expect_sym("=");
        auto m = seq();
        expect_kw("in");
        return make(node::LetPair{x, y, m, seq()}, at);
      }
      if (is_name() || is_kw("_")) {
        auto x = binder_name();
        expect_sym("=");
        auto m = seq();
        expect_kw("in");
        auto body = seq();
        return make(node::App{make(node::Lam{x, Mult::Linear, nullptr, body}, at), m}, at);
      }
      fail({"'*'", "'box'", "'('", "identifier"});
    }
    if (is_kw("match")) {
      next();
      auto scrut = seq();
      expect_kw("with");
      expect_sym("{");
      std::vector<MatchBranch> bs;
      do {
        bs.push_back(match_branch());
      } while (is_sym(",") && (next(), true));
      expect_sym("}");
      return make(node::Match{scrut, std::move(bs)}, at);
    }
    return sum();
  }

  MatchBranch match_branch() {
    MatchBranch b;
    if (peek().kind == Tok::Int) {
      b.kind = PatternKind::Int;
      b.value = next().value;
    } else if (is_kw("un")) {
      next();
      b.kind = PatternKind::Default;
      b.mult = Mult::Unrestricted;
      b.binder = binder_name();
    } else if ((is_name() || is_kw("_")) && is_sym("->", 1)) {
      b.kind = PatternKind::Default;
      b.binder = binder_name();
    } else {
      b.kind = PatternKind::Label;
      b.label = expect_name("label");
      b.binder = binder_name();
    }
    expect_sym("->");
    b.body = seq();
    return b;
  }

  TermRef sum() {
    Span at = peek().span;
    auto lhs = diff();
    if (is_sym("+")) {
      next();
      return make(node::Arith{ArithOp::Add, lhs, sum()}, at);
    }
    return lhs;
  }

  TermRef diff() {
    Span at = peek().span;
    auto lhs = product();
    while (is_sym("-")) {
      next();
      lhs = make(node::Arith{ArithOp::Sub, lhs, product()}, at);
    }
    return lhs;
  }

  TermRef product() {
    Span at = peek().span;
    auto lhs = application();
    if (is_sym("*")) {
      next();
      return make(node::Arith{ArithOp::Mul, lhs, product()}, at);
    }
    return lhs;
  }

  bool starts_atom(std::size_t k = 0) const {
    const Token& t = peek(k);
    if (t.kind == Tok::Int) return true;
    if (t.kind == Tok::Ident) {
      static const std::set<std::string> kTermKw = {"box",  "send", "receive",  "select", "close",
                                                    "wait", "fork", "forkWith", "new",    "let",
                                                    "match"};
      return !kKeywords.count(t.text) || kTermKw.count(t.text) || t.text == "_";
    }
    return t.kind == Tok::Sym && (t.text == "(" || t.text == "*" || t.text == "\\");
  }

  /// In argument position `*` is the unit value only when no operand follows;
  /// otherwise it is multiplication.
  bool starts_argument() const {
    if (!starts_atom()) return false;
    if (is_sym("*")) return !starts_atom(1);
    return !is_kw("_");
  }

  TermRef application() {
    Span at = peek().span;
    auto fn = atom();
    while (starts_argument()) fn = make(node::App{fn, atom()}, at);
    return fn;
  }

  /// True when the cursor begins `binders .`
  bool binders_ahead() const {
    std::size_t k = 0;
    if (peek(k).kind == Tok::Sym && peek(k).text == ".") return true;
    while (true) {
      if (peek(k).kind == Tok::Sym && peek(k).text == "(") {
        if (!(peek(k + 1).kind == Tok::Ident)) return false;
        k += 2;
        if (peek(k).kind == Tok::Sym && peek(k).text == "^") k += 2;
        if (!(peek(k).kind == Tok::Sym && peek(k).text == ":")) return false;
        int depth = 1;
        while (depth > 0) {
          ++k;
          const Token& t = peek(k);
          if (t.kind == Tok::End) return false;
          if (t.kind == Tok::Sym && (t.text == "(" || t.text == "[" || t.text == "{")) ++depth;
          if (t.kind == Tok::Sym && (t.text == ")" || t.text == "]" || t.text == "}")) --depth;
        }
        ++k;
      } else if (peek(k).kind == Tok::Ident && !kKeywords.count(peek(k).text)) {
        ++k;
        if (peek(k).kind == Tok::Sym && peek(k).text == "^") {
          if (peek(k + 1).kind != Tok::Int) return false;
          k += 2;
        }
      } else {
        return false;
      }
      if (peek(k).kind == Tok::Sym && peek(k).text == ".") return true;
      if (!(peek(k).kind == Tok::Sym && peek(k).text == ",")) return false;
      ++k;
    }
  }

  Binder binder() {
    Binder b;
    bool paren = is_sym("(");
    if (paren) next();
    b.name = expect_name("binder");
    if (is_sym("^")) {
      next();
      b.level = expect_nat();
    }
    if (paren) {
      expect_sym(":");
      b.annot = ctx_type();
      expect_sym(")");
    }
    return b;
  }

  CtxValue ctx_value() {
    CtxValue cv;
    if (binders_ahead()) {
      if (!is_sym(".")) {
        cv.binders.push_back(binder());
        while (is_sym(",")) {
          next();
          cv.binders.push_back(binder());
        }
      }
      expect_sym(".");
    }
    cv.body = seq();
    return cv;
  }

  TermRef atom() {
    Span at = peek().span;
    const Token& t = peek();
    if (t.kind == Tok::Int) return make(node::IntLit{next().value}, at);
    if (is_sym("*")) return next(), make(node::Unit{}, at);
    if (is_sym("\\")) return expr();
    if (is_sym("(")) {
      next();
      auto e = seq();
      if (is_sym(",")) {
        next();
        auto snd = seq();
        expect_sym(")");
        return make(node::Pair{e, snd}, at);
      }
      expect_sym(")");
      return e;
    }
    if (t.kind == Tok::Ident) {
      const std::string& w = t.text;
      if (w == "let" || w == "match") return expr();
      if (w == "box") {
        next();
        if (!is_sym("(")) return make(node::BoxVal{closed(atom())}, at);
        next();
        if (binders_ahead()) {
          auto cv = ctx_value();
          expect_sym(")");
          return make(node::BoxVal{std::move(cv)}, at);
        }
        auto e = seq();
        if (is_sym(",")) {
          next();
          auto snd = seq();
          e = make(node::Pair{e, snd}, at);
        }
        expect_sym(")");
        return make(node::BoxVal{closed(e)}, at);
      }
      static const std::map<std::string, ConstKind> kConsts = {
          {"send", ConstKind::Send},   {"receive", ConstKind::Receive},
          {"close", ConstKind::Close}, {"wait", ConstKind::Wait},
          {"fork", ConstKind::Fork},   {"forkWith", ConstKind::ForkWith}};
      if (auto c = kConsts.find(w); c != kConsts.end()) return next(), make(node::Const{c->second, {}, nullptr}, at);
      if (w == "select") {
        next();
        return make(node::Const{ConstKind::Select, expect_name("label"), nullptr}, at);
      }
      if (w == "new") {
        next();
        return make(node::Const{ConstKind::New, {}, type_atom()}, at);
      }
      if (is_name() && w != "_") {
        auto name = next().text;
        std::vector<CtxValue> args;
        if (is_sym("[")) {
          next();
          if (!is_sym("]")) {
            args.push_back(ctx_value());
            while (is_sym(",")) {
              next();
              args.push_back(ctx_value());
            }
          }
          expect_sym("]");
        }
        return make(node::Var{name, std::move(args)}, at);
      }
    }
    fail({"term"});
  }

  // -- declarations ----------------------------------------------------------

  Pattern pattern() {
    Pattern p;
    if (peek().kind == Tok::Int) {
      p.kind = Pattern::Kind::Int;
      p.value = next().value;
    } else if (is_sym("(")) {
      next();
      p.kind = Pattern::Kind::Label;
      p.label = expect_name("label");
      p.name = binder_name();
      expect_sym(")");
    } else {
      p.kind = Pattern::Kind::Var;
      p.name = binder_name();
    }
    return p;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

[[noreturn]] void structure_error(Span at, std::string what) {
  throw ParseError(at, 0, {std::move(what)}, "declaration");
}

/// Turns the clauses of one declaration into a single term.
TermRef desugar(const TermDecl& d) {
  const auto& cs = d.clauses;
  std::size_t arity = cs.front().patterns.size();
  for (auto& c : cs)
    if (c.patterns.size() != arity) structure_error(c.span, "the same number of patterns in every clause");
  if (arity == 0) {
    if (cs.size() != 1) structure_error(cs[1].span, "a single clause for '" + d.name + "'");
    return cs.front().body;
  }

  std::optional<std::size_t> dispatch;
  for (std::size_t i = 0; i < arity; ++i) {
    bool all_vars = std::all_of(cs.begin(), cs.end(), [&](const Clause& c) {
      return c.patterns[i].kind == Pattern::Kind::Var;
    });
    if (all_vars) {
      for (auto& c : cs)
        if (c.patterns[i].name != cs.front().patterns[i].name)
          structure_error(c.span, "the same parameter name in every clause");
      continue;
    }
    if (dispatch) structure_error(d.span, "at most one pattern-matched parameter");
    dispatch = i;
  }
  if (!dispatch && cs.size() > 1) structure_error(cs[1].span, "a single clause for '" + d.name + "'");

  std::vector<std::string> params(arity);
  for (std::size_t i = 0; i < arity; ++i) params[i] = cs.front().patterns[i].name;

  TermRef body;
  if (!dispatch) {
    body = cs.front().body;
  } else {
    std::size_t k = *dispatch;
    std::vector<MatchBranch> bs;
    bool ints = cs.front().patterns[k].kind != Pattern::Kind::Label;
    for (std::size_t ci = 0; ci < cs.size(); ++ci) {
      const Pattern& p = cs[ci].patterns[k];
      MatchBranch b;
      b.body = cs[ci].body;
      if (ints) {
        if (p.kind == Pattern::Kind::Label) structure_error(cs[ci].span, "an integer or variable pattern");
        if (p.kind == Pattern::Kind::Var) {
          if (ci + 1 != cs.size()) structure_error(cs[ci].span, "the variable clause last");
          b.kind = PatternKind::Default;
          b.binder = p.name;
          b.mult = d.mult;
        } else {
          b.kind = PatternKind::Int;
          b.value = p.value;
        }
      } else {
        if (p.kind != Pattern::Kind::Label) structure_error(cs[ci].span, "a label pattern");
        b.kind = PatternKind::Label;
        b.label = p.label;
        b.binder = p.name;
      }
      bs.push_back(std::move(b));
    }
    if (ints && bs.back().kind != PatternKind::Default)
      structure_error(cs.back().span, "a final variable clause covering the remaining integers");
    params[k] = ints ? bs.back().binder : bs.front().binder;
    if (params[k] == "_") params[k] = "arg$" + std::to_string(k);
    if (ints && bs.back().binder == "_") bs.back().binder = params[k];
    body = make(node::Match{var(params[k], {}, cs.front().span), std::move(bs)}, cs.front().span);
  }
  for (std::size_t i = arity; i-- > 0;)
    body = make(node::Lam{params[i], d.mult, nullptr, body}, cs.front().span);
  return body;
}

}  // namespace

TermRef parse_term(std::string_view text) {
  Parser p(lex(text));
  auto t = p.seq();
  p.expect_end();
  return t;
}

TypeRef parse_type(std::string_view text) {
  Parser p(lex(text));
  auto t = p.type();
  p.expect_end();
  return t;
}

Program parse_program(std::string_view text) {
  auto toks = lex(text);
  // Split at tokens in column 1.
  std::vector<std::vector<Token>> groups;
  for (auto& t : toks) {
    if (t.kind == Tok::End) break;
    if (t.span.col == 1 || groups.empty()) groups.emplace_back();
    groups.back().push_back(t);
  }

  Program prog;
  std::map<std::string, std::size_t> index;
  std::vector<bool> has_sig;
  for (auto& g : groups) {
    Token end;
    end.kind = Tok::End;
    end.span = toks.back().span;
    end.offset = toks.back().offset;
    const Token& last = g.back();
    // The end of a group sits right after its last token.
    end.span = {last.span.line, last.span.col + static_cast<int>(last.text.size())};
    end.offset = last.offset + last.text.size();
    g.push_back(end);
    Parser p(std::move(g));
    Span at = p.peek().span;

    if (p.is_kw("type")) {
      p.next();
      TypeDecl td;
      td.span = at;
      td.name = p.expect_name("type name");
      p.expect_sym("=");
      td.body = p.type();
      p.expect_end();
      prog.types.push_back(std::move(td));
      continue;
    }

    std::string name = p.expect_name("declaration");
    auto [it, fresh] = index.emplace(name, prog.terms.size());
    if (fresh) {
      TermDecl d;
      d.name = name;
      d.span = at;
      prog.terms.push_back(std::move(d));
      has_sig.push_back(false);
    }
    TermDecl& d = prog.terms[it->second];

    if (p.is_sym(":")) {
      p.next();
      if (has_sig[it->second]) structure_error(at, "one signature for '" + name + "'");
      has_sig[it->second] = true;
      if (p.is_kw("un")) {
        p.next();
        d.mult = Mult::Unrestricted;
      }
      d.type = p.type();
      d.span = at;
      p.expect_end();
      continue;
    }

    Clause c;
    c.span = at;
    while (!p.is_sym("=")) {
      if (p.at_end()) p.fail({"'='"});
      c.patterns.push_back(p.pattern());
    }
    p.next();
    c.body = p.seq();
    p.expect_end();
    d.clauses.push_back(std::move(c));
  }

  for (std::size_t i = 0; i < prog.terms.size(); ++i) {
    auto& d = prog.terms[i];
    if (!has_sig[i]) structure_error(d.clauses.front().span, "a type signature for '" + d.name + "'");
    if (d.clauses.empty()) structure_error(d.span, "a definition for '" + d.name + "'");
    d.body = desugar(d);
  }
  return prog;
}

}  // namespace lcm
