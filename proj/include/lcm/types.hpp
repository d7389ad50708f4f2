// Types, session types, typing contexts, duality and equi-recursive equality.
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "lcm/diagnostics.hpp"

namespace lcm {

enum class Mult { Linear, Unrestricted };

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

struct Type;
using TypeRef = std::shared_ptr<const Type>;

/// Contextual type `(t1^k1, ..., tn^kn |- T)`. A parameter's level is the
/// level of the binder it types; missing levels are 0.
struct CtxType {
  std::vector<CtxType> params;
  TypeRef result;
  std::vector<unsigned> levels;

  unsigned level(std::size_t i) const { return i < levels.size() ? levels[i] : 0; }
  void set_level(std::size_t i, unsigned k) {
    if (k == 0 && i >= levels.size()) return;
    if (levels.size() <= i) levels.resize(i + 1, 0);
    levels[i] = k;
  }
};

using Branches = std::map<std::string, TypeRef>;

namespace ty {
struct Unit {};
struct Int {};
struct Arrow {
  TypeRef from, to;
};
struct Prod {
  TypeRef fst, snd;
};
struct Box {
  CtxType ctx;
};
struct Send {
  TypeRef payload, cont;
};
struct Recv {
  TypeRef payload, cont;
};
/// Internal choice `+{...}`.
struct Select {
  Branches branches;
};
/// External choice `&{...}`.
struct Branch {
  Branches branches;
};
struct Close {};
struct Wait {};
struct Mu {
  std::string var;
  TypeRef body;
};
/// A bound recursion variable.
struct Var {
  std::string name;
};
/// An unresolved name as written in source; removed by resolve_type.
struct Named {
  std::string name;
};
/// `Dual T` as written in source; removed by resolve_type.
struct Dual {
  TypeRef of;
};
}  // namespace ty

struct Type {
  using Node = std::variant<ty::Unit, ty::Int, ty::Arrow, ty::Prod, ty::Box, ty::Send, ty::Recv,
                            ty::Select, ty::Branch, ty::Close, ty::Wait, ty::Mu, ty::Var,
                            ty::Named, ty::Dual>;
  Node node;

  template <class T>
  const T* as() const {
    return std::get_if<T>(&node);
  }
  template <class T>
  bool is() const {
    return std::holds_alternative<T>(node);
  }
};

namespace types {
TypeRef unit();
TypeRef integer();
TypeRef arrow(TypeRef a, TypeRef b);
TypeRef prod(TypeRef a, TypeRef b);
TypeRef box(CtxType c);
TypeRef send(TypeRef payload, TypeRef cont);
TypeRef recv(TypeRef payload, TypeRef cont);
TypeRef select(Branches b);
TypeRef branch(Branches b);
TypeRef close();
TypeRef wait();
TypeRef mu(std::string var, TypeRef body);
TypeRef var(std::string name);
TypeRef named(std::string name);
TypeRef dual(TypeRef of);
/// `(|- T)`
CtxType plain(TypeRef t);
}  // namespace types

bool is_session(const Type& t);

/// Structural equality; Mu binders compared by name.
bool same_type(const TypeRef& a, const TypeRef& b);
bool same_ctx_type(const CtxType& a, const CtxType& b);

/// Alpha-insensitive canonical key (recursion variables as de Bruijn indices).
std::string canonical(const TypeRef& t);

std::set<std::string> free_type_vars(const TypeRef& t);

// ----------------------------------------------------------------------------
// Aliases

using AliasTable = std::map<std::string, TypeRef>;

/// Replaces alias names and `Dual` by their meaning. Recursive aliases become
/// Mu types. Enforces that recursion variables appear only in session
/// continuation positions (PayloadRecursion), that Mu bodies are contractive
/// (NonContractive) and that session positions hold session types.
TypeRef resolve_type(const TypeRef& t, const AliasTable& aliases, Span where = {});
CtxType resolve_ctx_type(const CtxType& c, const AliasTable& aliases, Span where = {});

/// Resolves every alias body in the table; throws on the first bad alias.
AliasTable resolve_aliases(const AliasTable& raw);

// ----------------------------------------------------------------------------
// Session operations

/// Peer view of a session: ! <-> ?, + <-> &, Close <-> Wait. Payloads are
/// unchanged. Throws DualityUndefined on non-session input or on a
/// recursion variable below a payload.
TypeRef dual(const TypeRef& s);

/// One-step unfolding of a top-level Mu; identity otherwise.
TypeRef unfold(const TypeRef& s);

/// Unfolds until the head is not a Mu.
TypeRef unfold_head(TypeRef s);

/// `[replacement/var]t`, avoiding capture by inner Mu binders.
TypeRef subst_type_var(const TypeRef& t, const std::string& var, const TypeRef& replacement);

/// Equality of the regular trees obtained by unfolding every Mu.
bool type_equiv(const TypeRef& a, const TypeRef& b);
bool ctx_type_equiv(const CtxType& a, const CtxType& b);

// ----------------------------------------------------------------------------
// Typing contexts

struct CtxEntry {
  std::string name;
  unsigned level = 0;
  std::optional<CtxType> type;  // unknown until the single use site fixes it
  Mult mult = Mult::Linear;
  bool used = false;

  bool live() const { return mult == Mult::Linear && !used; }
};

/// Ordered typing context. Lookups resolve to the innermost entry of a name.
/// Entries may be hidden while a fragment of some level is checked: a linear
/// entry pushed before the hide point whose level is below that fragment's
/// level is out of reach until the hide is lifted.
class TypingCtx {
 public:
  std::size_t size() const { return entries_.size(); }
  const std::vector<CtxEntry>& entries() const { return entries_; }
  CtxEntry& at(std::size_t i) { return entries_.at(i); }
  const CtxEntry& at(std::size_t i) const { return entries_.at(i); }

  void push(CtxEntry e) { entries_.push_back(std::move(e)); }
  CtxEntry pop();
  std::optional<std::size_t> lookup(const std::string& name) const;
  struct Hide {
    std::size_t limit;
    unsigned level;
    bool code;  // pushed by a contextual value rather than a let-box
  };

  bool hidden(std::size_t index) const { return hider(index) != nullptr; }
  /// The outermost hide covering the entry, if any.
  const Hide* hider(std::size_t index) const;

  void hide_below(unsigned level, bool code = false) {
    hides_.push_back({entries_.size(), level, code});
  }
  void unhide() { hides_.pop_back(); }

  /// True when no linear entry is left unconsumed.
  bool fully_consumed() const;

 private:
  std::vector<CtxEntry> entries_;
  std::vector<Hide> hides_;
};

/// max(0, levels of live entries) < n
bool ctx_below(const TypingCtx& ctx, unsigned n);
/// no live entries, or all live entries have level >= n
bool ctx_at_least(const TypingCtx& ctx, unsigned n);

// ----------------------------------------------------------------------------
// Rendering

std::string pretty_type(const TypeRef& t);
std::string pretty_ctx_type(const CtxType& c);

}  // namespace lcm
