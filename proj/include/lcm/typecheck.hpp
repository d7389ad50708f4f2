// Leftover-style typechecking: every judgement takes a context, marks the
// linear entries it consumes, and leaves the rest for the caller.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lcm/syntax.hpp"

namespace lcm {

/// Synthesizes the type of `m`, marking consumed entries of `ctx` as used.
/// Throws TypeError.
TypeRef check_term(TypingCtx& ctx, const TermRef& m, const AliasTable& aliases = {});

/// Checks `m` against `expected`. Lambdas and boxes without annotations need
/// this direction.
void check_term_against(TypingCtx& ctx, const TermRef& m, const TypeRef& expected,
                        const AliasTable& aliases = {});

/// Checks a contextual value. Without an explicit `level` the lowest level
/// admitted by the binders is used, which hides the fewest outer entries.
CtxType check_ctx_value(TypingCtx& ctx, const CtxValue& cv, std::optional<unsigned> level = {},
                        const CtxType* expected = nullptr, const AliasTable& aliases = {});

/// Types that may be dropped or copied without breaking linearity.
bool discardable(const TypeRef& t);

struct CheckedProgram {
  AliasTable aliases;
  std::map<std::string, TypeRef> signatures;
  std::vector<TypeError> errors;

  bool ok() const { return errors.empty(); }
  /// Context holding every well-formed top-level name as an unrestricted entry.
  TypingCtx globals() const;
};

/// Resolves aliases and checks every declaration, collecting all errors.
CheckedProgram check_program(const Program& p);

}  // namespace lcm
