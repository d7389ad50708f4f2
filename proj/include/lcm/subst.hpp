// Free variables and capture-avoiding contextual substitution.
#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcm/syntax.hpp"

namespace lcm {

/// Deterministic fresh names of the form `base$k`.
class NameSupply {
 public:
  std::string fresh(const std::string& base, const std::set<std::string>& avoid);

 private:
  unsigned next_ = 0;
};

class SubstError : public std::runtime_error {
 public:
  enum class Kind { ArityMismatch, AmbiguousOccurrence };
  SubstError(Kind kind, std::string msg) : std::runtime_error(std::move(msg)), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Linear substitution follows the variable into the single subterm of a
/// two-premise eliminator where it is free, and fails with
/// AmbiguousOccurrence when it is free in both. Shared substitution is the
/// plain homomorphic extension, used for unrestricted binders.
enum class SubstMode { Linear, Shared };

std::set<std::string> free_vars(const TermRef& m);
std::set<std::string> free_vars(const CtxValue& cv);
bool occurs_free(const std::string& x, const TermRef& m);

/// `[sigma/x]m`. On `x[rho]` this yields `[rho/z]M` for `sigma = z.M`.
TermRef subst(const CtxValue& sigma, const std::string& x, const TermRef& m, NameSupply& names,
              SubstMode mode = SubstMode::Linear);
TermRef subst(const CtxValue& sigma, const std::string& x, const TermRef& m,
              SubstMode mode = SubstMode::Linear);

/// `[rho1/z1]...[rhon/zn]m`, applied left to right. Binders that clash with
/// free variables of the arguments are renamed first.
TermRef simul_subst(const std::vector<CtxValue>& args, const std::vector<std::string>& binders,
                    const TermRef& m, NameSupply& names, SubstMode mode = SubstMode::Linear);
TermRef simul_subst(const std::vector<CtxValue>& args, const std::vector<std::string>& binders,
                    const TermRef& m, SubstMode mode = SubstMode::Linear);

/// Renames free occurrences of `from`; `to` must not occur in `m`.
TermRef rename_free(const TermRef& m, const std::string& from, const std::string& to);

bool alpha_equiv(const TermRef& a, const TermRef& b);
bool alpha_equiv(const CtxValue& a, const CtxValue& b);

/// Number of AST nodes (terms; contextual values are not counted separately).
std::size_t term_size(const TermRef& m);

}  // namespace lcm
