// Small-step call-by-value evaluation by textual substitution.
#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "lcm/syntax.hpp"

namespace lcm {

/// Top-level definitions, unfolded on use.
using Globals = std::map<std::string, TermRef>;
Globals globals_of(const Program& p);

/// `*`, integers, lambdas, boxes, channels, pairs of values, constants and
/// `send v` waiting for its channel.
bool is_value(const TermRef& m);

/// One frame of an evaluation context: the hole is child `slot` of `parent`.
struct Frame {
  TermRef parent;
  int slot = 0;
};
/// Outermost frame first.
using EvalCtx = std::vector<Frame>;

TermRef plug(const EvalCtx& ctx, TermRef t);

namespace step_result {
struct Stepped {
  TermRef term;
  std::string rule;
};
struct IsValue {};
/// A session operation (or `new`) in evaluation position; the runtime
/// resolves it and plugs the answer into `ctx`.
struct NeedsComm {
  EvalCtx ctx;
  TermRef redex;
};
struct Stuck {
  std::string reason;
};
}  // namespace step_result

using StepResult = std::variant<step_result::Stepped, step_result::IsValue, step_result::NeedsComm,
                                step_result::Stuck>;

struct EvalStats {
  std::size_t steps = 0;
  /// Beta or let-box steps whose linear binder did not occur in the body.
  std::size_t vacuous_substitutions = 0;
};

StepResult step(const TermRef& m, const Globals& globals = {}, EvalStats* stats = nullptr);

struct EvalOptions {
  std::size_t max_steps = 100000;
  std::function<void(std::size_t, const std::string&, const TermRef&)> on_step;
};

struct EvalResult {
  enum class Status { Value, Timeout, CommRequired, Stuck };
  Status status = Status::Value;
  TermRef term;
  std::size_t steps = 0;
  std::string reason;
};

EvalResult eval(const TermRef& m, const Globals& globals = {}, const EvalOptions& opts = {},
                EvalStats* stats = nullptr);

/// `k: RULE  <term>`, the term cut to 120 characters.
std::string trace_line(std::size_t k, const std::string& rule, const TermRef& t);

}  // namespace lcm
