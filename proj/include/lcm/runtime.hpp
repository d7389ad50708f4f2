// Deterministic thread soup with synchronous channels.
#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "lcm/eval.hpp"

namespace lcm {

struct TraceEvent {
  enum class Kind { Sent, Selected, Closed, Spawned, Halted };
  Kind kind = Kind::Sent;
  int pair = -1;      // channel pair, for channel events
  int endpoint = -1;  // the acting endpoint: sender, selector or closer
  int thread = -1;    // for Spawned and Halted
  std::string payload;
};

/// `SEQ EVENT chan=N payload=<rendering>`; thread events use `chan=-`.
std::string render_event(std::size_t seq, const TraceEvent& e);
std::string render_trace(const std::vector<TraceEvent>& trace);

/// Values print as terms.
std::string render_value(const TermRef& v);

struct Thread {
  enum class Status { Runnable, Blocked, Done };
  int id = 0;
  TermRef term;
  Status status = Status::Runnable;
  // While blocked: the pending session operation.
  EvalCtx hole;
  TermRef request;
  int endpoint = -1;
};

struct Endpoint {
  int owner = -1;
  TypeRef session;  // known only for channels made by `new`
};

struct RunOptions {
  std::size_t max_steps = 1000000;
  std::size_t quantum = 256;
  std::function<void(int thread, std::size_t k, const std::string& rule, const TermRef& t)> on_step;
};

struct RunResult {
  enum class Status { Success, Deadlock, Timeout, Stuck };
  Status status = Status::Success;
  std::vector<TraceEvent> trace;
  std::vector<Thread> threads;
  /// Endpoints still open at the end; empty after a successful run.
  std::map<int, Endpoint> channels;
  std::size_t steps = 0;
  std::string report;
};

std::string to_string(RunResult::Status s);

/// Runs `entry` as thread 0 until every thread is done, all live threads are
/// blocked (deadlock) or the step budget runs out.
RunResult run_config(const TermRef& entry, const Globals& globals = {}, const RunOptions& opts = {});

/// Replays the channel events of `pair` against the session type seen from
/// its first endpoint. Returns an empty string on success, a reason otherwise.
std::string replay_session(const TypeRef& first_endpoint_type, int pair,
                           const std::vector<TraceEvent>& trace);

}  // namespace lcm
