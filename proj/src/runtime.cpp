#include "lcm/runtime.hpp"

#include "lcm/pretty.hpp"
#include "lcm/subst.hpp"

namespace lcm {

std::string render_value(const TermRef& v) { return pretty(v); }

std::string render_event(std::size_t seq, const TraceEvent& e) {
  static const char* names[] = {"Sent", "Selected", "Closed", "Spawned", "Halted"};
  std::string out = std::to_string(seq) + " " + names[static_cast<int>(e.kind)] + " chan=";
  if (e.kind == TraceEvent::Kind::Spawned || e.kind == TraceEvent::Kind::Halted)
    return out + "- payload=thread:" + std::to_string(e.thread);
  return out + std::to_string(e.pair) + " payload=" + (e.payload.empty() ? "-" : e.payload);
}

std::string render_trace(const std::vector<TraceEvent>& trace) {
  std::string out;
  for (std::size_t i = 0; i < trace.size(); ++i) out += render_event(i + 1, trace[i]) + "\n";
  return out;
}

std::string to_string(RunResult::Status s) {
  switch (s) {
    case RunResult::Status::Success: return "success";
    case RunResult::Status::Deadlock: return "deadlock";
    case RunResult::Status::Timeout: return "timeout";
    case RunResult::Status::Stuck: return "stuck";
  }
  return "?";
}

namespace {

enum class Op { None, Send, Receive, Select, Offer, Close, Wait, Fork, ForkWith, New };

const char* op_name(Op op) {
  switch (op) {
    case Op::Send: return "send";
    case Op::Receive: return "receive";
    case Op::Select: return "select";
    case Op::Offer: return "match";
    case Op::Close: return "close";
    case Op::Wait: return "wait";
    case Op::Fork: return "fork";
    case Op::ForkWith: return "forkWith";
    case Op::New: return "new";
    case Op::None: break;
  }
  return "?";
}

struct Request {
  Op op = Op::None;
  int endpoint = -1;
  TermRef operand;  // payload of send, thunk of fork and forkWith
  std::string label;
};

Request classify(const TermRef& r) {
  if (auto m = r->as<node::Match>()) {
    if (auto c = m->scrut->as<node::Chan>()) return {Op::Offer, c->endpoint, nullptr, {}};
    return {};
  }
  if (auto c = r->as<node::Const>()) return c->kind == ConstKind::New ? Request{Op::New, -1, nullptr, {}} : Request{};
  auto a = r->as<node::App>();
  if (!a) return {};
  auto ch = a->arg->as<node::Chan>();
  if (auto inner = a->fn->as<node::App>()) {
    auto c = inner->fn->as<node::Const>();
    if (c && c->kind == ConstKind::Send && ch) return {Op::Send, ch->endpoint, inner->arg, {}};
    return {};
  }
  auto c = a->fn->as<node::Const>();
  if (!c) return {};
  switch (c->kind) {
    case ConstKind::Fork: return {Op::Fork, -1, a->arg, {}};
    case ConstKind::ForkWith: return {Op::ForkWith, -1, a->arg, {}};
    case ConstKind::Receive: return ch ? Request{Op::Receive, ch->endpoint, nullptr, {}} : Request{};
    case ConstKind::Select: return ch ? Request{Op::Select, ch->endpoint, nullptr, c->label} : Request{};
    case ConstKind::Close: return ch ? Request{Op::Close, ch->endpoint, nullptr, {}} : Request{};
    case ConstKind::Wait: return ch ? Request{Op::Wait, ch->endpoint, nullptr, {}} : Request{};
    default: return {};
  }
}

void collect_chans(const TermRef& m, std::vector<int>& out) {
  auto cv = [&](const CtxValue& c) { collect_chans(c.body, out); };
  std::visit(overloaded{
                 [&](const node::Chan& x) { out.push_back(x.endpoint); },
                 [&](const node::Var& x) {
                   for (auto& a : x.args) cv(a);
                 },
                 [&](const node::Lam& x) { collect_chans(x.body, out); },
                 [&](const node::App& x) {
                   collect_chans(x.fn, out);
                   collect_chans(x.arg, out);
                 },
                 [&](const node::LetUnit& x) {
                   collect_chans(x.scrut, out);
                   collect_chans(x.body, out);
                 },
                 [&](const node::BoxVal& x) { cv(x.code); },
                 [&](const node::LetBox& x) {
                   collect_chans(x.bound, out);
                   collect_chans(x.body, out);
                 },
                 [&](const node::Arith& x) {
                   collect_chans(x.lhs, out);
                   collect_chans(x.rhs, out);
                 },
                 [&](const node::Pair& x) {
                   collect_chans(x.fst, out);
                   collect_chans(x.snd, out);
                 },
                 [&](const node::LetPair& x) {
                   collect_chans(x.scrut, out);
                   collect_chans(x.body, out);
                 },
                 [&](const node::Match& x) {
                   collect_chans(x.scrut, out);
                   for (auto& b : x.branches) collect_chans(b.body, out);
                 },
                 [&](const auto&) {},
             },
             m->node);
}

class Runtime {
 public:
  Runtime(const Globals& globals, const RunOptions& opts) : globals_(globals), opts_(opts) {}

  RunResult run(const TermRef& entry) {
    threads_.push_back(Thread{0, entry, Thread::Status::Runnable, {}, nullptr, -1});
    for (;;) {
      bool live = false;
      bool progress = false;
      for (std::size_t i = 0; i < threads_.size(); ++i) {
        if (threads_[i].status == Thread::Status::Done) continue;
        live = true;
        if (threads_[i].status != Thread::Status::Runnable) continue;
        progress = true;
        if (!run_quantum(i)) return finish();
      }
      if (!live) return finish();
      if (resolve()) progress = true;
      if (failed_) return finish();
      if (!progress) {
        status_ = RunResult::Status::Deadlock;
        report_ = deadlock_report();
        return finish();
      }
    }
  }

 private:
  RunResult finish() {
    RunResult out;
    out.status = status_;
    out.trace = std::move(trace_);
    out.threads = std::move(threads_);
    out.channels = std::move(chans_);
    out.steps = steps_;
    out.report = std::move(report_);
    return out;
  }

  void fail(RunResult::Status s, std::string why) {
    failed_ = true;
    status_ = s;
    report_ = std::move(why);
  }

  void emit(TraceEvent e) { trace_.push_back(std::move(e)); }

  void transfer(const TermRef& m, int owner) {
    std::vector<int> eps;
    collect_chans(m, eps);
    for (int e : eps) chans_[e].owner = owner;
  }

  std::pair<int, int> alloc_pair(int owner_x, int owner_y) {
    int k = next_pair_++;
    chans_[2 * k] = Endpoint{owner_x, nullptr};
    chans_[2 * k + 1] = Endpoint{owner_y, nullptr};
    return {2 * k, 2 * k + 1};
  }

  int spawn(TermRef term) {
    int id = static_cast<int>(threads_.size());
    threads_.push_back(Thread{id, std::move(term), Thread::Status::Runnable, {}, nullptr, -1});
    TraceEvent e;
    e.kind = TraceEvent::Kind::Spawned;
    e.thread = id;
    emit(e);
    return id;
  }

  void note_step(std::size_t i, const char* rule) {
    if (opts_.on_step) opts_.on_step(threads_[i].id, steps_, rule, threads_[i].term);
  }

  // Runs thread i until it finishes, blocks or uses up its quantum.
  bool run_quantum(std::size_t i) {
    for (std::size_t k = 0; k < opts_.quantum; ++k) {
      StepResult s = step(threads_[i].term, globals_);
      if (std::holds_alternative<step_result::IsValue>(s)) {
        threads_[i].status = Thread::Status::Done;
        TraceEvent e;
        e.kind = TraceEvent::Kind::Halted;
        e.thread = threads_[i].id;
        emit(e);
        return true;
      }
      if (auto st = std::get_if<step_result::Stuck>(&s)) {
        fail(RunResult::Status::Stuck, "thread " + std::to_string(i) + " is stuck: " + st->reason);
        return false;
      }
      if (steps_ == opts_.max_steps) {
        fail(RunResult::Status::Timeout, "step budget of " + std::to_string(opts_.max_steps) + " exhausted");
        return false;
      }
      ++steps_;
      if (auto st = std::get_if<step_result::Stepped>(&s)) {
        threads_[i].term = st->term;
        note_step(i, st->rule.c_str());
        continue;
      }
      auto& need = std::get<step_result::NeedsComm>(s);
      Request r = classify(need.redex);
      int me = threads_[i].id;
      switch (r.op) {
        case Op::None:
          fail(RunResult::Status::Stuck, "thread " + std::to_string(i) + " is stuck: malformed session operation " +
                                             pretty(need.redex));
          return false;
        case Op::Fork: {
          transfer(r.operand, static_cast<int>(threads_.size()));
          spawn(app(r.operand, unit_val()));
          threads_[i].term = plug(need.ctx, unit_val());
          note_step(i, "fork");
          continue;
        }
        case Op::ForkWith: {
          int child = static_cast<int>(threads_.size());
          transfer(r.operand, child);
          auto [x, y] = alloc_pair(child, me);
          spawn(app(app(r.operand, unit_val()), chan(x)));
          threads_[i].term = plug(need.ctx, chan(y));
          note_step(i, "forkWith");
          continue;
        }
        case Op::New: {
          auto [x, y] = alloc_pair(me, me);
          TypeRef s = need.redex->as<node::Const>()->session;
          chans_[x].session = s;
          threads_[i].term = plug(need.ctx, pair(chan(x), chan(y)));
          note_step(i, "new");
          continue;
        }
        default:
          break;
      }
      auto it = chans_.find(r.endpoint);
      if (it == chans_.end() || it->second.owner != me) {
        fail(RunResult::Status::Stuck, "thread " + std::to_string(i) + " uses endpoint #" +
                                           std::to_string(r.endpoint) + " it does not own");
        return false;
      }
      threads_[i].status = Thread::Status::Blocked;
      threads_[i].hole = need.ctx;
      threads_[i].request = need.redex;
      threads_[i].endpoint = r.endpoint;
      return true;
    }
    return true;
  }

  void resume(std::size_t i, TermRef answer) {
    Thread& t = threads_[i];
    t.term = plug(t.hole, std::move(answer));
    t.status = Thread::Status::Runnable;
    t.hole.clear();
    t.request = nullptr;
    t.endpoint = -1;
  }

  // Pairs up blocked threads whose operations meet on a channel.
  bool resolve() {
    bool any = false;
    for (std::size_t i = 0; i < threads_.size(); ++i) {
      if (threads_[i].status != Thread::Status::Blocked) continue;
      int peer = threads_[i].endpoint ^ 1;
      auto it = chans_.find(peer);
      if (it == chans_.end()) continue;
      auto j = static_cast<std::size_t>(it->second.owner);
      if (j >= threads_.size() || threads_[j].status != Thread::Status::Blocked ||
          threads_[j].endpoint != peer)
        continue;
      Op a = classify(threads_[i].request).op;
      Op b = classify(threads_[j].request).op;
      if (a == Op::Send && b == Op::Receive) {
        communicate(i, j);
      } else if (a == Op::Receive && b == Op::Send) {
        communicate(j, i);
      } else if (a == Op::Select && b == Op::Offer) {
        choose(i, j);
      } else if (a == Op::Offer && b == Op::Select) {
        choose(j, i);
      } else if (a == Op::Close && b == Op::Wait) {
        close(i, j);
      } else if (a == Op::Wait && b == Op::Close) {
        close(j, i);
      } else {
        continue;
      }
      if (failed_) return true;
      any = true;
    }
    return any;
  }

  void communicate(std::size_t s, std::size_t r) {
    Request req = classify(threads_[s].request);
    int x = threads_[s].endpoint;
    int y = threads_[r].endpoint;
    TraceEvent e;
    e.kind = TraceEvent::Kind::Sent;
    e.pair = x / 2;
    e.endpoint = x;
    e.payload = render_value(req.operand);
    emit(e);
    transfer(req.operand, threads_[r].id);
    resume(s, chan(x));
    resume(r, pair(req.operand, chan(y)));
  }

  void choose(std::size_t s, std::size_t m) {
    Request req = classify(threads_[s].request);
    int x = threads_[s].endpoint;
    int y = threads_[m].endpoint;
    auto& match = *threads_[m].request->as<node::Match>();
    const MatchBranch* chosen = nullptr;
    for (auto& b : match.branches)
      if (b.kind == PatternKind::Label && b.label == req.label) chosen = &b;
    if (!chosen) {
      fail(RunResult::Status::Stuck, "no branch for label " + req.label);
      return;
    }
    TermRef body = chosen->body;
    if (occurs_free(chosen->binder, body)) body = subst(closed(chan(y)), chosen->binder, body, names_);
    TraceEvent e;
    e.kind = TraceEvent::Kind::Selected;
    e.pair = x / 2;
    e.endpoint = x;
    e.payload = req.label;
    emit(e);
    resume(s, chan(x));
    resume(m, body);
  }

  void close(std::size_t c, std::size_t w) {
    int x = threads_[c].endpoint;
    TraceEvent e;
    e.kind = TraceEvent::Kind::Closed;
    e.pair = x / 2;
    e.endpoint = x;
    emit(e);
    chans_.erase(x);
    chans_.erase(x ^ 1);
    resume(c, unit_val());
    resume(w, unit_val());
  }

  std::string deadlock_report() const {
    std::string out = "deadlock:";
    for (auto& t : threads_) {
      if (t.status != Thread::Status::Blocked) continue;
      int peer = t.endpoint ^ 1;
      out += "\n  thread " + std::to_string(t.id) + " blocked on " +
             op_name(classify(t.request).op) + " #" + std::to_string(t.endpoint);
      auto it = chans_.find(peer);
      if (it != chans_.end()) out += ", peer #" + std::to_string(peer) + " held by thread " + std::to_string(it->second.owner);
    }
    return out;
  }

  const Globals& globals_;
  RunOptions opts_;
  std::vector<Thread> threads_;
  std::map<int, Endpoint> chans_;
  std::vector<TraceEvent> trace_;
  int next_pair_ = 0;
  std::size_t steps_ = 0;
  bool failed_ = false;
  RunResult::Status status_ = RunResult::Status::Success;
  std::string report_;
  NameSupply names_;
};

}  // namespace

RunResult run_config(const TermRef& entry, const Globals& globals, const RunOptions& opts) {
  return Runtime(globals, opts).run(entry);
}

std::string replay_session(const TypeRef& first_endpoint_type, int pair,
                           const std::vector<TraceEvent>& trace) {
  TypeRef cur = first_endpoint_type;
  for (auto& e : trace) {
    if (e.pair != pair || e.kind == TraceEvent::Kind::Spawned || e.kind == TraceEvent::Kind::Halted)
      continue;
    if (!cur) return "event after the session ended";
    bool first = e.endpoint == 2 * pair;
    TypeRef h = unfold_head(cur);
    switch (e.kind) {
      case TraceEvent::Kind::Sent:
        if (first && h->is<ty::Send>()) {
          cur = h->as<ty::Send>()->cont;
        } else if (!first && h->is<ty::Recv>()) {
          cur = h->as<ty::Recv>()->cont;
        } else {
          return "unexpected message when the session is " + pretty_type(h);
        }
        break;
      case TraceEvent::Kind::Selected: {
        const Branches* bs = nullptr;
        if (first && h->is<ty::Select>()) bs = &h->as<ty::Select>()->branches;
        if (!first && h->is<ty::Branch>()) bs = &h->as<ty::Branch>()->branches;
        if (!bs || !bs->count(e.payload))
          return "unexpected selection of " + e.payload + " when the session is " + pretty_type(h);
        cur = bs->at(e.payload);
        break;
      }
      case TraceEvent::Kind::Closed:
        if (!(first ? h->is<ty::Close>() : h->is<ty::Wait>()))
          return "unexpected close when the session is " + pretty_type(h);
        cur = nullptr;
        break;
      default:
        break;
    }
  }
  return cur ? "session unfinished at " + pretty_type(cur) : "";
}

}  // namespace lcm
