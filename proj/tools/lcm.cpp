// lcm: typecheck and run programs.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "lcm/eval.hpp"
#include "lcm/parse.hpp"
#include "lcm/pretty.hpp"
#include "lcm/runtime.hpp"
#include "lcm/typecheck.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kRejected = 1;
constexpr int kRunFailed = 2;
constexpr int kUsage = 64;

struct Loaded {
  lcm::Program program;
  lcm::CheckedProgram checked;
};

// Reads, parses and checks a file; prints diagnostics and returns an exit
// code when the file is unusable.
std::optional<int> load(const std::string& path, Loaded& out) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "lcm: cannot read " << path << "\n";
    return kUsage;
  }
  std::stringstream text;
  text << in.rdbuf();
  try {
    out.program = lcm::parse_program(text.str());
  } catch (const lcm::ParseError& e) {
    std::cout << "ParseError at " << e.span().line << ":" << e.span().col << " — " << e.what() << "\n";
    return kRejected;
  }
  out.checked = lcm::check_program(out.program);
  if (!out.checked.ok()) {
    std::cout << lcm::render_errors(out.checked.errors);
    return kRejected;
  }
  return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Typecheck and run linear contextual-modal programs"};
  app.require_subcommand(1);

  bool trace_steps = false;
  std::string trace_comm;
  std::size_t max_steps = 1000000;
  std::size_t quantum = 256;
  std::string file;
  std::string expr;

  app.add_flag("--trace-steps", trace_steps, "Print every reduction step");
  app.add_option("--trace-comm", trace_comm, "Write communication events to FILE");
  app.add_option("--max-steps", max_steps, "Step budget")->check(CLI::PositiveNumber);
  app.add_option("--quantum", quantum, "Steps per scheduling quantum")->check(CLI::PositiveNumber);

  auto* check = app.add_subcommand("check", "Typecheck a file");
  check->add_option("FILE", file)->required();
  auto* run = app.add_subcommand("run", "Typecheck a file and run main");
  run->add_option("FILE", file)->required();
  auto* eval = app.add_subcommand("eval", "Evaluate a term in the scope of a file");
  eval->add_option("FILE", file)->required();
  eval->add_option("-e,--expr", expr, "Term to evaluate")->required();
  for (auto* sub : {check, run, eval}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  Loaded loaded;
  if (auto code = load(file, loaded)) return *code;

  if (*check) {
    std::cout << file << ": ok\n";
    return kOk;
  }

  lcm::Globals globals = lcm::globals_of(loaded.program);

  if (*eval) {
    lcm::TermRef term;
    try {
      term = lcm::parse_term(expr);
    } catch (const lcm::ParseError& e) {
      std::cout << "ParseError at " << e.span().line << ":" << e.span().col << " — " << e.what() << "\n";
      return kRejected;
    }
    try {
      lcm::TypingCtx ctx = loaded.checked.globals();
      lcm::check_term(ctx, term, loaded.checked.aliases);
    } catch (const lcm::TypeError& e) {
      std::cout << e.render() << "\n";
      return kRejected;
    }
    lcm::EvalOptions opts;
    opts.max_steps = max_steps;
    if (trace_steps)
      opts.on_step = [](std::size_t k, const std::string& rule, const lcm::TermRef& t) {
        std::cout << lcm::trace_line(k, rule, t) << "\n";
      };
    auto result = lcm::eval(term, globals, opts);
    switch (result.status) {
      case lcm::EvalResult::Status::Value:
        std::cout << lcm::render_value(result.term) << "\n";
        return kOk;
      case lcm::EvalResult::Status::Timeout:
        std::cout << "timeout after " << result.steps << " steps\n";
        return kRunFailed;
      case lcm::EvalResult::Status::CommRequired:
        std::cout << "the term communicates; use `run` instead\n";
        return kRunFailed;
      case lcm::EvalResult::Status::Stuck:
        std::cout << "stuck: " << result.reason << "\n";
        return kRunFailed;
    }
  }

  auto it = globals.find("main");
  if (it == globals.end()) {
    std::cout << file << ": no main to run\n";
    return kRejected;
  }
  lcm::RunOptions opts;
  opts.max_steps = max_steps;
  opts.quantum = quantum;
  if (trace_steps)
    opts.on_step = [](int, std::size_t k, const std::string& rule, const lcm::TermRef& t) {
      std::cout << lcm::trace_line(k, rule, t) << "\n";
    };
  auto result = lcm::run_config(it->second, globals, opts);
  if (!trace_comm.empty()) {
    std::ofstream out(trace_comm, std::ios::binary);
    if (!out) {
      std::cerr << "lcm: cannot write " << trace_comm << "\n";
      return kUsage;
    }
    out << lcm::render_trace(result.trace);
  }
  std::size_t halted = 0;
  for (auto& t : result.threads) halted += t.status == lcm::Thread::Status::Done;
  std::cout << lcm::to_string(result.status) << ": " << halted << "/" << result.threads.size()
            << " threads halted, " << result.trace.size() << " events, " << result.steps << " steps\n";
  if (!result.report.empty()) std::cout << result.report << "\n";
  return result.status == lcm::RunResult::Status::Success ? kOk : kRunFailed;
}
