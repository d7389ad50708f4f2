#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "lcm/parse.hpp"
#include "lcm/typecheck.hpp"

namespace fixtures {

inline std::filesystem::path programs() { return std::filesystem::path(LCM_SOURCE_DIR) / "programs"; }

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

inline lcm::Program load(const std::string& name) { return lcm::parse_program(slurp(programs() / name)); }

inline lcm::TypingCtx ctx(std::initializer_list<lcm::CtxEntry> entries) {
  lcm::TypingCtx c;
  for (auto& e : entries) c.push(e);
  return c;
}

inline lcm::CtxEntry linear(std::string name, unsigned level, lcm::CtxType t) {
  return lcm::CtxEntry{std::move(name), level, std::move(t), lcm::Mult::Linear, false};
}

}  // namespace fixtures
