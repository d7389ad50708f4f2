#include "lcm/diagnostics.hpp"

#include <algorithm>

namespace lcm {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnusedLinear: return "UnusedLinear";
    case ErrorCode::ReusedLinear: return "ReusedLinear";
    case ErrorCode::LevelTooLow: return "LevelTooLow";
    case ErrorCode::LevelNotBelow: return "LevelNotBelow";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::NonContractive: return "NonContractive";
    case ErrorCode::PayloadRecursion: return "PayloadRecursion";
    case ErrorCode::DualityUndefined: return "DualityUndefined";
  }
  return "?";
}

std::string TypeError::render() const {
  return std::string(to_string(code_)) + " at " + std::to_string(span_.line) + ":" +
         std::to_string(span_.col) + " — " + what();
}

std::string render_errors(std::vector<TypeError> errors) {
  std::stable_sort(errors.begin(), errors.end(),
                   [](const TypeError& a, const TypeError& b) { return a.span() < b.span(); });
  std::string out;
  for (auto& e : errors) {
    out += e.render();
    out += '\n';
  }
  return out;
}

}  // namespace lcm
