#pragma once

#include <string>

#include "lcm/syntax.hpp"

namespace lcm {

/// Single-line rendering that parses back to an alpha-equivalent term.
std::string pretty(const TermRef& t);
std::string pretty(const CtxValue& cv);

/// One declaration per line; clause bodies appear in desugared form.
std::string pretty_program(const Program& p);

}  // namespace lcm
