// Rendering of terms in the s-expression surface syntax.
#pragma once

#include <string>

#include "ptt/term.hpp"

namespace ptt {

std::string show(const TermP& m);
std::string show(const Constraint& c);
std::string show(const TypingCtx& gamma);

}  // namespace ptt
