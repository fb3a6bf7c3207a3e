#pragma once

#include <string>

#include "freeconv/measures.hpp"

namespace freeconv {

// Plain-text measure literals:
//   atomic: (x1,m1) (x2,m2) ...
//   density: <csv path>          (two columns x,f; rescaled to total mass 1)
//   law: freestable alpha=.. rho=.. [scale=..]
//   law: booleanstable alpha=.. rho=.. [scale=..]
//   law: semicircle a=.. v=..
//   law: mp
//   law: cauchy a=.. b=..
//   law: point a=..
Measure parse_measure(const std::string& text);

// Inverse of parse_measure for atomic/parametric measures (atom-wise exact
// round trip); grid measures serialize to `density:` with the source path
// unavailable and are therefore rendered inline as atomic are.
std::string serialize_measure(const Measure& m);

}  // namespace freeconv
