#pragma once

#include <string>
#include <vector>

#include "freeconv/measures.hpp"

namespace freeconv {

// Named identity checks runnable from the command line and the acceptance
// suite. Each one evaluates both sides of the identity on its documented grid
// and reports the worst deviation against the fixed tolerance.
struct IdentityParams {
    double alpha = 0.5;
    double beta = 0.5;
    double rho = 0.3;
    double c = 2.0;        // scale for point-mass mixtures
    double t = 2.0;        // power parameter where applicable
};

struct IdentityReport {
    std::string name;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::vector<std::string> lines;  // per-route detail for the text report
};

// Names: thm1.6, thm1.7, thm1.4, eq:BN, eq:BN_free, prop6.3, cor6.1.
IdentityReport verify_identity(const std::string& name, const IdentityParams& params = {});

std::vector<std::string> known_identities();

}  // namespace freeconv
