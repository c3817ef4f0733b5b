#pragma once

#include <string>
#include <vector>

#include "gtb/space.hpp"

namespace gtbs {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Invariant suite run by the verify command: partition of unity,
// non-negativity, local support, smoothness jumps, extraction structure and
// agreement with the recurrence and Cox-de Boor oracles where they apply.
std::vector<CheckResult> verify_space(const gtb::GTSplineSpace& space);

// max_k max(|D^j_- B_k(x_i)|, |D^j_+ B_k(x_i)|), the scale used for jumps.
double jump_scale(const gtb::GTSplineSpace& space, int breakpoint, int order);

}  // namespace gtbs
