#include "eoent/error.hpp"

#include <cstdio>

namespace eoent {

namespace {
std::string instability_message(double C, const std::string& detail) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "the system reaches its instability at C >= 1 (C = %.6g); ", C);
  return buf + (detail.empty() ? std::string("the linearized model is not valid") : detail);
}
}  // namespace

InstabilityError::InstabilityError(double cooperativity, const std::string& detail)
    : Error(instability_message(cooperativity, detail)), cooperativity_(cooperativity) {}

}  // namespace eoent
