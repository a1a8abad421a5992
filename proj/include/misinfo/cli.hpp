#pragma once

#include <stdexcept>
#include <string>

#include "misinfo/experiment.hpp"

namespace misinfo {

/// Parsing stopped: help was requested (code 0) or the input was unusable
/// (nonzero). what() holds the text to print.
class CliExit : public std::runtime_error {
 public:
  CliExit(int code, const std::string& message) : std::runtime_error(message), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

/// Builds a plan from argv. Settings come from the defaults, then --config,
/// then explicit flags. The resulting config is validated.
BatchPlan parse_cli(int argc, const char* const* argv);

}  // namespace misinfo
