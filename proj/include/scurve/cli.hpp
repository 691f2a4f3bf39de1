#pragma once

#include <iosfwd>

#include "scurve/types.hpp"

namespace scurve {

// Bad flags or parameter values; maps to exit code 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 2;
inline constexpr int exit_data = 3;

// Entry point of the scurve tool. Diagnostics go to `err`, tabular output
// without --out to `out`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace scurve
