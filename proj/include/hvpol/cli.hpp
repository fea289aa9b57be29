#pragma once

#include <iosfwd>

namespace hvpol::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

/// Entry point of the hvpol command line. Commands: eval-pair, eval-triple,
/// eval-shrinkage, fit, epr, mc. Results go to `out` unless --out is given;
/// diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hvpol::cli
