#pragma once

// Entry point for the dynprim command-line tool, callable in-process so tests
// can drive the full argument-parsing and reporting path without spawning.
//
// Exit codes: 0 = completed (including mathematically inconclusive results),
// 1 = invalid input (bad flags, unparseable expressions, wrong field), and
// 2 = a degree or enumeration cap was exceeded.  The environment variable
// DYNPRIM_DEGREE_CAP (a positive integer) overrides the default degree cap
// for every subcommand.

#include <iosfwd>
#include <string>
#include <vector>

namespace dynprim {

// args excludes the program name, e.g. {"riccati", "--phi", "x^3 + t"}.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dynprim
