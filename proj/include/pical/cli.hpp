#ifndef PICAL_CLI_HPP
#define PICAL_CLI_HPP

#include <iostream>
#include <string>
#include <vector>

namespace pical::cli {

/// Entry point behind the `pical` binary. Commands:
///   check FILE [--json]                  typecheck, print derivation + leftover
///   reduce FILE [--steps N | --to-end] [--json]   print a reduction trace
///   repl FILE                            interactive stepper
///   roundtrip FILE                       print the named form after a de Bruijn round trip
/// Exit codes: 0 success, 1 type/scope error, 2 parse error.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace pical::cli

#endif
