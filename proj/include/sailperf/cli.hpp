#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sailperf::cli {

/// Entry point behind the binary, taking the arguments after the program
/// name plus explicit output streams so it can be driven from tests.
/// Subcommands: run, single, report, windcheck. Returns the process exit
/// code; all errors are reported on err rather than thrown.
int cli_main(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace sailperf::cli
