#pragma once

namespace tempreg {

/// Entry point of the command-line tool. Returns the process exit code:
/// 0 success, 1 usage or runtime error, 2 when --check finds a failed
/// trend assertion.
int run_cli(int argc, const char* const* argv);

}  // namespace tempreg
