#pragma once
#include <string>
#include <vector>

namespace spinlab {

// Full command-line entry point. Exit codes: 0 all checks pass, 1 check
// failure or domain error (message on stderr, verbatim), 2 usage/config error.
int cli_main(int argc, const char* const* argv);

// Canonical dispatch table ("clifford check", ..., "suite"); the coverage
// test asserts every module operation is reachable through one of these.
std::vector<std::string> cli_dispatch_names();

} // namespace spinlab
