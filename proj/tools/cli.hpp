#pragma once

namespace atomex {

// Full command-line front end. Returns the process exit code:
// 0 success, 2 flag/usage error, 3 numeric failure.
int run_cli(int argc, const char* const* argv);

}  // namespace atomex
