#pragma once
// Command-line front end.  Four subcommands share one option pipeline:
//
//   dtp       transition-probability tables for one code and decoder
//   sweep     post-decoding BER/FER curves, optionally with Monte-Carlo runs
//   validate  oracle and invariant checks with a machine-readable report
//   concat    outer/inner concatenated-scheme FER sweeps
//
// Flags may also come from a JSON config file (--config); explicit flags win.
// Every run writes a JSON manifest sufficient to reproduce it bit-exactly.
#include <iosfwd>
#include <string>
#include <vector>

namespace bchdtp {

constexpr int exit_ok = 0;
constexpr int exit_config_error = 1;
constexpr int exit_validation_failure = 2;

// Runs one command line (program name excluded).  Results and reports go to
// `out`, diagnostics and file notices to `err`.  Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace bchdtp
