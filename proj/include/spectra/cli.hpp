#pragma once

// Command-line surface: spectrum, cspectrum, charsum, verify, sweep.
// Output goes to the supplied streams so tests can drive the CLI
// in-process; exit codes are 0 (success), 1 (mathematical disagreement),
// 2 (invalid input).

#include <iosfwd>
#include <string>
#include <vector>

namespace spectra::cli {

// args excludes the program name
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv);

}  // namespace spectra::cli
