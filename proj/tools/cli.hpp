#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cryptacc::cli {

enum ExitCode : int { kOk = 0, kFalse = 1, kUsage = 2, kUnsupported = 3 };

// Runs one command line (argv[0] excluded). Output goes to out, diagnostics
// and warnings to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

// Writes via a temporary file in the same directory, then renames.
void write_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace cryptacc::cli
