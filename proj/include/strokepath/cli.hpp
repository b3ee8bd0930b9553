#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace strokepath {

/// Runs the command line front end: `synth`, `extract`, `fit`, `gen`,
/// `eval` or `pipeline`. Returns the process exit code; on failure exactly
/// one diagnostic line goes to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace strokepath
