#pragma once
// Command-line entry point, callable in-process for tests.
// Exit codes: 0 completed, 1 usage/parse error, 2 completed with an
// Inconclusive verdict present.

#include <string>
#include <vector>

namespace entloc {

int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, char** argv);

}  // namespace entloc
