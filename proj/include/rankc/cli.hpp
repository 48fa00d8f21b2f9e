#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rankc {

// One driver invocation; args exclude the program name. Returns the process
// exit code: 0 success, 1 property refuted (no witness, rank bound fails,
// certificate rejected, empty realization space), 2 usage error, 3 budget
// exceeded, 4 malformed input.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rankc
