#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dbridge::cli {

// Entry point of the command-line tool; argv-style arguments without the
// program name. Output goes to `out` (stdout in the real tool) so tests can
// capture bytes. Exit codes: 0 success, 1 domain/usage error, 2 precision
// exhausted, 3 I/O error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace dbridge::cli
