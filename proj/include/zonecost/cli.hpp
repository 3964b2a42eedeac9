#ifndef ZONECOST_CLI_HPP
#define ZONECOST_CLI_HPP

#include <ostream>

namespace zonecost::cli {

/// Exit codes: 0 success (also when a cap fired), 1 unreadable or invalid
/// model, 2 bad or conflicting options.
int run(int argc, char const * const * argv, std::ostream & out, std::ostream & err);

}  // namespace zonecost::cli

#endif  // ZONECOST_CLI_HPP
