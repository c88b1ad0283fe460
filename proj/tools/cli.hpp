#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace noether::cli
{

enum ExitCode : int {
    Ok = 0,
    Usage = 1,
    Parse = 2,
    Math = 3,
    IdentityFailure = 4,
};

// Runs one invocation; args excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace noether::cli
