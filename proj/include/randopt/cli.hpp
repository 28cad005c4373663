#pragma once

#include <iosfwd>

namespace randopt::cli {

/// Process exit codes; stable across releases.
enum ExitCode : int {
    kOk = 0,
    kInternalError = 1,
    kMissingFile = 2,
    kSchemaError = 3,
    kNumericalIntegrity = 4,
    kValidationFailure = 5,
};

/// Entry point shared by the `randopt` binary and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace randopt::cli
