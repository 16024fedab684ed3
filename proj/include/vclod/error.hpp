#pragma once

#include <stdexcept>
#include <string>

namespace vclod {

// Bad input: preconditions, malformed files, invalid configuration.
// CLI maps this to exit code 2.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem / stream failures. Exit code 3.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical contract violations at runtime (non-finite results,
// unconverged fits used where convergence is required). Exit code 3.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Pipeline stage failure; carries the stage name for diagnostics and
// whether the cause was bad input (exit 2) or a runtime fault (exit 3).
struct StageError : std::runtime_error {
    StageError(const std::string& stage_name, const std::string& cause, bool validation = false)
        : std::runtime_error("stage " + stage_name + ": " + cause),
          stage(stage_name),
          from_validation(validation) {}
    std::string stage;
    bool from_validation;
};

} // namespace vclod
