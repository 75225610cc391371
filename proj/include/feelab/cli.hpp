#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include "feelab/errors.hpp"

namespace feelab::cli {

enum ExitCode : int {
    kOk = 0,
    kValidation = 2,
    kNumerical = 3,
};

/// Bad input maps to 2; solver failures map to 3.
ExitCode exit_code_for(ErrorKind kind);

/// Process-level inputs other than argv.
struct Environment {
    /// Value of FEELAB_FORMAT, if set.
    std::optional<std::string> format;

    static Environment from_process();
};

/// Runs one command line. `args` excludes the program name. Series go to
/// `out` (or the --out file), diagnostics to `err`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err,
        const Environment& env = Environment::from_process());

}  // namespace feelab::cli
