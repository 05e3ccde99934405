#pragma once

#include <stdexcept>
#include <string>

namespace modnod {

/// Base of every numerical/domain failure raised by the library. `name()` is
/// the short error identifier printed by the CLI.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& message)
        : std::runtime_error(name + ": " + message), name_(std::move(name)) {}

    [[nodiscard]] const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

#define MODNOD_DEFINE_ERROR(Type)                                              \
    class Type : public Error {                                                \
    public:                                                                    \
        explicit Type(const std::string& message) : Error(#Type, message) {}   \
    }

// spectral
MODNOD_DEFINE_ERROR(NonConvergence);
MODNOD_DEFINE_ERROR(NoStrictLeader);
MODNOD_DEFINE_ERROR(DegenerateLeader);
// dynamics
MODNOD_DEFINE_ERROR(Diverged);
MODNOD_DEFINE_ERROR(NonFinite);
MODNOD_DEFINE_ERROR(NotSettled);
// continuation
MODNOD_DEFINE_ERROR(NewtonDiverged);
MODNOD_DEFINE_ERROR(SingularJacobian);
MODNOD_DEFINE_ERROR(StallError);
MODNOD_DEFINE_ERROR(NoBranchFound);
// reduction
MODNOD_DEFINE_ERROR(ComplementDiverged);
MODNOD_DEFINE_ERROR(OutOfDomain);

#undef MODNOD_DEFINE_ERROR

/// Configuration problems (malformed input, violated spec invariants). Kept
/// apart from `Error` so front ends can map them to a different exit code.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class ValidationError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

}  // namespace modnod
