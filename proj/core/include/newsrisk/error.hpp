#pragma once

#include <stdexcept>
#include <string>

namespace newsrisk {

// Malformed input or an out-of-range parameter. The CLI maps this to exit 1.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A pipeline stage ran before the stage that produces its inputs (exit 2).
class DependencyError : public std::runtime_error {
public:
    DependencyError(const std::string& what, std::string required_command)
        : std::runtime_error(what), required_command_(std::move(required_command)) {}

    const std::string& required_command() const noexcept { return required_command_; }

private:
    std::string required_command_;
};

// Singular or ill-conditioned linear system during centrality computation.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace newsrisk
