#pragma once

#include <stdexcept>
#include <string>

namespace termwork {

/// Base class for all errors raised by the library. `code()` is a short
/// machine-readable identifier that the API layer forwards to clients.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

}  // namespace termwork
