#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace rsou {

// Error taxonomy shared across the library. The category maps onto the CLI
// exit code: Config -> 1, Precondition -> 2, Numerical/Io -> 3.
enum class ErrorCategory { Config, Precondition, Numerical, Io };

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message),
          category_(category),
          code_(std::move(code)) {}

    ErrorCategory category() const noexcept { return category_; }
    const std::string& code() const noexcept { return code_; }

private:
    ErrorCategory category_;
    std::string code_;
};

[[noreturn]] inline void throw_config(std::string code, const std::string& msg) {
    throw Error(ErrorCategory::Config, std::move(code), msg);
}
[[noreturn]] inline void throw_precondition(std::string code, const std::string& msg) {
    throw Error(ErrorCategory::Precondition, std::move(code), msg);
}
[[noreturn]] inline void throw_numerical(std::string code, const std::string& msg) {
    throw Error(ErrorCategory::Numerical, std::move(code), msg);
}
[[noreturn]] inline void throw_io(std::string code, const std::string& msg) {
    throw Error(ErrorCategory::Io, std::move(code), msg);
}

}  // namespace rsou
