#pragma once

#include <stdexcept>
#include <string>

namespace aqi {

enum class ErrorCode {
    argument = 1,
    validation,
    numerical,
    cache,
    domain,
    truncation,
    undefined_correlation,
    inversion_domain,
    insufficient_projections,
    io,
};

const char* to_string(ErrorCode code);

// Every failure raised by the library carries a code; `field` names the
// offending config key or argument when there is one.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::string field = {})
        : std::runtime_error(message), code_(code), field_(std::move(field)) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& field() const noexcept { return field_; }

private:
    ErrorCode code_;
    std::string field_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message, std::string field = {}) {
    throw Error(code, message, std::move(field));
}

}  // namespace aqi
