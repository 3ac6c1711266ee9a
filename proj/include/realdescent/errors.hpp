#pragma once

#include <stdexcept>
#include <string>

namespace realdescent {

// Error taxonomy shared by the library and the CLI exit-code mapping:
// parse -> 1, domain -> 2, precision -> 3.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

struct FieldMismatchError : DomainError {
    explicit FieldMismatchError(const std::string& msg) : DomainError(msg) {}
};

struct DegenerateLatticeError : DomainError {
    explicit DegenerateLatticeError(const std::string& msg) : DomainError(msg) {}
};

struct PoleError : DomainError {
    explicit PoleError(const std::string& msg) : DomainError(msg) {}
};

struct PrecisionError : std::runtime_error {
    explicit PrecisionError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace realdescent
