#pragma once

#include <stdexcept>
#include <string>

namespace walshcs {

// Invalid argument or precondition violation.
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// Requested allocation exceeds a hard size guard.
class SizeGuardError : public DomainError {
public:
    explicit SizeGuardError(const std::string& what) : DomainError(what) {}
};

class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace walshcs
