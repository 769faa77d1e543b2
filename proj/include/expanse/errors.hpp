#pragma once

#include <stdexcept>
#include <string>

namespace expanse {

/// Matrix dimensions do not match what an operation requires.
class dimension_error : public std::invalid_argument {
public:
    explicit dimension_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Non-finite values or a failed numerical decomposition.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

/// A state violates the uncertainty relation beyond tolerance.
class physicality_error : public numeric_error {
public:
    explicit physicality_error(const std::string& what) : numeric_error(what) {}
};

}  // namespace expanse
