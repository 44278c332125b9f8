#pragma once

#include <stdexcept>
#include <string>

namespace ec {

// Bad arguments to an operation (k > n, mismatched lengths, malformed files).
class invalid_parameters : public std::invalid_argument {
public:
    explicit invalid_parameters(const std::string& what) : std::invalid_argument(what) {}
};

// A configured cap was exceeded (enumeration size, quadruple sums).
class resource_limit : public std::runtime_error {
public:
    explicit resource_limit(const std::string& what) : std::runtime_error(what) {}
};

// A numeric routine failed to converge or found no usable bracket.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ec
