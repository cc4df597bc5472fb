#pragma once

#include <stdexcept>
#include <string>

namespace hitcast {

// Error classes map onto the CLI exit-code contract:
//   1 = usage error, 2 = data/format error, 3 = internal invariant violation.

class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

} // namespace hitcast
