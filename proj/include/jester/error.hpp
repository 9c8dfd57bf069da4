#pragma once

#include <stdexcept>
#include <string>

namespace jester {

/// Base of every exception thrown by the library. Each module derives its
/// own named errors from this so callers can catch by kind or wholesale.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define JESTER_DEFINE_ERROR(Name)                                   \
    class Name : public ::jester::Error {                           \
    public:                                                         \
        explicit Name(const std::string& what)                      \
            : ::jester::Error(std::string(#Name ": ") + what) {}    \
    }

} // namespace jester
