#pragma once

#include <stdexcept>
#include <string>

namespace ekw {

enum class ErrorKind {
    InvalidParameter,
    Domain,
    Bracket,
    Degenerate,
    Consistency,
    Boundary,
    Resonance,
    Vacuum,
    Config,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

// Exit code used by the command line tool for a given failure.
int exit_code(ErrorKind kind);

}  // namespace ekw
