#pragma once

#include <stdexcept>
#include <string>

namespace tadet {

// Failure categories. The CLI turns each into an exit code; structural and
// unsupported inputs share the precondition code.
enum class ErrorKind { usage = 1, parse = 2, precondition = 3, resource = 4, structural = 6, unsupported = 7 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct UsageError : Error {
    explicit UsageError(const std::string& w) : Error(ErrorKind::usage, w) {}
};
struct ParseError : Error {
    explicit ParseError(const std::string& w) : Error(ErrorKind::parse, w) {}
};
struct PreconditionError : Error {
    explicit PreconditionError(const std::string& w) : Error(ErrorKind::precondition, w) {}
};
struct ResourceError : Error {
    explicit ResourceError(const std::string& w) : Error(ErrorKind::resource, w) {}
};
// Input does not have the shape an operation requires (e.g. not a tree, malformed run).
struct StructuralError : Error {
    explicit StructuralError(const std::string& w) : Error(ErrorKind::structural, w) {}
};
struct UnsupportedError : Error {
    explicit UnsupportedError(const std::string& w) : Error(ErrorKind::unsupported, w) {}
};

}  // namespace tadet
