#ifndef ANYVA_ERROR_HPP
#define ANYVA_ERROR_HPP

#include <stdexcept>
#include <string>

namespace anyva {

// Error taxonomy mirrored by the C API status codes and CLI exit codes:
// usage -> 1, parse -> 2, state -> 3, validation -> 4.
enum class ErrorKind {
    usage,
    parse,
    state,
    validation,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail_usage(const std::string& msg) { throw Error(ErrorKind::usage, msg); }
[[noreturn]] inline void fail_parse(const std::string& msg) { throw Error(ErrorKind::parse, msg); }
[[noreturn]] inline void fail_state(const std::string& msg) { throw Error(ErrorKind::state, msg); }

} // namespace anyva

#endif
