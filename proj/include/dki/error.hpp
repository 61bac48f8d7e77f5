#pragma once

#include <stdexcept>
#include <string>

namespace dki {

enum class ErrorKind {
    InvalidParameter,
    DimensionTooLarge,
    IndexOutOfRange,
    InvalidModel,
    ConfigParse,
    Io,
};

// Single exception type for the library; the kind drives CLI exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidParameter: return "invalid-parameter";
        case ErrorKind::DimensionTooLarge: return "dimension-too-large";
        case ErrorKind::IndexOutOfRange: return "index-out-of-range";
        case ErrorKind::InvalidModel: return "invalid-model";
        case ErrorKind::ConfigParse: return "config-parse";
        case ErrorKind::Io: return "io";
    }
    return "unknown";
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, const std::string& what) {
    if (!cond) fail(ErrorKind::InvalidParameter, what);
}

}  // namespace dki
