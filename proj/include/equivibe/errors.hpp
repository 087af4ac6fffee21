#pragma once

#include <stdexcept>
#include <string>

namespace equivibe {

// Error taxonomy. The CLI maps these onto exit codes.
enum class ErrorKind { Domain, Solver, Unsupported, Consistency, Config };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct DomainError : Error {
    explicit DomainError(const std::string& m) : Error(ErrorKind::Domain, m) {}
};
struct SolverError : Error {
    explicit SolverError(const std::string& m) : Error(ErrorKind::Solver, m) {}
};
struct UnsupportedError : Error {
    explicit UnsupportedError(const std::string& m) : Error(ErrorKind::Unsupported, m) {}
};
struct ConsistencyError : Error {
    explicit ConsistencyError(const std::string& m) : Error(ErrorKind::Consistency, m) {}
};
struct ConfigError : Error {
    explicit ConfigError(const std::string& m) : Error(ErrorKind::Config, m) {}
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Solver: return "solver";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::Consistency: return "consistency";
    case ErrorKind::Config: return "config";
    }
    return "unknown";
}

} // namespace equivibe
