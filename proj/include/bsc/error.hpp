#pragma once

#include <stdexcept>
#include <string>

namespace bsc {

/// Failure categories surfaced by the library. The CLI maps these onto exit codes.
enum class ErrorKind {
    invalid_argument,
    out_of_domain,
    mismatched_spaces,
    dimension_mismatch,
    rank_deficient,
    too_small_space,
    unsupported_width,
    no_valid_configuration,
    singular_system,
    size_cap_exceeded,
    solver_failure,
    io_error,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::out_of_domain: return "out-of-domain";
    case ErrorKind::mismatched_spaces: return "mismatched-spaces";
    case ErrorKind::dimension_mismatch: return "dimension-mismatch";
    case ErrorKind::rank_deficient: return "rank-deficient";
    case ErrorKind::too_small_space: return "too-small-space";
    case ErrorKind::unsupported_width: return "unsupported-width";
    case ErrorKind::no_valid_configuration: return "no-valid-configuration";
    case ErrorKind::singular_system: return "singular-normal-equations";
    case ErrorKind::size_cap_exceeded: return "size-cap-exceeded";
    case ErrorKind::solver_failure: return "solver-failure";
    case ErrorKind::io_error: return "io-error";
    }
    return "unknown";
}

} // namespace bsc
