#pragma once

#include <stdexcept>
#include <string>

namespace quatgreen {

/// Base class of every error raised by the library. `kind()` is a stable
/// machine-readable tag used by the CLI error JSON.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

/// Non-finite or otherwise invalid argument.
struct DomainError : Error {
    explicit DomainError(const std::string& what) : Error("domain", what) {}
};

/// Inversion of a zero quaternion or a singular matrix.
struct SingularError : Error {
    explicit SingularError(const std::string& what) : Error("singular", what) {}
};

/// Evaluation exactly at a pole or branch point of a transform.
struct PoleError : Error {
    explicit PoleError(const std::string& what) : Error("pole", what) {}
};

/// Leading polynomial coefficient vanishes; callers perturb the point.
struct DegenerateError : Error {
    explicit DegenerateError(const std::string& what) : Error("degenerate", what) {}
};

/// Quaternion is degenerate or diagonal, so the explicit diagonalizer does not apply.
struct NotDiagonalizableError : Error {
    explicit NotDiagonalizableError(const std::string& what)
        : Error("not_diagonalizable", what) {}
};

/// Iterative procedure (continuation, QR sweep, root bracketing) failed.
struct NumericalError : Error {
    explicit NumericalError(const std::string& what) : Error("numerical", what) {}
};

/// Invalid user configuration (CLI, JSON, grid sizes).
struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error("config", what) {}
};

}  // namespace quatgreen
