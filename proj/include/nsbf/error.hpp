#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nsbf {

enum class ErrorKind {
    InvalidBounds,
    InvalidCount,
    MeshMismatch,
    OutOfRange,
    AssumptionViolated,
    NoConvergence,
    NotPositive,
    OrderTooLarge,
    BoundaryViolation,
    VegaUndefined,
    BandOutOfRange,
    InstabilityDetected,
    ConfigInvalid,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Exception raised by every module. `module()` names the pipeline stage that
/// failed so the CLI can report provenance.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string module, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& module() const noexcept { return module_; }

private:
    ErrorKind kind_;
    std::string module_;
};

}  // namespace nsbf
