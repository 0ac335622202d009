#include "nsbf/error.hpp"

namespace nsbf {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidBounds: return "invalid-bounds";
        case ErrorKind::InvalidCount: return "invalid-count";
        case ErrorKind::MeshMismatch: return "mesh-mismatch";
        case ErrorKind::OutOfRange: return "out-of-range";
        case ErrorKind::AssumptionViolated: return "assumption-violated";
        case ErrorKind::NoConvergence: return "no-convergence";
        case ErrorKind::NotPositive: return "not-positive";
        case ErrorKind::OrderTooLarge: return "order-too-large";
        case ErrorKind::BoundaryViolation: return "boundary-violation";
        case ErrorKind::VegaUndefined: return "vega-undefined";
        case ErrorKind::BandOutOfRange: return "band-out-of-range";
        case ErrorKind::InstabilityDetected: return "instability-detected";
        case ErrorKind::ConfigInvalid: return "config-invalid";
    }
    return "unknown";
}

Error::Error(ErrorKind kind, std::string module, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + " [" + module + "]: " + message),
      kind_(kind),
      module_(std::move(module)) {}

}  // namespace nsbf
