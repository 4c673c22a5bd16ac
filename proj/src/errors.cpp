#include "bidwars/errors.hpp"

namespace bidwars {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::DomainError: return "DomainError";
        case ErrorKind::NoInteriorCrossing: return "NoInteriorCrossing";
        case ErrorKind::SingularElasticity: return "SingularElasticity";
        case ErrorKind::DivergentElasticity: return "DivergentElasticity";
        case ErrorKind::QuadratureError: return "QuadratureError";
        case ErrorKind::BracketError: return "BracketError";
        case ErrorKind::SaturatedLandscape: return "SaturatedLandscape";
        case ErrorKind::NoInteriorEquilibrium: return "NoInteriorEquilibrium";
        case ErrorKind::DegenerateSolution: return "DegenerateSolution";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::ModeError: return "ModeError";
        case ErrorKind::ZeroMarket: return "ZeroMarket";
        case ErrorKind::IncompleteMatrix: return "IncompleteMatrix";
        case ErrorKind::RangeError: return "RangeError";
        case ErrorKind::OracleNoConvergence: return "OracleNoConvergence";
        case ErrorKind::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

}  // namespace bidwars
