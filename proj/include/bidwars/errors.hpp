#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bidwars {

enum class ErrorKind {
    DomainError,
    NoInteriorCrossing,
    SingularElasticity,
    DivergentElasticity,
    QuadratureError,
    BracketError,
    SaturatedLandscape,
    NoInteriorEquilibrium,
    DegenerateSolution,
    NoConvergence,
    ModeError,
    ZeroMarket,
    IncompleteMatrix,
    RangeError,
    OracleNoConvergence,
    ConfigError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace bidwars
