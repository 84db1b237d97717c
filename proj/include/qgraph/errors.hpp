#pragma once

#include <stdexcept>
#include <string>

namespace qgraph {

enum class ErrorCode {
    ShapeMismatch,
    ToleranceMismatch,
    NotUnitalAlgebra,
    NotUnital,
    NotSelfAdjoint,
    NotAlgebra,
    NotBicommutant,
    NotBimodule,
    NotIrreducible,
    DecompositionFailed,
    SizeMismatch,
    BudgetExceeded,
    NotPullback,
    NotStarHomomorphism,
    Degenerate,
    FactorizationFailed,
    StructureMismatch,
    ParseError,
    InternalError,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what, double residual = 0.0)
        : std::runtime_error(std::string(error_name(code)) + ": " + what)
        , code_(code)
        , residual_(residual)
    {
    }

    ErrorCode code() const { return code_; }
    // Residual of the failing check, 0 when not applicable.
    double residual() const { return residual_; }

private:
    ErrorCode code_;
    double residual_;
};

} // namespace qgraph
