#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace herglotz {

/// Base class for all library errors. Carries a stable module-qualified
/// code ("measures.DivergentIntegral", ...) so front ends can map errors
/// without string-matching on messages.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

// A mathematical verification (invariant report) failed. Front ends map
// this to exit code 2, everything else to exit code 1.
class VerificationError : public Error {
public:
    VerificationError(const std::string& code, const std::string& what)
        : Error(code, what) {}
};

#define HERGLOTZ_DEFINE_ERROR(Name, Code)                    \
    class Name : public Error {                              \
    public:                                                  \
        explicit Name(const std::string& what)               \
            : Error(Code, what) {}                           \
    }

// measures
HERGLOTZ_DEFINE_ERROR(DivergentIntegral, "measures.DivergentIntegral");
HERGLOTZ_DEFINE_ERROR(QuadratureFailure, "measures.QuadratureFailure");
HERGLOTZ_DEFINE_ERROR(ZeroMeasure, "measures.ZeroMeasure");
HERGLOTZ_DEFINE_ERROR(UnsupportedMeasure, "measures.UnsupportedMeasure");
HERGLOTZ_DEFINE_ERROR(Inconclusive, "measures.Inconclusive");
HERGLOTZ_DEFINE_ERROR(NotPSD, "measures.NotPSD");
HERGLOTZ_DEFINE_ERROR(BadMeasure, "measures.BadMeasure");

// herglotz_core
HERGLOTZ_DEFINE_ERROR(EvalOnRealAxis, "herglotz.EvalOnRealAxis");
HERGLOTZ_DEFINE_ERROR(SingularDenominator, "herglotz.SingularDenominator");
HERGLOTZ_DEFINE_ERROR(NonHerglotzSample, "herglotz.NonHerglotzSample");
HERGLOTZ_DEFINE_ERROR(OutsideValidityRectangle, "herglotz.OutsideValidityRectangle");
HERGLOTZ_DEFINE_ERROR(NotJUnitary, "herglotz.NotJUnitary");

// perturbation
HERGLOTZ_DEFINE_ERROR(NearSingularResolvent, "perturbation.NearSingularResolvent");
HERGLOTZ_DEFINE_ERROR(EigensolverFailure, "perturbation.EigensolverFailure");
HERGLOTZ_DEFINE_ERROR(SingularMatrix, "perturbation.SingularMatrix");
HERGLOTZ_DEFINE_ERROR(BadOperator, "perturbation.BadOperator");

// schrodinger
HERGLOTZ_DEFINE_ERROR(StepSizeUnderflow, "schrodinger.StepSizeUnderflow");
HERGLOTZ_DEFINE_ERROR(NoConvergence, "schrodinger.NoConvergence");
HERGLOTZ_DEFINE_ERROR(InvalidCombination, "schrodinger.InvalidCombination");
HERGLOTZ_DEFINE_ERROR(BadPotential, "schrodinger.BadPotential");

// livsic
HERGLOTZ_DEFINE_ERROR(InvalidModel, "livsic.InvalidModel");

// cli / io
HERGLOTZ_DEFINE_ERROR(GridTooLarge, "cli.GridTooLarge");
HERGLOTZ_DEFINE_ERROR(BadInput, "cli.BadInput");

#undef HERGLOTZ_DEFINE_ERROR

} // namespace herglotz
