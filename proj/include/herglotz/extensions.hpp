#pragma once

#include <functional>
#include <optional>

#include "herglotz/herglotz.hpp"
#include "herglotz/measure.hpp"

namespace herglotz {

/// Donoghue model: a scalar measure with unit (1+λ^2)^{-1}-mass and
/// infinite total mass (marked by a divergent tail tag), together with the
/// extension angle α labeling the self-adjoint extension it represents.
struct DonoghueModel {
    Measure measure;
    double alpha = 0.0;

    DonoghueModel(Measure m, double a);
};

/// m_α(z) = \int dω_α(λ) ((λ-z)^{-1} - λ(1+λ^2)^{-1}); m(i) = i by the
/// normalization.
cplx donoghue_m(const DonoghueModel& model, cplx z);
/// Real-axis evaluation off the support (guarded), used for boundary limits.
double donoghue_m_real(const DonoghueModel& model, double x);

struct ExtensionFamily {
    DonoghueModel base;
};

/// m_β from m_α via the angle-difference rotation.
cplx rotate_family(const ExtensionFamily& fam, double beta, cplx z);

/// Exact supremum of |ℓ(f)|^2 / (||f||^2 + ||H f||^2) over the extension's
/// domain: \int dω (1+λ^2)^{-2}.
double functional_bound(const DonoghueModel& model);

enum class FkType { Friedrichs, Krein, Both, Neither };

struct SideVerdict {
    enum class Kind { Divergent, Convergent, Inconclusive } kind;
    double direction;    // sign of the trend for divergent sides
    double slope;        // fitted growth rate (power in the decade variable)
    double r2;           // fit confidence
    double limit;        // accumulated value at the last rung
};

struct FkVerdict {
    FkType type;
    SideVerdict at_minus_infinity;   // λ ↓ -inf ladder
    SideVerdict at_zero;             // λ ↑ 0 ladder
    double confidence;               // min of the fit confidences used
    bool cross_checked;
};

/// Boundary-limit classification of a scalar m-function real-analytic off
/// [0, inf): Friedrichs iff m(λ) → -inf as λ ↓ -inf, Krein iff m(λ) → +inf
/// as λ ↑ 0. Divergence verdicts come from log-ladder slope fits with an
/// R^2 >= 0.99 confidence requirement; anything murkier throws Inconclusive.
/// When a measure is supplied the verdict is cross-checked against
/// classify_extension_type and a mismatch throws.
FkVerdict identify_friedrichs_krein(const std::function<double(double)>& m_real,
                                    const Measure* cross_check = nullptr);
FkVerdict identify_friedrichs_krein(const DonoghueModel& model);

/// Truncated \int dω λ^2 |u_+ + e^{2iα} u_-|^2 in the α0-model coordinates;
/// grows without bound in the truncation level whenever α != α0.
double relatively_prime_growth(const Measure& m, double alpha, double alpha0);

} // namespace herglotz
