#pragma once

#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "herglotz/linalg.hpp"
#include "herglotz/measure.hpp"

namespace herglotz {

enum class Kernel {
    Full,    // (λ-z)^{-1} - λ(1+λ^2)^{-1}
    Plain    // (λ-z)^{-1}, requires finite total mass
};

/// The representation triple (C, D, measure) of a Herglotz function
/// M(z) = C + D z + \int dΩ(λ) kernel(λ, z). Scalar measures give k = 1.
class HerglotzRep {
public:
    HerglotzRep(CMat constant, CMat slope, Measure measure, Kernel kernel);
    HerglotzRep(CMat constant, CMat slope, MatrixMeasure measure, Kernel kernel);

    static HerglotzRep scalar(cplx constant, double slope, Measure measure, Kernel kernel);

    std::size_t dim() const { return dim_; }
    Kernel kernel() const { return kernel_; }
    const CMat& constant() const { return constant_; }
    const CMat& slope() const { return slope_; }
    bool is_scalar_measure() const { return std::holds_alternative<Measure>(measure_); }
    const Measure& scalar_measure() const { return std::get<Measure>(measure_); }
    const MatrixMeasure& matrix_measure() const { return std::get<MatrixMeasure>(measure_); }

private:
    void validate() const;

    CMat constant_, slope_;
    std::variant<Measure, MatrixMeasure> measure_;
    Kernel kernel_;
    std::size_t dim_;
};

/// Evaluate M(z) for Im z != 0. Values in the lower half-plane come from
/// the reflection M(z) = M(conj z)^*, so Eq-style symmetry holds exactly.
CMat eval(const HerglotzRep& rep, cplx z);

/// Scalar kernel integral of a measure; the workhorse behind eval.
cplx eval_scalar(const Measure& m, cplx z, Kernel kernel);

/// Scalar evaluation at a real point off the support (distance checked
/// against `guard`); used for the real-axis limits of extension theory.
cplx eval_scalar_real(const Measure& m, double x, Kernel kernel, double guard = 1e-8);

struct HerglotzReport {
    double min_imag_eigenvalue;   // over all samples
    cplx worst_z;
    bool pass;                    // min >= -1e-10
};

/// Sample Im M(z) over C_+ points and report the smallest eigenvalue seen.
HerglotzReport verify_herglotz(const HerglotzRep& rep, std::span<const cplx> samples);
HerglotzReport verify_herglotz(const std::function<CMat(cplx)>& m,
                               std::span<const cplx> samples);

/// Sharp sampled floor for Donoghue-normalized Herglotz functions:
/// Im M(z)/Im z >= (max(1,|z|^2) + |Re z|)^{-1}, i.e. Im z * Im M(z) is
/// bounded below by this value. (The source inequality carries the factor
/// (Im z)^2; see the derivation via (1+λ^2)/((λ-x)^2+y^2).)
double herglotz_floor(cplx z);

/// Block 2x2 matrix A with A* J A = J, J = [[0,-I],[I,0]]; the symmetry
/// group of Herglotz-preserving linear fractional transformations.
class JUnitary {
public:
    JUnitary(CMat a11, CMat a12, CMat a21, CMat a22);

    static JUnitary identity(std::size_t k);
    /// [[I, L2-L1],[0, I]] relating two perturbations with shared (H0, K).
    static JUnitary perturbation_pair(const CMat& l1, const CMat& l2);
    /// e^{-iα}[[sin α, -cos α],[cos α, sin α]] blocks (scalar α), the
    /// extension-rotation element.
    static JUnitary rotation(double alpha, std::size_t k);

    std::size_t dim() const { return a11_.rows(); }
    const CMat& a11() const { return a11_; }
    const CMat& a12() const { return a12_; }
    const CMat& a21() const { return a21_; }
    const CMat& a22() const { return a22_; }

    JUnitary compose(const JUnitary& inner) const;   // acts as this ∘ inner on M
    double j_residual() const;                       // ||A*JA - J||_F

private:
    CMat a11_, a12_, a21_, a22_;
};

/// M ↦ (A21 + A22 M)(A11 + A12 M)^{-1}. The denominator condition number
/// is guarded (default 1e12); violations throw SingularDenominator with
/// the offending z recorded in the message when supplied.
CMat lft_apply(const JUnitary& a, const CMat& m, double cond_guard = 1e12);
cplx lft_apply(const JUnitary& a, cplx m, double cond_guard = 1e12);

/// Scalar extension rotation z ↦ (-sin θ + cos θ m)/(cos θ + sin θ m).
/// rotate(θ1) ∘ rotate(θ2) = rotate(θ1+θ2 mod π).
std::function<cplx(cplx)> extension_rotate(std::function<cplx(cplx)> m, double theta);
cplx rotate_value(cplx m, double theta);

struct InversionOptions {
    std::vector<double> eps_ladder = {1e-2, 5e-3, 2.5e-3, 1.25e-3};
    std::size_t probes = 801;
    double atom_threshold = 1e-6;   // ε·Im M above this flags an atom
    double atom_drift = 0.10;       // relative drift across the ladder
};

/// Stieltjes inversion of a Herglotz evaluator over [window_lo, window_hi]:
/// density from (1/π) Im M(λ+iε) Richardson-extrapolated in ε, atoms where
/// ε·Im M(λ+iε) stabilizes. Throws NonHerglotzSample if Im M < -1e-8.
Measure stieltjes_invert(const std::function<cplx(cplx)>& m, double window_lo,
                         double window_hi, const InversionOptions& opt = {});

/// Interval of real-analyticity of the density with its complex extension,
/// enabling continuation of M into a rectangle below the axis.
struct AnalyticInterval {
    double lo, hi;
    std::function<cplx(cplx)> density_extension;   // Ω'(z) on the rectangle
    double depth;                                  // rectangle reaches Im z in (-depth, 0]
};

/// Validate that density_extension matches the measure's density on (lo,hi).
AnalyticInterval make_analytic_interval(const Measure& m, double lo, double hi,
                                        std::function<cplx(cplx)> density_extension,
                                        double depth, double check_tol = 1e-8);

/// Analytic continuation through (lo, hi): M(z) = M(conj z)^* + 2πi Ω'(z)
/// for z in the declared rectangle (Im z <= 0).
cplx continue_below(const HerglotzRep& rep, const AnalyticInterval& interval, cplx z);

/// Matrix variant: atomic matrix measures only admit spectral-gap windows
/// (Ω' = 0 there), so the continuation reduces to the reflection.
CMat continue_below_matrix(const HerglotzRep& rep, double lo, double hi, cplx z);

enum class N0Class { N0, N0F, N0K, N0FK, NotN0 };

/// Membership in the realization classes: Donoghue normalization plus
/// infinite total mass, refined by the Friedrichs/Krein divergences when
/// the support sits in [0, inf).
N0Class n0_membership(const Measure& m);

} // namespace herglotz
