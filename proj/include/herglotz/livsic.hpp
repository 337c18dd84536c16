#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "herglotz/linalg.hpp"
#include "herglotz/measure.hpp"

namespace herglotz {

/// Interval model data: half-length a (interval [0, 2a]), extension angle
/// α, and the derived lattice offset β solving cot β + cot α coth a = 1
/// (β = 0 when α = 0). The boundary multiplier is ρ = e^{2iβ}.
struct LivsicInterval {
    double a;
    double alpha;
    double beta;
    double beta_residual;

    LivsicInterval(double a_, double alpha_);
    cplx rho() const;
};

/// m of the periodic extension: -cot(a z)/coth(a); equals i at z = i and
/// has period π/a.
cplx periodic_donoghue_m(double a, cplx z);

/// m of the extension labeled α, i.e. the rotation of the periodic m.
cplx livsic_rotated_m(const LivsicInterval& model, cplx z);

/// Mass shared by every atom of the model measure: coth(a)/(a (sin^2 α +
/// cos^2 α coth^2 a)), written in a form regular at α = 0 and π/2.
double livsic_atom_mass(const LivsicInterval& model);

/// Lattice point (β + π n)/a; the measure support and the spectrum
/// descriptor use this same expression, making the equality exact.
double livsic_lattice_point(const LivsicInterval& model, long n);

/// Truncated pure point measure: atoms at (β + π n)/a for |n| <= n_range,
/// all with livsic_atom_mass. Tagged with a symbolic divergent tail since
/// the untruncated mass is infinite.
Measure livsic_measure(const LivsicInterval& model, long n_range);

/// Analytic bound on the truncated kernel sum dropped by livsic_measure:
/// sum over |n| > n_range of mass * |kernel| at z.
double livsic_truncation_bound(const LivsicInterval& model, long n_range, cplx z);

struct LebesgueLimitReport {
    std::vector<double> sup_distances;   // per ladder entry, sup_z |m - i|
    bool monotone_decreasing;
};

/// As a grows, the interval models' m approaches the constant i (the m of
/// dλ/π); the report records the sup distance per ladder entry.
LebesgueLimitReport lebesgue_limit_check(const std::vector<double>& a_ladder, double alpha,
                                         const std::vector<cplx>& test_grid);

struct SpectrumDescriptor {
    enum class Kind { Lattice, Empty, ClosedUpperHalfPlane } kind;
    // lattice points are (beta + π n)/a, evaluated with the same expression
    // the measure support uses so the two agree exactly
    double beta = 0.0;
    double a = 1.0;
    double point(long n) const;
    double offset() const { return beta / a; }
    double period() const { return M_PI / a; }
};

struct IntervalModelTag {
    double a;
    std::optional<cplx> rho;   // nullopt encodes ρ = ∞
};
struct LineModelTag {};

/// Spectra of the quasi-hermitian model operators: the unitary-boundary
/// interval operator has the lattice arg(ρ)/(2a) + (π/a) n; ρ = 0 or ∞
/// give empty spectrum; the split line model fills the closed upper
/// half-plane.
SpectrumDescriptor quasihermitian_spectrum(const IntervalModelTag& model);
SpectrumDescriptor quasihermitian_spectrum(const LivsicInterval& model);
SpectrumDescriptor quasihermitian_spectrum(const LineModelTag&);

} // namespace herglotz
