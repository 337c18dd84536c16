#pragma once

#include <optional>
#include <vector>

#include "herglotz/linalg.hpp"

namespace herglotz {

struct Atom {
    double x;   // location
    double m;   // nonnegative mass
};

enum class TailKind { None, LebesgueOverPi, Power };

/// Symbolic tag for the analytic behavior of a measure outside the sampled
/// window. LebesgueOverPi is the two-sided density 1/pi; Power is a
/// right-sided density ~ c x^exponent anchored to the last density sample
/// (c = values.back()/grid.back()^exponent). A Power tag on a measure with
/// no density grid is a purely symbolic divergence marker: it decides
/// divergence questions but contributes no quadrature mass.
struct Tail {
    TailKind kind = TailKind::None;
    double exponent = 0.0;
};

/// Scalar Borel measure as a finite atom list plus an optional sampled
/// density (piecewise linear on a strictly increasing grid) plus a tail tag.
/// Immutable after construction; all operations return new values.
class Measure {
public:
    Measure() = default;
    Measure(std::vector<Atom> atoms, std::vector<double> grid,
            std::vector<double> values, Tail tail = {});

    static Measure from_atoms(std::vector<Atom> atoms, Tail tail = {});
    static Measure from_density(std::vector<double> grid, std::vector<double> values,
                                Tail tail = {});
    static Measure lebesgue_over_pi();   // the measure dλ/π, as a pure tail

    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    const Tail& tail() const { return tail_; }

    bool has_density() const { return !grid_.empty(); }
    /// Density interpolated at x (zero outside the grid; tail not included).
    double density_at(double x) const;
    /// Density including the analytic tail region.
    double density_with_tail_at(double x) const;
    /// Anchored power-tail coefficient, 0 when symbolic.
    double tail_coefficient() const;
    /// Onset of the power tail / end of the two-sided hull.
    double hull_lo() const;
    double hull_hi() const;
    bool empty() const { return atoms_.empty() && grid_.empty() && tail_.kind == TailKind::None; }

    /// Smallest distance from x to the support (atoms, density hull, tails).
    double distance_to_support(double x) const;

    Measure scaled(double s) const;
    Measure with_tail(Tail t) const;

private:
    void normalize_and_validate();

    std::vector<Atom> atoms_;
    std::vector<double> grid_;
    std::vector<double> values_;
    Tail tail_;
};

/// \int (1+λ^2)^exponent dω(λ). Atom sum + adaptive quadrature on the
/// density grid + closed-form/flattened tail contribution.
/// Throws DivergentIntegral when the tail tag makes the integral infinite,
/// QuadratureFailure when refinement stalls.
double weighted_mass(const Measure& m, double exponent);

/// Rescale so that weighted_mass(., -1) == 1. The LebesgueOverPi tail is
/// scale-rigid, so only atoms and density are rescaled, solving
/// s * scalable_mass + tail_mass = 1 exactly.
Measure donoghue_normalize(const Measure& m);

enum class ExtClass { Friedrichs, Krein, FriedrichsEqualsKrein, Neither };

/// Divergence classification of \int dω/λ at the two ends of [0, inf),
/// decided symbolically from the tail tag (at infinity) and from the
/// log-log endpoint exponent of the sampled density (at zero).
ExtClass classify_extension_type(const Measure& m);

struct MatrixAtom {
    double x;
    CMat w;   // Hermitian PSD weight
};

/// Finitely supported measure with Hermitian PSD matrix weights.
class MatrixMeasure {
public:
    MatrixMeasure() : dim_(0) {}
    MatrixMeasure(std::size_t dim, std::vector<MatrixAtom> atoms);

    std::size_t dim() const { return dim_; }
    const std::vector<MatrixAtom>& atoms() const { return atoms_; }

    CMat total_mass() const;
    /// Trace scalarization; a faithful control measure for atomic weights.
    Measure trace_measure() const;

private:
    std::size_t dim_;
    std::vector<MatrixAtom> atoms_;
};

/// Weighted L2 model-space descriptor: base matrix measure with weight
/// w_r(λ) = (1+λ^2)^r.
struct WeightedL2Spec {
    MatrixMeasure base;
    double weight_exponent = 0.0;
};

/// \int (1+λ^2)^r dΩ as a matrix (finite for finitely supported Ω).
CMat weighted_mass(const WeightedL2Spec& spec);

} // namespace herglotz
