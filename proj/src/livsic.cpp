#include "herglotz/livsic.hpp"

#include <algorithm>
#include <cmath>

#include "herglotz/errors.hpp"
#include "herglotz/herglotz.hpp"

namespace herglotz {

namespace {

// cot saturates to -i (resp. +i) far above (below) the real axis; computing
// it through cos/sin there would overflow cosh.
cplx stable_cot(cplx w) {
    if (w.imag() > 20.0) return {0.0, -1.0};
    if (w.imag() < -20.0) return {0.0, 1.0};
    const cplx s = std::sin(w);
    if (std::abs(s) == 0.0) throw SingularDenominator("cot evaluated at a lattice point");
    return std::cos(w) / s;
}

// root of cot(β) = target on (0, π): Newton from the arccot closed form,
// bisection fallback
double solve_beta(double target) {
    double lo = 1e-12, hi = M_PI - 1e-12;
    double beta = std::atan2(1.0, target);
    for (int it = 0; it < 60; ++it) {
        const double s = std::sin(beta);
        const double f = std::cos(beta) / s - target;
        const double fp = -1.0 / (s * s);
        const double step = f / fp;
        double next = beta - step;
        if (f > 0.0) lo = beta; else hi = beta;   // cot decreases on (0, π)
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - beta) < 1e-15) { beta = next; break; }
        beta = next;
    }
    return beta;
}

} // namespace

LivsicInterval::LivsicInterval(double a_, double alpha_) : a(a_), alpha(alpha_) {
    if (!(a > 0.0)) throw InvalidModel("interval half-length must be positive");
    if (!(alpha >= 0.0 && alpha < M_PI)) throw InvalidModel("alpha must lie in [0, pi)");
    if (alpha == 0.0) {
        beta = 0.0;
        beta_residual = 0.0;
        return;
    }
    // lattice offset: the rotated m has its poles where the denominator
    // cos α + sin α cot(az)/coth(a) vanishes, i.e. cot β = -cot(α) coth(a)
    const double target = -(std::cos(alpha) / std::sin(alpha)) / std::tanh(a);
    beta = solve_beta(target);
    // residual relative to the target scale: near the poles of cot a double
    // step in beta already moves cot by ~target^2 epsilon
    beta_residual =
        std::abs(std::cos(beta) / std::sin(beta) - target) / std::max(1.0, std::abs(target));
    if (beta_residual > 1e-12) throw InvalidModel("lattice offset equation failed to converge");
}

cplx LivsicInterval::rho() const { return std::exp(cplx(0.0, 2.0 * beta)); }

cplx periodic_donoghue_m(double a, cplx z) {
    if (!(a > 0.0)) throw InvalidModel("interval half-length must be positive");
    return -stable_cot(a * z) * std::tanh(a);
}

cplx livsic_rotated_m(const LivsicInterval& model, cplx z) {
    const double s = std::sin(model.alpha), c = std::cos(model.alpha);
    const cplx t = stable_cot(model.a * z) * std::tanh(model.a);   // cot(az)/coth(a)
    const cplx den = c + s * t;
    if (std::abs(den) < 1e-14 * (1.0 + std::abs(t)))
        throw SingularDenominator("rotated m evaluated at a spectral point");
    return (s - c * t) / den;
}

double livsic_atom_mass(const LivsicInterval& model) {
    const double s = std::sin(model.alpha), c = std::cos(model.alpha);
    const double coth = 1.0 / std::tanh(model.a);
    return coth / (model.a * (s * s + c * c * coth * coth));
}

double livsic_lattice_point(const LivsicInterval& model, long n) {
    return (model.beta + M_PI * static_cast<double>(n)) / model.a;
}

Measure livsic_measure(const LivsicInterval& model, long n_range) {
    if (n_range < 1) throw InvalidModel("truncation level must be at least 1");
    const double mass = livsic_atom_mass(model);
    std::vector<Atom> atoms;
    atoms.reserve(2 * n_range + 1);
    for (long n = -n_range; n <= n_range; ++n)
        atoms.push_back({livsic_lattice_point(model, n), mass});
    return Measure::from_atoms(std::move(atoms), Tail{TailKind::Power, 0.0});
}

double livsic_truncation_bound(const LivsicInterval& model, long n_range, cplx z) {
    // |kernel(λ)| = |1 + λ z| / (|λ - z| (1 + λ^2)) <= (1 + |z|) / (|λ| - |z|) / |λ|
    // for |λ| > |z|; sum the two geometric-free tails by the integral test.
    const double mass = livsic_atom_mass(model);
    const double start = std::abs(livsic_lattice_point(model, n_range + 1));
    const double start2 = std::abs(livsic_lattice_point(model, -(n_range + 1)));
    const double lam0 = std::min(start, start2);
    const double zabs = std::abs(z);
    if (lam0 <= 2.0 * zabs + 1.0) throw BadInput("truncation level too small for this z");
    const double spacing = M_PI / model.a;
    // per-tail bound: mass * (1+|z|) * Σ_{λ ≥ λ0, step π/a} λ^{-1}(λ-|z|)^{-1}
    const double tail_sum = (1.0 + zabs) / (spacing * (lam0 - zabs)) * (1.0 + spacing / lam0);
    return 2.0 * mass * tail_sum;
}

LebesgueLimitReport lebesgue_limit_check(const std::vector<double>& a_ladder, double alpha,
                                         const std::vector<cplx>& test_grid) {
    if (a_ladder.size() < 2) throw BadInput("ladder needs at least two entries");
    for (std::size_t i = 1; i < a_ladder.size(); ++i)
        if (!(a_ladder[i] > a_ladder[i - 1])) throw BadInput("ladder must increase");
    LebesgueLimitReport rep;
    rep.monotone_decreasing = true;
    for (double a : a_ladder) {
        const LivsicInterval model(a, alpha);
        double sup = 0.0;
        for (cplx z : test_grid) {
            if (!(z.imag() > 0.0)) throw BadInput("test grid must lie in C+");
            sup = std::max(sup, std::abs(livsic_rotated_m(model, z) - cplx(0.0, 1.0)));
        }
        if (!rep.sup_distances.empty() && sup >= rep.sup_distances.back())
            rep.monotone_decreasing = false;
        rep.sup_distances.push_back(sup);
    }
    return rep;
}

double SpectrumDescriptor::point(long n) const {
    return (beta + M_PI * static_cast<double>(n)) / a;
}

SpectrumDescriptor quasihermitian_spectrum(const IntervalModelTag& model) {
    if (!(model.a > 0.0)) throw InvalidModel("interval half-length must be positive");
    if (!model.rho.has_value() || *model.rho == cplx(0.0))
        return {SpectrumDescriptor::Kind::Empty, 0.0, 1.0};
    const cplx rho = *model.rho;
    if (std::abs(std::abs(rho) - 1.0) > 1e-12)
        throw InvalidModel("interval boundary multiplier must satisfy |rho| = 1 (or be 0/inf)");
    double beta = 0.5 * std::arg(rho);   // arg ρ = 2β
    if (beta < 0.0) beta += M_PI;
    return {SpectrumDescriptor::Kind::Lattice, beta, model.a};
}

SpectrumDescriptor quasihermitian_spectrum(const LivsicInterval& model) {
    return {SpectrumDescriptor::Kind::Lattice, model.beta, model.a};
}

SpectrumDescriptor quasihermitian_spectrum(const LineModelTag&) {
    return {SpectrumDescriptor::Kind::ClosedUpperHalfPlane, 0.0, 1.0};
}

} // namespace herglotz
