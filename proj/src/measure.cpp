#include "herglotz/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "herglotz/errors.hpp"
#include "herglotz/quadrature.hpp"
#include "herglotz/version.hpp"

namespace herglotz {

namespace {

constexpr double kSupportTol = 1e-12;

// least-squares line fit of y against x; returns (slope, r2)
std::pair<double, double> line_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i]; sy += y[i];
        sxx += x[i] * x[i]; sxy += x[i] * y[i]; syy += y[i] * y[i];
    }
    const double den = n * sxx - sx * sx;
    if (den <= 0.0) return {0.0, 0.0};
    const double slope = (n * sxy - sx * sy) / den;
    const double ybar = sy / n;
    double ss_tot = 0, ss_res = 0;
    const double intercept = ybar - slope * sx / n;
    for (std::size_t i = 0; i < n; ++i) {
        const double fit = intercept + slope * x[i];
        ss_res += (y[i] - fit) * (y[i] - fit);
        ss_tot += (y[i] - ybar) * (y[i] - ybar);
    }
    const double r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return {slope, r2};
}

} // namespace

Measure::Measure(std::vector<Atom> atoms, std::vector<double> grid,
                 std::vector<double> values, Tail tail)
    : atoms_(std::move(atoms)), grid_(std::move(grid)), values_(std::move(values)), tail_(tail) {
    normalize_and_validate();
}

Measure Measure::from_atoms(std::vector<Atom> atoms, Tail tail) {
    return Measure(std::move(atoms), {}, {}, tail);
}

Measure Measure::from_density(std::vector<double> grid, std::vector<double> values, Tail tail) {
    return Measure({}, std::move(grid), std::move(values), tail);
}

Measure Measure::lebesgue_over_pi() {
    return Measure({}, {}, {}, Tail{TailKind::LebesgueOverPi, 0.0});
}

void Measure::normalize_and_validate() {
    const Tolerances& tol = default_tolerances();
    for (const Atom& a : atoms_) {
        if (!(a.m >= 0.0)) throw BadMeasure("atom mass must be nonnegative");
        if (!std::isfinite(a.x) || !std::isfinite(a.m)) throw BadMeasure("atom must be finite");
    }
    std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) { return a.x < b.x; });
    // merge near-duplicates; eigen/dilation round trips produce them
    std::vector<Atom> merged;
    for (const Atom& a : atoms_) {
        if (!merged.empty() && a.x - merged.back().x <= tol.atom_merge)
            merged.back().m += a.m;
        else
            merged.push_back(a);
    }
    atoms_ = std::move(merged);

    if (grid_.size() != values_.size()) throw BadMeasure("density grid/values size mismatch");
    if (grid_.size() == 1) throw BadMeasure("density grid needs at least two nodes");
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        if (!std::isfinite(grid_[i]) || !std::isfinite(values_[i]))
            throw BadMeasure("density samples must be finite");
        if (i > 0 && !(grid_[i] > grid_[i - 1]))
            throw BadMeasure("density grid must be strictly increasing");
        if (values_[i] < 0.0) throw BadMeasure("density values must be nonnegative");
    }
    if (!std::isfinite(tail_.exponent)) throw BadMeasure("tail exponent must be finite");
    if (tail_.kind == TailKind::Power && tail_.exponent >= 1.0)
        throw BadMeasure("power tail p >= 1 breaks the finite (1+x^2)^{-1} mass invariant");
    if (tail_.kind == TailKind::Power && !grid_.empty() && grid_.back() <= 0.0)
        throw BadMeasure("power tail needs the density grid to end at a positive abscissa");
}

double Measure::density_at(double x) const {
    if (grid_.empty() || x < grid_.front() || x > grid_.back()) return 0.0;
    auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
    if (it == grid_.begin()) return values_.front();
    if (it == grid_.end()) return values_.back();
    const std::size_t j = static_cast<std::size_t>(it - grid_.begin());
    const double t = (x - grid_[j - 1]) / (grid_[j] - grid_[j - 1]);
    return (1.0 - t) * values_[j - 1] + t * values_[j];
}

double Measure::density_with_tail_at(double x) const {
    switch (tail_.kind) {
        case TailKind::LebesgueOverPi:
            if (empty() || x <= hull_lo() || x >= hull_hi()) return 1.0 / M_PI;
            break;
        case TailKind::Power:
            if (!grid_.empty() && x >= grid_.back())
                return tail_coefficient() * std::pow(x, tail_.exponent);
            break;
        case TailKind::None:
            break;
    }
    return density_at(x);
}

double Measure::tail_coefficient() const {
    if (tail_.kind != TailKind::Power || grid_.empty()) return 0.0;
    return values_.back() / std::pow(grid_.back(), tail_.exponent);
}

double Measure::hull_lo() const {
    double lo = std::numeric_limits<double>::infinity();
    if (!atoms_.empty()) lo = atoms_.front().x;
    if (!grid_.empty()) lo = std::min(lo, grid_.front());
    return std::isfinite(lo) ? lo : 0.0;
}

double Measure::hull_hi() const {
    double hi = -std::numeric_limits<double>::infinity();
    if (!atoms_.empty()) hi = atoms_.back().x;
    if (!grid_.empty()) hi = std::max(hi, grid_.back());
    return std::isfinite(hi) ? hi : 0.0;
}

double Measure::distance_to_support(double x) const {
    double d = std::numeric_limits<double>::infinity();
    if (tail_.kind == TailKind::LebesgueOverPi) return 0.0;
    for (const Atom& a : atoms_)
        if (a.m > 0.0) d = std::min(d, std::abs(x - a.x));
    // a density segment counts as support as soon as either endpoint carries mass
    for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
        if (values_[i] <= 0.0 && values_[i + 1] <= 0.0) continue;
        if (x >= grid_[i] && x <= grid_[i + 1]) return 0.0;
        d = std::min(d, x < grid_[i] ? grid_[i] - x : x - grid_[i + 1]);
    }
    if (tail_.kind == TailKind::Power) {
        const double cut = grid_.empty() ? std::max(1.0, hull_hi()) : grid_.back();
        if (x >= cut) return 0.0;
        d = std::min(d, cut - x);
    }
    return d;
}

Measure Measure::scaled(double s) const {
    if (!(s > 0.0)) throw BadMeasure("measure scale must be positive");
    std::vector<Atom> a = atoms_;
    for (Atom& at : a) at.m *= s;
    std::vector<double> v = values_;
    for (double& d : v) d *= s;
    return Measure(std::move(a), grid_, std::move(v), tail_);
}

Measure Measure::with_tail(Tail t) const { return Measure(atoms_, grid_, values_, t); }

namespace {

// \int_R^inf (1+λ^2)^e dλ / π-free; R may be negative.
double half_line_weight(double r, double e) {
    if (e >= -0.5) throw DivergentIntegral("(1+λ^2)^e tail diverges for e >= -1/2");
    if (e == -1.0) return M_PI / 2.0 - std::atan(r);
    if (e == -2.0) {
        // antiderivative (atan λ + λ/(1+λ^2))/2
        const double at_inf = M_PI / 4.0;
        return at_inf - 0.5 * (std::atan(r) + r / (1.0 + r * r));
    }
    const double split = std::max(r, 1.0);
    double head = 0.0;
    if (split > r)
        head = adaptive_simpson([e](double x) { return std::pow(1.0 + x * x, e); }, r, split);
    return head + power_tail_weighted_mass(split, 1.0, 0.0, e);
}

double density_weighted_mass(const Measure& m, double e) {
    double s = 0.0;
    const auto& g = m.grid();
    const auto& v = m.values();
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        const double x0 = g[i], x1 = g[i + 1], y0 = v[i], y1 = v[i + 1];
        if (y0 == 0.0 && y1 == 0.0) continue;
        s += adaptive_simpson(
            [&](double x) {
                const double t = (x - x0) / (x1 - x0);
                return ((1.0 - t) * y0 + t * y1) * std::pow(1.0 + x * x, e);
            },
            x0, x1);
    }
    return s;
}

} // namespace

double weighted_mass(const Measure& m, double e) {
    double s = 0.0;
    for (const Atom& a : m.atoms()) s += a.m * std::pow(1.0 + a.x * a.x, e);
    s += density_weighted_mass(m, e);
    switch (m.tail().kind) {
        case TailKind::None:
            break;
        case TailKind::LebesgueOverPi: {
            const double lo = m.hull_lo(), hi = m.hull_hi();
            s += (half_line_weight(hi, e) + half_line_weight(-lo, e)) / M_PI;
            break;
        }
        case TailKind::Power: {
            const double p = m.tail().exponent;
            if (p + 2.0 * e >= -1.0)
                throw DivergentIntegral("power tail makes the weighted mass infinite");
            const double c = m.tail_coefficient();
            if (c != 0.0) s += power_tail_weighted_mass(m.grid().back(), c, p, e);
            break;
        }
    }
    return s;
}

Measure donoghue_normalize(const Measure& m) {
    const double total = weighted_mass(m, -1.0);
    if (!(total > 0.0)) throw ZeroMeasure("cannot normalize a measure with zero mass");
    double rigid = 0.0;
    if (m.tail().kind == TailKind::LebesgueOverPi)
        rigid = (half_line_weight(m.hull_hi(), -1.0) + half_line_weight(-m.hull_lo(), -1.0)) / M_PI;
    const double scalable = total - rigid;
    if (scalable <= 0.0) {
        if (std::abs(total - 1.0) <= 1e-12) return m;   // pure tail, already normalized
        throw BadMeasure("measure has no scalable part but is not normalized");
    }
    const double target = 1.0 - rigid;
    if (target <= 0.0)
        throw BadMeasure("rigid tail mass exceeds 1; cannot reach Donoghue normalization");
    return m.scaled(target / scalable);
}

ExtClass classify_extension_type(const Measure& m) {
    // support must sit in [0, inf)
    if (m.tail().kind == TailKind::LebesgueOverPi)
        throw UnsupportedMeasure("Lebesgue tail is supported on the whole line");
    for (const Atom& a : m.atoms())
        if (a.m > 0.0 && a.x < -kSupportTol)
            throw UnsupportedMeasure("atom below 0");
    for (std::size_t i = 0; i < m.grid().size(); ++i)
        if (m.values()[i] > 0.0 && m.grid()[i] < -kSupportTol)
            throw UnsupportedMeasure("density support below 0");

    // divergence of \int^inf dω/λ: symbolic from the tail tag
    const bool diverges_at_inf =
        m.tail().kind == TailKind::Power && m.tail().exponent >= 0.0;

    // divergence of \int_0 dω/λ: atom at the origin or density exponent <= 0
    bool diverges_at_zero = false;
    for (const Atom& a : m.atoms())
        if (a.m > 0.0 && std::abs(a.x) <= kSupportTol) diverges_at_zero = true;
    if (!diverges_at_zero && m.has_density()) {
        // log-log exponent fit over the first two decades of positive samples
        std::vector<double> lx, ly;
        double first_positive = 0.0;
        for (std::size_t i = 0; i < m.grid().size(); ++i) {
            const double x = m.grid()[i];
            if (x <= 0.0) continue;
            if (m.values()[i] <= 0.0) {
                if (lx.empty()) continue;   // leading zero plateau: no mass at 0
                break;
            }
            if (lx.empty()) first_positive = x;
            if (x > 100.0 * first_positive || x > 1e-2) break;
            lx.push_back(std::log(x));
            ly.push_back(std::log(m.values()[i]));
        }
        const bool near_zero = first_positive > 0.0 && first_positive <= 1e-2 && !lx.empty();
        if (near_zero) {
            if (lx.size() > 12) {   // thin out dense grids, keep the span
                std::vector<double> tx, ty;
                const std::size_t stride = lx.size() / 12 + 1;
                for (std::size_t i = 0; i < lx.size(); i += stride) {
                    tx.push_back(lx[i]);
                    ty.push_back(ly[i]);
                }
                tx.push_back(lx.back());
                ty.push_back(ly.back());
                lx.swap(tx);
                ly.swap(ty);
            }
            if (lx.size() < 4 || lx.back() - lx.front() < std::log(10.0))
                throw Inconclusive("too few density samples near 0 to fit an exponent");
            auto [slope, r2] = line_fit(lx, ly);
            if (r2 < 0.99)
                throw Inconclusive("density near 0 is not a clean power law (R^2 < 0.99)");
            diverges_at_zero = slope <= 1e-9;
        }
    }

    if (diverges_at_inf && diverges_at_zero) return ExtClass::FriedrichsEqualsKrein;
    if (diverges_at_inf) return ExtClass::Friedrichs;
    if (diverges_at_zero) return ExtClass::Krein;
    return ExtClass::Neither;
}

MatrixMeasure::MatrixMeasure(std::size_t dim, std::vector<MatrixAtom> atoms)
    : dim_(dim), atoms_(std::move(atoms)) {
    const Tolerances& tol = default_tolerances();
    if (dim_ == 0) throw BadMeasure("matrix measure dimension must be positive");
    for (const MatrixAtom& a : atoms_) {
        if (a.w.rows() != dim_ || a.w.cols() != dim_)
            throw BadMeasure("matrix weight has wrong dimension");
        if (!a.w.is_hermitian(tol.hermitian)) throw BadMeasure("matrix weight is not Hermitian");
        const double norm = a.w.frobenius();
        if (min_eigenvalue_hermitian(a.w.herm()) < -tol.psd_rel * std::max(norm, 1e-300))
            throw NotPSD("matrix weight is not positive semidefinite");
    }
    std::sort(atoms_.begin(), atoms_.end(),
              [](const MatrixAtom& a, const MatrixAtom& b) { return a.x < b.x; });
    std::vector<MatrixAtom> merged;
    for (MatrixAtom& a : atoms_) {
        if (!merged.empty() && a.x - merged.back().x <= tol.atom_merge)
            merged.back().w += a.w;
        else
            merged.push_back(std::move(a));
    }
    atoms_ = std::move(merged);
}

CMat MatrixMeasure::total_mass() const {
    CMat t(dim_, dim_);
    for (const MatrixAtom& a : atoms_) t += a.w;
    return t;
}

Measure MatrixMeasure::trace_measure() const {
    std::vector<Atom> atoms;
    atoms.reserve(atoms_.size());
    for (const MatrixAtom& a : atoms_) {
        double tr = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) tr += a.w(i, i).real();
        atoms.push_back({a.x, std::max(tr, 0.0)});
    }
    return Measure::from_atoms(std::move(atoms));
}

CMat weighted_mass(const WeightedL2Spec& spec) {
    if (!std::isfinite(spec.weight_exponent))
        throw BadMeasure("weight exponent must be finite");
    CMat s(spec.base.dim(), spec.base.dim());
    for (const MatrixAtom& a : spec.base.atoms()) {
        CMat w = a.w;
        w *= cplx(std::pow(1.0 + a.x * a.x, spec.weight_exponent));
        s += w;
    }
    return s;
}

} // namespace herglotz
