#include "herglotz/herglotz.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "herglotz/errors.hpp"
#include "herglotz/quadrature.hpp"
#include "herglotz/version.hpp"

namespace herglotz {

namespace {

cplx kernel_value(double lam, cplx z, Kernel k) {
    const cplx cauchy = 1.0 / (lam - z);
    if (k == Kernel::Plain) return cauchy;
    return cauchy - lam / (1.0 + lam * lam);
}

bool has_finite_total_mass(const Measure& m) {
    switch (m.tail().kind) {
        case TailKind::None: return true;
        case TailKind::LebesgueOverPi: return false;
        case TailKind::Power: return m.tail().exponent < -1.0;
    }
    return true;
}

} // namespace

HerglotzRep::HerglotzRep(CMat constant, CMat slope, Measure measure, Kernel kernel)
    : constant_(std::move(constant)), slope_(std::move(slope)), measure_(std::move(measure)),
      kernel_(kernel), dim_(1) {
    if (constant_.rows() != 1 || constant_.cols() != 1 || slope_.rows() != 1 || slope_.cols() != 1)
        throw BadInput("scalar representation needs 1x1 constant and slope");
    validate();
}

HerglotzRep::HerglotzRep(CMat constant, CMat slope, MatrixMeasure measure, Kernel kernel)
    : constant_(std::move(constant)), slope_(std::move(slope)), measure_(std::move(measure)),
      kernel_(kernel), dim_(std::get<MatrixMeasure>(measure_).dim()) {
    if (constant_.rows() != dim_ || constant_.cols() != dim_ ||
        slope_.rows() != dim_ || slope_.cols() != dim_)
        throw BadInput("constant/slope dimension mismatch with the measure");
    validate();
}

HerglotzRep HerglotzRep::scalar(cplx constant, double slope, Measure measure, Kernel kernel) {
    CMat c(1, 1), d(1, 1);
    c(0, 0) = constant;
    d(0, 0) = slope;
    return HerglotzRep(std::move(c), std::move(d), std::move(measure), kernel);
}

void HerglotzRep::validate() const {
    const Tolerances& tol = default_tolerances();
    if (!constant_.is_hermitian(tol.hermitian))
        throw BadInput("constant term must be Hermitian");
    if (!slope_.is_hermitian(tol.hermitian)) throw BadInput("slope term must be Hermitian");
    const double dn = slope_.frobenius();
    if (dn > 0.0 && min_eigenvalue_hermitian(slope_.herm()) < -tol.psd_rel * dn)
        throw NotPSD("slope term must be positive semidefinite");
    if (kernel_ == Kernel::Plain && is_scalar_measure() &&
        !has_finite_total_mass(scalar_measure()))
        throw BadMeasure("plain Cauchy kernel requires finite total mass");
}

cplx eval_scalar(const Measure& m, cplx z, Kernel kernel) {
    cplx s = 0.0;
    for (const Atom& a : m.atoms()) s += a.m * kernel_value(a.x, z, kernel);

    const auto& g = m.grid();
    const auto& v = m.values();
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        const double x0 = g[i], x1 = g[i + 1], y0 = v[i], y1 = v[i + 1];
        if (y0 == 0.0 && y1 == 0.0) continue;
        s += adaptive_simpson_c(
            [&](double x) {
                const double t = (x - x0) / (x1 - x0);
                return ((1.0 - t) * y0 + t * y1) * kernel_value(x, z, kernel);
            },
            x0, x1);
    }

    switch (m.tail().kind) {
        case TailKind::None:
            break;
        case TailKind::LebesgueOverPi: {
            if (kernel == Kernel::Plain)
                throw DivergentIntegral("plain kernel diverges against the Lebesgue tail");
            if (z.imag() == 0.0)
                throw EvalOnRealAxis("Lebesgue tail covers the real axis");
            // antiderivative of the full kernel: log(λ-z) - log sqrt(1+λ^2)
            const double lo = m.hull_lo(), hi = m.hull_hi();
            const cplx right = -(std::log(hi - z) - 0.5 * std::log(1.0 + hi * hi));
            const double half_turn = z.imag() > 0.0 ? M_PI : -M_PI;
            const cplx left = std::log(lo - z) - 0.5 * std::log(1.0 + lo * lo) +
                              cplx(0.0, half_turn);
            s += (right + left) / M_PI;
            break;
        }
        case TailKind::Power: {
            const double c = m.tail_coefficient();
            if (c == 0.0) break;   // symbolic marker only
            const double cut = m.grid().back();
            if (kernel == Kernel::Full)
                s += power_tail_kernel(cut, c, m.tail().exponent, z);
            else
                s += power_tail_plain(cut, c, m.tail().exponent, z);
            break;
        }
    }
    return s;
}

cplx eval_scalar_real(const Measure& m, double x, Kernel kernel, double guard) {
    if (m.distance_to_support(x) <= guard)
        throw EvalOnRealAxis("real-axis evaluation requested too close to the support");
    return eval_scalar(m, cplx(x, 0.0), kernel);
}

CMat eval(const HerglotzRep& rep, cplx z) {
    if (z.imag() == 0.0) throw EvalOnRealAxis("eval requires Im z != 0");
    if (z.imag() < 0.0) return eval(rep, std::conj(z)).adjoint();

    CMat out = rep.constant();
    CMat dz = rep.slope();
    dz *= z;
    out += dz;
    if (rep.is_scalar_measure()) {
        out(0, 0) += eval_scalar(rep.scalar_measure(), z, rep.kernel());
    } else {
        for (const MatrixAtom& a : rep.matrix_measure().atoms()) {
            CMat w = a.w;
            w *= kernel_value(a.x, z, rep.kernel());
            out += w;
        }
    }
    return out;
}

HerglotzReport verify_herglotz(const std::function<CMat(cplx)>& m,
                               std::span<const cplx> samples) {
    HerglotzReport rep{0.0, cplx(0.0), true};
    bool first = true;
    for (cplx z : samples) {
        if (!(z.imag() > 0.0)) throw BadInput("verification samples must lie in C+");
        const double lam = min_eigenvalue_hermitian(m(z).imag_part());
        if (first || lam < rep.min_imag_eigenvalue) {
            rep.min_imag_eigenvalue = lam;
            rep.worst_z = z;
            first = false;
        }
    }
    rep.pass = !first && rep.min_imag_eigenvalue >= -1e-10;
    return rep;
}

HerglotzReport verify_herglotz(const HerglotzRep& rep, std::span<const cplx> samples) {
    return verify_herglotz([&](cplx z) { return eval(rep, z); }, samples);
}

double herglotz_floor(cplx z) {
    const double y = z.imag();
    return y * y / (std::max(1.0, std::norm(z)) + std::abs(z.real()));
}

JUnitary::JUnitary(CMat a11, CMat a12, CMat a21, CMat a22)
    : a11_(std::move(a11)), a12_(std::move(a12)), a21_(std::move(a21)), a22_(std::move(a22)) {
    const std::size_t k = a11_.rows();
    for (const CMat* b : {&a11_, &a12_, &a21_, &a22_})
        if (b->rows() != k || b->cols() != k) throw BadInput("J-unitary blocks must be square, same size");
    const double fro2 = a11_.frobenius() * a11_.frobenius() + a12_.frobenius() * a12_.frobenius() +
                        a21_.frobenius() * a21_.frobenius() + a22_.frobenius() * a22_.frobenius();
    if (j_residual() > 1e-10 * std::max(1.0, fro2))
        throw NotJUnitary("blocks do not satisfy A*JA = J");
}

double JUnitary::j_residual() const {
    // A*JA blocks against [[0,-I],[I,0]]
    const CMat i = CMat::identity(dim());
    const CMat b11 = a21_.adjoint() * a11_ - a11_.adjoint() * a21_;
    const CMat b12 = a21_.adjoint() * a12_ - a11_.adjoint() * a22_ + i;
    const CMat b21 = a22_.adjoint() * a11_ - a12_.adjoint() * a21_ - i;
    const CMat b22 = a22_.adjoint() * a12_ - a12_.adjoint() * a22_;
    return std::sqrt(b11.frobenius() * b11.frobenius() + b12.frobenius() * b12.frobenius() +
                     b21.frobenius() * b21.frobenius() + b22.frobenius() * b22.frobenius());
}

JUnitary JUnitary::identity(std::size_t k) {
    return JUnitary(CMat::identity(k), CMat(k, k), CMat(k, k), CMat::identity(k));
}

JUnitary JUnitary::perturbation_pair(const CMat& l1, const CMat& l2) {
    const Tolerances& tol = default_tolerances();
    if (!l1.is_hermitian(tol.hermitian) || !l2.is_hermitian(tol.hermitian))
        throw BadInput("perturbation blocks must be Hermitian");
    const std::size_t k = l1.rows();
    return JUnitary(CMat::identity(k), l2 - l1, CMat(k, k), CMat::identity(k));
}

JUnitary JUnitary::rotation(double alpha, std::size_t k) {
    const cplx phase = std::exp(cplx(0.0, -alpha));
    CMat s = CMat::identity(k), c = CMat::identity(k);
    s *= phase * std::sin(alpha);
    c *= phase * std::cos(alpha);
    CMat mc = c;
    mc *= cplx(-1.0);
    return JUnitary(s, mc, c, s);
}

JUnitary JUnitary::compose(const JUnitary& inner) const {
    return JUnitary(a11_ * inner.a11_ + a12_ * inner.a21_,
                    a11_ * inner.a12_ + a12_ * inner.a22_,
                    a21_ * inner.a11_ + a22_ * inner.a21_,
                    a21_ * inner.a12_ + a22_ * inner.a22_);
}

CMat lft_apply(const JUnitary& a, const CMat& m, double cond_guard) {
    const CMat den = a.a11() + a.a12() * m;
    const CMat num = a.a21() + a.a22() * m;
    // condition measured against the input scale, so near-cancelling
    // denominators are caught even when den itself is well-scaled
    const double scale = std::max(a.a11().frobenius() + a.a12().frobenius() * m.frobenius(),
                                  1e-300);
    double inv_norm;
    try {
        inv_norm = inverse(den).frobenius();
    } catch (const SingularMatrix&) {
        throw SingularDenominator("LFT denominator is singular");
    }
    const double cond = scale * inv_norm;
    if (!(cond < cond_guard)) {
        std::ostringstream os;
        os << "LFT denominator ill-conditioned (cond ~ " << cond << ")";
        throw SingularDenominator(os.str());
    }
    // num * den^{-1} via solving den^T X^T = num^T
    return lu_solve(den.adjoint(), num.adjoint()).adjoint();
}

cplx lft_apply(const JUnitary& a, cplx m, double cond_guard) {
    if (a.dim() != 1) throw BadInput("scalar lft_apply needs 1x1 blocks");
    const cplx den = a.a11()(0, 0) + a.a12()(0, 0) * m;
    const cplx num = a.a21()(0, 0) + a.a22()(0, 0) * m;
    const double scale = std::abs(a.a11()(0, 0)) + std::abs(a.a12()(0, 0)) * std::abs(m);
    if (std::abs(den) * cond_guard < scale)
        throw SingularDenominator("scalar LFT denominator vanishes");
    return num / den;
}

cplx rotate_value(cplx m, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    const cplx den = c + s * m;
    if (std::abs(den) < 1e-12 * (1.0 + std::abs(m)))
        throw SingularDenominator("extension rotation denominator vanishes");
    return (-s + c * m) / den;
}

std::function<cplx(cplx)> extension_rotate(std::function<cplx(cplx)> m, double theta) {
    if (!std::isfinite(theta)) throw BadInput("rotation angle must be finite");
    return [m = std::move(m), theta](cplx z) { return rotate_value(m(z), theta); };
}

namespace {

double richardson_pair(double coarse, double fine, double ratio) {
    return (ratio * fine - coarse) / (ratio - 1.0);
}

} // namespace

Measure stieltjes_invert(const std::function<cplx(cplx)>& m, double window_lo,
                         double window_hi, const InversionOptions& opt) {
    if (!(window_hi > window_lo)) throw BadInput("inversion window is empty");
    std::vector<double> eps = opt.eps_ladder;
    if (eps.size() < 2) throw BadInput("eps ladder needs at least two rungs");
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] >= 1e-6)) throw BadInput("eps ladder must stay >= 1e-6");
        if (i > 0 && !(eps[i] < eps[i - 1])) throw BadInput("eps ladder must decrease");
    }

    const std::size_t np = std::max<std::size_t>(opt.probes, 16);
    std::vector<double> lam(np);
    for (std::size_t i = 0; i < np; ++i)
        lam[i] = window_lo + (window_hi - window_lo) * double(i) / double(np - 1);

    auto imag_at = [&](double x, double e) {
        const cplx v = m(cplx(x, e));
        if (v.imag() < -1e-8) {
            std::ostringstream os;
            os << "Im M(" << x << "+" << e << "i) = " << v.imag() << " < -1e-8";
            throw NonHerglotzSample(os.str());
        }
        return v.imag();
    };

    const std::size_t ne = eps.size();
    std::vector<std::vector<double>> im(ne, std::vector<double>(np));
    for (std::size_t e = 0; e < ne; ++e)
        for (std::size_t i = 0; i < np; ++i) im[e][i] = imag_at(lam[i], eps[e]);

    // --- atoms: local maxima of Im M at the finest rung, refined and then
    // confirmed by the stabilization of ε·Im M across the whole ladder
    const double efine = eps.back();
    std::vector<Atom> atoms;
    for (std::size_t i = 1; i + 1 < np; ++i) {
        if (!(im[ne - 1][i] > im[ne - 1][i - 1] && im[ne - 1][i] >= im[ne - 1][i + 1])) continue;
        if (efine * im[ne - 1][i] <= 0.25 * opt.atom_threshold) continue;

        // golden-section maximization of Im M(λ + i ε_fine) around the probe
        double a = lam[i - 1], b = lam[i + 1];
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = imag_at(x1, efine), f2 = imag_at(x2, efine);
        for (int it = 0; it < 80 && (b - a) > 1e-13 * std::max(1.0, std::abs(a)); ++it) {
            if (f1 < f2) {
                a = x1; x1 = x2; f1 = f2;
                x2 = a + gr * (b - a); f2 = imag_at(x2, efine);
            } else {
                b = x2; x2 = x1; f2 = f1;
                x1 = b - gr * (b - a); f1 = imag_at(x1, efine);
            }
        }
        const double xstar = 0.5 * (a + b);

        std::vector<double> g(ne);
        for (std::size_t e = 0; e < ne; ++e) g[e] = eps[e] * imag_at(xstar, eps[e]);
        const double gmin = *std::min_element(g.begin(), g.end());
        if (gmin <= opt.atom_threshold) continue;
        bool stable = true;
        for (double ge : g)
            if (std::abs(ge - g.back()) > opt.atom_drift * std::abs(g.back())) stable = false;
        if (!stable) continue;

        // mass from the ε^2 Richardson of ε·Im M over the two finest rungs
        const double r = eps[ne - 2] / eps[ne - 1];
        const double mass = richardson_pair(g[ne - 2], g[ne - 1], r * r);
        if (!atoms.empty() && std::abs(atoms.back().x - xstar) < 2.0 * efine) {
            if (mass > atoms.back().m) atoms.back() = {xstar, mass};
            continue;
        }
        atoms.push_back({xstar, std::max(mass, 0.0)});
    }

    // --- density: subtract detected atoms, then Richardson in ε on the two
    // finest rungs
    std::vector<double> dens(np);
    const double r = eps[ne - 2] / eps[ne - 1];
    for (std::size_t i = 0; i < np; ++i) {
        double coarse = im[ne - 2][i], fine = im[ne - 1][i];
        for (const Atom& a : atoms) {
            const double d2 = (lam[i] - a.x) * (lam[i] - a.x);
            coarse -= a.m * eps[ne - 2] / (d2 + eps[ne - 2] * eps[ne - 2]);
            fine -= a.m * eps[ne - 1] / (d2 + eps[ne - 1] * eps[ne - 1]);
        }
        dens[i] = std::max(richardson_pair(coarse, fine, r) / M_PI, 0.0);
    }

    return Measure(std::move(atoms), std::move(lam), std::move(dens), Tail{});
}

AnalyticInterval make_analytic_interval(const Measure& m, double lo, double hi,
                                        std::function<cplx(cplx)> density_extension,
                                        double depth, double check_tol) {
    if (!(lo < hi) || !(depth > 0.0)) throw BadInput("analytic interval is degenerate");
    for (int i = 0; i < 9; ++i) {
        const double x = lo + (hi - lo) * (i + 0.5) / 9.0;
        const double rho = m.density_with_tail_at(x);
        const cplx ext = density_extension(cplx(x, 0.0));
        if (std::abs(ext - rho) > check_tol)
            throw BadInput("density extension does not match the measure on the interval");
    }
    return AnalyticInterval{lo, hi, std::move(density_extension), depth};
}

CMat continue_below_matrix(const HerglotzRep& rep, double lo, double hi, cplx z) {
    // matrix measures are purely atomic here, so the only analytic window is
    // a spectral gap and the continuation is the bare reflection
    if (rep.is_scalar_measure()) throw BadInput("use continue_below for scalar representations");
    if (!(lo < hi)) throw BadInput("continuation interval is degenerate");
    for (const MatrixAtom& a : rep.matrix_measure().atoms())
        if (a.x > lo && a.x < hi && a.w.frobenius() > 0.0)
            throw BadInput("interval meets the support; no matrix continuation available");
    if (!(z.real() > lo && z.real() < hi) || z.imag() >= 0.0)
        throw OutsideValidityRectangle("z outside the continuation rectangle");
    return eval(rep, std::conj(z)).adjoint();
}

cplx continue_below(const HerglotzRep& rep, const AnalyticInterval& interval, cplx z) {
    if (rep.dim() != 1 || !rep.is_scalar_measure())
        throw BadInput("analytic continuation is implemented for scalar representations");
    if (!(z.real() > interval.lo && z.real() < interval.hi) || z.imag() > 0.0 ||
        z.imag() <= -interval.depth)
        throw OutsideValidityRectangle("z outside the declared continuation rectangle");
    cplx reflected;
    if (z.imag() < 0.0) {
        reflected = std::conj(eval(rep, std::conj(z))(0, 0));
    } else {
        // real axis: legal when the interval carries no support
        reflected = std::conj(eval_scalar_real(rep.scalar_measure(), z.real(), rep.kernel()));
        reflected += std::conj(rep.constant()(0, 0) + rep.slope()(0, 0) * z);
    }
    return reflected + 2.0 * M_PI * cplx(0.0, 1.0) * interval.density_extension(z);
}

N0Class n0_membership(const Measure& m) {
    double wm;
    try {
        wm = weighted_mass(m, -1.0);
    } catch (const DivergentIntegral&) {
        return N0Class::NotN0;
    }
    if (std::abs(wm - 1.0) > 1e-10) return N0Class::NotN0;

    bool infinite_mass = false;
    switch (m.tail().kind) {
        case TailKind::None: infinite_mass = false; break;
        case TailKind::LebesgueOverPi: infinite_mass = true; break;
        case TailKind::Power: infinite_mass = m.tail().exponent >= -1.0; break;
    }
    if (!infinite_mass) return N0Class::NotN0;

    try {
        switch (classify_extension_type(m)) {
            case ExtClass::Friedrichs: return N0Class::N0F;
            case ExtClass::Krein: return N0Class::N0K;
            case ExtClass::FriedrichsEqualsKrein: return N0Class::N0FK;
            case ExtClass::Neither: return N0Class::N0;
        }
    } catch (const UnsupportedMeasure&) {
        return N0Class::N0;   // support leaks below 0: plain membership only
    }
    return N0Class::N0;
}

} // namespace herglotz
