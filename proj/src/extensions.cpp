#include "herglotz/extensions.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "herglotz/errors.hpp"
#include "herglotz/quadrature.hpp"

namespace herglotz {

namespace {

bool has_divergent_total_mass(const Measure& m) {
    switch (m.tail().kind) {
        case TailKind::None: return false;
        case TailKind::LebesgueOverPi: return true;
        case TailKind::Power: return m.tail().exponent >= -1.0;
    }
    return false;
}

std::pair<double, double> line_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i]; sy += y[i]; sxx += x[i] * x[i]; sxy += x[i] * y[i];
    }
    const double den = n * sxx - sx * sx;
    if (den <= 0.0) return {0.0, 0.0};
    const double slope = (n * sxy - sx * sy) / den;
    const double intercept = (sy - slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    const double ybar = sy / n;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = intercept + slope * x[i];
        ss_res += (y[i] - f) * (y[i] - f);
        ss_tot += (y[i] - ybar) * (y[i] - ybar);
    }
    return {slope, ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0};
}

// Divergence analysis of a monotone ladder v_j sampled at growth coordinate
// t_j (increasing). Shifted magnitudes w_j = |v_j - v_0| separate power
// growth (log w linear in t), logarithmic growth (w linear in t), and
// convergent tails (shrinking increments).
SideVerdict analyze_ladder(const std::vector<double>& t, const std::vector<double>& v) {
    SideVerdict out{};
    out.limit = v.back();
    const std::size_t n = v.size();

    double vmax = 0.0;
    for (double x : v) vmax = std::max(vmax, std::abs(x));
    std::vector<double> w(n);
    for (std::size_t j = 0; j < n; ++j) w[j] = std::abs(v[j] - v[0]);
    if (w.back() <= 1e-9 * std::max(1.0, vmax)) {
        out.kind = SideVerdict::Kind::Convergent;
        out.r2 = 1.0;
        return out;
    }

    // convergent: increments must shrink geometrically
    bool shrinking = true;
    for (std::size_t j = 2; j < n; ++j) {
        const double prev = w[j - 1] - w[j - 2], cur = w[j] - w[j - 1];
        if (!(cur <= 0.9 * std::abs(prev) + 1e-12 * vmax)) shrinking = false;
    }
    if (shrinking) {
        out.kind = SideVerdict::Kind::Convergent;
        out.r2 = 1.0;
        return out;
    }

    std::vector<double> ts(t.begin() + 1, t.end());
    std::vector<double> logw;
    bool positive = true;
    for (std::size_t j = 1; j < n; ++j) {
        if (w[j] <= 0.0) { positive = false; break; }
        logw.push_back(std::log(w[j]));
    }
    if (positive) {
        auto [slope, r2] = line_fit(ts, logw);
        if (r2 >= 0.99 && slope >= 0.05) {
            out.kind = SideVerdict::Kind::Divergent;
            out.direction = v.back() >= v.front() ? 1.0 : -1.0;
            out.slope = slope;
            out.r2 = r2;
            return out;
        }
    }
    {
        std::vector<double> wtail(w.begin() + 1, w.end());
        auto [slope, r2] = line_fit(ts, wtail);
        if (r2 >= 0.99 && slope > 0.0) {
            out.kind = SideVerdict::Kind::Divergent;
            out.direction = v.back() >= v.front() ? 1.0 : -1.0;
            out.slope = 0.0;   // logarithmic rate
            out.r2 = r2;
            return out;
        }
        out.kind = SideVerdict::Kind::Inconclusive;
        out.r2 = r2;
    }
    return out;
}

} // namespace

DonoghueModel::DonoghueModel(Measure m, double a) : measure(std::move(m)), alpha(a) {
    if (!(alpha >= 0.0 && alpha < M_PI)) throw BadInput("extension angle must lie in [0, pi)");
    const double wm = weighted_mass(measure, -1.0);
    if (std::abs(wm - 1.0) > 1e-10)
        throw BadMeasure("Donoghue model needs unit (1+λ^2)^{-1} mass");
    if (!has_divergent_total_mass(measure))
        throw BadMeasure("Donoghue model needs infinite total mass (divergent tail tag)");
}

cplx donoghue_m(const DonoghueModel& model, cplx z) {
    if (z.imag() == 0.0) throw EvalOnRealAxis("donoghue_m needs Im z != 0");
    if (z.imag() < 0.0) return std::conj(donoghue_m(model, std::conj(z)));
    return eval_scalar(model.measure, z, Kernel::Full);
}

double donoghue_m_real(const DonoghueModel& model, double x) {
    return eval_scalar_real(model.measure, x, Kernel::Full).real();
}

cplx rotate_family(const ExtensionFamily& fam, double beta, cplx z) {
    return rotate_value(donoghue_m(fam.base, z), beta - fam.base.alpha);
}

double functional_bound(const DonoghueModel& model) {
    return weighted_mass(model.measure, -2.0);
}

FkVerdict identify_friedrichs_krein(const std::function<double(double)>& m_real,
                                    const Measure* cross_check) {
    // λ ↓ -inf along -10^j and λ ↑ 0 along -10^{-j}, six decades each
    std::vector<double> t_inf, v_inf, t_zero, v_zero;
    for (int j = 0; j <= 6; ++j) {
        t_inf.push_back(j * std::log(10.0));
        v_inf.push_back(m_real(-std::pow(10.0, j)));
    }
    for (int j = 1; j <= 7; ++j) {
        t_zero.push_back(j * std::log(10.0));
        v_zero.push_back(m_real(-std::pow(10.0, -j)));
    }

    FkVerdict out{};
    out.at_minus_infinity = analyze_ladder(t_inf, v_inf);
    out.at_zero = analyze_ladder(t_zero, v_zero);
    if (out.at_minus_infinity.kind == SideVerdict::Kind::Inconclusive ||
        out.at_zero.kind == SideVerdict::Kind::Inconclusive)
        throw Inconclusive("boundary-limit ladders did not fit a clean growth law");

    const bool friedrichs = out.at_minus_infinity.kind == SideVerdict::Kind::Divergent &&
                            out.at_minus_infinity.direction < 0.0;
    const bool krein =
        out.at_zero.kind == SideVerdict::Kind::Divergent && out.at_zero.direction > 0.0;
    out.type = friedrichs && krein ? FkType::Both
               : friedrichs       ? FkType::Friedrichs
               : krein            ? FkType::Krein
                                  : FkType::Neither;
    out.confidence = std::min(out.at_minus_infinity.r2, out.at_zero.r2);
    out.cross_checked = false;

    if (cross_check != nullptr) {
        const ExtClass side = classify_extension_type(*cross_check);
        const bool agree = (out.type == FkType::Friedrichs && side == ExtClass::Friedrichs) ||
                           (out.type == FkType::Krein && side == ExtClass::Krein) ||
                           (out.type == FkType::Both && side == ExtClass::FriedrichsEqualsKrein) ||
                           (out.type == FkType::Neither && side == ExtClass::Neither);
        if (!agree)
            throw VerificationError("extensions.CrossCheckMismatch",
                                    "m-side and measure-side classifications disagree");
        out.cross_checked = true;
    }
    return out;
}

FkVerdict identify_friedrichs_krein(const DonoghueModel& model) {
    auto m_real = [&](double x) { return donoghue_m_real(model, x); };
    return identify_friedrichs_krein(m_real, &model.measure);
}

double relatively_prime_growth(const Measure& m, double alpha, double alpha0) {
    const double theta = alpha - alpha0;
    const double s = std::sin(theta), c = std::cos(theta);
    auto packet = [&](double lam) {
        const double lin = c - lam * s;
        const double w = 1.0 + lam * lam;
        return 4.0 * lam * lam * lin * lin / (w * w);
    };
    double total = 0.0;
    for (const Atom& a : m.atoms()) total += a.m * packet(a.x);
    const auto& g = m.grid();
    const auto& v = m.values();
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        if (v[i] == 0.0 && v[i + 1] == 0.0) continue;
        total += adaptive_simpson(
            [&](double x) {
                const double t = (x - g[i]) / (g[i + 1] - g[i]);
                return ((1.0 - t) * v[i] + t * v[i + 1]) * packet(x);
            },
            g[i], g[i + 1]);
    }
    return total;
}

} // namespace herglotz
