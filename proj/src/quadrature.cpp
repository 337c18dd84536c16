#include "herglotz/quadrature.hpp"

#include <cmath>

#include "herglotz/errors.hpp"

namespace herglotz {

namespace {

template <typename T>
T simpson_rec(const std::function<T(double)>& f, double a, double b, T fa, T fm, T fb,
              T whole, double rel, double abs_floor, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const T flm = f(lm), frm = f(rm);
    const T left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const T right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const T sum = left + right;
    const double err = std::abs(sum - whole);
    if (err <= 15.0 * (rel * std::abs(sum) + abs_floor)) return sum + (sum - whole) / 15.0;
    if (depth > 48) throw QuadratureFailure("adaptive Simpson refinement stalled");
    return simpson_rec(f, a, m, fa, flm, fm, left, rel, abs_floor, depth + 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, rel, abs_floor, depth + 1);
}

template <typename T>
T simpson(const std::function<T(double)>& f, double a, double b, double rel, double abs_floor) {
    if (a == b) return T(0.0);
    const double m = 0.5 * (a + b);
    const T fa = f(a), fm = f(m), fb = f(b);
    const T whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, rel, abs_floor, 0);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel, double abs_floor) {
    return simpson<double>(f, a, b, rel, abs_floor);
}

std::complex<double> adaptive_simpson_c(const std::function<std::complex<double>(double)>& f,
                                        double a, double b, double rel, double abs_floor) {
    return simpson<std::complex<double>>(f, a, b, rel, abs_floor);
}

double power_tail_weighted_mass(double cut, double c, double p, double e, double rel) {
    if (p + 2.0 * e >= -1.0)
        throw DivergentIntegral("tail integral x^p (1+x^2)^e diverges at infinity");
    if (c == 0.0) return 0.0;
    if (cut <= 0.0) throw BadMeasure("power tail needs a positive cut");
    // x = 1/u: integrand u^{-sigma} (1+u^2)^e with sigma = p + 2e + 2 < 1,
    // then u = v^s, s = 1/(1 - sigma), flattens the endpoint.
    const double sigma = p + 2.0 * e + 2.0;
    const double s = 1.0 / (1.0 - sigma);
    const double vmax = std::pow(1.0 / cut, 1.0 - sigma);
    std::function<double(double)> g = [=](double v) {
        const double u = std::pow(v, s);
        return s * std::pow(1.0 + u * u, e);
    };
    return c * adaptive_simpson(g, 0.0, vmax, rel);
}

std::complex<double> power_tail_plain(double cut, double c, double p,
                                      std::complex<double> z, double rel) {
    if (p >= 0.0)
        throw DivergentIntegral("tail integral of the Cauchy kernel diverges for p >= 0");
    if (c == 0.0) return {0.0, 0.0};
    if (cut <= 0.0) throw BadMeasure("power tail needs a positive cut");
    // (x - z)^{-1} with x = 1/u equals u/(1 - z u); sigma = p + 1 < 1.
    const double sigma = p + 1.0;
    const double s = 1.0 / (1.0 - sigma);
    const double vmax = std::pow(1.0 / cut, 1.0 - sigma);
    std::function<std::complex<double>(double)> g = [=](double v) {
        const double u = std::pow(v, s);
        return s / (1.0 - z * u);
    };
    return c * adaptive_simpson_c(g, 0.0, vmax, rel);
}

std::complex<double> power_tail_kernel(double cut, double c, double p,
                                       std::complex<double> z, double rel) {
    if (p >= 1.0)
        throw DivergentIntegral("tail integral of the compensated kernel diverges for p >= 1");
    if (c == 0.0) return {0.0, 0.0};
    if (cut <= 0.0) throw BadMeasure("power tail needs a positive cut");
    // (x - z)^{-1} - x(1+x^2)^{-1} with x = 1/u equals u^2 (u + z) / ((1 - z u)(1 + u^2)),
    // leaving \int_0^{1/cut} u^{-p} h(u) du with h smooth on the real axis.
    const double sigma = p;
    const double s = 1.0 / (1.0 - sigma);
    const double vmax = std::pow(1.0 / cut, 1.0 - sigma);
    std::function<std::complex<double>(double)> g = [=](double v) {
        const double u = std::pow(v, s);
        const std::complex<double> h = (u + z) / ((1.0 - z * u) * (1.0 + u * u));
        return s * h;
    };
    return c * adaptive_simpson_c(g, 0.0, vmax, rel);
}

} // namespace herglotz
