#pragma once

#include <complex>
#include <functional>

namespace herglotz {

/// Adaptive Simpson on a finite interval. rel/abs follow the library-wide
/// quadrature contract (relative 1e-10, absolute floor 1e-14); throws
/// QuadratureFailure when refinement stalls.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel = 1e-10, double abs_floor = 1e-14);

std::complex<double> adaptive_simpson_c(const std::function<std::complex<double>(double)>& f,
                                        double a, double b,
                                        double rel = 1e-10, double abs_floor = 1e-14);

/// \int_cut^inf c x^p (1 + x^2)^e dx, cut > 0. Uses x = 1/u then a power
/// substitution that removes the endpoint singularity, so the integrand
/// handed to Simpson is smooth. Throws DivergentIntegral when p + 2e >= -1.
double power_tail_weighted_mass(double cut, double c, double p, double e,
                                double rel = 1e-10);

/// \int_cut^inf c x^p [(x - z)^{-1} - x (1 + x^2)^{-1}] dx, cut > 0,
/// convergent for p < 1. Same substitution strategy.
std::complex<double> power_tail_kernel(double cut, double c, double p,
                                       std::complex<double> z, double rel = 1e-10);

/// \int_cut^inf c x^p (x - z)^{-1} dx (pure Cauchy kernel), convergent for
/// p < 0.
std::complex<double> power_tail_plain(double cut, double c, double p,
                                      std::complex<double> z, double rel = 1e-10);

} // namespace herglotz
