#pragma once

#include <cmath>
#include <vector>

#include "herglotz/herglotz.hpp"
#include "herglotz/linalg.hpp"
#include "herglotz/measure.hpp"

namespace testutil {

using herglotz::CMat;
using herglotz::cplx;

// splitmix64, so expected values do not depend on libstdc++ distributions
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed + 0x9e3779b97f4a7c15ULL) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform(double lo = 0.0, double hi = 1.0) {
        return lo + (hi - lo) * (next() >> 11) * 0x1.0p-53;
    }
    cplx zc(double lo = -1.0, double hi = 1.0) { return {uniform(lo, hi), uniform(lo, hi)}; }
    cplx upper(double im_lo = 0.3, double im_hi = 2.0) {
        return {uniform(-2.0, 2.0), uniform(im_lo, im_hi)};
    }
};

inline CMat random_matrix(Rng& rng, std::size_t r, std::size_t c, double scale = 1.0) {
    CMat a(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) a(i, j) = scale * rng.zc();
    return a;
}

inline CMat random_hermitian(Rng& rng, std::size_t n, double scale = 1.0) {
    return random_matrix(rng, n, n, scale).herm();
}

inline CMat random_psd(Rng& rng, std::size_t n, std::size_t rank) {
    const CMat g = random_matrix(rng, n, rank);
    return g * g.adjoint();
}

// brute-force midpoint rule for \int (1+x^2)^e dω over the density grid,
// refining each grid cell `refine`-fold; the independent quadrature oracle
inline double midpoint_weighted_mass(const herglotz::Measure& m, double e,
                                     std::size_t refine) {
    double total = 0.0;
    for (const herglotz::Atom& a : m.atoms()) total += a.m * std::pow(1.0 + a.x * a.x, e);
    const auto& g = m.grid();
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        const double h = (g[i + 1] - g[i]) / double(refine);
        for (std::size_t j = 0; j < refine; ++j) {
            const double x = g[i] + (j + 0.5) * h;
            total += h * m.density_at(x) * std::pow(1.0 + x * x, e);
        }
    }
    return total;
}

// random J-unitary builders: products of rotations, shear blocks, J itself,
// and positive diagonal scalings
inline herglotz::JUnitary random_junitary(Rng& rng, std::size_t k) {
    using herglotz::JUnitary;
    JUnitary a = JUnitary::rotation(rng.uniform(0.0, M_PI), k);
    for (int pieces = 0; pieces < 3; ++pieces) {
        switch (rng.next() % 3) {
            case 0:
                a = a.compose(JUnitary::rotation(rng.uniform(0.0, M_PI), k));
                break;
            case 1: {
                const CMat l1 = random_hermitian(rng, k, 0.7);
                const CMat l2 = random_hermitian(rng, k, 0.7);
                a = a.compose(JUnitary::perturbation_pair(l1, l2));
                break;
            }
            default: {
                CMat d = CMat::identity(k), dinv = CMat::identity(k);
                for (std::size_t i = 0; i < k; ++i) {
                    const double s = rng.uniform(0.6, 1.7);
                    d(i, i) = s;
                    dinv(i, i) = 1.0 / s;
                }
                a = a.compose(herglotz::JUnitary(d, CMat(k, k), CMat(k, k), dinv));
                break;
            }
        }
    }
    return a;
}

// random finitely supported measure, normalized, with a symbolic
// infinite-mass marker: a stand-in Donoghue model
inline herglotz::Measure random_normalized_atoms(Rng& rng, std::size_t count,
                                                 double spread = 4.0) {
    std::vector<herglotz::Atom> atoms;
    for (std::size_t i = 0; i < count; ++i)
        atoms.push_back({rng.uniform(-spread, spread), rng.uniform(0.05, 1.0)});
    const herglotz::Measure raw =
        herglotz::Measure::from_atoms(std::move(atoms), {herglotz::TailKind::Power, 0.0});
    return herglotz::donoghue_normalize(raw);
}

// geometric grid sampling of c x^p between x0 and x1
inline herglotz::Measure power_density_measure(double c, double p, double x0, double x1,
                                               herglotz::Tail tail,
                                               std::size_t per_decade = 16) {
    std::vector<double> grid, values;
    const double decades = std::log10(x1 / x0);
    const std::size_t n = std::max<std::size_t>(8, std::size_t(decades * per_decade));
    for (std::size_t i = 0; i <= n; ++i) {
        const double x = x0 * std::pow(x1 / x0, double(i) / double(n));
        grid.push_back(x);
        values.push_back(c * std::pow(x, p));
    }
    return herglotz::Measure::from_density(std::move(grid), std::move(values), tail);
}

} // namespace testutil
