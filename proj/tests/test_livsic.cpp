#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "herglotz/errors.hpp"
#include "herglotz/herglotz.hpp"
#include "herglotz/livsic.hpp"

using namespace herglotz;
using testutil::Rng;

namespace {
const cplx I(0.0, 1.0);
}

TEST_CASE("periodic m pinned values") {
    // hand value: cot(i) = -i coth(1), so m(i) = i coth(1)/coth(1) = i
    CHECK(std::abs(periodic_donoghue_m(1.0, I) - I) <= 1e-14);
    // saturation far up: cot(az) -> -i, m -> i tanh(a)
    for (double a : {0.5, 1.0, 2.0}) {
        const cplx far = periodic_donoghue_m(a, cplx(0.3, 60.0));
        CHECK(std::abs(far - I * std::tanh(a)) <= 1e-12);
    }
    // periodicity with period π/a
    Rng rng(301);
    for (int t = 0; t < 8; ++t) {
        const double a = rng.uniform(0.4, 2.5);
        const cplx z = rng.upper(0.2, 3.0);
        CHECK(std::abs(periodic_donoghue_m(a, z + M_PI / a) - periodic_donoghue_m(a, z)) <=
              1e-10);
    }
}

TEST_CASE("lattice offset solves the pole equation") {
    Rng rng(303);
    CHECK(LivsicInterval(1.0, 0.0).beta == 0.0);
    for (int t = 0; t < 20; ++t) {
        const LivsicInterval model(rng.uniform(0.3, 3.0), rng.uniform(1e-3, M_PI - 1e-3));
        CHECK(model.beta > 0.0);
        CHECK(model.beta < M_PI);
        CHECK(model.beta_residual <= 1e-12);
        // the denominator of the rotated m vanishes on the lattice
        const double den = std::cos(model.alpha) +
                           std::sin(model.alpha) * (std::cos(model.beta) / std::sin(model.beta)) *
                               std::tanh(model.a);
        CHECK(std::abs(den) <= 1e-12);
    }
    // α = π/2 rotates to coth(a) tan(az): poles at the half-lattice
    CHECK(LivsicInterval(1.0, M_PI / 2.0).beta == doctest::Approx(M_PI / 2.0).epsilon(1e-13));
}

TEST_CASE("rotated m identities") {
    Rng rng(307);
    for (int t = 0; t < 12; ++t) {
        const LivsicInterval model(rng.uniform(0.4, 2.0), rng.uniform(0.0, M_PI - 1e-6));
        const cplx z = rng.upper(0.1, 4.0);
        // the rotated m is the extension rotation of the periodic m by -α (mod π)
        const double theta = model.alpha == 0.0 ? 0.0 : M_PI - model.alpha;
        const cplx via_rotation = rotate_value(periodic_donoghue_m(model.a, z), theta);
        CHECK(std::abs(livsic_rotated_m(model, z) - via_rotation) <= 1e-12);
        // normalization at i
        CHECK(std::abs(livsic_rotated_m(model, I) - I) <= 1e-12);
        // Herglotz positivity
        CHECK(livsic_rotated_m(model, z).imag() > 0.0);
    }
    // α = 0 reduces to the periodic form
    const LivsicInterval periodic(1.3, 0.0);
    const cplx z(0.4, 0.9);
    CHECK(std::abs(livsic_rotated_m(periodic, z) - periodic_donoghue_m(1.3, z)) <= 1e-14);
}

TEST_CASE("measure support and masses") {
    // α = 0: lattice πn/a
    const Measure plain = livsic_measure(LivsicInterval(2.0, 0.0), 3);
    REQUIRE(plain.atoms().size() == 7);
    CHECK(plain.atoms()[3].x == 0.0);
    CHECK(plain.atoms()[4].x == doctest::Approx(M_PI / 2.0));

    // α = π/2, a = 1: every mass equals coth(1)
    const LivsicInterval neumann(1.0, M_PI / 2.0);
    CHECK(livsic_atom_mass(neumann) == doctest::Approx(1.0 / std::tanh(1.0)).epsilon(1e-13));

    // α = 0 mass limit tanh(a)/a
    const LivsicInterval per(0.8, 0.0);
    CHECK(livsic_atom_mass(per) == doctest::Approx(std::tanh(0.8) / 0.8).epsilon(1e-13));

    // support == spectrum lattice, exact equality of doubles
    Rng rng(311);
    for (int t = 0; t < 6; ++t) {
        const LivsicInterval model(rng.uniform(0.5, 2.0), rng.uniform(0.1, M_PI - 0.1));
        const Measure meas = livsic_measure(model, 5);
        const SpectrumDescriptor spec = quasihermitian_spectrum(model);
        REQUIRE(spec.kind == SpectrumDescriptor::Kind::Lattice);
        for (long n = -5; n <= 5; ++n)
            CHECK(meas.atoms()[std::size_t(n + 5)].x == spec.point(n));
    }
}

TEST_CASE("residues of the closed form match the masses") {
    Rng rng(313);
    for (int t = 0; t < 5; ++t) {
        const LivsicInterval model(rng.uniform(0.5, 1.8), rng.uniform(0.05, M_PI - 0.05));
        const double mass = livsic_atom_mass(model);
        for (long n : {-2L, -1L, 0L, 1L, 2L}) {
            const double pole = livsic_lattice_point(model, n);
            // 4-direction circle average with an ε^2 Richardson step
            auto probe = [&](double eps) {
                cplx acc = 0.0;
                for (int q = 0; q < 4; ++q) {
                    const cplx d = std::polar(eps, M_PI_2 * q + 0.37);
                    acc += livsic_rotated_m(model, pole + d) * d;
                }
                return acc / 4.0;
            };
            const cplx res = (4.0 * probe(4e-4) - probe(8e-4)) / 3.0;
            CHECK(std::abs(res - cplx(-mass, 0.0)) <= 1e-10 * std::max(1.0, mass));
        }
    }
}

TEST_CASE("truncated kernel sum approaches the closed form") {
    const LivsicInterval model(1.0, M_PI / 4.0);
    const cplx z(0.3, 0.7);
    const Measure meas = livsic_measure(model, 10000);
    const cplx sum = eval_scalar(meas, z, Kernel::Full);
    const cplx closed = livsic_rotated_m(model, z);
    CHECK(std::abs(sum - closed) <= 1e-4);
    CHECK(std::abs(sum - closed) <= livsic_truncation_bound(model, 10000, z) + 1e-12);
}

TEST_CASE("weak Lebesgue limit in the interval length") {
    std::vector<cplx> grid;
    Rng rng(317);
    for (int i = 0; i < 10; ++i) grid.push_back(rng.upper(0.4, 1.5));
    for (double alpha : {0.0, M_PI / 4.0, M_PI / 2.0}) {
        const LebesgueLimitReport rep = lebesgue_limit_check({2.0, 4.0, 10.0}, alpha, grid);
        CHECK(rep.monotone_decreasing);
        CHECK(rep.sup_distances.back() < 0.1);
    }
    // pinned comparison at z = i/2
    const std::vector<cplx> one = {cplx(0.0, 0.5)};
    const LebesgueLimitReport rep = lebesgue_limit_check({2.0, 10.0}, M_PI / 4.0, one);
    CHECK(rep.sup_distances[1] < rep.sup_distances[0]);
}

TEST_CASE("quasihermitian spectra") {
    const SpectrumDescriptor lattice =
        quasihermitian_spectrum(IntervalModelTag{1.0, cplx(1.0, 0.0)});
    REQUIRE(lattice.kind == SpectrumDescriptor::Kind::Lattice);
    CHECK(lattice.point(0) == 0.0);
    CHECK(lattice.point(2) == doctest::Approx(2.0 * M_PI));

    CHECK(quasihermitian_spectrum(IntervalModelTag{1.0, cplx(0.0, 0.0)}).kind ==
          SpectrumDescriptor::Kind::Empty);
    CHECK(quasihermitian_spectrum(IntervalModelTag{1.0, std::nullopt}).kind ==
          SpectrumDescriptor::Kind::Empty);
    CHECK(quasihermitian_spectrum(LineModelTag{}).kind ==
          SpectrumDescriptor::Kind::ClosedUpperHalfPlane);
    CHECK_THROWS_AS(quasihermitian_spectrum(IntervalModelTag{1.0, cplx(0.5, 0.0)}), InvalidModel);

    // ρ = e^{2iβ} reproduces the model lattice
    const LivsicInterval model(1.4, 0.8);
    const SpectrumDescriptor from_rho = quasihermitian_spectrum(IntervalModelTag{1.4, model.rho()});
    REQUIRE(from_rho.kind == SpectrumDescriptor::Kind::Lattice);
    CHECK(from_rho.point(1) == doctest::Approx(quasihermitian_spectrum(model).point(1)).epsilon(1e-14));
}

TEST_CASE("model guards") {
    CHECK_THROWS_AS(LivsicInterval(-1.0, 0.3), InvalidModel);
    CHECK_THROWS_AS(LivsicInterval(1.0, 3.5), InvalidModel);
    CHECK_THROWS_AS(livsic_measure(LivsicInterval(1.0, 0.3), 0), InvalidModel);
    CHECK_THROWS_AS(periodic_donoghue_m(0.0, I), InvalidModel);
}
