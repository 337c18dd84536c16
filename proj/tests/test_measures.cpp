#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "herglotz/errors.hpp"
#include "herglotz/json_io.hpp"
#include "herglotz/measure.hpp"

using namespace herglotz;
using testutil::Rng;

TEST_CASE("weighted mass pinned values") {
    CHECK(weighted_mass(Measure::from_atoms({{0.0, 1.0}}), -1.0) == doctest::Approx(1.0));
    CHECK(weighted_mass(Measure::lebesgue_over_pi(), -1.0) == doctest::Approx(1.0).epsilon(1e-12));
    // hand sum: two unit atoms at ±1, weight (1+1)^{-2} = 1/4 each
    CHECK(weighted_mass(Measure::from_atoms({{-1.0, 1.0}, {1.0, 1.0}}), -2.0) ==
          doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("weighted mass agrees with the midpoint oracle") {
    // dense grid so the 4x midpoint refinement resolves to 1e-8 relative
    std::vector<double> grid, values;
    const std::size_t n = 2000;
    for (std::size_t i = 0; i <= n; ++i) {
        const double x = double(i) / double(n);
        grid.push_back(x);
        values.push_back(0.3 + x * x + 0.5 * std::sin(3.0 * x) * std::sin(3.0 * x));
    }
    const Measure m = Measure::from_density(std::move(grid), std::move(values));
    for (double e : {0.0, -1.0, -2.0, -0.7}) {
        const double lib = weighted_mass(m, e);
        const double oracle = testutil::midpoint_weighted_mass(m, e, 4);
        CHECK(std::abs(lib - oracle) <= 1e-8 * std::abs(oracle));
    }
}

TEST_CASE("weighted mass is linear in the measure") {
    Rng rng(11);
    const Measure a = testutil::random_normalized_atoms(rng, 4).with_tail({});
    const Measure b = testutil::random_normalized_atoms(rng, 3).with_tail({});
    std::vector<Atom> merged;
    for (const Atom& x : a.atoms()) merged.push_back(x);
    for (const Atom& x : b.atoms()) merged.push_back({x.x, 2.0 * x.m});
    const Measure sum = Measure::from_atoms(std::move(merged));
    for (double e : {-1.0, -2.0})
        CHECK(weighted_mass(sum, e) ==
              doctest::Approx(weighted_mass(a, e) + 2.0 * weighted_mass(b, e)).epsilon(1e-12));
}

TEST_CASE("weighted mass is monotone nondecreasing in the exponent") {
    // (1+λ^2)^e has base >= 1 everywhere, so the mass can only grow with e;
    // away from the origin the growth is strict
    const Measure outside = Measure::from_atoms({{-3.0, 0.5}, {2.0, 1.0}});
    const Measure inside = Measure::from_atoms({{-0.8, 0.5}, {0.3, 1.0}, {0.9, 0.2}});
    double prev_out = -1.0, prev_in = -1.0;
    bool first = true;
    for (double e : {-2.0, -1.5, -1.0, -0.5, 0.0}) {
        const double wo = weighted_mass(outside, e);
        const double wi = weighted_mass(inside, e);
        if (!first) {
            CHECK(wo > prev_out);
            CHECK(wi >= prev_in);
        }
        prev_out = wo;
        prev_in = wi;
        first = false;
    }
    // atom at the origin is the equality case
    const Measure origin = Measure::from_atoms({{0.0, 2.0}});
    CHECK(weighted_mass(origin, -2.0) == weighted_mass(origin, 0.0));
}

TEST_CASE("divergent tails are refused symbolically") {
    CHECK_THROWS_AS(weighted_mass(Measure::lebesgue_over_pi(), -0.4), DivergentIntegral);
    CHECK_THROWS_AS(weighted_mass(Measure::lebesgue_over_pi(), 0.0), DivergentIntegral);
    const Measure power = testutil::power_density_measure(1.0, 0.5, 1e-3, 2.0,
                                                          {TailKind::Power, 0.5});
    CHECK_THROWS_AS(weighted_mass(power, -0.7), DivergentIntegral);   // p + 2e = -0.9 >= -1
    CHECK(weighted_mass(power, -1.0) > 0.0);                          // p + 2e = -1.5 converges
}

TEST_CASE("power tail quadrature matches a wide-window oracle") {
    // density x^{-1/2} on [1, 50] continued by the tail tag vs a single
    // explicit grid out to 5e4 with no tag
    const Measure tagged =
        testutil::power_density_measure(0.7, -0.5, 1.0, 50.0, {TailKind::Power, -0.5}, 64);
    const Measure wide =
        testutil::power_density_measure(0.7, -0.5, 1.0, 5e4, {TailKind::None, 0.0}, 64);
    const double lib = weighted_mass(tagged, -1.0);
    const double oracle = weighted_mass(wide, -1.0);
    // the oracle itself truncates at 5e4; remainder ~ 0.7 * (2/3) * 5e4^{-3/2}
    CHECK(std::abs(lib - oracle) <= 5e-7);
}

TEST_CASE("donoghue normalization") {
    const Measure one = donoghue_normalize(Measure::from_atoms({{0.0, 2.0}}));
    REQUIRE(one.atoms().size() == 1);
    CHECK(one.atoms()[0].m == doctest::Approx(1.0).epsilon(1e-14));

    // two unit atoms at ±1 already have unit weighted mass
    const Measure two = donoghue_normalize(Measure::from_atoms({{-1.0, 1.0}, {1.0, 1.0}}));
    CHECK(two.atoms()[0].m == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(weighted_mass(two, -1.0) == doctest::Approx(1.0).epsilon(1e-13));

    // flat density inside a window + Lebesgue tail: the scalable part must
    // land exactly on density 1/π
    std::vector<double> grid, values;
    const double big = 1e6;
    for (int i = 0; i <= 100; ++i) {
        grid.push_back(-big + 2.0 * big * i / 100.0);
        values.push_back(1.0);
    }
    const Measure window =
        Measure::from_density(std::move(grid), std::move(values), {TailKind::LebesgueOverPi, 0});
    const Measure norm = donoghue_normalize(window);
    CHECK(norm.values()[50] == doctest::Approx(1.0 / M_PI).epsilon(1e-12));
    CHECK(weighted_mass(norm, -1.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("donoghue normalization is idempotent") {
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const Measure m = testutil::random_normalized_atoms(rng, 2 + trial % 4);
        const Measure again = donoghue_normalize(m);
        REQUIRE(again.atoms().size() == m.atoms().size());
        for (std::size_t i = 0; i < m.atoms().size(); ++i)
            CHECK(std::abs(again.atoms()[i].m - m.atoms()[i].m) <= 1e-12 * m.atoms()[i].m);
    }
    CHECK_THROWS_AS(donoghue_normalize(Measure::from_atoms({{1.0, 0.0}})), ZeroMeasure);
}

TEST_CASE("extension classification") {
    // free half-line Dirichlet shape: density ~ λ^{1/2} at 0 and at infinity
    const Measure free_like =
        testutil::power_density_measure(1.0 / M_PI, 0.5, 1e-6, 10.0, {TailKind::Power, 0.5});
    CHECK(classify_extension_type(free_like) == ExtClass::Friedrichs);

    // density ~ λ^{-1/2} near 0 with compact support: \int_0 λ^{-3/2} diverges
    const Measure kre = testutil::power_density_measure(0.5, -0.5, 1e-6, 1.0, {});
    CHECK(classify_extension_type(kre) == ExtClass::Krein);

    const Measure atoms = Measure::from_atoms({{0.5, 1.0}, {2.0, 0.25}});
    CHECK(classify_extension_type(atoms) == ExtClass::Neither);

    // both ends divergent
    const Measure both =
        testutil::power_density_measure(0.5, -0.5, 1e-6, 1.0, {TailKind::Power, 0.1});
    CHECK(classify_extension_type(both) == ExtClass::FriedrichsEqualsKrein);

    // atom exactly at the origin forces the Krein divergence
    const Measure origin = Measure::from_atoms({{0.0, 0.3}, {1.0, 1.0}});
    CHECK(classify_extension_type(origin) == ExtClass::Krein);
}

TEST_CASE("classification is invariant under positive rescaling") {
    const Measure base =
        testutil::power_density_measure(0.8, -0.5, 1e-6, 1.0, {TailKind::Power, 0.5});
    for (double s : {0.01, 1.0, 37.5})
        CHECK(classify_extension_type(base.scaled(s)) == classify_extension_type(base));
}

TEST_CASE("classification guards") {
    const Measure negative = Measure::from_atoms({{-1.0, 1.0}, {2.0, 1.0}});
    CHECK_THROWS_AS(classify_extension_type(negative), UnsupportedMeasure);
    CHECK_THROWS_AS(classify_extension_type(Measure::lebesgue_over_pi()), UnsupportedMeasure);

    // noisy non-power density near zero: R^2 below the confidence bar
    std::vector<double> grid, values;
    for (int i = 0; i <= 60; ++i) {
        const double x = 1e-6 * std::pow(10.0, i / 10.0);
        grid.push_back(x);
        values.push_back(std::sqrt(x) * (1.0 + 0.8 * std::sin(4.0 * std::log(x))));
    }
    const Measure noisy = Measure::from_density(std::move(grid), std::move(values), {});
    CHECK_THROWS_AS(classify_extension_type(noisy), Inconclusive);
}

TEST_CASE("measure construction rules") {
    CHECK_THROWS_AS(Measure::from_atoms({{0.0, -1.0}}), BadMeasure);
    CHECK_THROWS_AS(Measure::from_density({0.0, 1.0}, {1.0, -0.5}), BadMeasure);
    CHECK_THROWS_AS(Measure::from_density({1.0, 0.5}, {1.0, 1.0}), BadMeasure);
    CHECK_THROWS_AS(Measure::from_density({0.0}, {1.0}), BadMeasure);

    // atoms within 1e-10 merge, masses add
    const Measure merged = Measure::from_atoms({{1.0, 0.5}, {1.0 + 3e-11, 0.25}});
    REQUIRE(merged.atoms().size() == 1);
    CHECK(merged.atoms()[0].m == doctest::Approx(0.75));

    const Measure sorted = Measure::from_atoms({{2.0, 1.0}, {-1.0, 0.5}});
    CHECK(sorted.atoms()[0].x == -1.0);
}

TEST_CASE("matrix measures validate weights") {
    Rng rng(21);
    const CMat w = testutil::random_psd(rng, 2, 2);
    const MatrixMeasure ok(2, {{0.0, w}, {1.5, testutil::random_psd(rng, 2, 1)}});
    CHECK(ok.atoms().size() == 2);
    CHECK(min_eigenvalue_hermitian(ok.total_mass()) >= -1e-12);

    CMat bad = w;
    bad(0, 1) += cplx(0.0, 1e-6);   // breaks Hermitian symmetry
    CHECK_THROWS_AS(MatrixMeasure(2, {{0.0, bad}}), BadMeasure);

    CMat indef(2, 2);
    indef(0, 0) = 1.0;
    indef(1, 1) = -0.5;
    CHECK_THROWS_AS(MatrixMeasure(2, {{0.0, indef}}), NotPSD);

    // eigensolver jitter below the tolerance is accepted
    CMat jitter(2, 2);
    jitter(0, 0) = 1.0;
    jitter(1, 1) = -0.5e-10;
    CHECK(MatrixMeasure(2, {{0.0, jitter}}).atoms().size() == 1);

    const Measure tr = ok.trace_measure();
    CHECK(tr.atoms().size() == 2);
    CHECK(tr.atoms()[0].m == doctest::Approx(w(0, 0).real() + w(1, 1).real()));
}

TEST_CASE("weighted L2 spec") {
    Rng rng(3);
    const CMat w0 = testutil::random_psd(rng, 2, 2);
    const CMat w1 = testutil::random_psd(rng, 2, 2);
    const MatrixMeasure mm(2, {{0.0, w0}, {2.0, w1}});
    const CMat total = weighted_mass(WeightedL2Spec{mm, -1.0});
    CMat expect = w0;
    CMat scaled = w1;
    scaled *= cplx(1.0 / 5.0);
    expect += scaled;
    CHECK((total - expect).frobenius() <= 1e-13);
}

TEST_CASE("measure JSON schema round trip and strictness") {
    const Measure m({{-1.0, 0.5}, {2.0, 1.5}}, {0.0, 1.0, 2.0}, {0.1, 0.4, 0.0},
                    {TailKind::Power, -2.0});
    const Measure back = measure_from_json(measure_to_json(m));
    REQUIRE(back.atoms().size() == 2);
    CHECK(back.atoms()[1].x == 2.0);
    CHECK(back.grid() == m.grid());
    CHECK(back.values() == m.values());
    CHECK(back.tail().kind == TailKind::Power);
    CHECK(back.tail().exponent == -2.0);

    const Measure leb = measure_from_json(R"({"atoms":[],"tail":"lebesgue_over_pi"})");
    CHECK(leb.tail().kind == TailKind::LebesgueOverPi);

    CHECK_THROWS_AS(measure_from_json(R"({"atoms":[],"unknown":1})"), BadInput);
    CHECK_THROWS_AS(measure_from_json(R"({"atoms":[{"x":0,"m":1,"w":2}]})"), BadInput);
    CHECK_THROWS_AS(measure_from_json(R"({"tail":"bogus"})"), BadInput);
    CHECK_THROWS_AS(measure_from_json("not json"), BadInput);
}
