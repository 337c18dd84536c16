#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "herglotz/errors.hpp"
#include "herglotz/json_io.hpp"
#include "herglotz/perturbation.hpp"

using namespace herglotz;
using testutil::Rng;

namespace {

const cplx I(0.0, 1.0);

PerturbationTriple random_triple(Rng& rng, std::size_t n, std::size_t k) {
    return PerturbationTriple(testutil::random_hermitian(rng, n),
                              testutil::random_matrix(rng, n, k),
                              testutil::random_hermitian(rng, k));
}

// independent oracle: spectral sum Σ_j K* P_j K / (λ_j - z)
CMat spectral_sum_mfunc(const PerturbationTriple& t, cplx z) {
    const MatrixMeasure omega = spectral_measure(t);
    CMat m(t.coupling_dim(), t.coupling_dim());
    for (const MatrixAtom& a : omega.atoms()) {
        CMat w = a.w;
        w *= 1.0 / (a.x - z);
        m += w;
    }
    return m;
}

} // namespace

TEST_CASE("perturbed m-function pinned scalar value") {
    CMat h0(1, 1), k(1, 1), l(1, 1);
    k(0, 0) = 1.0;
    const PerturbationTriple t(h0, k, l);
    CHECK(std::abs(perturbed_mfunc(t, I)(0, 0) - I) <= 1e-15);
    CHECK_THROWS_AS(perturbed_mfunc(t, cplx(1.0, 1e-13)), NearSingularResolvent);
}

TEST_CASE("solve route equals the spectral-sum oracle") {
    Rng rng(101);
    for (int trial = 0; trial < 10; ++trial) {
        const PerturbationTriple t = random_triple(rng, 4, 2);
        const cplx z = rng.upper(0.3, 2.0);
        CHECK((perturbed_mfunc(t, z) - spectral_sum_mfunc(t, z)).frobenius() <= 1e-10);
    }
}

TEST_CASE("Herglotz positivity of perturbed m-functions") {
    Rng rng(103);
    for (int trial = 0; trial < 30; ++trial) {
        const PerturbationTriple t = random_triple(rng, 3 + trial % 5, 1 + trial % 3);
        const CMat m = perturbed_mfunc(t, rng.upper(0.2, 2.0));
        CHECK(min_eigenvalue_hermitian(m.imag_part()) >= -1e-10);
    }
}

TEST_CASE("resolvent inversion identity") {
    // (I + L K*(H0-z)^{-1} K)(I - L K*(H_L-z)^{-1} K) = I
    Rng rng(107);
    for (int trial = 0; trial < 10; ++trial) {
        const PerturbationTriple t = random_triple(rng, 5, 2);
        const PerturbationTriple base(t.h0, t.k, CMat(2, 2));
        const cplx z = rng.upper(0.4, 2.0);
        const CMat g0 = perturbed_mfunc(base, z);
        const CMat gl = perturbed_mfunc(t, z);
        const CMat eye = CMat::identity(2);
        const CMat prod = (eye + t.l * g0) * (eye - t.l * gl);
        CHECK((prod - eye).frobenius() <= 1e-10);
    }
}

TEST_CASE("spectral measure basics") {
    CMat h0(2, 2);
    h0(0, 0) = 1.0;
    h0(1, 1) = 2.0;
    const PerturbationTriple t(h0, CMat::identity(2), CMat(2, 2));
    const MatrixMeasure omega = spectral_measure(t);
    REQUIRE(omega.atoms().size() == 2);
    CHECK(omega.atoms()[0].x == doctest::Approx(1.0));
    CHECK(std::abs(omega.atoms()[0].w(0, 0) - 1.0) <= 1e-12);
    CHECK(std::abs(omega.atoms()[0].w(1, 1)) <= 1e-12);
    CHECK(std::abs(omega.atoms()[1].w(1, 1) - 1.0) <= 1e-12);
}

TEST_CASE("total mass is K*K") {
    Rng rng(109);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + rng.next() % 7, k = 1 + rng.next() % std::min<std::size_t>(3, n);
        const PerturbationTriple t = random_triple(rng, n, k);
        const MatrixMeasure omega = spectral_measure(t);
        CHECK((omega.total_mass() - t.k.adjoint() * t.k).frobenius() <= 1e-10);
    }
}

TEST_CASE("degenerate eigenvalues merge into one projection") {
    CMat h0(3, 3);
    h0(0, 0) = 1.0;
    h0(1, 1) = 1.0;
    h0(2, 2) = 4.0;
    Rng rng(211);
    const PerturbationTriple t(h0, testutil::random_matrix(rng, 3, 2), CMat(2, 2));
    const MatrixMeasure omega = spectral_measure(t);
    CHECK(omega.atoms().size() == 2);
}

TEST_CASE("lft consistency across perturbations") {
    Rng rng(113);
    const CMat h0 = testutil::random_hermitian(rng, 3);
    const CMat k = testutil::random_matrix(rng, 3, 2);
    const CMat l1 = testutil::random_hermitian(rng, 2);
    const PerturbationTriple t1(h0, k, l1);

    SUBCASE("identical perturbations give zero residual") {
        const cplx grid[] = {{0.2, 1.0}, {-0.7, 0.5}};
        const LftConsistencyReport rep = lft_consistency(t1, t1, grid);
        CHECK(rep.max_resid_product <= 1e-14);
        CHECK(rep.max_resid_transposed <= 1e-14);
    }

    SUBCASE("random pair on a 20-point grid") {
        const PerturbationTriple t2(h0, k, testutil::random_hermitian(rng, 2));
        std::vector<cplx> grid;
        for (int i = 0; i < 20; ++i)
            grid.push_back({rng.uniform(-2, 2), (i % 2 ? 1.0 : -1.0) * rng.uniform(0.4, 2.0)});
        const LftConsistencyReport rep = lft_consistency(t1, t2, grid);
        CHECK(rep.max_resid_product <= 1e-10);
        CHECK(rep.max_resid_transposed <= 1e-10);
        CHECK(rep.max_resid_inverse_a <= 1e-10);
        CHECK(rep.max_resid_inverse_b <= 1e-10);
        CHECK(rep.junitary_residual <= 1e-10);
    }

    SUBCASE("triples must share H0 and K") {
        const PerturbationTriple other(testutil::random_hermitian(rng, 3), k, l1);
        const cplx grid[] = {{0.0, 1.0}};
        CHECK_THROWS_AS(lft_consistency(t1, other, grid), BadOperator);
    }
}

TEST_CASE("bounded decomposition") {
    const BoundedDecomposition zero = decompose_bounded(CMat(3, 3));
    CHECK(zero.rank == 0);

    CMat v(3, 3);
    v(0, 0) = 4.0;
    v(1, 1) = -9.0;
    const BoundedDecomposition d = decompose_bounded(v);
    CHECK(d.rank == 2);
    // K0 K0* has eigenvalues {|4|, |-9|} = {4, 9}; L0 carries the signs
    const CMat recon = d.k0 * d.l0 * d.k0.adjoint();
    CHECK((recon - v).frobenius() <= 1e-10);
    const HermEig sq = hermitian_eig(d.k0.adjoint() * d.k0);
    CHECK(sq.values[0] == doctest::Approx(4.0));
    CHECK(sq.values[1] == doctest::Approx(9.0));

    Rng rng(127);
    const CMat low = testutil::random_psd(rng, 5, 2) - testutil::random_psd(rng, 5, 1);
    const BoundedDecomposition r = decompose_bounded(low);
    CHECK((r.k0 * r.l0 * r.k0.adjoint() - low).frobenius() <= 1e-10);
}

TEST_CASE("naimark dilation structure") {
    // scalar atom: H = [x0], K = [sqrt(t)]
    const MatrixMeasure scalar(1, {{2.5, CMat(1, 1, {cplx(0.49)})}});
    const Dilation d = naimark_dilate(scalar);
    REQUIRE(d.space_dim() == 1);
    CHECK(d.eigenvalues[0] == 2.5);
    CHECK(std::abs(d.k(0, 0) - 0.7) <= 1e-12);

    // k = 2 with a rank-one second weight: N = 2 + 1
    CMat w1 = CMat::identity(2);
    CMat w2(2, 2);
    w2(0, 0) = 1.0;
    const MatrixMeasure two(2, {{0.0, w1}, {1.0, w2}});
    const Dilation d2 = naimark_dilate(two);
    CHECK(d2.space_dim() == 3);
    CHECK(d2.block_rank[0] == 2);
    CHECK(d2.block_rank[1] == 1);
    CHECK((d2.projected_mass(1) - w2).frobenius() <= 1e-12);
    CHECK((d2.k.adjoint() * d2.k - two.total_mass()).frobenius() <= 1e-12);

    // a zero-weight atom contributes no block
    const MatrixMeasure padded(2, {{0.0, w1}, {1.0, w2}, {3.0, CMat(2, 2)}});
    CHECK(naimark_dilate(padded).space_dim() == 3);
}

TEST_CASE("dilation minimality equals the weight ranks") {
    Rng rng(131);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t k = 1 + rng.next() % 3;
        std::vector<MatrixAtom> atoms;
        std::size_t expected = 0;
        const std::size_t count = 1 + rng.next() % 4;
        for (std::size_t j = 0; j < count; ++j) {
            const std::size_t rank = 1 + rng.next() % k;
            atoms.push_back({-2.0 + 4.0 * double(j) / double(count) + rng.uniform(0.0, 0.5),
                             testutil::random_psd(rng, k, rank)});
            expected += rank;
        }
        const Dilation d = naimark_dilate(MatrixMeasure(k, std::move(atoms)));
        CHECK(d.space_dim() == expected);
    }
}

TEST_CASE("realization reproduces the plain-kernel function") {
    const MatrixMeasure scalar(1, {{0.0, CMat(1, 1, {cplx(1.0)})}});
    const RealizationReport rep = realize(scalar);
    CHECK(rep.max_residual <= 1e-12);
    CHECK(std::abs(rep.dilation.mfunc(I)(0, 0) - I) <= 1e-14);   // -1/z at z = i

    Rng rng(137);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t k = 1 + rng.next() % 3;
        std::vector<MatrixAtom> atoms;
        const std::size_t count = 2 + rng.next() % 4;
        for (std::size_t j = 0; j < count; ++j)
            atoms.push_back({rng.uniform(-4.0, 4.0), testutil::random_psd(rng, k, 1 + rng.next() % k)});
        const MatrixMeasure omega(k, std::move(atoms));
        CHECK(realize(omega).max_residual <= 1e-10);
    }
}

TEST_CASE("realize then spectral_measure round trip") {
    Rng rng(139);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t k = 1 + rng.next() % 3;
        std::vector<MatrixAtom> atoms;
        double x = rng.uniform(-4.0, -3.0);
        const std::size_t count = 2 + rng.next() % 4;
        for (std::size_t j = 0; j < count; ++j) {
            atoms.push_back({x, testutil::random_psd(rng, k, j == 0 ? k : 1 + rng.next() % k)});
            x += rng.uniform(0.5, 2.0);
        }
        const MatrixMeasure omega(k, atoms);
        const Dilation d = realize(omega).dilation;

        // rebuild H = blockdiag(λ_j I) and run the spectral measure through it
        const std::size_t n = d.space_dim();
        CMat h(n, n);
        for (std::size_t i = 0; i < n; ++i) h(i, i) = d.eigenvalues[i];
        const MatrixMeasure back = spectral_measure(PerturbationTriple(h, d.k, CMat(k, k)));
        REQUIRE(back.atoms().size() == omega.atoms().size());
        for (std::size_t j = 0; j < omega.atoms().size(); ++j) {
            CHECK(std::abs(back.atoms()[j].x - omega.atoms()[j].x) <= 1e-10);
            CHECK((back.atoms()[j].w - omega.atoms()[j].w).frobenius() <= 1e-9);
        }
    }
}

TEST_CASE("two measures with a shared dilation frame") {
    // realize Ω1, then the LFT partner M2 = M1 (I + L2 M1)^{-1} is the
    // m-function of H2 = H0 + K L2 K* with H0 = H1 (gauge L1 = 0)
    Rng rng(149);
    const std::size_t k = 2;
    std::vector<MatrixAtom> atoms;
    for (int j = 0; j < 4; ++j)
        atoms.push_back({-3.0 + 2.0 * j + rng.uniform(0.0, 0.5), testutil::random_psd(rng, k, k)});
    const MatrixMeasure omega1(k, std::move(atoms));
    const Dilation d = naimark_dilate(omega1);
    const CMat l2 = testutil::random_hermitian(rng, k);

    const std::size_t n = d.space_dim();
    CMat h0(n, n);
    for (std::size_t i = 0; i < n; ++i) h0(i, i) = d.eigenvalues[i];
    const PerturbationTriple t2(h0, d.k, l2);
    const MatrixMeasure omega2 = spectral_measure(t2);

    // shared normalization K*K = Ω1(R) = Ω2(R)
    CHECK((omega1.total_mass() - omega2.total_mass()).frobenius() <= 1e-10);

    const JUnitary a = JUnitary::perturbation_pair(CMat(k, k), l2);
    for (int i = 0; i < 6; ++i) {
        const cplx z = rng.upper(0.4, 2.0);
        const CMat m1 = d.mfunc(z);
        const CMat m2 = perturbed_mfunc(t2, z);
        CHECK((lft_apply(a, m1) - m2).frobenius() <= 1e-10);
    }
}

TEST_CASE("generating rank and the reduced model") {
    CMat h0(3, 3);
    h0(0, 0) = 1.0;
    h0(1, 1) = 2.0;
    h0(2, 2) = 3.0;

    // K touching all three eigenvectors: full generating rank
    CMat k_full(3, 1);
    k_full(0, 0) = 1.0;
    k_full(1, 0) = 0.5;
    k_full(2, 0) = -0.25;
    CHECK(generating_rank(h0, k_full) == 3);

    // K orthogonal to e3: rank 2, and the reduced model reproduces M_L
    CMat k_def(3, 1);
    k_def(0, 0) = 1.0;
    k_def(1, 0) = 1.0;
    CHECK(generating_rank(h0, k_def) == 2);

    const ReducedModel red = reduce_to_generating_subspace(h0, k_def);
    CHECK(red.dim == 2);
    CMat l(1, 1);
    l(0, 0) = 0.7;
    const PerturbationTriple full(h0, k_def, l);
    const PerturbationTriple reduced(red.h0, red.k, l);
    Rng rng(151);
    for (int i = 0; i < 5; ++i) {
        const cplx z = rng.upper(0.3, 1.5);
        CHECK((perturbed_mfunc(full, z) - perturbed_mfunc(reduced, z)).frobenius() <= 1e-11);
    }
}

TEST_CASE("triple and matrix measure JSON round trips") {
    Rng rng(157);
    const PerturbationTriple t = random_triple(rng, 3, 2);
    const PerturbationTriple back = triple_from_json(triple_to_json(t));
    CHECK((back.h0 - t.h0).frobenius() <= 1e-15);
    CHECK((back.k - t.k).frobenius() <= 1e-15);
    CHECK((back.l - t.l).frobenius() <= 1e-15);

    const MatrixMeasure omega = spectral_measure(t);
    const MatrixMeasure momega = matrix_measure_from_json(matrix_measure_to_json(omega));
    REQUIRE(momega.atoms().size() == omega.atoms().size());
    CHECK((momega.total_mass() - omega.total_mass()).frobenius() <= 1e-13);

    CHECK_THROWS_AS(triple_from_json(R"({"H0":[[[0,0]]],"K":[[[1,0]]]})"), BadInput);
    const Dilation d = naimark_dilate(omega);
    CHECK(dilation_to_json(d).find("eigenvalues") != std::string::npos);
}
