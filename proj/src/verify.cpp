#include "herglotz/verify.hpp"

#include <cmath>
#include <sstream>

#include "herglotz/errors.hpp"
#include "herglotz/extensions.hpp"
#include "herglotz/herglotz.hpp"
#include "herglotz/livsic.hpp"
#include "herglotz/measure.hpp"
#include "herglotz/perturbation.hpp"
#include "herglotz/schrodinger.hpp"

namespace herglotz {

namespace {

// splitmix64: portable deterministic stream for the seeded spot checks
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
};

CMat random_hermitian(Rng& rng, std::size_t n, double scale = 1.0) {
    CMat a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = scale * rng.zc();
    return a.herm();
}

CMat random_matrix(Rng& rng, std::size_t r, std::size_t c, double scale = 1.0) {
    CMat a(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) a(i, j) = scale * rng.zc();
    return a;
}

struct Checker {
    std::vector<SuiteResult>& out;
    std::string suite;
    double tol;

    void value(const std::string& name, double resid, double threshold) {
        std::ostringstream os;
        os << "residual " << resid << " (tol " << std::max(threshold, tol) << ")";
        out.push_back({suite + "." + name, resid <= std::max(threshold, tol), os.str()});
    }
    void flag(const std::string& name, bool ok, const std::string& detail) {
        out.push_back({suite + "." + name, ok, detail});
    }
};

void suite_measures(std::vector<SuiteResult>& out, Rng& rng, double tol) {
    Checker c{out, "measures", tol};
    c.value("atom_weighted_mass",
            std::abs(weighted_mass(Measure::from_atoms({{0.0, 1.0}}), -1.0) - 1.0), 1e-12);
    c.value("lebesgue_weighted_mass",
            std::abs(weighted_mass(Measure::lebesgue_over_pi(), -1.0) - 1.0), 1e-12);
    c.value("two_atom_mass",
            std::abs(weighted_mass(Measure::from_atoms({{-1.0, 1.0}, {1.0, 1.0}}), -2.0) - 0.5),
            1e-12);
    Measure random_atoms = Measure::from_atoms(
        {{rng.uniform(-2, -1), rng.uniform(0.1, 1)}, {rng.uniform(1, 2), rng.uniform(0.1, 1)}});
    const Measure n1 = donoghue_normalize(random_atoms);
    const Measure n2 = donoghue_normalize(n1);
    double drift = 0.0;
    for (std::size_t i = 0; i < n1.atoms().size(); ++i)
        drift = std::max(drift, std::abs(n1.atoms()[i].m - n2.atoms()[i].m));
    c.value("normalize_idempotent", drift, 1e-12);
    c.flag("classify_interior_atoms",
           classify_extension_type(Measure::from_atoms({{1.0, 1.0}, {2.0, 0.5}})) ==
               ExtClass::Neither,
           "finite atoms inside (0, inf) classify as Neither");
}

void suite_herglotz(std::vector<SuiteResult>& out, Rng& rng, double tol) {
    Checker c{out, "herglotz", tol};
    const cplx i(0.0, 1.0);
    c.value("plain_atom_eval",
            std::abs(eval_scalar(Measure::from_atoms({{0.0, 1.0}}), i, Kernel::Plain) - i),
            1e-13);
    c.value("lebesgue_eval",
            std::abs(eval_scalar(Measure::lebesgue_over_pi(), cplx(2.0, 3.0), Kernel::Full) - i),
            1e-12);
    c.value("rotation_fixed_point", std::abs(rotate_value(i, rng.uniform(0.0, M_PI)) - i), 1e-13);
    const JUnitary r1 = JUnitary::rotation(rng.uniform(0, M_PI), 1);
    const JUnitary r2 = JUnitary::rotation(rng.uniform(0, M_PI), 1);
    c.value("junitary_closure", r1.compose(r2).j_residual(), 1e-12);
    const cplx m = cplx(rng.uniform(-1, 1), rng.uniform(0.5, 2.0));
    const double t1 = rng.uniform(0, M_PI), t2 = rng.uniform(0, M_PI);
    c.value("rotation_group_law",
            std::abs(rotate_value(rotate_value(m, t2), t1) - rotate_value(m, t1 + t2)), 1e-11);
}

void suite_perturbation(std::vector<SuiteResult>& out, Rng& rng, double tol) {
    Checker c{out, "perturbation", tol};
    const std::size_t n = 3, k = 2;
    const CMat h0 = random_hermitian(rng, n);
    const CMat kk = random_matrix(rng, n, k);
    const PerturbationTriple t1(h0, kk, random_hermitian(rng, k));
    const PerturbationTriple t2(h0, kk, random_hermitian(rng, k));
    const cplx grid[] = {{0.3, 0.9}, {-1.1, 0.6}, {0.7, -1.2}};
    const LftConsistencyReport rep = lft_consistency(t1, t2, grid);
    c.value("lft_identity", std::max(rep.max_resid_product, rep.max_resid_transposed), 1e-10);
    c.value("junitary_residual", rep.junitary_residual, 1e-10);
    const MatrixMeasure omega = spectral_measure(t1);
    c.value("total_mass", (omega.total_mass() - kk.adjoint() * kk).frobenius(), 1e-10);
    const RealizationReport real = realize(omega);
    c.value("realize_residual", real.max_residual, 1e-10);
}

void suite_extensions(std::vector<SuiteResult>& out, Rng&, double tol) {
    Checker c{out, "extensions", tol};
    const DonoghueModel lebesgue{Measure::lebesgue_over_pi(), 0.0};
    c.value("lebesgue_m_at_i", std::abs(donoghue_m(lebesgue, cplx(0, 1)) - cplx(0, 1)), 1e-12);
    c.value("lebesgue_functional_bound", std::abs(functional_bound(lebesgue) - 0.5), 1e-10);
    const auto friedrichs3 = [](double x) {
        return (cplx(0, 1) * std::sqrt(2.0) * sqrt_upper(cplx(x, 0)) + 1.0).real();
    };
    c.flag("point_interaction_friedrichs",
           identify_friedrichs_krein(friedrichs3).type == FkType::Friedrichs,
           "i(2z)^{1/2}+1 classifies as Friedrichs");
}

void suite_schrodinger(std::vector<SuiteResult>& out, Rng& rng, double tol) {
    Checker c{out, "schrodinger", tol};
    const cplx i(0, 1);
    const cplx m = weyl_m(Potential::zero(), BoundaryAngle(0.0), i).value;
    c.value("free_weyl_at_i", std::abs(m - std::polar(1.0, 3.0 * M_PI / 4.0)), 1e-9);
    const cplx z(rng.uniform(-1, 1), rng.uniform(0.5, 1.5));
    const cplx direct = weyl_m(Potential::zero(), BoundaryAngle(M_PI / 3.0), z).value;
    const cplx rotated =
        rotate_value(weyl_m(Potential::zero(), BoundaryAngle(0.0), z).value, M_PI / 3.0);
    c.value("aronszajn_rotation", std::abs(direct - rotated), 1e-8);
    const FundamentalValues f =
        fundamental_system(Potential::zero(), BoundaryAngle(0.3), cplx(0.4, 0.8), 10.0);
    c.value("wronskian_drift", f.wronskian_drift, 1e-9);
}

void suite_livsic(std::vector<SuiteResult>& out, Rng& rng, double tol) {
    Checker c{out, "livsic", tol};
    const LivsicInterval model(1.0, rng.uniform(0.1, M_PI - 0.1));
    c.value("normalization_at_i", std::abs(livsic_rotated_m(model, cplx(0, 1)) - cplx(0, 1)),
            1e-12);
    const SpectrumDescriptor spec = quasihermitian_spectrum(model);
    const Measure meas = livsic_measure(model, 3);
    bool lattice_match = spec.kind == SpectrumDescriptor::Kind::Lattice;
    for (long n = -3; n <= 3; ++n)
        lattice_match = lattice_match &&
                        meas.atoms()[static_cast<std::size_t>(n + 3)].x == spec.point(n);
    c.flag("support_equals_spectrum", lattice_match, "atom locations match the lattice exactly");
    // numeric residue at the n = 0 pole vs the closed-form mass
    const double pole = livsic_lattice_point(model, 0);
    const auto residue = [&](double eps) {
        cplx acc = 0.0;
        for (int q = 0; q < 4; ++q) {
            const cplx dirn = std::polar(1.0, M_PI_2 * q + 0.3);
            acc += livsic_rotated_m(model, pole + eps * dirn) * (eps * dirn);
        }
        return acc / 4.0;
    };
    const cplx res = (4.0 * residue(5e-4) - residue(1e-3)) / 3.0;
    c.value("residue_is_minus_mass", std::abs(res + livsic_atom_mass(model)), 1e-9);
}

} // namespace

std::vector<std::string> suite_names() {
    return {"measures", "herglotz", "perturbation", "extensions", "schrodinger", "livsic"};
}

std::vector<SuiteResult> run_suite(const std::string& name, std::uint64_t seed, double tol) {
    std::vector<SuiteResult> out;
    Rng rng(seed);
    const bool all = name == "all";
    if (all || name == "measures") suite_measures(out, rng, tol);
    if (all || name == "herglotz") suite_herglotz(out, rng, tol);
    if (all || name == "perturbation") suite_perturbation(out, rng, tol);
    if (all || name == "extensions") suite_extensions(out, rng, tol);
    if (all || name == "schrodinger") suite_schrodinger(out, rng, tol);
    if (all || name == "livsic") suite_livsic(out, rng, tol);
    if (out.empty()) throw BadInput("unknown suite \"" + name + "\"");
    return out;
}

} // namespace herglotz
