#include "herglotz/perturbation.hpp"

#include <algorithm>
#include <cmath>

#include "herglotz/errors.hpp"
#include "herglotz/version.hpp"

namespace herglotz {

PerturbationTriple::PerturbationTriple(CMat h0_, CMat k_, CMat l_)
    : h0(std::move(h0_)), k(std::move(k_)), l(std::move(l_)) {
    const Tolerances& tol = default_tolerances();
    if (h0.rows() != h0.cols()) throw BadOperator("H0 must be square");
    if (!h0.is_hermitian(tol.hermitian)) throw BadOperator("H0 must be Hermitian");
    if (l.rows() != l.cols() || !l.is_hermitian(tol.hermitian))
        throw BadOperator("L must be Hermitian");
    if (k.rows() != h0.rows() || k.cols() != l.rows())
        throw BadOperator("K must map the coupling space into the big space");
    if (k.cols() > k.rows()) throw BadOperator("coupling dimension exceeds the space dimension");
}

CMat PerturbationTriple::hl() const { return (h0 + k * l * k.adjoint()).herm(); }

CMat perturbed_mfunc(const PerturbationTriple& t, cplx z) {
    if (std::abs(z.imag()) < 1e-12)
        throw NearSingularResolvent("resolvent requested within 1e-12 of the real axis");
    CMat a = t.hl();
    const std::size_t n = a.rows();
    for (std::size_t i = 0; i < n; ++i) a(i, i) -= z;
    return t.k.adjoint() * lu_solve(a, t.k);
}

MatrixMeasure spectral_measure(const PerturbationTriple& t) {
    const HermEig eig = hermitian_eig(t.hl());
    const std::size_t n = t.n(), kd = t.coupling_dim();
    const double merge = default_tolerances().atom_merge;

    std::vector<MatrixAtom> atoms;
    std::size_t j = 0;
    while (j < n) {
        std::size_t j1 = j + 1;
        while (j1 < n && eig.values[j1] - eig.values[j1 - 1] <= merge) ++j1;
        // weight K* P K over the (possibly degenerate) eigenvalue cluster
        CMat kv(kd, j1 - j);
        for (std::size_t c = j; c < j1; ++c)
            for (std::size_t r = 0; r < kd; ++r) {
                cplx s = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    s += std::conj(t.k(i, r)) * eig.vectors(i, c);
                kv(r, c - j) = s;
            }
        atoms.push_back({eig.values[j], kv * kv.adjoint()});
        j = j1;
    }
    return MatrixMeasure(kd, std::move(atoms));
}

LftConsistencyReport lft_consistency(const PerturbationTriple& t1,
                                     const PerturbationTriple& t2,
                                     std::span<const cplx> grid) {
    if (t1.n() != t2.n() || t1.coupling_dim() != t2.coupling_dim())
        throw BadOperator("triples must share dimensions");
    if ((t1.h0 - t2.h0).frobenius() > 1e-12 * std::max(1.0, t1.h0.frobenius()) ||
        (t1.k - t2.k).frobenius() > 1e-12 * std::max(1.0, t1.k.frobenius()))
        throw BadOperator("triples must share H0 and K");

    const std::size_t kd = t1.coupling_dim();
    const CMat dl = t2.l - t1.l;
    const CMat eye = CMat::identity(kd);
    const JUnitary a = JUnitary::perturbation_pair(t1.l, t2.l);

    LftConsistencyReport rep{0.0, 0.0, 0.0, 0.0, a.j_residual()};
    for (cplx z : grid) {
        const CMat m1 = perturbed_mfunc(t1, z);
        const CMat m2 = perturbed_mfunc(t2, z);
        const CMat lhs = lft_apply(a, m1);
        rep.max_resid_product = std::max(rep.max_resid_product, (m2 - lhs).frobenius());

        const CMat transposed = lu_solve(eye + m1 * dl, m1);
        rep.max_resid_transposed = std::max(rep.max_resid_transposed, (m2 - transposed).frobenius());

        const CMat inv_a = dl * m2 - eye + inverse(dl * m1 + eye);
        const CMat inv_b = m2 * dl - eye + inverse(m1 * dl + eye);
        rep.max_resid_inverse_a = std::max(rep.max_resid_inverse_a, inv_a.frobenius());
        rep.max_resid_inverse_b = std::max(rep.max_resid_inverse_b, inv_b.frobenius());
    }
    return rep;
}

BoundedDecomposition decompose_bounded(const CMat& v, double rank_tol) {
    if (!v.is_hermitian(default_tolerances().hermitian))
        throw BadOperator("decomposition needs a Hermitian matrix");
    const HermEig eig = hermitian_eig(v);
    const std::size_t n = v.rows();
    double scale = 0.0;
    for (double lam : eig.values) scale = std::max(scale, std::abs(lam));

    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(eig.values[i]) > rank_tol * std::max(scale, 1e-300)) keep.push_back(i);

    BoundedDecomposition out;
    out.rank = keep.size();
    out.k0 = CMat(n, out.rank);
    out.l0 = CMat(out.rank, out.rank);
    for (std::size_t c = 0; c < keep.size(); ++c) {
        const double lam = eig.values[keep[c]];
        const double root = std::sqrt(std::abs(lam));
        for (std::size_t i = 0; i < n; ++i) out.k0(i, c) = root * eig.vectors(i, keep[c]);
        out.l0(c, c) = lam >= 0.0 ? 1.0 : -1.0;
    }
    return out;
}

CMat Dilation::mfunc(cplx z) const {
    const std::size_t kd = k.cols();
    CMat m(kd, kd);
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
        const cplx w = 1.0 / (eigenvalues[i] - z);
        for (std::size_t r = 0; r < kd; ++r)
            for (std::size_t c = 0; c < kd; ++c)
                m(r, c) += std::conj(k(i, r)) * w * k(i, c);
    }
    return m;
}

CMat Dilation::projected_mass(std::size_t atom_index) const {
    const std::size_t kd = k.cols();
    CMat m(kd, kd);
    const std::size_t lo = block_offset.at(atom_index);
    const std::size_t hi = lo + block_rank.at(atom_index);
    for (std::size_t i = lo; i < hi; ++i)
        for (std::size_t r = 0; r < kd; ++r)
            for (std::size_t c = 0; c < kd; ++c)
                m(r, c) += std::conj(k(i, r)) * k(i, c);
    return m;
}

Dilation naimark_dilate(const MatrixMeasure& omega) {
    const std::size_t kd = omega.dim();
    Dilation d;
    for (const MatrixAtom& atom : omega.atoms()) {
        const HermEig eig = hermitian_eig(atom.w);
        double scale = 0.0;
        for (double lam : eig.values) scale = std::max(scale, std::abs(lam));
        if (!eig.values.empty() &&
            eig.values.front() < -default_tolerances().psd_rel * std::max(scale, 1e-300))
            throw NotPSD("matrix weight is not PSD");

        d.block_offset.push_back(d.eigenvalues.size());
        std::size_t rank = 0;
        for (std::size_t c = 0; c < kd; ++c) {
            if (eig.values[c] <= 1e-14 * std::max(scale, 1e-300)) continue;
            ++rank;
            d.eigenvalues.push_back(atom.x);
        }
        d.block_rank.push_back(rank);
    }
    d.k = CMat(d.eigenvalues.size(), kd);
    std::size_t row = 0;
    for (const MatrixAtom& atom : omega.atoms()) {
        const HermEig eig = hermitian_eig(atom.w);
        double scale = 0.0;
        for (double lam : eig.values) scale = std::max(scale, std::abs(lam));
        for (std::size_t c = 0; c < kd; ++c) {
            if (eig.values[c] <= 1e-14 * std::max(scale, 1e-300)) continue;
            const double root = std::sqrt(eig.values[c]);
            // row of K = sqrt(σ) v*, so that K_j^* K_j reassembles W_j
            for (std::size_t j = 0; j < kd; ++j)
                d.k(row, j) = root * std::conj(eig.vectors(j, c));
            ++row;
        }
    }
    return d;
}

RealizationReport realize(const MatrixMeasure& omega) {
    RealizationReport rep{naimark_dilate(omega), 0.0};
    // verification grid: 20 points spread over both half-planes
    for (int i = 0; i < 20; ++i) {
        const double re = -4.0 + 8.0 * i / 19.0;
        const double im = (i % 2 == 0 ? 1.0 : -1.0) * (0.5 + 0.1 * i);
        const cplx z(re, im);
        CMat direct(omega.dim(), omega.dim());
        for (const MatrixAtom& a : omega.atoms()) {
            CMat w = a.w;
            w *= 1.0 / (a.x - z);
            direct += w;
        }
        rep.max_residual =
            std::max(rep.max_residual, (rep.dilation.mfunc(z) - direct).frobenius());
    }
    return rep;
}

std::size_t generating_rank(const CMat& h0, const CMat& k) {
    CMat zero(k.cols(), k.cols());
    const MatrixMeasure omega = spectral_measure(PerturbationTriple(h0, k, zero));
    std::size_t total = 0;
    for (const MatrixAtom& a : omega.atoms()) {
        const HermEig eig = hermitian_eig(a.w);
        double scale = 0.0;
        for (double lam : eig.values) scale = std::max(scale, std::abs(lam));
        for (double lam : eig.values)
            if (lam > 1e-10 * std::max(scale, 1e-300)) ++total;
    }
    return total;
}

ReducedModel reduce_to_generating_subspace(const CMat& h0, const CMat& k, double rank_tol) {
    const HermEig eig = hermitian_eig(h0);
    const std::size_t n = h0.rows(), kd = k.cols();

    // orthonormal basis of span{P_j K ξ}: per eigencluster, the left singular
    // directions of P_j K
    std::vector<std::vector<cplx>> basis;
    std::size_t j = 0;
    while (j < n) {
        std::size_t j1 = j + 1;
        while (j1 < n && eig.values[j1] - eig.values[j1 - 1] <= default_tolerances().atom_merge)
            ++j1;
        CMat vk(j1 - j, kd);   // V_cluster^* K
        for (std::size_t c = j; c < j1; ++c)
            for (std::size_t q = 0; q < kd; ++q) {
                cplx s = 0.0;
                for (std::size_t i = 0; i < n; ++i) s += std::conj(eig.vectors(i, c)) * k(i, q);
                vk(c - j, q) = s;
            }
        const HermEig gram = hermitian_eig(vk * vk.adjoint());
        double scale = 0.0;
        for (double lam : gram.values) scale = std::max(scale, std::abs(lam));
        for (std::size_t c = 0; c < gram.values.size(); ++c) {
            if (gram.values[c] <= rank_tol * std::max(scale, 1e-300)) continue;
            std::vector<cplx> vec(n, cplx(0.0));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t r = 0; r < j1 - j; ++r)
                    vec[i] += eig.vectors(i, j + r) * gram.vectors(r, c);
            basis.push_back(std::move(vec));
        }
        j = j1;
    }

    const std::size_t m = basis.size();
    CMat q(n, m);
    for (std::size_t c = 0; c < m; ++c)
        for (std::size_t i = 0; i < n; ++i) q(i, c) = basis[c][i];
    ReducedModel out;
    out.dim = m;
    out.h0 = (q.adjoint() * h0 * q).herm();
    out.k = q.adjoint() * k;
    return out;
}

} // namespace herglotz
