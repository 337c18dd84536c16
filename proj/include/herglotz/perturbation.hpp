#pragma once

#include <span>
#include <vector>

#include "herglotz/herglotz.hpp"
#include "herglotz/linalg.hpp"
#include "herglotz/measure.hpp"

namespace herglotz {

/// (H0, K, L) with H0 n x n Hermitian, K n x k, L k x k Hermitian:
/// the data of the additively perturbed operator H_L = H0 + K L K*.
struct PerturbationTriple {
    CMat h0;
    CMat k;
    CMat l;

    PerturbationTriple(CMat h0_, CMat k_, CMat l_);

    std::size_t n() const { return h0.rows(); }
    std::size_t coupling_dim() const { return k.cols(); }
    CMat hl() const;   // H0 + K L K*
};

/// M_L(z) = K^*(H_L - z)^{-1} K via a pivoted linear solve (the spectral
/// sum over eigenprojections is kept separate as the test oracle).
CMat perturbed_mfunc(const PerturbationTriple& t, cplx z);

/// Atoms at the eigenvalues of H_L (merged within 1e-10) with weights
/// K^* P_j K; the total mass is K^* K.
MatrixMeasure spectral_measure(const PerturbationTriple& t);

struct LftConsistencyReport {
    double max_resid_product;     // M2 - M1 (I + ΔL M1)^{-1}
    double max_resid_transposed;  // M2 - (I + M1 ΔL)^{-1} M1
    double max_resid_inverse_a;   // ΔL M2 - I + (ΔL M1 + I)^{-1}
    double max_resid_inverse_b;   // M2 ΔL - I + (M1 ΔL + I)^{-1}
    double junitary_residual;     // of the block matrix [[I, ΔL],[0, I]]
};

/// Check the linear fractional identities between two perturbations that
/// share (H0, K), on a grid of off-axis points.
LftConsistencyReport lft_consistency(const PerturbationTriple& t1,
                                     const PerturbationTriple& t2,
                                     std::span<const cplx> grid);

/// Factor a Hermitian V as K0 L0 K0^* on its range: K0 = |V0|^{1/2},
/// L0 = sgn(V0), both acting on ran(V) of dimension `rank`.
struct BoundedDecomposition {
    CMat k0;            // n x rank
    CMat l0;            // rank x rank, diag(+-1)
    std::size_t rank;
};
BoundedDecomposition decompose_bounded(const CMat& v, double rank_tol = 1e-10);

/// Minimal orthogonal dilation of a finitely supported PSD matrix measure:
/// H block-diagonal with λ_j I on a block of dimension rank(W_j), K the
/// stacked PSD square-root rows, so that K^* E({λ_j}) K = W_j.
struct Dilation {
    std::vector<double> eigenvalues;   // length N, grouped by atom
    CMat k;                            // N x dim
    std::vector<std::size_t> block_offset;   // per atom
    std::vector<std::size_t> block_rank;     // per atom

    std::size_t space_dim() const { return eigenvalues.size(); }
    CMat mfunc(cplx z) const;          // K^*(H - z)^{-1} K
    CMat projected_mass(std::size_t atom_index) const;   // K^* E({λ_j}) K
};

Dilation naimark_dilate(const MatrixMeasure& omega);

struct RealizationReport {
    Dilation dilation;
    double max_residual;   // sup over the verification grid of ||K*(H-z)^{-1}K - M_Ω(z)||
};

/// Realize the plain-kernel Herglotz function of a finitely supported
/// measure as K^*(H - z)^{-1} K and verify on a 20-point grid.
RealizationReport realize(const MatrixMeasure& omega);

/// Dimension of span{E0(λ_j) K e_n} = Σ_j rank(K^* P_j K); equals n exactly
/// when K generates the space for H0.
std::size_t generating_rank(const CMat& h0, const CMat& k);

/// Reduction of (H0, K) onto the generating subspace; M_L is unchanged.
struct ReducedModel {
    CMat h0;
    CMat k;
    std::size_t dim;
};
ReducedModel reduce_to_generating_subspace(const CMat& h0, const CMat& k,
                                           double rank_tol = 1e-10);

} // namespace herglotz
