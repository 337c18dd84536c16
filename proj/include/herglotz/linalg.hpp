#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace herglotz {

using cplx = std::complex<double>;

/// Dense complex matrix, row-major. Sized for the small operators this
/// library manipulates (k <= 3 coupling spaces, dilations of a few dozen
/// rows); everything is O(n^3) direct arithmetic.
class CMat {
public:
    CMat() : rows_(0), cols_(0) {}
    CMat(std::size_t r, std::size_t c) : rows_(r), cols_(c), a_(r * c, cplx(0.0)) {}
    CMat(std::size_t r, std::size_t c, std::initializer_list<cplx> entries);

    static CMat identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return a_.empty(); }

    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    CMat adjoint() const;

    CMat& operator+=(const CMat& b);
    CMat& operator-=(const CMat& b);
    CMat& operator*=(cplx s);

    double frobenius() const;
    double max_abs() const;
    bool is_hermitian(double tol) const;

    /// Hermitian part (A + A*)/2.
    CMat herm() const;
    /// Skew part (A - A*)/(2i); Hermitian when A is arbitrary.
    CMat imag_part() const;

private:
    std::size_t rows_, cols_;
    std::vector<cplx> a_;
};

CMat operator+(CMat a, const CMat& b);
CMat operator-(CMat a, const CMat& b);
CMat operator*(const CMat& a, const CMat& b);
CMat operator*(cplx s, CMat a);

/// Result of a Hermitian eigendecomposition: A = V diag(values) V*,
/// eigenvalues ascending, V unitary with eigenvectors in columns.
struct HermEig {
    std::vector<double> values;
    CMat vectors;
};

/// Cyclic complex Jacobi iteration. Deterministic sweep order; throws
/// EigensolverFailure if the off-diagonal norm fails to collapse.
HermEig hermitian_eig(const CMat& a);

/// Solve A X = B by LU with partial pivoting. Throws SingularMatrix.
CMat lu_solve(const CMat& a, const CMat& b);

CMat inverse(const CMat& a);

/// Frobenius condition estimate ||A||_F ||A^-1||_F (infinity if singular).
double cond_fro(const CMat& a);

double min_eigenvalue_hermitian(const CMat& a);

/// PSD square root via eigendecomposition. Eigenvalues in
/// [-clip_rel*||W||, 0) are clamped to zero; anything lower throws NotPSD.
CMat psd_sqrt(const CMat& w, double clip_rel = 1e-10);

} // namespace herglotz
