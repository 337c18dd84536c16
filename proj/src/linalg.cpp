#include "herglotz/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "herglotz/errors.hpp"

namespace herglotz {

CMat::CMat(std::size_t r, std::size_t c, std::initializer_list<cplx> entries)
    : rows_(r), cols_(c), a_(entries) {
    if (a_.size() != r * c) throw BadOperator("matrix initializer size mismatch");
}

CMat CMat::identity(std::size_t n) {
    CMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMat CMat::adjoint() const {
    CMat m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

CMat& CMat::operator+=(const CMat& b) {
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += b.a_[k];
    return *this;
}

CMat& CMat::operator-=(const CMat& b) {
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= b.a_[k];
    return *this;
}

CMat& CMat::operator*=(cplx s) {
    for (auto& v : a_) v *= s;
    return *this;
}

double CMat::frobenius() const {
    double s = 0.0;
    for (const auto& v : a_) s += std::norm(v);
    return std::sqrt(s);
}

double CMat::max_abs() const {
    double m = 0.0;
    for (const auto& v : a_) m = std::max(m, std::abs(v));
    return m;
}

bool CMat::is_hermitian(double tol) const {
    if (rows_ != cols_) return false;
    double scale = std::max(1.0, max_abs());
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i; j < cols_; ++j)
            if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol * scale) return false;
    return true;
}

CMat CMat::herm() const {
    CMat m(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            m(i, j) = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
    return m;
}

CMat CMat::imag_part() const {
    CMat m(rows_, cols_);
    const cplx half_over_i(0.0, -0.5);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            m(i, j) = half_over_i * ((*this)(i, j) - std::conj((*this)(j, i)));
    return m;
}

CMat operator+(CMat a, const CMat& b) { a += b; return a; }
CMat operator-(CMat a, const CMat& b) { a -= b; return a; }

CMat operator*(const CMat& a, const CMat& b) {
    if (a.cols() != b.rows()) throw BadOperator("matrix product shape mismatch");
    CMat c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx(0.0)) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

CMat operator*(cplx s, CMat a) { a *= s; return a; }

HermEig hermitian_eig(const CMat& a_in) {
    if (a_in.rows() != a_in.cols())
        throw EigensolverFailure("eigendecomposition needs a square matrix");
    const std::size_t n = a_in.rows();
    CMat a = a_in.herm();   // symmetrize floating-point noise away
    CMat v = CMat::identity(n);

    auto off_norm2 = [&]() {
        double s = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) s += std::norm(a(p, q));
        return s;
    };

    const double scale = std::max(1.0, a.frobenius());
    const double stop = 1e-30 * scale * scale;
    const int max_sweeps = 64;

    int sweep = 0;
    while (off_norm2() > stop) {
        if (++sweep > max_sweeps)
            throw EigensolverFailure("Jacobi iteration did not converge");
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double r = std::abs(apq);
                if (r <= 1e-300) continue;
                // phase factor making a(p,q) real, then a real rotation
                const cplx e = apq / r;
                const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * r);
                double t;
                if (tau >= 0.0)
                    t = 1.0 / (tau + std::hypot(1.0, tau));
                else
                    t = -1.0 / (-tau + std::hypot(1.0, tau));
                const double c = 1.0 / std::hypot(1.0, t);
                const double s = t * c;
                // columns: G_pp = c, G_pq = s, G_qp = -s conj(e)... combined
                // unitary U = diag(1, conj(e)) * R(c, s) acting on (p, q)
                for (std::size_t i = 0; i < n; ++i) {
                    const cplx aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * (std::conj(e) * aiq);
                    a(i, q) = s * (e * aip) + c * aiq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const cplx apj = a(p, j), aqj = a(q, j);
                    a(p, j) = c * apj - s * (e * aqj);
                    a(q, j) = s * (std::conj(e) * apj) + c * aqj;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const cplx vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - s * (std::conj(e) * viq);
                    v(i, q) = s * (e * vip) + c * viq;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    HermEig out;
    out.values.resize(n);
    out.vectors = CMat(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = a(order[j], order[j]).real();
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
    }
    return out;
}

CMat lu_solve(const CMat& a_in, const CMat& b_in) {
    if (a_in.rows() != a_in.cols() || a_in.rows() != b_in.rows())
        throw BadOperator("lu_solve shape mismatch");
    const std::size_t n = a_in.rows(), m = b_in.cols();
    CMat a = a_in;
    CMat b = b_in;

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > best) { best = std::abs(a(i, k)); piv = i; }
        if (best < 1e-300) throw SingularMatrix("singular matrix in lu_solve");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            for (std::size_t j = 0; j < m; ++j) std::swap(b(k, j), b(piv, j));
        }
        const cplx inv = 1.0 / a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx f = a(i, k) * inv;
            if (f == cplx(0.0)) continue;
            a(i, k) = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
            for (std::size_t j = 0; j < m; ++j) b(i, j) -= f * b(k, j);
        }
    }
    for (std::size_t kk = n; kk-- > 0;) {
        const cplx inv = 1.0 / a(kk, kk);
        for (std::size_t j = 0; j < m; ++j) {
            cplx s = b(kk, j);
            for (std::size_t i = kk + 1; i < n; ++i) s -= a(kk, i) * b(i, j);
            b(kk, j) = s * inv;
        }
    }
    return b;
}

CMat inverse(const CMat& a) { return lu_solve(a, CMat::identity(a.rows())); }

double cond_fro(const CMat& a) {
    try {
        return a.frobenius() * inverse(a).frobenius();
    } catch (const SingularMatrix&) {
        return std::numeric_limits<double>::infinity();
    }
}

double min_eigenvalue_hermitian(const CMat& a) {
    if (a.rows() == 0) return 0.0;
    return hermitian_eig(a).values.front();
}

CMat psd_sqrt(const CMat& w, double clip_rel) {
    HermEig e = hermitian_eig(w);
    const std::size_t n = w.rows();
    double norm = 0.0;
    for (double lam : e.values) norm = std::max(norm, std::abs(lam));
    CMat root(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        double lam = e.values[k];
        if (lam < -clip_rel * std::max(norm, 1e-300))
            throw NotPSD("matrix has a negative eigenvalue beyond tolerance");
        lam = std::max(lam, 0.0);
        const double s = std::sqrt(lam);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                root(i, j) += s * e.vectors(i, k) * std::conj(e.vectors(j, k));
    }
    return root;
}

} // namespace herglotz
