#include "devcorr/complex_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "devcorr/errors.hpp"

namespace devcorr {

ComplexMatrix::ComplexMatrix(int dim) : dim_(dim) {
    if (dim != 2 && dim != 4) {
        throw InvalidInput("ComplexMatrix dimension must be 2 or 4");
    }
}

ComplexMatrix ComplexMatrix::identity(int dim) {
    ComplexMatrix m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix r(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) r(i, j) = std::conj((*this)(j, i));
    return r;
}

cplx ComplexMatrix::trace() const {
    cplx t = 0.0;
    for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (int i = 0; i < dim_ * dim_; ++i) s += std::norm(a_[i]);
    return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (int i = 0; i < dim_ * dim_; ++i) m = std::max(m, std::abs(a_[i]));
    return m;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& other) const {
    double m = 0.0;
    for (int i = 0; i < dim_ * dim_; ++i) m = std::max(m, std::abs(a_[i] - other.a_[i]));
    return m;
}

bool ComplexMatrix::is_hermitian(double tol) const {
    for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j)
            if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
    return true;
}

void ComplexMatrix::hermitize() {
    for (int i = 0; i < dim_; ++i) {
        (*this)(i, i) = cplx((*this)(i, i).real(), 0.0);
        for (int j = i + 1; j < dim_; ++j) {
            const cplx avg = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
            (*this)(i, j) = avg;
            (*this)(j, i) = std::conj(avg);
        }
    }
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
    for (int i = 0; i < dim_ * dim_; ++i) a_[i] += rhs.a_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
    for (int i = 0; i < dim_ * dim_; ++i) a_[i] -= rhs.a_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    for (int i = 0; i < dim_ * dim_; ++i) a_[i] *= s;
    return *this;
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
    const int n = lhs.dim();
    ComplexMatrix r(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const cplx lik = lhs(i, k);
            if (lik == cplx(0.0)) continue;
            for (int j = 0; j < n; ++j) r(i, j) += lik * rhs(k, j);
        }
    return r;
}

ComplexMatrix operator*(cplx s, ComplexMatrix m) { return m *= s; }
ComplexMatrix operator*(double s, ComplexMatrix m) { return m *= cplx(s, 0.0); }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix r(4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) r(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
    return r;
}

ComplexMatrix outer(const cplx* v, int dim) {
    ComplexMatrix r(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) r(i, j) = v[i] * std::conj(v[j]);
    return r;
}

EigenSystem hermitian_eigensystem(const ComplexMatrix& m) {
    const int n = m.dim();
    ComplexMatrix a = m;
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double scale = a.frobenius_norm();
    const double off_tol = 1e-14 * std::max(scale, 1e-300);
    constexpr int max_sweeps = 60;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += std::norm(a(i, j));
        if (std::sqrt(off) <= off_tol) break;

        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double r = std::abs(a(p, q));
                if (r <= 1e-2 * off_tol) {
                    a(p, q) = a(q, p) = 0.0;
                    continue;
                }
                // Absorb the pivot phase so the 2x2 subproblem is real:
                // column q scaled by dq, row q by conj(dq).
                const cplx dq = std::conj(a(p, q)) / r;
                for (int k = 0; k < n; ++k) a(k, q) *= dq;
                for (int k = 0; k < n; ++k) a(q, k) *= std::conj(dq);
                for (int k = 0; k < n; ++k) v(k, q) *= dq;

                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * r);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                for (int k = 0; k < n; ++k) {  // A <- A J
                    const cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {  // A <- J^T A
                    const cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const cplx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
                a(p, q) = a(q, p) = 0.0;
            }
        }
    }

    EigenSystem sys{n, {}, ComplexMatrix(n)};
    std::array<int, 4> order{};
    std::iota(order.begin(), order.begin() + n, 0);
    std::stable_sort(order.begin(), order.begin() + n,
                     [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });
    for (int c = 0; c < n; ++c) {
        sys.values[c] = a(order[c], order[c]).real();
        for (int k = 0; k < n; ++k) sys.vectors(k, c) = v(k, order[c]);
    }
    return sys;
}

std::array<double, 4> hermitian_eigenvalues(const ComplexMatrix& m) {
    return hermitian_eigensystem(m).values;
}

ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& m, double clamp_tol) {
    const EigenSystem sys = hermitian_eigensystem(m);
    const int n = m.dim();
    ComplexMatrix r(n);
    for (int c = 0; c < n; ++c) {
        double lam = sys.values[c];
        if (lam < -clamp_tol) {
            throw NonPhysicalState("matrix_sqrt_psd: eigenvalue below -tolerance");
        }
        // Eigenvalues within the tolerance of zero are rank noise; the square
        // root would amplify them to sqrt(eps)-sized artifacts.
        lam = lam <= clamp_tol ? 0.0 : std::sqrt(lam);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                r(i, j) += lam * sys.vectors(i, c) * std::conj(sys.vectors(j, c));
    }
    return r;
}

}  // namespace devcorr
