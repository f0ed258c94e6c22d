#pragma once

#include <array>
#include <complex>

namespace devcorr {

using cplx = std::complex<double>;

// Dense complex matrix of runtime dimension 2 or 4, row-major storage.
// The four-level system never needs anything larger, so storage is a fixed
// 16-entry array and all operations are allocation-free.
class ComplexMatrix {
public:
    explicit ComplexMatrix(int dim);

    static ComplexMatrix zero(int dim) { return ComplexMatrix(dim); }
    static ComplexMatrix identity(int dim);

    int dim() const { return dim_; }

    cplx& operator()(int i, int j) { return a_[i * dim_ + j]; }
    const cplx& operator()(int i, int j) const { return a_[i * dim_ + j]; }

    ComplexMatrix adjoint() const;
    cplx trace() const;
    double frobenius_norm() const;
    double max_abs() const;
    double max_abs_diff(const ComplexMatrix& other) const;
    bool is_hermitian(double tol) const;

    // Symmetrize toward the Hermitian part, (M + M†)/2.
    void hermitize();

    ComplexMatrix& operator+=(const ComplexMatrix& rhs);
    ComplexMatrix& operator-=(const ComplexMatrix& rhs);
    ComplexMatrix& operator*=(cplx s);

private:
    int dim_;
    std::array<cplx, 16> a_{};
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(cplx s, ComplexMatrix m);
ComplexMatrix operator*(double s, ComplexMatrix m);

// Kronecker product of two 2x2 matrices; index convention (ab, a'b').
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// |v><v| for a vector given as dim entries.
ComplexMatrix outer(const cplx* v, int dim);

struct EigenSystem {
    int dim;
    std::array<double, 4> values;  // ascending, first `dim` entries used
    ComplexMatrix vectors;         // columns are the eigenvectors
};

// Cyclic Jacobi diagonalization for Hermitian matrices, convergence when the
// off-diagonal Frobenius mass drops below 1e-14 of the matrix scale.
// Deterministic sweep order, so results are identical across runs.
EigenSystem hermitian_eigensystem(const ComplexMatrix& m);
std::array<double, 4> hermitian_eigenvalues(const ComplexMatrix& m);

// Square root of a PSD Hermitian matrix; eigenvalues within `clamp_tol` of
// zero are clamped to zero, more negative ones raise NonPhysicalState.
ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& m, double clamp_tol = 1e-12);

}  // namespace devcorr
