#pragma once

#include "devcorr/complex_matrix.hpp"

namespace devcorr {

enum class Party { A, B };

// Tolerances shared by validation and the text-format parser.
inline constexpr double kHermiticityTol = 1e-12;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kEigenClampTol = 1e-12;

// Traceless Hermitian 4x4 deviation matrix; the carrier of all state
// information. Basis order is |00>, |01>, |10>, |11> (first qubit A,
// second qubit B), matching the m = 3/2 ... -3/2 level indexing.
class DeviationMatrix {
public:
    DeviationMatrix();  // zero matrix

    // Validates hermiticity (1e-12) and tracelessness (1e-10).
    explicit DeviationMatrix(const ComplexMatrix& mat);

    const ComplexMatrix& mat() const { return mat_; }
    cplx operator()(int i, int j) const { return mat_(i, j); }

private:
    ComplexMatrix mat_;
};

// Reduced deviation of the KEPT party (the other one is traced out).
ComplexMatrix partial_trace(const DeviationMatrix& d, Party keep);
ComplexMatrix partial_trace(const ComplexMatrix& m, Party keep);

// Tr(m^2) for Hermitian m; equals the squared Frobenius norm, so it is
// exactly real and nonnegative.
double trace_square(const ComplexMatrix& m);

// S(rho) = -Tr(rho log2 rho) in bits. Requires Hermitian, PSD within
// 1e-12 and unit trace within 1e-10; eigenvalues within 1e-12 of the
// [0,1] boundary are clamped.
double von_neumann_entropy(const ComplexMatrix& rho);

// High-temperature state rho = 1/4 + eps * deviation.
class ThermalState {
public:
    // Validates eps > 0 and positive semidefiniteness of the
    // reconstructed density matrix (smallest eigenvalue >= -1e-12).
    ThermalState(double epsilon, DeviationMatrix deviation);

    double epsilon() const { return epsilon_; }
    const DeviationMatrix& deviation() const { return deviation_; }

    ComplexMatrix density() const;                 // 1/4 + eps*dev
    ComplexMatrix reduced_density(Party keep) const;  // 1/2 + eps*dev_k

private:
    double epsilon_;
    DeviationMatrix deviation_;
};

// Second-order entropy expansions, in bits:
//   full system:  2 (1 - eps^2/ln2 * Tr d^2)
//   one marginal: 1 - eps^2/ln2 * Tr d_k^2
double entropy_expansion(const ThermalState& s);
double entropy_expansion(const ThermalState& s, Party keep);

// Uhlmann fidelity Tr[(sqrt(r1) r2 sqrt(r1))^(1/2)], symmetric, in [0,1].
double fidelity(const ComplexMatrix& ideal, const ComplexMatrix& prepared);

}  // namespace devcorr
