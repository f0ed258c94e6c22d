#include "devcorr/deviation.hpp"

#include <cmath>

#include "devcorr/errors.hpp"

namespace devcorr {

DeviationMatrix::DeviationMatrix() : mat_(4) {}

DeviationMatrix::DeviationMatrix(const ComplexMatrix& mat) : mat_(mat) {
    if (mat.dim() != 4) {
        throw InvalidInput("DeviationMatrix must be 4x4");
    }
    if (!mat.is_hermitian(kHermiticityTol)) {
        throw InvalidInput("DeviationMatrix is not Hermitian within 1e-12");
    }
    if (std::abs(mat.trace()) > kTraceTol) {
        throw TraceViolation("DeviationMatrix trace exceeds 1e-10");
    }
}

ComplexMatrix partial_trace(const ComplexMatrix& m, Party keep) {
    ComplexMatrix r(2);
    // index = 2a + b with a the A-qubit and b the B-qubit label
    if (keep == Party::A) {
        for (int a = 0; a < 2; ++a)
            for (int a2 = 0; a2 < 2; ++a2)
                for (int b = 0; b < 2; ++b) r(a, a2) += m(2 * a + b, 2 * a2 + b);
    } else {
        for (int b = 0; b < 2; ++b)
            for (int b2 = 0; b2 < 2; ++b2)
                for (int a = 0; a < 2; ++a) r(b, b2) += m(2 * a + b, 2 * a + b2);
    }
    return r;
}

ComplexMatrix partial_trace(const DeviationMatrix& d, Party keep) {
    return partial_trace(d.mat(), keep);
}

double trace_square(const ComplexMatrix& m) {
    double s = 0.0;
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) s += std::norm(m(i, j));
    return s;
}

double von_neumann_entropy(const ComplexMatrix& rho) {
    if (!rho.is_hermitian(kHermiticityTol)) {
        throw NonPhysicalState("von_neumann_entropy: input not Hermitian");
    }
    if (std::abs(rho.trace() - cplx(1.0)) > kTraceTol) {
        throw NonPhysicalState("von_neumann_entropy: trace deviates from 1");
    }
    const auto lambdas = hermitian_eigenvalues(rho);
    double s = 0.0;
    for (int i = 0; i < rho.dim(); ++i) {
        double lam = lambdas[i];
        if (lam < -kEigenClampTol) {
            throw NonPhysicalState("von_neumann_entropy: negative eigenvalue");
        }
        lam = std::min(std::max(lam, 0.0), 1.0);
        if (lam > 0.0) s -= lam * std::log2(lam);
    }
    return s;
}

ThermalState::ThermalState(double epsilon, DeviationMatrix deviation)
    : epsilon_(epsilon), deviation_(std::move(deviation)) {
    if (!(epsilon_ > 0.0)) {
        throw InvalidInput("ThermalState: epsilon must be positive");
    }
    const auto lambdas = hermitian_eigenvalues(density());
    if (lambdas[0] < -kEigenClampTol) {
        throw NonPhysicalState("ThermalState: 1/4 + eps*deviation is not PSD");
    }
}

ComplexMatrix ThermalState::density() const {
    ComplexMatrix rho = deviation_.mat();
    rho *= cplx(epsilon_);
    rho += 0.25 * ComplexMatrix::identity(4);
    return rho;
}

ComplexMatrix ThermalState::reduced_density(Party keep) const {
    ComplexMatrix r = partial_trace(deviation_, keep);
    r *= cplx(epsilon_);
    r += 0.5 * ComplexMatrix::identity(2);
    return r;
}

double entropy_expansion(const ThermalState& s) {
    const double e2 = s.epsilon() * s.epsilon();
    return 2.0 * (1.0 - e2 / M_LN2 * trace_square(s.deviation().mat()));
}

double entropy_expansion(const ThermalState& s, Party keep) {
    const double e2 = s.epsilon() * s.epsilon();
    return 1.0 - e2 / M_LN2 * trace_square(partial_trace(s.deviation(), keep));
}

double fidelity(const ComplexMatrix& ideal, const ComplexMatrix& prepared) {
    for (const ComplexMatrix* rho : {&ideal, &prepared}) {
        if (!rho->is_hermitian(kHermiticityTol) ||
            std::abs(rho->trace() - cplx(1.0)) > kTraceTol) {
            throw NonPhysicalState("fidelity: input is not a density matrix");
        }
    }
    const ComplexMatrix s = matrix_sqrt_psd(ideal, kEigenClampTol);
    const ComplexMatrix inner = s * prepared * s;
    const auto lambdas = hermitian_eigenvalues(inner);
    double f = 0.0;
    for (int i = 0; i < inner.dim(); ++i) {
        if (lambdas[i] < -kEigenClampTol) {
            throw NonPhysicalState("fidelity: non-PSD product");
        }
        if (lambdas[i] > kEigenClampTol) f += std::sqrt(lambdas[i]);
    }
    return std::min(f, 1.0);
}

}  // namespace devcorr
