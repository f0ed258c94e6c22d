#pragma once

// Seeded random objects shared by the unit and acceptance tests.

#include <cmath>

#include "devcorr/deviation.hpp"
#include "devcorr/rng.hpp"
#include "devcorr/states.hpp"

namespace devcorr::testsup {

// Random traceless Hermitian 4x4, Frobenius-normalized so that
// 1/4 + eps*d stays PSD for eps up to ~0.2.
inline DeviationMatrix random_deviation(Rng& rng) {
    ComplexMatrix m(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m(i, j) = rng.normal_complex();
    m.hermitize();
    const cplx tr = m.trace();
    for (int i = 0; i < 4; ++i) m(i, i) -= 0.25 * tr;
    const double norm = m.frobenius_norm();
    if (norm > 0) m *= cplx(1.0 / norm);
    return DeviationMatrix(m);
}

// Haar-ish random unitary via Gram-Schmidt on a Gaussian matrix.
inline ComplexMatrix random_unitary(Rng& rng, int dim) {
    ComplexMatrix g(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = rng.normal_complex();
    for (int c = 0; c < dim; ++c) {
        for (int prev = 0; prev < c; ++prev) {
            cplx dot = 0.0;
            for (int k = 0; k < dim; ++k) dot += std::conj(g(k, prev)) * g(k, c);
            for (int k = 0; k < dim; ++k) g(k, c) -= dot * g(k, prev);
        }
        double norm = 0.0;
        for (int k = 0; k < dim; ++k) norm += std::norm(g(k, c));
        norm = std::sqrt(norm);
        for (int k = 0; k < dim; ++k) g(k, c) /= norm;
    }
    return g;
}

// Random single-qubit density matrix 1/2 + r n.sigma with r < 1/2.
inline ComplexMatrix random_qubit_density(Rng& rng) {
    const double r = 0.45 * rng.uniform();
    const double ct = 2.0 * rng.uniform() - 1.0;
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    const double ph = rng.uniform(0.0, 2.0 * M_PI);
    ComplexMatrix m(2);
    m(0, 0) = 0.5 + r * ct;
    m(1, 1) = 0.5 - r * ct;
    m(0, 1) = r * st * cplx(std::cos(ph), -std::sin(ph));
    m(1, 0) = std::conj(m(0, 1));
    return m;
}

// Pure-state pseudopure deviation for a weighted superposition with all six
// element combinations nonzero; the input of choice for fit roundtrips.
// The scale keeps the elements of order one, like the equilibrium deviation.
inline DeviationMatrix full_superposition_state(double alpha = 3.0) {
    return pseudopure_from_state({cplx(1.0), cplx(1.4), cplx(0.6), cplx(0.9)}, alpha);
}

}  // namespace devcorr::testsup
