#include "devcorr/states.hpp"

#include <algorithm>
#include <cmath>

#include "devcorr/errors.hpp"
#include "devcorr/rng.hpp"

namespace devcorr {

SpinOperators SpinOperators::make() {
    SpinOperators ops;
    const double m[4] = {1.5, 0.5, -0.5, -1.5};
    for (int i = 0; i < 4; ++i) ops.Iz(i, i) = m[i];

    // I+|m> = sqrt(I(I+1) - m(m+1)) |m+1>; rows are ordered by descending m.
    ComplexMatrix iplus(4);
    for (int k = 1; k < 4; ++k) {
        const double mm = m[k];
        iplus(k - 1, k) = std::sqrt(15.0 / 4.0 - mm * (mm + 1.0));
    }
    const ComplexMatrix iminus = iplus.adjoint();
    ops.Ix = 0.5 * (iplus + iminus);
    ops.Iy = cplx(0.0, -0.5) * (iplus - iminus);
    ops.Isq = ops.Ix * ops.Ix + ops.Iy * ops.Iy + ops.Iz * ops.Iz;
    return ops;
}

DeviationMatrix pseudopure_from_state(const std::array<cplx, 4>& amplitudes, double alpha) {
    if (alpha == 0.0) throw InvalidInput("pseudopure scale alpha must be nonzero");
    double norm2 = 0.0;
    for (const cplx& c : amplitudes) norm2 += std::norm(c);
    if (norm2 <= 0.0) throw InvalidInput("pseudopure state vector is zero");
    std::array<cplx, 4> psi = amplitudes;
    const double inv = 1.0 / std::sqrt(norm2);
    for (cplx& c : psi) c *= inv;

    ComplexMatrix m = outer(psi.data(), 4);
    m -= 0.25 * ComplexMatrix::identity(4);
    m *= cplx(alpha);
    m.hermitize();
    return DeviationMatrix(m);
}

DeviationMatrix bell_pseudopure(BellState which, double alpha) {
    const double s = 1.0 / std::sqrt(2.0);
    std::array<cplx, 4> psi{};
    switch (which) {
        case BellState::PsiPlus:
            psi[0] = s;
            psi[3] = s;
            break;
        case BellState::PsiMinus:
            psi[0] = s;
            psi[3] = -s;
            break;
        case BellState::PhiPlus:
            psi[1] = s;
            psi[2] = s;
            break;
        case BellState::PhiMinus:
            psi[1] = s;
            psi[2] = -s;
            break;
    }
    return pseudopure_from_state(psi, alpha);
}

DeviationMatrix x_pseudopure(const XStateParams& p) {
    if (std::abs(p.a + p.b + p.c + p.d) > kTraceTol) {
        throw TraceViolation("x_pseudopure: populations must sum to zero");
    }
    ComplexMatrix m(4);
    m(0, 0) = p.a;
    m(1, 1) = p.b;
    m(2, 2) = p.c;
    m(3, 3) = p.d;
    m(0, 3) = p.f;
    m(3, 0) = std::conj(p.f);
    m(1, 2) = p.e;
    m(2, 1) = std::conj(p.e);
    return DeviationMatrix(m);
}

DeviationMatrix computational_pseudopure(int a, int b, double alpha) {
    if ((a != 0 && a != 1) || (b != 0 && b != 1)) {
        throw InvalidInput("computational_pseudopure: qubit labels must be 0 or 1");
    }
    std::array<cplx, 4> psi{};
    psi[2 * a + b] = 1.0;
    return pseudopure_from_state(psi, alpha);
}

DeviationMatrix random_x(std::uint64_t seed, double alpha) {
    Rng rng(seed);
    const bool corner_sector = (rng.bits() & 1u) == 0;  // {|00>,|11>} vs {|01>,|10>}
    cplx c1 = rng.normal_complex();
    cplx c2 = rng.normal_complex();
    if (std::norm(c1) + std::norm(c2) < 1e-24) {
        c1 = 1.0;  // astronomically unlikely, but keeps the draw total
    }
    std::array<cplx, 4> psi{};
    if (corner_sector) {
        psi[0] = c1;
        psi[3] = c2;
    } else {
        psi[1] = c1;
        psi[2] = c2;
    }
    return pseudopure_from_state(psi, alpha);
}

DeviationMatrix equilibrium_deviation() {
    ComplexMatrix m(4);
    m(0, 0) = 3.0;
    m(1, 1) = 1.0;
    m(2, 2) = -1.0;
    m(3, 3) = -3.0;
    return DeviationMatrix(m);
}

std::array<double, 3> transition_frequencies(const HamiltonianParams& h) {
    std::array<double, 3> f{h.omega_L - 6.0 * h.omega_Q, h.omega_L,
                            h.omega_L + 6.0 * h.omega_Q};
    std::sort(f.begin(), f.end());
    return f;
}

}  // namespace devcorr
