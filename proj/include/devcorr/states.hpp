#pragma once

#include <array>
#include <cstdint>

#include "devcorr/deviation.hpp"

namespace devcorr {

// Spin-3/2 operators (hbar = 1) in the m = 3/2, 1/2, -1/2, -3/2 ordering,
// i.e. |00>, |01>, |10>, |11> of the effective two-qubit basis.
struct SpinOperators {
    ComplexMatrix Iz{4}, Ix{4}, Iy{4}, Isq{4};
    static SpinOperators make();
};

struct HamiltonianParams {
    double omega_L;  // Larmor angular frequency, rad/s
    double omega_Q;  // quadrupole angular frequency, rad/s

    // First-order treatment requires |omega_L| >> |omega_Q|.
    bool first_order_valid() const { return std::abs(omega_L) > std::abs(omega_Q); }
};

// Populations a..d and coherences e (inner, 12) and f (corner, 03) of an
// X-form deviation matrix. a+b+c+d must vanish within 1e-10.
struct XStateParams {
    double a, b, c, d;
    cplx e, f;
};

enum class BellState { PsiPlus, PsiMinus, PhiPlus, PhiMinus };

// alpha * (|psi><psi| - 1/4) for a normalized 4-component state vector.
DeviationMatrix pseudopure_from_state(const std::array<cplx, 4>& amplitudes, double alpha);

// Bell-basis pseudopure deviations; labels follow the level-structure
// convention Psi± = (|00> ± |11>)/sqrt2, Phi± = (|01> ± |10>)/sqrt2.
DeviationMatrix bell_pseudopure(BellState which, double alpha = 1.0);

// Deviation with diagonal (a,b,c,d) and anti-diagonal (f,e,e*,f*).
DeviationMatrix x_pseudopure(const XStateParams& p);

// Pseudopure projector onto |ab>, a,b in {0,1}.
DeviationMatrix computational_pseudopure(int a, int b, double alpha = 1.0);

// Random pure X-form pseudopure state: one of the two anti-diagonal
// sectors ({|00>,|11>} or {|01>,|10>}) is chosen from the seed and two
// complex Gaussian amplitudes are drawn in it. Deterministic per seed.
DeviationMatrix random_x(std::uint64_t seed, double alpha = 1.0);

// Thermal-equilibrium deviation 2*Iz = diag(3, 1, -1, -3).
DeviationMatrix equilibrium_deviation();

// Angular frequencies of the three single-quantum transitions,
// {omega_L - 6 omega_Q, omega_L, omega_L + 6 omega_Q} sorted ascending.
std::array<double, 3> transition_frequencies(const HamiltonianParams& h);

}  // namespace devcorr
