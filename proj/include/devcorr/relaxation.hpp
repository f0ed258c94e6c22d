#pragma once

#include <vector>

#include "devcorr/formats.hpp"

namespace devcorr {

struct RelaxationParams {
    double C;   // quadrupolar coupling strength, s^-2
    double J0;  // reduced spectral densities, s
    double J1;
    double J2;

    void validate() const;
};

// Constant amplitudes of the three population exponentials, fixed by the
// initial populations:
//   R1 = -d00 + d11 + d22 - d33
//   R2 =  d00 + d11 - d22 - d33 - 8
//   R3 =  d00 - d11 + d22 - d33 - 4
struct RCoefficients {
    double R1, R2, R3;
};

struct TimeConstants {
    double tau_L1;  // 1 / (2 C J1)
    double tau_L2;  // 1 / (2 C J2)
    double tau_T;   // 1 / (C (J1 + J2))
};

RCoefficients r_coefficients(const DeviationMatrix& d0);

// Closed-form evolution of the deviation matrix under pure quadrupolar
// relaxation. The upper-triangle coherences and the populations follow the
// exact single-generator solutions; the lower triangle is fixed by
// hermiticity. Equilibrium diag(3,1,-1,-3) is the fixed point.
DeviationMatrix evolve(const DeviationMatrix& d0, const RelaxationParams& p, double t);

// Points (k*dt, evolve(d0, k*dt)) for k = 1..n, emitted in index order.
// Points are independent closed-form evaluations, so the parallel and the
// serial path produce bit-identical series.
std::vector<TimePoint> time_series(const DeviationMatrix& d0, const RelaxationParams& p,
                                   double dt, int n, bool parallel = true);

// <Iz> = Tr(Iz * d) = sum_m m * d_mm; equals 10 at equilibrium.
double longitudinal_magnetization(const DeviationMatrix& d);

struct TransverseMagnetization {
    cplx central;  // 2 * d_21, the central-coherence form
    cplx full;     // Tr((Ix + i Iy) * d), includes the sqrt(3)-weighted outer coherences
};
TransverseMagnetization transverse_magnetization(const DeviationMatrix& d);

TimeConstants time_constants(const RelaxationParams& p);

}  // namespace devcorr
