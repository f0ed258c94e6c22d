#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "devcorr/formats.hpp"

namespace devcorr {

struct ExpFitResult {
    double amplitude = 0.0;
    double rate = 0.0;    // s^-1
    double offset = 0.0;
    double residual_rms = 0.0;
    double amplitude_sigma = 0.0;
    double rate_sigma = 0.0;
    double offset_sigma = 0.0;  // zero when the offset was held fixed
};

struct ComplexExpFitResult {
    cplx amplitude = 0.0;
    double rate = 0.0;
    double residual_rms = 0.0;
    double rate_sigma = 0.0;
};

// The six single-exponential element combinations of an evolving deviation
// matrix. The second coherence combination is d02 + d13 with amplitude
// d02(0) + d13(0); together with d01 + d23 and d12 these decay at
// C(J0+J2), C(J0+J1) and C(J1+J2). The population combinations carry fixed
// offsets 8, 0, 4 and amplitudes R2, R1, R3 with rates 2CJ2, 2C(J1+J2), 2CJ1.
struct CombinationSeries {
    std::vector<double> t;
    std::vector<cplx> coh_01_23;   // offset 0, rate C(J0+J1)
    std::vector<cplx> coh_02_13;   // offset 0, rate C(J0+J2)
    std::vector<cplx> coh_12;      // offset 0, rate C(J1+J2)
    std::vector<double> pop_r2;    // offset 8, rate 2CJ2, amplitude R2
    std::vector<double> pop_r1;    // offset 0, rate 2C(J1+J2), amplitude R1
    std::vector<double> pop_r3;    // offset 4, rate 2CJ1, amplitude R3
};

CombinationSeries combinations(const std::vector<TimePoint>& series);

// Least-squares fit of offset + amplitude * exp(-rate * t). A supplied
// known_offset is held fixed; otherwise the offset is a free parameter
// initialized from the signal tail. Initialization is log-linear regression
// on the offset-subtracted data, refinement damped Gauss-Newton with
// relative parameter tolerance 1e-10 and a 200-iteration cap.
// Throws DegenerateSignal when no decaying component is identifiable and
// FitDivergence when the refinement fails.
ExpFitResult fit_exponential(const std::vector<double>& t, const std::vector<double>& y,
                             std::optional<double> known_offset);

// Same model with a complex amplitude: real and imaginary parts are fitted
// jointly with a shared rate (offset fixed at zero).
ComplexExpFitResult fit_exponential_complex(const std::vector<double>& t,
                                            const std::vector<cplx>& y);

struct FitReport {
    double J0 = 0.0, J1 = 0.0, J2 = 0.0;             // seconds
    double J0_sigma = 0.0, J1_sigma = 0.0, J2_sigma = 0.0;
    double R1 = 0.0, R2 = 0.0, R3 = 0.0;
    double R1_sigma = 0.0, R2_sigma = 0.0, R3_sigma = 0.0;
    // Population-derived J1, J2 (the reported J's come from the coherences).
    double J1_populations = 0.0, J2_populations = 0.0;
    // Largest relative difference between the two (J1, J2) determinations.
    double consistency_gap = 0.0;
    bool consistency_ok = true;
};

// Recovers the spectral densities and R amplitudes from a deviation-matrix
// time series given the coupling constant C. J0, J1, J2 are solved from the
// three coherence rates; the population fits provide the R amplitudes and an
// independent (J1, J2) consistency check. Exceeding the consistency
// threshold only flags the report unless strict_consistency is set.
FitReport estimate_parameters(const std::vector<TimePoint>& series, double C,
                              double consistency_threshold = 0.25,
                              bool strict_consistency = false);

// Adds independent Gaussian noise (sigma) to every real and imaginary
// component, then restores hermiticity by averaging with the conjugate
// transpose and re-zeros the trace. Deterministic per seed.
std::vector<TimePoint> add_noise(const std::vector<TimePoint>& series, double sigma,
                                 std::uint64_t seed);

std::string serialize_fit_report(const FitReport& r, double C, double threshold);

}  // namespace devcorr
