#include "devcorr/relaxation.hpp"

#include <cmath>

#include "devcorr/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace devcorr {

void RelaxationParams::validate() const {
    if (!(C > 0.0)) throw InvalidInput("RelaxationParams: C must be positive");
    if (J0 < 0.0 || J1 < 0.0 || J2 < 0.0) {
        throw InvalidInput("RelaxationParams: spectral densities must be nonnegative");
    }
}

RCoefficients r_coefficients(const DeviationMatrix& d0) {
    const double p0 = d0(0, 0).real();
    const double p1 = d0(1, 1).real();
    const double p2 = d0(2, 2).real();
    const double p3 = d0(3, 3).real();
    return {-p0 + p1 + p2 - p3, p0 + p1 - p2 - p3 - 8.0, p0 - p1 + p2 - p3 - 4.0};
}

DeviationMatrix evolve(const DeviationMatrix& d0, const RelaxationParams& p, double t) {
    p.validate();
    if (t < 0.0) throw NegativeTime("evolve: time must be nonnegative");

    const RCoefficients r = r_coefficients(d0);
    const double e1 = std::exp(-2.0 * p.C * p.J1 * t);
    const double e2 = std::exp(-2.0 * p.C * p.J2 * t);
    const double e12 = std::exp(-2.0 * p.C * (p.J1 + p.J2) * t);
    const double e01 = std::exp(-p.C * (p.J0 + p.J1) * t);
    const double e02 = std::exp(-p.C * (p.J0 + p.J2) * t);
    const double eT = std::exp(-p.C * (p.J1 + p.J2) * t);

    const cplx s01 = d0(0, 1) + d0(2, 3);
    const cplx d01 = d0(0, 1) - d0(2, 3);
    const cplx s02 = d0(0, 2) + d0(1, 3);
    const cplx d02 = d0(0, 2) - d0(1, 3);

    ComplexMatrix m(4);
    m(0, 1) = 0.5 * (s01 + d01 * e2) * e01;
    m(2, 3) = 0.5 * (s01 - d01 * e2) * e01;
    m(0, 2) = 0.5 * (s02 + d02 * e1) * e02;
    m(1, 3) = 0.5 * (s02 - d02 * e1) * e02;
    m(0, 3) = d0(0, 3) * eT;
    m(1, 2) = d0(1, 2) * eT;

    m(0, 0) = 3.0 - 0.25 * (r.R1 * e12 - r.R2 * e2 - r.R3 * e1);
    m(1, 1) = 1.0 + 0.25 * (r.R1 * e12 + r.R2 * e2 - r.R3 * e1);
    m(2, 2) = -1.0 + 0.25 * (r.R1 * e12 - r.R2 * e2 + r.R3 * e1);
    m(3, 3) = -3.0 - 0.25 * (r.R1 * e12 + r.R2 * e2 + r.R3 * e1);

    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) m(j, i) = std::conj(m(i, j));

    return DeviationMatrix(m);
}

std::vector<TimePoint> time_series(const DeviationMatrix& d0, const RelaxationParams& p,
                                   double dt, int n, bool parallel) {
    p.validate();
    if (!(dt > 0.0)) throw InvalidInput("time_series: dt must be positive");
    if (n < 1) throw InvalidInput("time_series: need at least one point");

    std::vector<TimePoint> series(static_cast<std::size_t>(n));
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
    for (int k = 1; k <= n; ++k) {
        const double t = k * dt;
        series[k - 1] = {t, evolve(d0, p, t)};
    }
    return series;
}

double longitudinal_magnetization(const DeviationMatrix& d) {
    const double m[4] = {1.5, 0.5, -0.5, -1.5};
    double s = 0.0;
    for (int i = 0; i < 4; ++i) s += m[i] * d(i, i).real();
    return s;
}

TransverseMagnetization transverse_magnetization(const DeviationMatrix& d) {
    const double s3 = std::sqrt(3.0);
    // Ix + i Iy = I+, with elements sqrt(3), 2, sqrt(3) on the superdiagonal.
    const cplx full = s3 * d(1, 0) + 2.0 * d(2, 1) + s3 * d(3, 2);
    return {2.0 * d(2, 1), full};
}

TimeConstants time_constants(const RelaxationParams& p) {
    p.validate();
    if (p.J1 == 0.0 || p.J2 == 0.0) {
        throw ZeroRate("time_constants: J1 and J2 must be nonzero");
    }
    return {1.0 / (2.0 * p.C * p.J1), 1.0 / (2.0 * p.C * p.J2),
            1.0 / (p.C * (p.J1 + p.J2))};
}

}  // namespace devcorr
