// Timing comparison of the serial and OpenMP paths for the two
// data-parallel kernels: the measurement-basis grid scan and the
// closed-form time series. Also verifies that both paths produce
// bit-identical results.

#include <chrono>
#include <cstdio>

#include "devcorr/correlations.hpp"
#include "devcorr/relaxation.hpp"
#include "devcorr/states.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace devcorr;

namespace {

double now() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

template <typename F>
double time_best_of(int reps, F&& f) {
    f();  // warmup
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const double t0 = now();
        f();
        best = std::min(best, now() - t0);
    }
    return best;
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; both paths run serially\n");
#endif

    const DeviationMatrix d = random_x(5, 1.0);
    const RelaxationParams params{12e9, 17e-9, 3.0e-9, 3.4e-9};

    {
        std::vector<double> serial, parallel;
        const double ts = time_best_of(
            3, [&] { detail::scan_classical_mi_grid(d, 24, serial, false); });
        const double tp = time_best_of(
            3, [&] { detail::scan_classical_mi_grid(d, 24, parallel, true); });
        bool identical = serial.size() == parallel.size();
        for (std::size_t i = 0; identical && i < serial.size(); ++i) {
            identical = serial[i] == parallel[i];
        }
        std::printf("grid scan 24^4    serial %8.3f ms   parallel %8.3f ms   "
                    "speedup %.2fx   identical: %s\n",
                    ts * 1e3, tp * 1e3, ts / tp, identical ? "yes" : "NO");
    }

    {
        const int n = 20000;
        std::vector<TimePoint> serial, parallel;
        const double ts =
            time_best_of(3, [&] { serial = time_series(d, params, 1e-5, n, false); });
        const double tp =
            time_best_of(3, [&] { parallel = time_series(d, params, 1e-5, n, true); });
        bool identical = serial.size() == parallel.size();
        for (std::size_t i = 0; identical && i < serial.size(); ++i) {
            identical = serial[i].t == parallel[i].t &&
                        serial[i].state.mat().max_abs_diff(parallel[i].state.mat()) == 0.0;
        }
        std::printf("time series 20k   serial %8.3f ms   parallel %8.3f ms   "
                    "speedup %.2fx   identical: %s\n",
                    ts * 1e3, tp * 1e3, ts / tp, identical ? "yes" : "NO");
    }

    {
        OptimizerConfig ser;
        ser.parallel = false;
        OptimizerConfig par;
        const double ts = time_best_of(3, [&] { classical_correlation_K(d, ser); });
        const double tp = time_best_of(3, [&] { classical_correlation_K(d, par); });
        std::printf("full optimizer    serial %8.3f ms   parallel %8.3f ms   speedup %.2fx\n",
                    ts * 1e3, tp * 1e3, ts / tp);
    }
    return 0;
}
