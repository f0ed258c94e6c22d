#include "devcorr/fitting.hpp"

#include <algorithm>
#include <cmath>

#include "devcorr/errors.hpp"
#include "devcorr/rng.hpp"

namespace devcorr {

namespace {

constexpr double kParamTol = 1e-10;
constexpr int kMaxIterations = 200;

void check_signal(const std::vector<double>& t, std::size_t ny) {
    if (t.empty()) throw EmptySeries("fit: empty signal");
    if (t.size() != ny) throw InvalidInput("fit: t and y lengths differ");
    if (t.size() < 3) throw InvalidInput("fit: need at least 3 points");
    for (std::size_t i = 1; i < t.size(); ++i)
        if (!(t[i] > t[i - 1])) throw InvalidInput("fit: t must be strictly increasing");
}

// Solves the symmetric np x np system A x = b in place (np <= 3).
void solve_normal(int np, double a[3][3], double b[3], double x[3]) {
    int piv[3] = {0, 1, 2};
    for (int k = 0; k < np; ++k) {
        int best = k;
        for (int r = k + 1; r < np; ++r)
            if (std::abs(a[piv[r]][k]) > std::abs(a[piv[best]][k])) best = r;
        std::swap(piv[k], piv[best]);
        const double d = a[piv[k]][k];
        if (std::abs(d) < 1e-300) throw FitDivergence("fit: singular normal equations");
        for (int r = k + 1; r < np; ++r) {
            const double f = a[piv[r]][k] / d;
            for (int c = k; c < np; ++c) a[piv[r]][c] -= f * a[piv[k]][c];
            b[piv[r]] -= f * b[piv[k]];
        }
    }
    for (int k = np - 1; k >= 0; --k) {
        double s = b[piv[k]];
        for (int c = k + 1; c < np; ++c) s -= a[piv[k]][c] * x[c];
        x[k] = s / a[piv[k]][k];
    }
}

// Damped Gauss-Newton on up to 3 parameters. `fill` writes residuals and the
// m x np Jacobian for the current parameters and returns the SSR.
template <typename Fill>
void gauss_newton(int np, double* p, const Fill& fill, int m,
                  std::vector<double>& resid, std::vector<double>& jac, double* sigma_out) {
    double ssr = fill(p, resid, jac);
    bool converged = false;

    std::vector<double> tr_res(m), tr_jac(m * np);
    for (int iter = 0; iter < kMaxIterations && !converged; ++iter) {
        double jtj[3][3] = {};
        double jte[3] = {};
        for (int i = 0; i < m; ++i)
            for (int r = 0; r < np; ++r) {
                jte[r] += jac[i * np + r] * resid[i];
                for (int c = r; c < np; ++c) jtj[r][c] += jac[i * np + r] * jac[i * np + c];
            }
        for (int r = 0; r < np; ++r)
            for (int c = 0; c < r; ++c) jtj[r][c] = jtj[c][r];

        double delta[3] = {};
        solve_normal(np, jtj, jte, delta);

        double full_rel = 0.0;
        for (int r = 0; r < np; ++r)
            full_rel = std::max(full_rel,
                                std::abs(delta[r]) / std::max(std::abs(p[r]), 1e-30));
        if (full_rel <= kParamTol) {
            converged = true;
            break;
        }

        double lam = 1.0;
        double trial[3];
        bool improved = false;
        for (int halve = 0; halve < 30; ++halve) {
            for (int r = 0; r < np; ++r) trial[r] = p[r] + lam * delta[r];
            const double trial_ssr = fill(trial, tr_res, tr_jac);
            if (trial_ssr < ssr) {
                for (int r = 0; r < np; ++r) p[r] = trial[r];
                ssr = trial_ssr;
                resid.swap(tr_res);
                jac.swap(tr_jac);
                improved = true;
                break;
            }
            lam *= 0.5;
        }
        if (!improved) {
            // The full step is above tolerance yet no damped fraction of it
            // lowers the SSR: we are at a (numerical) minimum.
            converged = true;
        } else {
            double step_rel = 0.0;
            for (int r = 0; r < np; ++r)
                step_rel = std::max(step_rel, std::abs(lam * delta[r]) /
                                                  std::max(std::abs(p[r]), 1e-30));
            if (step_rel <= kParamTol) converged = true;
        }
    }
    if (!converged) throw FitDivergence("fit: iteration cap reached");

    // Residual-scaled covariance of the final linearization.
    double jtj[3][3] = {};
    for (int i = 0; i < m; ++i)
        for (int r = 0; r < np; ++r)
            for (int c = r; c < np; ++c) jtj[r][c] += jac[i * np + r] * jac[i * np + c];
    for (int r = 0; r < np; ++r)
        for (int c = 0; c < r; ++c) jtj[r][c] = jtj[c][r];

    const double dof = m > np ? static_cast<double>(m - np) : 1.0;
    const double s2 = ssr / dof;
    for (int r = 0; r < np; ++r) {
        double unit[3] = {};
        unit[r] = 1.0;
        double a[3][3];
        std::copy(&jtj[0][0], &jtj[0][0] + 9, &a[0][0]);
        double col[3] = {};
        try {
            solve_normal(np, a, unit, col);
            sigma_out[r] = std::sqrt(std::max(s2 * col[r], 0.0));
        } catch (const FitDivergence&) {
            sigma_out[r] = 0.0;
        }
    }
}

struct LogLinInit {
    double amplitude;
    double rate;
};

// Log-linear regression on the offset-subtracted, sign-consistent points.
LogLinInit loglinear_init(const std::vector<double>& t, const std::vector<double>& z) {
    double scale = 0.0;
    std::size_t peak = 0;
    for (std::size_t i = 0; i < z.size(); ++i)
        if (std::abs(z[i]) > scale) {
            scale = std::abs(z[i]);
            peak = i;
        }
    const double sign = z[peak] >= 0.0 ? 1.0 : -1.0;

    double sw = 0.0, st = 0.0, sv = 0.0, stt = 0.0, stv = 0.0;
    int used = 0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double v = sign * z[i];
        if (v < 1e-3 * scale) continue;
        const double w = std::log(v);
        sw += 1.0;
        st += t[i];
        sv += w;
        stt += t[i] * t[i];
        stv += t[i] * w;
        ++used;
    }
    if (used < 2) throw DegenerateSignal("fit: too few usable points for initialization");
    const double denom = sw * stt - st * st;
    if (std::abs(denom) < 1e-300) throw DegenerateSignal("fit: degenerate time grid");
    const double slope = (sw * stv - st * sv) / denom;
    const double intercept = (sv * stt - st * stv) / denom;
    return {sign * std::exp(intercept), -slope};
}

}  // namespace

ExpFitResult fit_exponential(const std::vector<double>& t, const std::vector<double>& y,
                             std::optional<double> known_offset) {
    check_signal(t, y.size());
    const int m = static_cast<int>(t.size());

    double offset0;
    if (known_offset) {
        offset0 = *known_offset;
    } else {
        // Tail average as the asymptote estimate.
        const int tail = std::max(3, m / 10);
        double s = 0.0;
        for (int i = m - tail; i < m; ++i) s += y[i];
        offset0 = s / tail;
    }

    std::vector<double> z(m);
    double zmax = 0.0;
    for (int i = 0; i < m; ++i) {
        z[i] = y[i] - offset0;
        zmax = std::max(zmax, std::abs(z[i]));
    }
    if (zmax <= 1e-12 * std::max(1.0, std::abs(offset0))) {
        throw DegenerateSignal("fit: signal indistinguishable from its offset");
    }

    const LogLinInit init = loglinear_init(t, z);
    const bool fit_offset = !known_offset.has_value();
    const int np = fit_offset ? 3 : 2;

    // Parameter order: [amplitude, rate, offset?].
    double p[3] = {init.amplitude, init.rate, offset0};
    std::vector<double> resid(m), jac(m * np);
    auto fill = [&](const double* q, std::vector<double>& e, std::vector<double>& j) {
        const double off = fit_offset ? q[2] : offset0;
        double ssr = 0.0;
        for (int i = 0; i < m; ++i) {
            const double ex = std::exp(-q[1] * t[i]);
            e[i] = y[i] - (off + q[0] * ex);
            j[i * np + 0] = ex;
            j[i * np + 1] = -q[0] * t[i] * ex;
            if (fit_offset) j[i * np + 2] = 1.0;
            ssr += e[i] * e[i];
        }
        return ssr;
    };

    double sigma[3] = {};
    gauss_newton(np, p, fill, m, resid, jac, sigma);
    if (p[1] < 0.0) throw FitDivergence("fit: converged to a growing exponential");

    double ssr = 0.0;
    for (double e : resid) ssr += e * e;

    ExpFitResult r;
    r.amplitude = p[0];
    r.rate = p[1];
    r.offset = fit_offset ? p[2] : offset0;
    r.residual_rms = std::sqrt(ssr / m);
    r.amplitude_sigma = sigma[0];
    r.rate_sigma = sigma[1];
    r.offset_sigma = fit_offset ? sigma[2] : 0.0;
    return r;
}

ComplexExpFitResult fit_exponential_complex(const std::vector<double>& t,
                                            const std::vector<cplx>& y) {
    check_signal(t, y.size());
    const int m = static_cast<int>(t.size());

    std::vector<double> mag(m);
    double scale = 0.0;
    std::size_t peak = 0;
    for (int i = 0; i < m; ++i) {
        mag[i] = std::abs(y[i]);
        if (mag[i] > scale) {
            scale = mag[i];
            peak = i;
        }
    }
    if (scale <= 1e-12) {
        throw DegenerateSignal("fit: complex signal indistinguishable from zero");
    }

    // Rate from the magnitudes, amplitude by undoing the decay at the peak.
    const LogLinInit init = loglinear_init(t, mag);
    const double r0 = init.rate;
    const cplx a0 = y[peak] * std::exp(r0 * t[peak]);

    // Parameter order: [Re A, Im A, rate]; residuals stack re then im.
    double p[3] = {a0.real(), a0.imag(), r0};
    const int np = 3;
    std::vector<double> resid(2 * m), jac(2 * m * np);
    auto fill = [&](const double* q, std::vector<double>& e, std::vector<double>& j) {
        double ssr = 0.0;
        for (int i = 0; i < m; ++i) {
            const double ex = std::exp(-q[2] * t[i]);
            e[2 * i] = y[i].real() - q[0] * ex;
            e[2 * i + 1] = y[i].imag() - q[1] * ex;
            j[(2 * i) * np + 0] = ex;
            j[(2 * i) * np + 1] = 0.0;
            j[(2 * i) * np + 2] = -q[0] * t[i] * ex;
            j[(2 * i + 1) * np + 0] = 0.0;
            j[(2 * i + 1) * np + 1] = ex;
            j[(2 * i + 1) * np + 2] = -q[1] * t[i] * ex;
            ssr += e[2 * i] * e[2 * i] + e[2 * i + 1] * e[2 * i + 1];
        }
        return ssr;
    };

    double sigma[3] = {};
    gauss_newton(np, p, fill, 2 * m, resid, jac, sigma);
    if (p[2] < 0.0) throw FitDivergence("fit: converged to a growing exponential");

    double ssr = 0.0;
    for (double e : resid) ssr += e * e;

    ComplexExpFitResult r;
    r.amplitude = cplx(p[0], p[1]);
    r.rate = p[2];
    r.residual_rms = std::sqrt(ssr / (2 * m));
    r.rate_sigma = sigma[2];
    return r;
}

CombinationSeries combinations(const std::vector<TimePoint>& series) {
    if (series.empty()) throw EmptySeries("combinations: empty series");
    CombinationSeries c;
    c.t.reserve(series.size());
    for (const TimePoint& p : series) {
        const DeviationMatrix& d = p.state;
        c.t.push_back(p.t);
        c.coh_01_23.push_back(d(0, 1) + d(2, 3));
        c.coh_02_13.push_back(d(0, 2) + d(1, 3));
        c.coh_12.push_back(d(1, 2));
        const double p0 = d(0, 0).real(), p1 = d(1, 1).real();
        const double p2 = d(2, 2).real(), p3 = d(3, 3).real();
        c.pop_r2.push_back(p0 + p1 - p2 - p3);
        c.pop_r1.push_back(-p0 + p1 + p2 - p3);
        c.pop_r3.push_back(p0 - p1 + p2 - p3);
    }
    return c;
}

FitReport estimate_parameters(const std::vector<TimePoint>& series, double C,
                              double consistency_threshold, bool strict_consistency) {
    if (!(C > 0.0)) throw InvalidInput("estimate_parameters: C must be positive");
    const CombinationSeries c = combinations(series);

    const ComplexExpFitResult fa = fit_exponential_complex(c.t, c.coh_01_23);  // C(J0+J1)
    const ComplexExpFitResult fb = fit_exponential_complex(c.t, c.coh_02_13);  // C(J0+J2)
    const ComplexExpFitResult fc = fit_exponential_complex(c.t, c.coh_12);     // C(J1+J2)
    const ExpFitResult f2 = fit_exponential(c.t, c.pop_r2, 8.0);  // 2CJ2, amp R2
    const ExpFitResult f1 = fit_exponential(c.t, c.pop_r1, 0.0);  // 2C(J1+J2), amp R1
    const ExpFitResult f3 = fit_exponential(c.t, c.pop_r3, 4.0);  // 2CJ1, amp R3

    FitReport r;
    const double ra = fa.rate, rb = fb.rate, rc = fc.rate;
    // [[1,1,0],[1,0,1],[0,1,1]] (J0,J1,J2) = (ra,rb,rc)/C
    r.J0 = (ra + rb - rc) / (2.0 * C);
    r.J1 = (ra - rb + rc) / (2.0 * C);
    r.J2 = (-ra + rb + rc) / (2.0 * C);
    const double svar = fa.rate_sigma * fa.rate_sigma + fb.rate_sigma * fb.rate_sigma +
                        fc.rate_sigma * fc.rate_sigma;
    r.J0_sigma = r.J1_sigma = r.J2_sigma = std::sqrt(svar) / (2.0 * C);

    r.R1 = f1.amplitude;
    r.R2 = f2.amplitude;
    r.R3 = f3.amplitude;
    r.R1_sigma = f1.amplitude_sigma;
    r.R2_sigma = f2.amplitude_sigma;
    r.R3_sigma = f3.amplitude_sigma;

    r.J1_populations = f3.rate / (2.0 * C);
    r.J2_populations = f2.rate / (2.0 * C);

    auto rel_gap = [](double x, double y) {
        return std::abs(x - y) / std::max({std::abs(x), std::abs(y), 1e-300});
    };
    r.consistency_gap = std::max(rel_gap(r.J1, r.J1_populations),
                                 rel_gap(r.J2, r.J2_populations));
    r.consistency_ok = r.consistency_gap <= consistency_threshold;
    if (!r.consistency_ok && strict_consistency) {
        throw InconsistentFits("estimate_parameters: coherence- and population-derived "
                               "spectral densities disagree");
    }
    return r;
}

std::vector<TimePoint> add_noise(const std::vector<TimePoint>& series, double sigma,
                                 std::uint64_t seed) {
    if (sigma < 0.0) throw InvalidInput("add_noise: sigma must be nonnegative");
    if (sigma == 0.0) return series;

    Rng rng(seed);
    std::vector<TimePoint> out;
    out.reserve(series.size());
    for (const TimePoint& p : series) {
        ComplexMatrix m = p.state.mat();
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                m(i, j) += cplx(sigma * rng.normal(), sigma * rng.normal());
            }
        m.hermitize();
        const double tr = m.trace().real();
        for (int i = 0; i < 4; ++i) m(i, i) -= 0.25 * tr;
        out.push_back({p.t, DeviationMatrix(m)});
    }
    return out;
}

std::string serialize_fit_report(const FitReport& r, double C, double threshold) {
    std::string s;
    auto kv = [&s](const char* key, double v) {
        s += key;
        s += " = ";
        s += format_double(v);
        s += '\n';
    };
    kv("C", C);
    kv("J0", r.J0);
    kv("J0_sigma", r.J0_sigma);
    kv("J1", r.J1);
    kv("J1_sigma", r.J1_sigma);
    kv("J2", r.J2);
    kv("J2_sigma", r.J2_sigma);
    kv("R1", r.R1);
    kv("R1_sigma", r.R1_sigma);
    kv("R2", r.R2);
    kv("R2_sigma", r.R2_sigma);
    kv("R3", r.R3);
    kv("R3_sigma", r.R3_sigma);
    kv("J1_populations", r.J1_populations);
    kv("J2_populations", r.J2_populations);
    kv("consistency_gap", r.consistency_gap);
    kv("consistency_threshold", threshold);
    s += "consistency_ok = ";
    s += r.consistency_ok ? "1" : "0";
    s += '\n';
    return s;
}

}  // namespace devcorr
