#include "devcorr/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "devcorr/errors.hpp"

namespace devcorr {

namespace {

constexpr double kTieTol = 1e-12;

struct Qubit2 {
    cplx v0, v1;
};

// Projector-pair state vectors for one party.
inline void party_vectors(double theta, double phi, Qubit2& par, Qubit2& perp) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const cplx ph(std::cos(phi), std::sin(phi));
    par = {c, ph * s};
    perp = {std::conj(ph) * s, -c};
}

inline ComplexMatrix projector2(const Qubit2& v) {
    const cplx arr[2] = {v.v0, v.v1};
    return outer(arr, 2);
}

// <u x w| d |u x w> for 2-vectors u, w; real for Hermitian d.
inline double joint_expectation(const DeviationMatrix& d, const Qubit2& u, const Qubit2& w) {
    cplx amp[4] = {u.v0 * w.v0, u.v0 * w.v1, u.v1 * w.v0, u.v1 * w.v1};
    cplx acc = 0.0;
    for (int i = 0; i < 4; ++i) {
        cplx row = 0.0;
        for (int j = 0; j < 4; ++j) row += d(i, j) * amp[j];
        acc += std::conj(amp[i]) * row;
    }
    return acc.real();
}

inline double table_objective(const double m[2][2]) {
    double sq = 0.0, rows[2] = {0.0, 0.0}, cols[2] = {0.0, 0.0};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            sq += m[i][j] * m[i][j];
            rows[i] += m[i][j];
            cols[j] += m[i][j];
        }
    return 2.0 * sq - rows[0] * rows[0] - rows[1] * rows[1] - cols[0] * cols[0] -
           cols[1] * cols[1];
}

// ---- Nelder-Mead simplex maximization (deterministic) ---------------------

struct SimplexResult {
    std::vector<double> x;
    double value;
    bool converged;
};

SimplexResult nelder_mead_maximize(const std::function<double(const double*)>& f,
                                   const std::vector<double>& x0,
                                   const std::vector<double>& step, double ftol,
                                   int max_iter) {
    const int n = static_cast<int>(x0.size());
    std::vector<std::vector<double>> pts(n + 1, x0);
    std::vector<double> val(n + 1);
    for (int i = 0; i < n; ++i) pts[i + 1][i] += step[i];
    for (int i = 0; i <= n; ++i) val[i] = f(pts[i].data());

    std::vector<int> order(n + 1);
    auto sort_order = [&] {
        for (int i = 0; i <= n; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return val[a] > val[b]; });
    };

    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
    bool converged = false;
    for (int iter = 0; iter < max_iter; ++iter) {
        sort_order();
        const int best = order[0], worst = order[n], second_worst = order[n - 1];
        if (val[best] - val[worst] <= ftol) {
            converged = true;
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (int i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (int k = 0; k < n; ++k) centroid[k] += pts[i][k];
        }
        for (int k = 0; k < n; ++k) centroid[k] /= n;

        auto make_point = [&](double coef) {
            std::vector<double> p(n);
            for (int k = 0; k < n; ++k) p[k] = centroid[k] + coef * (centroid[k] - pts[worst][k]);
            return p;
        };

        std::vector<double> xr = make_point(alpha);
        const double fr = f(xr.data());
        if (fr > val[best]) {
            std::vector<double> xe = make_point(gamma);
            const double fe = f(xe.data());
            if (fe > fr) {
                pts[worst] = std::move(xe);
                val[worst] = fe;
            } else {
                pts[worst] = std::move(xr);
                val[worst] = fr;
            }
        } else if (fr > val[second_worst]) {
            pts[worst] = std::move(xr);
            val[worst] = fr;
        } else {
            std::vector<double> xc = make_point(-rho);
            const double fc = f(xc.data());
            if (fc > val[worst]) {
                pts[worst] = std::move(xc);
                val[worst] = fc;
            } else {
                for (int i = 0; i <= n; ++i) {  // shrink toward the best vertex
                    if (i == best) continue;
                    for (int k = 0; k < n; ++k)
                        pts[i][k] = pts[best][k] + sigma * (pts[i][k] - pts[best][k]);
                    val[i] = f(pts[i].data());
                }
            }
        }
    }
    sort_order();
    return {pts[order[0]], val[order[0]], converged};
}

// The k best grid indices by (value desc, index asc).
std::vector<std::size_t> top_indices(const std::vector<double>& values, int k) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < values.size(); ++i) {
        auto pos = idx.begin();
        while (pos != idx.end() && values[*pos] >= values[i]) ++pos;
        if (pos != idx.end() || static_cast<int>(idx.size()) < k) {
            idx.insert(pos, i);
            if (static_cast<int>(idx.size()) > k) idx.pop_back();
        }
    }
    return idx;
}

// 2x2 Hermitian eigenvalues in closed form, then -sum l log2 l.
double entropy2(const ComplexMatrix& rho) {
    const double a = rho(0, 0).real();
    const double b = rho(1, 1).real();
    const double mean = 0.5 * (a + b);
    const double disc = std::sqrt(0.25 * (a - b) * (a - b) + std::norm(rho(0, 1)));
    double s = 0.0;
    for (double lam : {mean + disc, mean - disc}) {
        if (lam < -kEigenClampTol) {
            throw NonPhysicalState("conditional state has a negative eigenvalue");
        }
        lam = std::min(std::max(lam, 0.0), 1.0);
        if (lam > 0.0) s -= lam * std::log2(lam);
    }
    return s;
}

// <v| rho_block |v> over the measured party's indices: the unnormalized
// conditioned 2x2 matrix of the kept party.
ComplexMatrix conditioned_block(const ComplexMatrix& rho, Party measured, const Qubit2& v) {
    const cplx vv[2] = {v.v0, v.v1};
    ComplexMatrix g(2);
    if (measured == Party::B) {
        for (int a = 0; a < 2; ++a)
            for (int a2 = 0; a2 < 2; ++a2) {
                cplx acc = 0.0;
                for (int b = 0; b < 2; ++b)
                    for (int b2 = 0; b2 < 2; ++b2)
                        acc += std::conj(vv[b]) * rho(2 * a + b, 2 * a2 + b2) * vv[b2];
                g(a, a2) = acc;
            }
    } else {
        for (int b = 0; b < 2; ++b)
            for (int b2 = 0; b2 < 2; ++b2) {
                cplx acc = 0.0;
                for (int a = 0; a < 2; ++a)
                    for (int a2 = 0; a2 < 2; ++a2)
                        acc += std::conj(vv[a]) * rho(2 * a + b, 2 * a2 + b2) * vv[a2];
                g(b, b2) = acc;
            }
    }
    return g;
}

// S(rho_kept) - sum_j q_j S(rho_kept^j) for the projector pair at (theta, phi).
double conditional_information(const ComplexMatrix& rho, double s_kept, Party measured,
                               double theta, double phi) {
    Qubit2 par, perp;
    party_vectors(theta, phi, par, perp);
    double cond = 0.0;
    for (const Qubit2* v : {&par, &perp}) {
        ComplexMatrix g = conditioned_block(rho, measured, *v);
        const double q = g.trace().real();
        if (q < 1e-14) continue;  // degenerate outcome contributes zero
        g *= cplx(1.0 / q);
        g.hermitize();
        cond += q * entropy2(g);
    }
    return s_kept - cond;
}

struct Candidate {
    double value;
    MeasurementBasis basis;
};

// Best candidate under (value within 1e-12 -> lexicographic basis) order.
void consider(std::vector<Candidate>& cands, double value, MeasurementBasis basis) {
    cands.push_back({value, canonicalize(basis)});
}

Candidate pick_best(const std::vector<Candidate>& cands) {
    const Candidate* best = &cands.front();
    for (const Candidate& c : cands) {
        if (c.value > best->value + kTieTol) {
            best = &c;
        } else if (std::abs(c.value - best->value) <= kTieTol &&
                   basis_less(c.basis, best->basis)) {
            best = &c;
        }
    }
    return *best;
}

}  // namespace

void canonicalize_angles(double& theta, double& phi) {
    theta = std::fmod(theta, 2.0 * M_PI);
    if (theta < 0.0) theta += 2.0 * M_PI;
    if (theta > M_PI) {
        theta = 2.0 * M_PI - theta;
        phi += M_PI;
    }
    phi = std::fmod(phi, 2.0 * M_PI);
    if (phi < 0.0) phi += 2.0 * M_PI;
}

MeasurementBasis canonicalize(MeasurementBasis b) {
    canonicalize_angles(b.theta_A, b.phi_A);
    canonicalize_angles(b.theta_B, b.phi_B);
    return b;
}

bool basis_less(const MeasurementBasis& a, const MeasurementBasis& b) {
    if (a.theta_A != b.theta_A) return a.theta_A < b.theta_A;
    if (a.phi_A != b.phi_A) return a.phi_A < b.phi_A;
    if (a.theta_B != b.theta_B) return a.theta_B < b.theta_B;
    return a.phi_B < b.phi_B;
}

double mutual_information_expansion(const DeviationMatrix& d) {
    return 2.0 * trace_square(d.mat()) - trace_square(partial_trace(d, Party::A)) -
           trace_square(partial_trace(d, Party::B));
}

DeviationMatrix measured_deviation(const DeviationMatrix& d, const MeasurementBasis& b) {
    Qubit2 a_par, a_perp, b_par, b_perp;
    party_vectors(b.theta_A, b.phi_A, a_par, a_perp);
    party_vectors(b.theta_B, b.phi_B, b_par, b_perp);

    ComplexMatrix out(4);
    for (const Qubit2* pa : {&a_par, &a_perp}) {
        for (const Qubit2* pb : {&b_par, &b_perp}) {
            const ComplexMatrix proj = kron(projector2(*pa), projector2(*pb));
            out += proj * d.mat() * proj;
        }
    }
    out.hermitize();
    return DeviationMatrix(out);
}

double classical_mi_expansion(const DeviationMatrix& d, const MeasurementBasis& b) {
    const DeviationMatrix eta = measured_deviation(d, b);
    return 2.0 * trace_square(eta.mat()) - trace_square(partial_trace(eta, Party::A)) -
           trace_square(partial_trace(eta, Party::B));
}

double expansion_to_bits(double value, double epsilon) {
    return value * epsilon * epsilon / M_LN2;
}

namespace detail {

double classical_mi_objective(const DeviationMatrix& d, double theta_A, double phi_A,
                              double theta_B, double phi_B) {
    Qubit2 a[2], b[2];
    party_vectors(theta_A, phi_A, a[0], a[1]);
    party_vectors(theta_B, phi_B, b[0], b[1]);
    double m[2][2];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m[i][j] = joint_expectation(d, a[i], b[j]);
    return table_objective(m);
}

MeasurementBasis grid_index_to_basis(int n, std::size_t idx) {
    const double dth = M_PI / (n - 1);
    const double dph = 2.0 * M_PI / n;
    const int ipB = static_cast<int>(idx % n);
    idx /= n;
    const int itB = static_cast<int>(idx % n);
    idx /= n;
    const int ipA = static_cast<int>(idx % n);
    idx /= n;
    const int itA = static_cast<int>(idx);
    return {itA * dth, ipA * dph, itB * dth, ipB * dph};
}

void scan_classical_mi_grid(const DeviationMatrix& d, int n, std::vector<double>& values,
                            bool parallel) {
    const std::size_t total = static_cast<std::size_t>(n) * n * n * n;
    values.assign(total, 0.0);
    const double dth = M_PI / (n - 1);
    const double dph = 2.0 * M_PI / n;

    // Precompute the projector vectors once (both parties share the angle
    // table) and the B-conditioned 2x2 blocks
    // G[a][a'] = <v_B| d_block(a,a') |v_B>, so the joint loop is a pair of
    // 2x2 quadratic forms per outcome.
    const int per_party = n * n;
    std::vector<Qubit2> vecs(2 * per_party);
    for (int it = 0; it < n; ++it)
        for (int ip = 0; ip < n; ++ip) {
            const int k = it * n + ip;
            party_vectors(it * dth, ip * dph, vecs[2 * k], vecs[2 * k + 1]);
        }

    std::vector<ComplexMatrix> gblocks(2 * per_party, ComplexMatrix(2));
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
    for (int k = 0; k < per_party; ++k) {
        for (int j = 0; j < 2; ++j) {
            const Qubit2& v = vecs[2 * k + j];
            const cplx vv[2] = {v.v0, v.v1};
            ComplexMatrix g(2);
            for (int a = 0; a < 2; ++a)
                for (int a2 = 0; a2 < 2; ++a2) {
                    cplx acc = 0.0;
                    for (int b = 0; b < 2; ++b)
                        for (int b2 = 0; b2 < 2; ++b2)
                            acc += std::conj(vv[b]) * d(2 * a + b, 2 * a2 + b2) * vv[b2];
                    g(a, a2) = acc;
                }
            gblocks[2 * k + j] = g;
        }
    }

#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
    for (int ka = 0; ka < per_party; ++ka) {
        for (int kb = 0; kb < per_party; ++kb) {
            double m[2][2];
            for (int i = 0; i < 2; ++i) {
                const Qubit2& u = vecs[2 * ka + i];
                const cplx uu[2] = {u.v0, u.v1};
                for (int j = 0; j < 2; ++j) {
                    const ComplexMatrix& g = gblocks[2 * kb + j];
                    cplx acc = 0.0;
                    for (int x = 0; x < 2; ++x)
                        for (int y = 0; y < 2; ++y)
                            acc += std::conj(uu[x]) * g(x, y) * uu[y];
                    m[i][j] = acc.real();
                }
            }
            values[static_cast<std::size_t>(ka) * per_party + kb] = table_objective(m);
        }
    }
}

}  // namespace detail

std::pair<double, MeasurementBasis> classical_correlation_K(const DeviationMatrix& d,
                                                            const OptimizerConfig& opt) {
    if (opt.grid_points < 2) throw InvalidInput("OptimizerConfig: need >= 2 grid points");

    std::vector<double> values;
    detail::scan_classical_mi_grid(d, opt.grid_points, values, opt.parallel);
    const std::vector<std::size_t> starts = top_indices(values, opt.refine_starts);

    const double th_step = 0.5 * M_PI / (opt.grid_points - 1);
    const double ph_step = 0.5 * 2.0 * M_PI / opt.grid_points;

    std::vector<Candidate> cands;
    for (std::size_t s : starts) {
        const MeasurementBasis b0 = detail::grid_index_to_basis(opt.grid_points, s);
        auto f = [&](const double* x) {
            return detail::classical_mi_objective(d, x[0], x[1], x[2], x[3]);
        };
        SimplexResult r = nelder_mead_maximize(
            f, {b0.theta_A, b0.phi_A, b0.theta_B, b0.phi_B},
            {th_step, ph_step, th_step, ph_step}, opt.objective_tol, opt.max_iterations);
        if (!r.converged) continue;
        consider(cands, r.value, {r.x[0], r.x[1], r.x[2], r.x[3]});
    }
    if (cands.empty()) {
        throw OptimizerFailure("classical_correlation_K: no simplex refinement converged");
    }
    const Candidate best = pick_best(cands);
    return {best.value, best.basis};
}

CorrelationReport quantum_correlation_Q(const DeviationMatrix& d, const OptimizerConfig& opt) {
    const double total = mutual_information_expansion(d);
    const auto [k, basis] = classical_correlation_K(d, opt);
    return {total, k, total - k, basis, Mode::Expansion};
}

double mutual_information_exact(const ThermalState& s) {
    return von_neumann_entropy(s.reduced_density(Party::A)) +
           von_neumann_entropy(s.reduced_density(Party::B)) -
           von_neumann_entropy(s.density());
}

double discord_exact(const ThermalState& s, Party measured, const OptimizerConfig& opt) {
    if (opt.grid_points < 2) throw InvalidInput("OptimizerConfig: need >= 2 grid points");
    const ComplexMatrix rho = s.density();
    const Party kept = (measured == Party::B) ? Party::A : Party::B;
    const double s_kept = von_neumann_entropy(s.reduced_density(kept));
    const double total = mutual_information_exact(s);

    const int n = opt.grid_points;
    const double dth = M_PI / (n - 1);
    const double dph = 2.0 * M_PI / n;

    std::vector<double> values(static_cast<std::size_t>(n) * n);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (opt.parallel)
#endif
    for (int it = 0; it < n; ++it)
        for (int ip = 0; ip < n; ++ip)
            values[static_cast<std::size_t>(it) * n + ip] =
                conditional_information(rho, s_kept, measured, it * dth, ip * dph);

    const std::vector<std::size_t> starts = top_indices(values, opt.refine_starts);

    double best = -1e300;
    bool any_converged = false;
    for (std::size_t idx : starts) {
        const double th0 = static_cast<double>(idx / n) * dth;
        const double ph0 = static_cast<double>(idx % n) * dph;
        auto f = [&](const double* x) {
            return conditional_information(rho, s_kept, measured, x[0], x[1]);
        };
        SimplexResult r = nelder_mead_maximize(f, {th0, ph0}, {0.5 * dth, 0.5 * dph},
                                               opt.objective_tol, opt.max_iterations);
        if (!r.converged) continue;
        any_converged = true;
        best = std::max(best, r.value);
    }
    if (!any_converged) {
        throw OptimizerFailure("discord_exact: no simplex refinement converged");
    }
    return total - best;
}

double classical_exact_C(const ThermalState& s, Party measured, const OptimizerConfig& opt) {
    return mutual_information_exact(s) - discord_exact(s, measured, opt);
}

}  // namespace devcorr
