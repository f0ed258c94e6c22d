#pragma once

// Dense-grid maximum of the measured classical mutual information, used as
// the optimizer oracle. Written independently of the library's objective
// kernel: each party's projector pair is conditioned into 2x2 blocks first,
// so only 2x2 quadratic forms remain in the joint loop.

#include <cmath>
#include <vector>

#include "devcorr/deviation.hpp"

namespace devcorr::testsup {

inline double brute_force_classical_mi_max(const DeviationMatrix& d, int points_per_angle) {
    const int n = points_per_angle;
    const double dth = M_PI / (n - 1);
    const double dph = 2.0 * M_PI / n;
    const int per_party = n * n;

    struct Pair2 {
        cplx par[2], perp[2];
    };
    std::vector<Pair2> vecs(per_party);
    for (int it = 0; it < n; ++it)
        for (int ip = 0; ip < n; ++ip) {
            const double th = it * dth, ph = ip * dph;
            const cplx e(std::cos(ph), std::sin(ph));
            Pair2& p = vecs[it * n + ip];
            p.par[0] = std::cos(th);
            p.par[1] = e * std::sin(th);
            p.perp[0] = std::conj(e) * std::sin(th);
            p.perp[1] = -std::cos(th);
        }

    // For every B-direction and outcome: G[a][a'] = <v| d_block(a,a') |v>.
    struct GPair {
        cplx g[2][2][2];  // [outcome][a][a']
    };
    std::vector<GPair> gb(per_party);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int k = 0; k < per_party; ++k) {
        for (int out = 0; out < 2; ++out) {
            const cplx* v = out == 0 ? vecs[k].par : vecs[k].perp;
            for (int a = 0; a < 2; ++a)
                for (int a2 = 0; a2 < 2; ++a2) {
                    cplx acc = 0.0;
                    for (int b = 0; b < 2; ++b)
                        for (int b2 = 0; b2 < 2; ++b2)
                            acc += std::conj(v[b]) * d(2 * a + b, 2 * a2 + b2) * v[b2];
                    gb[k].g[out][a][a2] = acc;
                }
        }
    }

    double best = -1e300;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(max : best)
#endif
    for (int ka = 0; ka < per_party; ++ka) {
        for (int kb = 0; kb < per_party; ++kb) {
            double m[2][2];
            for (int i = 0; i < 2; ++i) {
                const cplx* u = i == 0 ? vecs[ka].par : vecs[ka].perp;
                for (int j = 0; j < 2; ++j) {
                    cplx acc = 0.0;
                    for (int x = 0; x < 2; ++x)
                        for (int y = 0; y < 2; ++y)
                            acc += std::conj(u[x]) * gb[kb].g[j][x][y] * u[y];
                    m[i][j] = acc.real();
                }
            }
            const double r0 = m[0][0] + m[0][1], r1 = m[1][0] + m[1][1];
            const double c0 = m[0][0] + m[1][0], c1 = m[0][1] + m[1][1];
            const double v = 2.0 * (m[0][0] * m[0][0] + m[0][1] * m[0][1] +
                                    m[1][0] * m[1][0] + m[1][1] * m[1][1]) -
                             r0 * r0 - r1 * r1 - c0 * c0 - c1 * c1;
            if (v > best) best = v;
        }
    }
    return best;
}

}  // namespace devcorr::testsup
