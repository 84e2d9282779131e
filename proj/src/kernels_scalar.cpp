#include <cstring>

#include "kernels_internal.hpp"

namespace g2kit::kernels {

namespace {

using detail::kPhiTerms;

inline void cross_one(const double* u, const double* v, double* r) {
    for (int c = 0; c < 7; ++c) r[c] = 0.0;
    for (const auto& t : kPhiTerms) {
        const int i = t[0], j = t[1], k = t[2];
        const double s = t[3];
        r[k] += s * (u[i] * v[j] - u[j] * v[i]);
        r[i] += s * (u[j] * v[k] - u[k] * v[j]);
        r[j] += s * (u[k] * v[i] - u[i] * v[k]);
    }
}

void cross7_s(In7 u, In7 v, Out7 out, std::size_t n) {
    double a[7], b[7], r[7];
    for (std::size_t s = 0; s < n; ++s) {
        for (int c = 0; c < 7; ++c) {
            a[c] = u[c][s];
            b[c] = v[c][s];
        }
        cross_one(a, b, r);
        for (int c = 0; c < 7; ++c) out[c][s] = r[c];
    }
}

void chi_cross_s(In7 u, In7 v, In7 w, Out7 out, std::size_t n) {
    double a[7], b[7], c[7], vw[7], r[7];
    for (std::size_t s = 0; s < n; ++s) {
        double uv = 0, uw = 0;
        for (int q = 0; q < 7; ++q) {
            a[q] = u[q][s];
            b[q] = v[q][s];
            c[q] = w[q][s];
            uv += a[q] * b[q];
            uw += a[q] * c[q];
        }
        cross_one(b, c, vw);
        cross_one(a, vw, r);
        for (int q = 0; q < 7; ++q) out[q][s] = -r[q] - uv * c[q] + uw * b[q];
    }
}

void chi_table_s(const ChiTerm* t, std::size_t nt, In7 u, In7 v, In7 w, Out7 out, std::size_t n) {
    for (std::size_t s = 0; s < n; ++s) {
        double r[7] = {0};
        for (std::size_t q = 0; q < nt; ++q) {
            const int i = t[q].i, j = t[q].j, k = t[q].k;
            const double d = u[i][s] * (v[j][s] * w[k][s] - v[k][s] * w[j][s]) -
                             u[j][s] * (v[i][s] * w[k][s] - v[k][s] * w[i][s]) +
                             u[k][s] * (v[i][s] * w[j][s] - v[j][s] * w[i][s]);
            r[t[q].alpha] += t[q].c * d;
        }
        for (int c = 0; c < 7; ++c) out[c][s] = r[c];
    }
}

void form3_s(const Term3* t, std::size_t nt, In7 u, In7 v, In7 w, double* out, std::size_t n) {
    for (std::size_t s = 0; s < n; ++s) {
        double r = 0;
        for (std::size_t q = 0; q < nt; ++q) {
            const int i = t[q].i, j = t[q].j, k = t[q].k;
            r += t[q].c * (u[i][s] * (v[j][s] * w[k][s] - v[k][s] * w[j][s]) -
                           u[j][s] * (v[i][s] * w[k][s] - v[k][s] * w[i][s]) +
                           u[k][s] * (v[i][s] * w[j][s] - v[j][s] * w[i][s]));
        }
        out[s] = r;
    }
}

void gram3_s(In7 u, In7 v, In7 w, double* out, std::size_t n) {
    for (std::size_t s = 0; s < n; ++s) {
        double uu = 0, vv = 0, ww = 0, uv = 0, uw = 0, vw = 0;
        for (int c = 0; c < 7; ++c) {
            uu += u[c][s] * u[c][s];
            vv += v[c][s] * v[c][s];
            ww += w[c][s] * w[c][s];
            uv += u[c][s] * v[c][s];
            uw += u[c][s] * w[c][s];
            vw += v[c][s] * w[c][s];
        }
        out[s] = uu * (vv * ww - vw * vw) - uv * (uv * ww - vw * uw) + uw * (uv * vw - vv * uw);
    }
}

// Quaternion helpers on (a, b, c, d) = a + bi + cj + dk.
inline void right_i(const double* q, double* r) {
    r[0] = -q[1]; r[1] = q[0]; r[2] = q[3]; r[3] = -q[2];
}

inline void right_phase(const double* q, double c, double s, double* r) {
    double qi[4];
    right_i(q, qi);
    for (int m = 0; m < 4; ++m) r[m] = c * q[m] + s * qi[m];
}

inline void left_unit(int j, const double* q, double* r) {
    switch (j) {
        case 0: r[0] = -q[1]; r[1] = q[0]; r[2] = -q[3]; r[3] = q[2]; break;
        case 1: r[0] = -q[2]; r[1] = q[3]; r[2] = q[0]; r[3] = -q[1]; break;
        default: r[0] = -q[3]; r[1] = -q[2]; r[2] = q[1]; r[3] = q[0]; break;
    }
}

void dirac_stencil_s(const StencilArgs& a) {
    const int N = a.n;
    for (int x0 = 0; x0 < N; ++x0)
        for (int x1 = 0; x1 < N; ++x1)
            for (int x2 = 0; x2 < N; ++x2) {
                const int x[3] = {x0, x1, x2};
                const std::size_t site = (static_cast<std::size_t>(x0) * N + x1) * N + x2;
                const double* v0 = a.in + 4 * site;
                double acc[4] = {0, 0, 0, 0};
                for (int j = 0; j < 3; ++j) {
                    int xp[3] = {x[0], x[1], x[2]}, xm[3] = {x[0], x[1], x[2]};
                    xp[j] = (x[j] + 1) % N;
                    xm[j] = (x[j] + N - 1) % N;
                    const std::size_t sp = (static_cast<std::size_t>(xp[0]) * N + xp[1]) * N + xp[2];
                    const std::size_t sm = (static_cast<std::size_t>(xm[0]) * N + xm[1]) * N + xm[2];
                    double f[4], b[4];
                    right_phase(a.in + 4 * sp, a.link_c[3 * site + j], a.link_s[3 * site + j], f);
                    right_phase(a.in + 4 * sm, a.link_c[3 * sm + j], -a.link_s[3 * sm + j], b);
                    double lap[4], lapi[4], d[4], cd[4];
                    for (int m = 0; m < 4; ++m) lap[m] = 2.0 * v0[m] - f[m] - b[m];
                    right_i(lap, lapi);
                    for (int m = 0; m < 4; ++m) d[m] = a.inv_2h * (f[m] - b[m]) + a.lift * lapi[m];
                    left_unit(j, d, cd);
                    for (int m = 0; m < 4; ++m) acc[m] += cd[m];
                }
                std::memcpy(a.out + 4 * site, acc, sizeof acc);
            }
}

const KernelTable kScalar = {"scalar", cross7_s, chi_cross_s, chi_table_s, form3_s, gram3_s, dirac_stencil_s};

}  // namespace

const KernelTable& scalar() { return kScalar; }

}  // namespace g2kit::kernels
