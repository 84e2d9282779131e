#include <immintrin.h>

#include <cstring>

#include "kernels_internal.hpp"

namespace g2kit::kernels {

namespace {

using detail::kPhiTerms;

// Batch of four 7-vectors, one register per component.
struct V7 {
    __m256d c[7];
};

inline V7 load7(In7 p, std::size_t s) {
    V7 r;
    for (int q = 0; q < 7; ++q) r.c[q] = _mm256_loadu_pd(p[q] + s);
    return r;
}

inline void store7(Out7 p, std::size_t s, const V7& r) {
    for (int q = 0; q < 7; ++q) _mm256_storeu_pd(p[q] + s, r.c[q]);
}

inline V7 cross4(const V7& u, const V7& v) {
    V7 r;
    for (auto& x : r.c) x = _mm256_setzero_pd();
    for (const auto& t : kPhiTerms) {
        const int i = t[0], j = t[1], k = t[2];
        const __m256d s = _mm256_set1_pd(t[3]);
        r.c[k] = _mm256_fmadd_pd(s, _mm256_fmsub_pd(u.c[i], v.c[j], _mm256_mul_pd(u.c[j], v.c[i])), r.c[k]);
        r.c[i] = _mm256_fmadd_pd(s, _mm256_fmsub_pd(u.c[j], v.c[k], _mm256_mul_pd(u.c[k], v.c[j])), r.c[i]);
        r.c[j] = _mm256_fmadd_pd(s, _mm256_fmsub_pd(u.c[k], v.c[i], _mm256_mul_pd(u.c[i], v.c[k])), r.c[j]);
    }
    return r;
}

inline __m256d dot4(const V7& a, const V7& b) {
    __m256d r = _mm256_mul_pd(a.c[0], b.c[0]);
    for (int q = 1; q < 7; ++q) r = _mm256_fmadd_pd(a.c[q], b.c[q], r);
    return r;
}

inline __m256d det3(const V7& u, const V7& v, const V7& w, int i, int j, int k) {
    const __m256d m0 = _mm256_fmsub_pd(v.c[j], w.c[k], _mm256_mul_pd(v.c[k], w.c[j]));
    const __m256d m1 = _mm256_fmsub_pd(v.c[i], w.c[k], _mm256_mul_pd(v.c[k], w.c[i]));
    const __m256d m2 = _mm256_fmsub_pd(v.c[i], w.c[j], _mm256_mul_pd(v.c[j], w.c[i]));
    return _mm256_fmadd_pd(u.c[k], m2, _mm256_fmsub_pd(u.c[i], m0, _mm256_mul_pd(u.c[j], m1)));
}

struct Offset7 {
    const double* p[7];
    Offset7(In7 base, std::size_t s) {
        for (int q = 0; q < 7; ++q) p[q] = base[q] + s;
    }
};

struct OffsetOut7 {
    double* p[7];
    OffsetOut7(Out7 base, std::size_t s) {
        for (int q = 0; q < 7; ++q) p[q] = base[q] + s;
    }
};

void cross7_v(In7 u, In7 v, Out7 out, std::size_t n) {
    std::size_t s = 0;
    for (; s + 4 <= n; s += 4) store7(out, s, cross4(load7(u, s), load7(v, s)));
    if (s < n) scalar().cross7(Offset7(u, s).p, Offset7(v, s).p, OffsetOut7(out, s).p, n - s);
}

void chi_cross_v(In7 u, In7 v, In7 w, Out7 out, std::size_t n) {
    std::size_t s = 0;
    for (; s + 4 <= n; s += 4) {
        const V7 a = load7(u, s), b = load7(v, s), c = load7(w, s);
        const V7 r = cross4(a, cross4(b, c));
        const __m256d uv = dot4(a, b), uw = dot4(a, c);
        V7 o;
        for (int q = 0; q < 7; ++q)
            o.c[q] = _mm256_fmsub_pd(uw, b.c[q], _mm256_fmadd_pd(uv, c.c[q], r.c[q]));
        store7(out, s, o);
    }
    if (s < n)
        scalar().chi_cross(Offset7(u, s).p, Offset7(v, s).p, Offset7(w, s).p, OffsetOut7(out, s).p, n - s);
}

void chi_table_v(const ChiTerm* t, std::size_t nt, In7 u, In7 v, In7 w, Out7 out, std::size_t n) {
    std::size_t s = 0;
    for (; s + 4 <= n; s += 4) {
        const V7 a = load7(u, s), b = load7(v, s), c = load7(w, s);
        V7 r;
        for (auto& x : r.c) x = _mm256_setzero_pd();
        for (std::size_t q = 0; q < nt; ++q)
            r.c[t[q].alpha] =
                _mm256_fmadd_pd(_mm256_set1_pd(t[q].c), det3(a, b, c, t[q].i, t[q].j, t[q].k), r.c[t[q].alpha]);
        store7(out, s, r);
    }
    if (s < n)
        scalar().chi_table(t, nt, Offset7(u, s).p, Offset7(v, s).p, Offset7(w, s).p, OffsetOut7(out, s).p, n - s);
}

void form3_v(const Term3* t, std::size_t nt, In7 u, In7 v, In7 w, double* out, std::size_t n) {
    std::size_t s = 0;
    for (; s + 4 <= n; s += 4) {
        const V7 a = load7(u, s), b = load7(v, s), c = load7(w, s);
        __m256d r = _mm256_setzero_pd();
        for (std::size_t q = 0; q < nt; ++q)
            r = _mm256_fmadd_pd(_mm256_set1_pd(t[q].c), det3(a, b, c, t[q].i, t[q].j, t[q].k), r);
        _mm256_storeu_pd(out + s, r);
    }
    if (s < n) scalar().form3(t, nt, Offset7(u, s).p, Offset7(v, s).p, Offset7(w, s).p, out + s, n - s);
}

void gram3_v(In7 u, In7 v, In7 w, double* out, std::size_t n) {
    std::size_t s = 0;
    for (; s + 4 <= n; s += 4) {
        const V7 a = load7(u, s), b = load7(v, s), c = load7(w, s);
        const __m256d uu = dot4(a, a), vv = dot4(b, b), ww = dot4(c, c);
        const __m256d uv = dot4(a, b), uw = dot4(a, c), vw = dot4(b, c);
        const __m256d t0 = _mm256_mul_pd(uu, _mm256_fmsub_pd(vv, ww, _mm256_mul_pd(vw, vw)));
        const __m256d t1 = _mm256_mul_pd(uv, _mm256_fmsub_pd(uv, ww, _mm256_mul_pd(vw, uw)));
        const __m256d t2 = _mm256_mul_pd(uw, _mm256_fmsub_pd(uv, vw, _mm256_mul_pd(vv, uw)));
        _mm256_storeu_pd(out + s, _mm256_add_pd(_mm256_sub_pd(t0, t1), t2));
    }
    if (s < n) scalar().gram3(Offset7(u, s).p, Offset7(v, s).p, Offset7(w, s).p, out + s, n - s);
}

// One quaternion per register, lanes (1, i, j, k).
inline __m256d flip(__m256d q, double s0, double s1, double s2, double s3) {
    return _mm256_mul_pd(q, _mm256_setr_pd(s0, s1, s2, s3));
}

inline __m256d right_i(__m256d q) { return flip(_mm256_permute_pd(q, 0b0101), -1, 1, 1, -1); }

inline __m256d left_unit(int j, __m256d q) {
    switch (j) {
        case 0: return flip(_mm256_permute_pd(q, 0b0101), -1, 1, -1, 1);
        case 1: return flip(_mm256_permute4x64_pd(q, _MM_SHUFFLE(1, 0, 3, 2)), -1, 1, 1, -1);
        default: return flip(_mm256_permute4x64_pd(q, _MM_SHUFFLE(0, 1, 2, 3)), -1, -1, 1, 1);
    }
}

void dirac_stencil_v(const StencilArgs& a) {
    const int N = a.n;
    const __m256d inv2h = _mm256_set1_pd(a.inv_2h), lift = _mm256_set1_pd(a.lift), two = _mm256_set1_pd(2.0);
    for (int x0 = 0; x0 < N; ++x0)
        for (int x1 = 0; x1 < N; ++x1)
            for (int x2 = 0; x2 < N; ++x2) {
                const int x[3] = {x0, x1, x2};
                const std::size_t site = (static_cast<std::size_t>(x0) * N + x1) * N + x2;
                const __m256d v0 = _mm256_loadu_pd(a.in + 4 * site);
                __m256d acc = _mm256_setzero_pd();
                for (int j = 0; j < 3; ++j) {
                    int xp[3] = {x[0], x[1], x[2]}, xm[3] = {x[0], x[1], x[2]};
                    xp[j] = (x[j] + 1) % N;
                    xm[j] = (x[j] + N - 1) % N;
                    const std::size_t sp = (static_cast<std::size_t>(xp[0]) * N + xp[1]) * N + xp[2];
                    const std::size_t sm = (static_cast<std::size_t>(xm[0]) * N + xm[1]) * N + xm[2];
                    const __m256d qp = _mm256_loadu_pd(a.in + 4 * sp);
                    const __m256d qm = _mm256_loadu_pd(a.in + 4 * sm);
                    const __m256d f = _mm256_fmadd_pd(_mm256_set1_pd(a.link_c[3 * site + j]), qp,
                                                      _mm256_mul_pd(_mm256_set1_pd(a.link_s[3 * site + j]), right_i(qp)));
                    const __m256d b = _mm256_fmsub_pd(_mm256_set1_pd(a.link_c[3 * sm + j]), qm,
                                                      _mm256_mul_pd(_mm256_set1_pd(a.link_s[3 * sm + j]), right_i(qm)));
                    const __m256d lap = _mm256_sub_pd(_mm256_fmsub_pd(two, v0, f), b);
                    const __m256d d = _mm256_fmadd_pd(inv2h, _mm256_sub_pd(f, b), _mm256_mul_pd(lift, right_i(lap)));
                    acc = _mm256_add_pd(acc, left_unit(j, d));
                }
                _mm256_storeu_pd(a.out + 4 * site, acc);
            }
}

const KernelTable kAvx2 = {"avx2", cross7_v, chi_cross_v, chi_table_v, form3_v, gram3_v, dirac_stencil_v};

}  // namespace

const KernelTable& detail::avx2_table() { return kAvx2; }

}  // namespace g2kit::kernels
