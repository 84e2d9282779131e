#include "g2kit/octonion.hpp"

#include <cmath>

namespace g2kit {

namespace {

// Sign relating e-basis coordinates to the raw pair coordinates (a; b).
// Since l i = (0, -i) etc., e5 = -li, e6 = -lj, e7 = lk sit at b = (.., i, j, -k).
constexpr int kSign[8] = {1, 1, 1, 1, 1, 1, 1, -1};

template <class T>
void qmul(const T* p, const T* q, T* r) {
    r[0] = p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3];
    r[1] = p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2];
    r[2] = p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1];
    r[3] = p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0];
}

template <class T>
void cdmul(const T* x, const T* y, T* r) {
    const T* a = x;
    const T* b = x + 4;
    const T* c = y;
    const T* d = y + 4;
    T cc[4] = {c[0], -c[1], -c[2], -c[3]};
    T dc[4] = {d[0], -d[1], -d[2], -d[3]};
    T t1[4], t2[4];
    qmul(a, c, t1);
    qmul(dc, b, t2);
    for (int n = 0; n < 4; ++n) r[n] = t1[n] - t2[n];
    qmul(d, a, t1);
    qmul(b, cc, t2);
    for (int n = 0; n < 4; ++n) r[4 + n] = t1[n] + t2[n];
}

void to_raw(const Octonion& o, double* r) {
    r[0] = o.a.w; r[1] = o.a.x; r[2] = o.a.y; r[3] = o.a.z;
    r[4] = o.b.w; r[5] = o.b.x; r[6] = o.b.y; r[7] = o.b.z;
}

Octonion from_raw(const double* r) { return {{r[0], r[1], r[2], r[3]}, {r[4], r[5], r[6], r[7]}}; }

}  // namespace

double Quaternion::norm() const { return std::sqrt(norm2()); }

Quaternion Quaternion::inverse() const { return conj() * (1.0 / norm2()); }

Quaternion quat_mul(const Quaternion& p, const Quaternion& q) {
    double a[4] = {p.w, p.x, p.y, p.z}, b[4] = {q.w, q.x, q.y, q.z}, r[4];
    qmul(a, b, r);
    return {r[0], r[1], r[2], r[3]};
}

Quaternion quat_exp(const Vector3& v) {
    const double t = v.norm();
    if (t == 0.0) return Quaternion::one();
    const double s = std::sin(t) / t;
    return {std::cos(t), v[0] * s, v[1] * s, v[2] * s};
}

double Octonion::norm() const { return std::sqrt(norm2()); }

Octonion oct_mul(const Octonion& o1, const Octonion& o2) {
    double x[8], y[8], r[8];
    to_raw(o1, x);
    to_raw(o2, y);
    cdmul(x, y, r);
    return from_raw(r);
}

Octonion to_octonion(const Vector7& v) {
    double r[8] = {0};
    for (int n = 1; n < 8; ++n) r[n] = kSign[n] * v[n - 1];
    return from_raw(r);
}

Vector7 im7(const Octonion& o) {
    double r[8];
    to_raw(o, r);
    Vector7 v;
    for (int n = 1; n < 8; ++n) v[n - 1] = kSign[n] * r[n];
    return v;
}

Octonion to_octonion(const Vector8& v) {
    double r[8];
    r[0] = v[7];
    for (int n = 1; n < 8; ++n) r[n] = kSign[n] * v[n - 1];
    return from_raw(r);
}

Vector8 to_vector8(const Octonion& o) {
    double r[8];
    to_raw(o, r);
    Vector8 v;
    v[7] = r[0];
    for (int n = 1; n < 8; ++n) v[n - 1] = kSign[n] * r[n];
    return v;
}

Vector7 cross7(const Vector7& u, const Vector7& v) {
    return im7(oct_mul(to_octonion(v).conj(), to_octonion(u)));
}

Octonion triple_cross8(const Octonion& u, const Octonion& v, const Octonion& w) {
    const Octonion vb = v.conj();
    return (oct_mul(oct_mul(u, vb), w) - oct_mul(oct_mul(w, vb), u)) * 0.5;
}

Vector8 triple_cross8(const Vector8& u, const Vector8& v, const Vector8& w) {
    return to_vector8(triple_cross8(to_octonion(u), to_octonion(v), to_octonion(w)));
}

std::array<long long, 8> int_oct_mul(const std::array<long long, 8>& x, const std::array<long long, 8>& y) {
    long long a[8], b[8], r[8];
    for (int n = 0; n < 8; ++n) {
        a[n] = kSign[n] * x[n];
        b[n] = kSign[n] * y[n];
    }
    cdmul(a, b, r);
    std::array<long long, 8> out{};
    for (int n = 0; n < 8; ++n) out[n] = kSign[n] * r[n];
    return out;
}

SignedUnit basis_mul(int a, int b) {
    std::array<long long, 8> x{}, y{};
    x[a] = 1;
    y[b] = 1;
    const auto r = int_oct_mul(x, y);
    for (int n = 0; n < 8; ++n)
        if (r[n] != 0) return {static_cast<int>(r[n]), n};
    return {};
}

SignedUnit basis_cross(int a, int b) {
    // im(conj(e_b) e_a) = im(-e_b e_a) for imaginary units
    if (a == b) return {};
    SignedUnit p = basis_mul(b, a);
    return {-p.sign, p.index};
}

}  // namespace g2kit
