#pragma once

#include <array>

#include <Eigen/Core>

namespace g2kit {

using Vector3 = Eigen::Matrix<double, 3, 1>;
using Vector4 = Eigen::Matrix<double, 4, 1>;
using Vector7 = Eigen::Matrix<double, 7, 1>;
using Vector8 = Eigen::Matrix<double, 8, 1>;

struct Quaternion {
    double w = 0, x = 0, y = 0, z = 0;

    static Quaternion one() { return {1, 0, 0, 0}; }
    static Quaternion i() { return {0, 1, 0, 0}; }
    static Quaternion j() { return {0, 0, 1, 0}; }
    static Quaternion k() { return {0, 0, 0, 1}; }
    static Quaternion from_vec(const Vector4& v) { return {v[0], v[1], v[2], v[3]}; }
    static Quaternion pure(const Vector3& v) { return {0, v[0], v[1], v[2]}; }

    Vector4 vec() const { return {w, x, y, z}; }
    Vector3 im() const { return {x, y, z}; }
    Quaternion conj() const { return {w, -x, -y, -z}; }
    double norm2() const { return w * w + x * x + y * y + z * z; }
    double norm() const;
    Quaternion inverse() const;

    Quaternion operator+(const Quaternion& o) const { return {w + o.w, x + o.x, y + o.y, z + o.z}; }
    Quaternion operator-(const Quaternion& o) const { return {w - o.w, x - o.x, y - o.y, z - o.z}; }
    Quaternion operator-() const { return {-w, -x, -y, -z}; }
    Quaternion operator*(double s) const { return {w * s, x * s, y * s, z * s}; }
    bool operator==(const Quaternion&) const = default;
};

Quaternion quat_mul(const Quaternion& p, const Quaternion& q);
inline Quaternion operator*(const Quaternion& p, const Quaternion& q) { return quat_mul(p, q); }
// exp of a pure quaternion.
Quaternion quat_exp(const Vector3& v);

// Cayley-Dickson pair a + l b.
struct Octonion {
    Quaternion a, b;

    static Octonion one() { return {Quaternion::one(), {}}; }
    Octonion conj() const { return {a.conj(), -b}; }
    double re() const { return a.w; }
    double norm2() const { return a.norm2() + b.norm2(); }
    double norm() const;

    Octonion operator+(const Octonion& o) const { return {a + o.a, b + o.b}; }
    Octonion operator-(const Octonion& o) const { return {a - o.a, b - o.b}; }
    Octonion operator*(double s) const { return {a * s, b * s}; }
    bool operator==(const Octonion&) const = default;
};

// (a,b)(c,d) = (ac - conj(d) b, d a + b conj(c))
Octonion oct_mul(const Octonion& o1, const Octonion& o2);
inline Octonion operator*(const Octonion& p, const Octonion& q) { return oct_mul(p, q); }

// Basis of R^7 = Im O: e1..e4 = i, j, k, l and e5 = -li, e6 = -lj, e7 = lk.
// These signs are what make cross7 reproduce phi0 = e123 + e145 + e167 + e246
// - e257 - e347 - e356.
Octonion to_octonion(const Vector7& v);
Vector7 im7(const Octonion& o);
// R^8 = R^7 + R e8 with e8 the real unit.
Octonion to_octonion(const Vector8& v);
Vector8 to_vector8(const Octonion& o);

// u x v = im(conj(v) u)
Vector7 cross7(const Vector7& u, const Vector7& v);

// 1/2 ((u conj(v)) w - (w conj(v)) u); pairs with z to Psi(u, v, w, z).
Octonion triple_cross8(const Octonion& u, const Octonion& v, const Octonion& w);
Vector8 triple_cross8(const Vector8& u, const Vector8& v, const Vector8& w);

// Exact basis tables. Index 0 is the real unit, 1..7 are e1..e7.
struct SignedUnit {
    int sign = 0;  // -1, 0 or +1
    int index = 0;
    bool operator==(const SignedUnit&) const = default;
};
SignedUnit basis_mul(int a, int b);
// e_a x e_b for a, b in 1..7.
SignedUnit basis_cross(int a, int b);
// Integer octonion product in the e-basis (coefficients indexed 0..7).
std::array<long long, 8> int_oct_mul(const std::array<long long, 8>& x, const std::array<long long, 8>& y);

}  // namespace g2kit
