#include "g2kit/deformations.hpp"

#include <cmath>

#include "g2kit/error.hpp"

namespace g2kit {

LambdaParam::LambdaParam(double a, const Vector7& alpha) {
    const double n = std::sqrt(a * a + alpha.squaredNorm());
    if (!(n > 0.0) || !std::isfinite(n)) throw ConstraintError("lambda parameter must be a nonzero finite vector");
    a_ = a / n;
    alpha_ = alpha / n;
}

LambdaParam LambdaParam::exact(double a, const Vector7& alpha, double tol) {
    if (std::abs(a * a + alpha.squaredNorm() - 1.0) > tol) throw ConstraintError("constraint a^2 + |alpha|^2 = 1 violated");
    LambdaParam l;
    l.a_ = a;
    l.alpha_ = alpha;
    return l;
}

SplitFrame::SplitFrame(const Vector7& u, const Vector7& v, double tol) : u_(u), v_(v) {
    if (std::abs(u.norm() - 1) > tol || std::abs(v.norm() - 1) > tol || std::abs(u.dot(v)) > tol)
        throw FrameError("split frame must be orthonormal");
}

Eigen::Matrix<double, 7, 3> SplitFrame::E() const {
    Eigen::Matrix<double, 7, 3> m;
    m << u_, v_, cross7(u_, v_);
    return m;
}

Eigen::Matrix<double, 7, 4> SplitFrame::V() const {
    const Eigen::Matrix<double, 7, 3> e = E();
    // Complete by Gram-Schmidt against the standard basis, skipping dependent columns.
    Eigen::Matrix<double, 7, 4> out;
    int found = 0;
    for (int c = 0; c < 7 && found < 4; ++c) {
        Vector7 x = Vector7::Unit(c);
        for (int p = 0; p < 3; ++p) x -= e.col(p).dot(x) * e.col(p);
        for (int p = 0; p < found; ++p) x -= out.col(p).dot(x) * out.col(p);
        if (x.norm() > 1e-6) out.col(found++) = x.normalized();
    }
    return out;
}

AlternatingForm phi_lambda(const LambdaParam& l) {
    const AlternatingForm phi = phi0(), sphi = star_phi0();
    const AlternatingForm al = covector(l.alpha());
    const double a = l.a(), n2 = l.alpha().squaredNorm();
    return phi * (a * a - n2) + hodge_star(wedge(al, phi)) * (2 * a) + wedge(al, hodge_star(wedge(al, sphi))) * 2.0;
}

AlternatingForm phi_lambda_contracted(const LambdaParam& l) {
    const AlternatingForm phi = phi0(), sphi = star_phi0();
    const AlternatingForm inner = sphi * l.a() + wedge(covector(l.alpha()), phi);
    return phi - interior(l.alpha(), inner) * 2.0;
}

AlternatingForm star_phi_lambda(const LambdaParam& l) {
    const AlternatingForm phi = phi0(), sphi = star_phi0();
    const AlternatingForm inner = phi * l.a() - interior(l.alpha(), sphi);
    return sphi + wedge(covector(l.alpha()), inner) * 2.0;
}

Vector7 cross_lambda(const LambdaParam& l, const Vector7& u, const Vector7& v) {
    const Vector7& al = l.alpha();
    const double a = l.a();
    const Vector7 uv = cross7(u, v);
    return (1 - 2 * al.squaredNorm()) * uv +
           2 * (-a * chi_via_cross(u, v, al) + al.dot(v) * cross7(u, al) - al.dot(u) * cross7(v, al) +
                uv.dot(al) * al);
}

Vector7 f_locus_defect(const LambdaParam& l, const SplitFrame& s) {
    const Vector7& al = l.alpha();
    const Vector7 &u = s.u(), &v = s.v();
    const Vector7 uv = cross7(u, v);
    return l.a() * chi_via_cross(u, v, al) - al.dot(v) * cross7(u, al) + al.dot(u) * cross7(v, al) -
           uv.dot(al) * al + al.squaredNorm() * uv;
}

}  // namespace g2kit
