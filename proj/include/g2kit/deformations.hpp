#pragma once

#include <Eigen/Core>

#include "g2kit/forms.hpp"

namespace g2kit {

// Point [a, alpha] of RP^7 with a^2 + |alpha|^2 = 1.
class LambdaParam {
public:
    // Rescales (a, alpha) onto the unit sphere; throws on the zero vector.
    LambdaParam(double a, const Vector7& alpha);
    // Requires a^2 + |alpha|^2 = 1 within tol; throws ConstraintError otherwise.
    static LambdaParam exact(double a, const Vector7& alpha, double tol = 1e-12);

    double a() const { return a_; }
    const Vector7& alpha() const { return alpha_; }

private:
    LambdaParam() = default;
    double a_ = 1.0;
    Vector7 alpha_ = Vector7::Zero();
};

// Orthonormal (u, v) with E = <u, v, u x v> and V = E-perp.
class SplitFrame {
public:
    SplitFrame(const Vector7& u, const Vector7& v, double tol = 1e-12);
    const Vector7& u() const { return u_; }
    const Vector7& v() const { return v_; }
    Eigen::Matrix<double, 7, 3> E() const;
    Eigen::Matrix<double, 7, 4> V() const;

private:
    Vector7 u_, v_;
};

// (a^2 - |alpha|^2) phi + 2a *(alpha ∧ phi) + 2 alpha ∧ *(alpha ∧ *phi)
AlternatingForm phi_lambda(const LambdaParam& l);
// phi - 2 alpha# ⌟ [a *phi + alpha ∧ phi]
AlternatingForm phi_lambda_contracted(const LambdaParam& l);
// *phi + 2 alpha ∧ [a phi - alpha# ⌟ *phi]
AlternatingForm star_phi_lambda(const LambdaParam& l);

// (1 - 2|alpha|^2)(u x v) + 2[-a chi(u,v,alpha#) + alpha(v)(u x alpha#)
//   - alpha(u)(v x alpha#) + phi(u,v,alpha#) alpha#]
Vector7 cross_lambda(const LambdaParam& l, const Vector7& u, const Vector7& v);

// F = a chi(u,v,alpha#) - alpha(v)(u x alpha#) + alpha(u)(v x alpha#)
//     - phi(u,v,alpha#) alpha# + |alpha|^2 (u x v), so (u x v)_l = u x v - 2F.
Vector7 f_locus_defect(const LambdaParam& l, const SplitFrame& s);

}  // namespace g2kit
