#pragma once

#include <vector>

#include "g2kit/dirac.hpp"

namespace g2kit {

struct SigmaValue {
    double r;  // (|z|^2 - |w|^2) / 2
    cplx c;    // conj(z) w
};

SigmaValue sigma_map(cplx z, cplx w);
// sigma as a real 1-form: sigma_j = <v, -i c_j v> / 2 = (r, -Im c, -Re c).
Eigen::Vector3d sigma_one_form(cplx z, cplx w);
// Symmetric bilinear form with sigma_bilinear(v, v) = sigma_one_form(v).
Eigen::Vector3d sigma_bilinear(const double* v, const double* u);

// Real 1-form with three components per site.
using OneFormField = std::vector<double>;

struct SWState {
    explicit SWState(int n) : v(n), a(n), delta(3 * static_cast<std::size_t>(n) * n * n, 0.0) {}
    int n() const { return v.n(); }
    LatticeSpinorField v;
    Connection1Form a;
    OneFormField delta;
};

struct SWResidual {
    LatticeSpinorField dirac;
    OneFormField curvature;  // *F + delta - sigma(v, v)
    double dirac_l2() const;
    double curvature_l2() const;
    double dirac_max() const;
    double curvature_max() const;
};

// (*F)_j = F_kl for cyclic (j, k, l), F = d theta by forward plaquettes.
OneFormField lattice_curl(const Connection1Form& a);
SWResidual sw_residual(const SWState& s, const DiracOptions& opt = {});
// Derivative of sw_residual at s in the direction (dv, dtheta, ddelta).
SWResidual sw_linearization(const SWState& s, const LatticeSpinorField& dv, const Connection1Form& da,
                            const OneFormField& ddelta, const DiracOptions& opt = {});

// v -> exp(i psi) v, theta_j(x) -> theta_j(x) - (psi(x + e_j) - psi(x)) / h.
SWState gauge_transform(const SWState& s, const std::vector<double>& psi);
// exp(i psi) applied sitewise (right multiplication by the unit complex number).
LatticeSpinorField phase(const LatticeSpinorField& v, const std::vector<double>& psi);

struct IndexComplex {
    Eigen::SparseMatrix<double> matrix;  // (f, theta) -> (d^* theta, df + *d theta)
    int rows = 0, cols = 0;
    int index() const { return cols - rows; }
};
IndexComplex assemble_index_complex(int n);

// d = (c1^2 - (2 e + 3 sigma)) / 4; throws ConstraintError("not realizable")
// when the numerator is not divisible by 4.
long long sw_index_formula(long long c1_sq, long long euler, long long signature);

}  // namespace g2kit
