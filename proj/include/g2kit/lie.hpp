#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "g2kit/forms.hpp"
#include "g2kit/octonion.hpp"

namespace g2kit {

using So7Element = Matrix7;

// (L_A f)(u,v,w) = -f(Au,v,w) - f(u,Av,w) - f(u,v,Aw)
AlternatingForm lie_action_on_3forms(const So7Element& A, const AlternatingForm& f);

// Generator E_ab (a < b, 0-based) of so(7): E(a,b) = 1, E(b,a) = -1.
So7Element so7_generator(int a, int b);

struct G2Basis {
    std::vector<So7Element> elements;      // Frobenius-orthonormal
    Eigen::VectorXd singular_values;      // of the 35 x 21 stabilizer map, descending
    int rank = 0;                         // of the stabilizer map
    double gap = 0;                       // sigma_rank / sigma_{rank+1}
};

G2Basis compute_g2_basis();
// Max residual of [A_i, A_j] after projection onto the span.
double lie_closure_residual(const G2Basis& g2);
// Distance from A to the span of the basis (Frobenius).
double distance_to_span(const G2Basis& g2, const So7Element& A);

// Model R^7 = Im H + H: (e1, e2, e3) <-> (i, j, k) and y in H sits at
// iota(y) = l y, i.e. (1, i, j, k) <-> (e4, -e5, -e6, e7).
Vector7 embed_model(const Vector3& x, const Quaternion& y);
Vector3 model_im(const Vector7& v);
Quaternion model_normal(const Vector7& v);

struct G2Block {
    Eigen::Matrix3d a;    // action on L = <e1, e2, e3>
    Eigen::Matrix4d rho;  // action on L-perp, in the basis (e4..e7)
    // beta_a = conj(iota^{-1}(normal part of A e_a)); satisfies
    // beta_1 i + beta_2 j + beta_3 k = 0.
    std::array<Quaternion, 3> beta;
    double constraint_residual = 0;
};

// Throws ConstraintError if A does not annihilate phi0 within tol.
G2Block g2_block_form(const So7Element& A, double tol = 1e-10);
// Dimension of the beta-image of g2 (rank of g2 -> H^3).
int beta_space_dim(const G2Basis& g2, double rel_tol = 1e-8);

struct So4BlockElement {
    Quaternion q, lambda;
    // Normalizes both factors; throws on a zero quaternion.
    So4BlockElement(const Quaternion& q, const Quaternion& lambda);
};

std::pair<Vector3, Quaternion> so4_action(const So4BlockElement& e, const Vector3& x, const Quaternion& y);
// The 7 x 7 matrix of so4_action in the model basis.
Matrix7 so4_matrix(const So4BlockElement& e);

// Left multiplication of v by the pure quaternion w.
Quaternion clifford_mult(const Vector3& w, const Quaternion& v);
// The map c: R^3 (x) H -> H, (v_1, v_2, v_3) -> i v_1 + j v_2 + k v_3, as 4 x 12.
Eigen::Matrix<double, 4, 12> clifford_matrix();
int clifford_rank(double rel_tol = 1e-8);
int clifford_kernel_dim(double rel_tol = 1e-8);
// Condition number of c restricted to the orthogonal complement of its kernel.
double clifford_complement_condition();

}  // namespace g2kit
