#include "g2kit/lie.hpp"

#include <cmath>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "g2kit/error.hpp"

namespace g2kit {

namespace {

Eigen::Matrix<double, 21, 1> so7_coords(const So7Element& A) {
    Eigen::Matrix<double, 21, 1> c;
    int n = 0;
    for (int a = 0; a < 7; ++a)
        for (int b = a + 1; b < 7; ++b) c[n++] = A(a, b);
    return c;
}

Eigen::Matrix<double, 21, Eigen::Dynamic> coords_matrix(const G2Basis& g2) {
    Eigen::Matrix<double, 21, Eigen::Dynamic> B(21, static_cast<int>(g2.elements.size()));
    for (std::size_t i = 0; i < g2.elements.size(); ++i) B.col(static_cast<int>(i)) = so7_coords(g2.elements[i]);
    return B;
}

}  // namespace

AlternatingForm lie_action_on_3forms(const So7Element& A, const AlternatingForm& f) {
    if (f.degree() != 3 || f.dim() != 7) throw std::invalid_argument("lie_action_on_3forms: need a 3-form on R^7");
    AlternatingForm r(3, 7);
    for (std::size_t I = 0; I < r.size(); ++I) {
        const auto& s = r.indices(I);
        const Vector7 u = Vector7::Unit(s[0]), v = Vector7::Unit(s[1]), w = Vector7::Unit(s[2]);
        r.coeff(I) = -f(A * u, v, w) - f(u, A * v, w) - f(u, v, A * w);
    }
    return r;
}

So7Element so7_generator(int a, int b) {
    So7Element E = So7Element::Zero();
    E(a, b) = 1.0;
    E(b, a) = -1.0;
    return E;
}

G2Basis compute_g2_basis() {
    const AlternatingForm phi = phi0();
    Eigen::Matrix<double, 35, 21> M;
    int col = 0;
    for (int a = 0; a < 7; ++a)
        for (int b = a + 1; b < 7; ++b) {
            const AlternatingForm d = lie_action_on_3forms(so7_generator(a, b), phi);
            for (int I = 0; I < 35; ++I) M(I, col) = d.coeff(I);
            ++col;
        }
    Eigen::JacobiSVD<Eigen::Matrix<double, 35, 21>> svd(M, Eigen::ComputeFullV);
    G2Basis out;
    out.singular_values = svd.singularValues();
    const auto& s = out.singular_values;
    for (int i = 0; i < s.size(); ++i) out.rank += s[i] > 1e-8 * s[0];
    const double next = out.rank < s.size() ? s[out.rank] : 0.0;
    out.gap = next > 0 ? s[out.rank - 1] / next : INFINITY;
    const int dim = 21 - out.rank;
    if (dim != 14) throw Error("internal error: stabilizer of phi0 has dimension " + std::to_string(dim));
    const Eigen::MatrixXd V = svd.matrixV();
    // Orthonormal in so(7) coordinates, scaled to unit Frobenius norm.
    for (int c = out.rank; c < 21; ++c) {
        So7Element A = So7Element::Zero();
        int n = 0;
        for (int a = 0; a < 7; ++a)
            for (int b = a + 1; b < 7; ++b) {
                A(a, b) = V(n, c) / std::sqrt(2.0);
                A(b, a) = -A(a, b);
                ++n;
            }
        out.elements.push_back(A);
    }
    return out;
}

double distance_to_span(const G2Basis& g2, const So7Element& A) {
    const auto B = coords_matrix(g2);
    const Eigen::Matrix<double, 21, 1> c = so7_coords(A);
    const Eigen::VectorXd x = B.colPivHouseholderQr().solve(c);
    return std::sqrt(2.0) * (B * x - c).norm();
}

double lie_closure_residual(const G2Basis& g2) {
    double worst = 0;
    for (std::size_t i = 0; i < g2.elements.size(); ++i)
        for (std::size_t j = i + 1; j < g2.elements.size(); ++j) {
            const So7Element C = g2.elements[i] * g2.elements[j] - g2.elements[j] * g2.elements[i];
            worst = std::max(worst, distance_to_span(g2, C));
        }
    return worst;
}

Vector7 embed_model(const Vector3& x, const Quaternion& y) {
    Vector7 v;
    v << x[0], x[1], x[2], y.w, -y.x, -y.y, y.z;
    return v;
}

Vector3 model_im(const Vector7& v) { return v.head<3>(); }

Quaternion model_normal(const Vector7& v) { return {v[3], -v[4], -v[5], v[6]}; }

G2Block g2_block_form(const So7Element& A, double tol) {
    if ((A + A.transpose()).cwiseAbs().maxCoeff() > tol) throw ConstraintError("input not in so(7)");
    const AlternatingForm d = lie_action_on_3forms(A, phi0());
    double m = 0;
    for (double c : d.coeffs()) m = std::max(m, std::abs(c));
    if (m > tol * std::max(1.0, A.norm())) throw ConstraintError("input not in g2");
    G2Block out;
    out.a = A.topLeftCorner<3, 3>();
    out.rho = A.bottomRightCorner<4, 4>();
    const Quaternion units[3] = {Quaternion::i(), Quaternion::j(), Quaternion::k()};
    Quaternion sum{};
    for (int a = 0; a < 3; ++a) {
        out.beta[a] = model_normal(A.col(a)).conj();
        sum = sum + out.beta[a] * units[a];
    }
    out.constraint_residual = sum.norm();
    return out;
}

int beta_space_dim(const G2Basis& g2, double rel_tol) {
    Eigen::MatrixXd M(12, static_cast<int>(g2.elements.size()));
    for (std::size_t c = 0; c < g2.elements.size(); ++c) {
        const G2Block b = g2_block_form(g2.elements[c]);
        for (int a = 0; a < 3; ++a) M.block<4, 1>(4 * a, static_cast<int>(c)) = b.beta[a].vec();
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& s = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < s.size(); ++i) rank += s[i] > rel_tol * s[0];
    return rank;
}

So4BlockElement::So4BlockElement(const Quaternion& q_, const Quaternion& l_) {
    if (q_.norm2() == 0.0 || l_.norm2() == 0.0) throw std::invalid_argument("So4BlockElement: zero quaternion");
    q = q_ * (1.0 / q_.norm());
    lambda = l_ * (1.0 / l_.norm());
}

std::pair<Vector3, Quaternion> so4_action(const So4BlockElement& e, const Vector3& x, const Quaternion& y) {
    const Quaternion xr = e.q * Quaternion::pure(x) * e.q.conj();
    return {xr.im(), e.q * y * e.lambda.conj()};
}

Matrix7 so4_matrix(const So4BlockElement& e) {
    Matrix7 M;
    for (int c = 0; c < 7; ++c) {
        const Vector7 v = Vector7::Unit(c);
        const auto [x, y] = so4_action(e, model_im(v), model_normal(v));
        M.col(c) = embed_model(x, y);
    }
    return M;
}

Quaternion clifford_mult(const Vector3& w, const Quaternion& v) { return Quaternion::pure(w) * v; }

Eigen::Matrix<double, 4, 12> clifford_matrix() {
    Eigen::Matrix<double, 4, 12> C;
    for (int a = 0; a < 3; ++a)
        for (int m = 0; m < 4; ++m)
            C.col(4 * a + m) = clifford_mult(Vector3::Unit(a), Quaternion::from_vec(Vector4::Unit(m))).vec();
    return C;
}

int clifford_rank(double rel_tol) {
    Eigen::JacobiSVD<Eigen::Matrix<double, 4, 12>> svd(clifford_matrix());
    const auto& s = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < s.size(); ++i) rank += s[i] > rel_tol * s[0];
    return rank;
}

int clifford_kernel_dim(double rel_tol) { return 12 - clifford_rank(rel_tol); }

double clifford_complement_condition() {
    Eigen::JacobiSVD<Eigen::Matrix<double, 4, 12>> svd(clifford_matrix());
    const auto& s = svd.singularValues();
    return s[0] / s[3];
}

}  // namespace g2kit
