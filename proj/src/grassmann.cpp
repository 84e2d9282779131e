#include "g2kit/grassmann.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "g2kit/error.hpp"
#include "g2kit/random.hpp"

namespace g2kit {

using Mat73 = Eigen::Matrix<double, 7, 3>;

Eigen::MatrixXd mgs(const Eigen::MatrixXd& columns, double rank_tol) {
    Eigen::MatrixXd Q = columns;
    for (int c = 0; c < Q.cols(); ++c) {
        for (int p = 0; p < c; ++p) Q.col(c) -= Q.col(p).dot(Q.col(c)) * Q.col(p);
        const double nrm = Q.col(c).norm();
        if (!(nrm > rank_tol)) throw FrameError("frame degenerates (rank < " + std::to_string(Q.cols()) + ")");
        Q.col(c) /= nrm;
    }
    return Q;
}

Frame::Frame(const Eigen::MatrixXd& columns, double tol) : m_(columns) {
    if (m_.cols() < 1 || m_.cols() > m_.rows()) throw FrameError("frame: bad shape");
    const Eigen::MatrixXd G = m_.transpose() * m_;
    const double err = (G - Eigen::MatrixXd::Identity(m_.cols(), m_.cols())).cwiseAbs().maxCoeff();
    if (!(err <= tol)) throw FrameError("frame not orthonormal");
}

Frame Frame::from_span(const Eigen::MatrixXd& columns) { return Frame(mgs(columns), 1e-12); }

Frame Frame::standard(int n, std::initializer_list<int> one_based) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, static_cast<int>(one_based.size()));
    int c = 0;
    for (int i : one_based) m(i - 1, c++) = 1.0;
    return Frame(m);
}

Eigen::MatrixXd Frame::complement() const {
    Eigen::MatrixXd A(n(), k() + n());
    A << m_, Eigen::MatrixXd::Identity(n(), n());
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
    Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n(), n());
    return Q.rightCols(n() - k());
}

CalibrationReport associative_test(const Frame& L, double tol) {
    if (L.n() != 7 || L.k() != 3) throw FrameError("associative_test: need a 3-frame in R^7");
    CalibrationReport r;
    const Vector7 u = L.col(0), v = L.col(1), w = L.col(2);
    r.phi_value = cross7(u, v).dot(w);
    r.chi_defect = chi_via_cross(u, v, w);
    r.defect_norm = r.chi_defect.norm();
    r.is_associative = r.defect_norm < tol;
    return r;
}

double coassociative_test(const Frame& X) {
    if (X.n() != 7 || X.k() != 4) throw FrameError("coassociative_test: need a 4-frame in R^7");
    const AlternatingForm phi = phi0();
    double m = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b)
            for (int c = b + 1; c < 4; ++c) m = std::max(m, std::abs(phi(X.col(a), X.col(b), X.col(c))));
    return m;
}

double cayley_test(const Frame& X) {
    if (X.n() != 8 || X.k() != 4) throw FrameError("cayley_test: need a 4-frame in R^8");
    static const AlternatingForm psi = psi8();
    return psi.evaluate(X.matrix());
}

NormalComplexStructure normal_complex_structure(const Frame& L, const Vector7& u, const Vector7& v, double tol) {
    if (L.n() != 7 || L.k() != 3) throw FrameError("normal_complex_structure: need a 3-frame in R^7");
    if (!associative_test(L, tol).is_associative) throw NotAssociativeError();
    const Eigen::MatrixXd P = L.projector();
    if ((P * u - u).norm() > tol || (P * v - v).norm() > tol) throw FrameError("u, v must lie in L");
    if (std::abs(u.norm() - 1) > tol || std::abs(v.norm() - 1) > tol || std::abs(u.dot(v)) > tol)
        throw FrameError("u, v must be orthonormal");
    NormalComplexStructure out;
    out.basis = L.complement();
    for (int b = 0; b < 4; ++b) {
        const Vector7 jx = chi_via_cross(u, v, out.basis.col(b));
        out.j.col(b) = out.basis.transpose() * jx;
    }
    out.ambient = out.basis * out.j * out.basis.transpose();
    if ((out.j * out.j + Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() > std::sqrt(tol))
        throw NotAssociativeError();
    return out;
}

std::vector<Frame> sample_grassmann(std::uint64_t seed, std::size_t count) {
    Rng rng(seed);
    std::vector<Frame> out;
    out.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
        Mat73 G;
        for (int c = 0; c < 3; ++c)
            for (int r = 0; r < 7; ++r) G(r, c) = rng.normal();
        Eigen::HouseholderQR<Mat73> qr(G);
        Mat73 Q = qr.householderQ() * Mat73::Identity();
        const Eigen::Matrix3d R = qr.matrixQR().topRows<3>().triangularView<Eigen::Upper>();
        for (int c = 0; c < 3; ++c)
            if (R(c, c) < 0) Q.col(c) = -Q.col(c);
        out.emplace_back(mgs(Q), 1e-12);
    }
    return out;
}

Mat73 defect_gradient(const Mat73& X) {
    const Vector7 x1 = X.col(0), x2 = X.col(1), x3 = X.col(2);
    const Vector7 c = chi_via_cross(x1, x2, x3);
    Mat73 G;
    G.col(0) = -2.0 * chi_via_cross(x2, x3, c);
    G.col(1) = -2.0 * chi_via_cross(x3, x1, c);
    G.col(2) = -2.0 * chi_via_cross(x1, x2, c);
    return G;
}

Mat73 defect_gradient_fd(const Mat73& X, double step) {
    auto energy = [](const Mat73& Y) { return chi_via_cross(Y.col(0), Y.col(1), Y.col(2)).squaredNorm(); };
    Mat73 G;
    for (int c = 0; c < 3; ++c)
        for (int r = 0; r < 7; ++r) {
            Mat73 P = X, M = X;
            P(r, c) += step;
            M(r, c) -= step;
            G(r, c) = (energy(P) - energy(M)) / (2 * step);
        }
    return G;
}

ProjectionResult project_to_associative(const Frame& L0, double step, int max_iter, double tol) {
    if (L0.n() != 7 || L0.k() != 3) throw FrameError("project_to_associative: need a 3-frame in R^7");
    Mat73 X = L0.matrix();
    for (int it = 0; it <= max_iter; ++it) {
        const double d = chi_via_cross(X.col(0), X.col(1), X.col(2)).norm();
        if (d < tol) return {Frame(X, 1e-12), it, d};
        if (it == max_iter) break;
        const Mat73 G = defect_gradient(X);
        const Mat73 PG = G - X * (X.transpose() * G);
        X = mgs(X - step * PG);
    }
    throw NoConvergenceError("no convergence in max_iter");
}

int linearized_defect_rank(const Frame& L, double rel_tol) {
    const Mat73 X = L.matrix();
    const Eigen::MatrixXd N = L.complement();
    Eigen::Matrix<double, 7, 12> M;
    for (int b = 0; b < 4; ++b) {
        const Vector7 nb = N.col(b);
        M.col(b) = chi_via_cross(nb, X.col(1), X.col(2));
        M.col(4 + b) = chi_via_cross(X.col(0), nb, X.col(2));
        M.col(8 + b) = chi_via_cross(X.col(0), X.col(1), nb);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& s = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < s.size(); ++i) rank += s[i] > rel_tol * s[0];
    return rank;
}

Immersion3Lattice::Immersion3Lattice(int n, const Mat73& periods)
    : n_(n), periods_(periods), pts_(static_cast<std::size_t>(n) * n * n, Vector7::Zero()) {
    if (n < 2) throw std::invalid_argument("lattice size must be >= 2");
}

Immersion3Lattice Immersion3Lattice::flat_torus(int n) {
    Mat73 P = Mat73::Zero();
    P(0, 0) = P(1, 1) = P(2, 2) = 1.0;
    return flat_torus(n, P);
}

Immersion3Lattice Immersion3Lattice::flat_torus(int n, const Mat73& periods) {
    Immersion3Lattice Y(n, periods);
    const double h = 1.0 / n;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                Y.point(Y.index(a, b, c)) = h * (a * periods.col(0) + b * periods.col(1) + c * periods.col(2));
    return Y;
}

std::size_t Immersion3Lattice::index(int s0, int s1, int s2) const {
    return (static_cast<std::size_t>(s0) * n_ + s1) * n_ + s2;
}

Mat73 Immersion3Lattice::tangents(std::size_t site) const {
    const int s[3] = {static_cast<int>(site / (n_ * n_)), static_cast<int>((site / n_) % n_),
                      static_cast<int>(site % n_)};
    Mat73 T;
    for (int j = 0; j < 3; ++j) {
        int p[3] = {s[0], s[1], s[2]}, m[3] = {s[0], s[1], s[2]};
        p[j] = (s[j] + 1) % n_;
        m[j] = (s[j] + n_ - 1) % n_;
        Vector7 fwd = pts_[index(p[0], p[1], p[2])];
        Vector7 bwd = pts_[index(m[0], m[1], m[2])];
        if (s[j] + 1 == n_) fwd += periods_.col(j);
        if (s[j] == 0) bwd -= periods_.col(j);
        T.col(j) = (fwd - bwd) * (0.5 * n_);
    }
    return T;
}

Vector7 Immersion3Lattice::defect(std::size_t site) const {
    const Mat73 F = mgs(tangents(site), 1e-8);
    return chi_via_cross(F.col(0), F.col(1), F.col(2));
}

std::vector<double> Immersion3Lattice::defect_norms() const {
    std::vector<double> d(pts_.size());
    for (std::size_t s = 0; s < pts_.size(); ++s) d[s] = defect(s).norm();
    return d;
}

double Immersion3Lattice::max_defect() const {
    const auto d = defect_norms();
    return d.empty() ? 0.0 : *std::max_element(d.begin(), d.end());
}

Immersion3Lattice chi_flow_step(const Immersion3Lattice& Y, double dt) {
    Immersion3Lattice out = Y;
    if (dt == 0.0) return out;
    for (std::size_t s = 0; s < Y.sites(); ++s) out.point(s) += dt * Y.defect(s);
    return out;
}

void perturb(Immersion3Lattice& Y, FlowPerturbation mode, double eps, std::uint64_t seed) {
    const int n = Y.n();
    Rng rng(seed);
    for (int s0 = 0; s0 < n; ++s0)
        for (int s1 = 0; s1 < n; ++s1)
            for (int s2 = 0; s2 < n; ++s2) {
                const double t = 2 * M_PI * s0 / n;
                Vector7 d = Vector7::Zero();
                switch (mode) {
                    case FlowPerturbation::None:
                        break;
                    case FlowPerturbation::Sin:
                        d[3] = std::sin(t);
                        break;
                    case FlowPerturbation::Eigen:
                        d[3] = std::sin(t);
                        d[4] = -std::cos(t);
                        break;
                    case FlowPerturbation::Random:
                        d = rng.normal_vec<7>();
                        break;
                }
                Y.point(Y.index(s0, s1, s2)) += eps * d;
            }
}

FlowTrace chi_flow(Immersion3Lattice& Y, int steps, double dt) {
    FlowTrace tr;
    tr.max_defect.push_back(Y.max_defect());
    for (int k = 0; k < steps; ++k) {
        Immersion3Lattice next = chi_flow_step(Y, dt);
        if (k == 0)
            for (std::size_t s = 0; s < Y.sites(); ++s)
                tr.first_step_displacement = std::max(tr.first_step_displacement, (next.point(s) - Y.point(s)).norm());
        Y = std::move(next);
        tr.max_defect.push_back(Y.max_defect());
    }
    return tr;
}

}  // namespace g2kit
