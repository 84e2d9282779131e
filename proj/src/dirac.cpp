#include "g2kit/dirac.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SparseLU>

#include "g2kit/error.hpp"
#include "g2kit/kernels.hpp"
#include "g2kit/octonion.hpp"
#include "g2kit/random.hpp"

namespace g2kit {

namespace {

using Mat4 = Eigen::Matrix4d;

Mat4 left_matrix(const Quaternion& p) {
    Mat4 M;
    for (int m = 0; m < 4; ++m) M.col(m) = (p * Quaternion::from_vec(Eigen::Vector4d::Unit(m))).vec();
    return M;
}

Mat4 right_matrix(const Quaternion& p) {
    Mat4 M;
    for (int m = 0; m < 4; ++m) M.col(m) = (Quaternion::from_vec(Eigen::Vector4d::Unit(m)) * p).vec();
    return M;
}

double lift_of(const DiracOptions& opt, int n) { return opt.stencil == Stencil::Lifted ? opt.r * n / 2.0 : 0.0; }

void links(const Connection1Form& a, std::vector<double>& c, std::vector<double>& s) {
    const double h = 1.0 / a.n();
    c.resize(a.data().size());
    s.resize(a.data().size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        c[i] = std::cos(a.data()[i] * h);
        s[i] = std::sin(a.data()[i] * h);
    }
}

}  // namespace

LatticeSpinorField::LatticeSpinorField(int n) : n_(n) {
    if (n < 2) throw std::invalid_argument("grid size must be >= 2");
    data_.assign(4 * sites(), 0.0);
}

std::size_t LatticeSpinorField::index(int s0, int s1, int s2) const {
    return (static_cast<std::size_t>(s0) * n_ + s1) * n_ + s2;
}

void LatticeSpinorField::set_complex(std::size_t s, cplx z, cplx w) {
    data_[4 * s] = z.real();
    data_[4 * s + 1] = z.imag();
    data_[4 * s + 2] = w.real();
    data_[4 * s + 3] = -w.imag();
}

double LatticeSpinorField::norm() const {
    double s = 0;
    for (double x : data_) s += x * x;
    return std::sqrt(s);
}

double LatticeSpinorField::max_abs() const {
    double m = 0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
}

LatticeSpinorField LatticeSpinorField::constant(int n, const Eigen::Vector4d& q) {
    LatticeSpinorField f(n);
    for (std::size_t s = 0; s < f.sites(); ++s)
        for (int m = 0; m < 4; ++m) f.site(s)[m] = q[m];
    return f;
}

Connection1Form::Connection1Form(int n) : n_(n) {
    if (n < 2) throw std::invalid_argument("grid size must be >= 2");
    th_.assign(3 * static_cast<std::size_t>(n) * n * n, 0.0);
}

Connection1Form Connection1Form::constant(int n, const Eigen::Vector3d& theta) {
    Connection1Form a(n);
    for (std::size_t s = 0; s < a.data().size() / 3; ++s)
        for (int j = 0; j < 3; ++j) a.theta(s, j) = theta[j];
    return a;
}

LatticeSpinorField dirac_apply(const LatticeSpinorField& v, const Connection1Form& a, const DiracOptions& opt) {
    if (v.n() != a.n()) throw GridMismatchError();
    std::vector<double> c, s;
    links(a, c, s);
    LatticeSpinorField out(v.n());
    kernels::StencilArgs args;
    args.n = v.n();
    args.inv_2h = v.n() / 2.0;
    args.lift = lift_of(opt, v.n());
    args.link_c = c.data();
    args.link_s = s.data();
    args.in = v.data().data();
    args.out = out.data().data();
    kernels::active().dirac_stencil(args);
    return out;
}

Eigen::SparseMatrix<double> assemble_dirac(const Connection1Form& a, const DiracOptions& opt) {
    const int N = a.n();
    const std::size_t sites = static_cast<std::size_t>(N) * N * N;
    std::vector<double> c, s;
    links(a, c, s);
    const double inv2h = N / 2.0, lift = lift_of(opt, N);
    const Mat4 Ri = right_matrix(Quaternion::i());
    const Mat4 Lj[3] = {left_matrix(Quaternion::i()), left_matrix(Quaternion::j()), left_matrix(Quaternion::k())};
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(sites * 3 * 3 * 16);
    auto add = [&](std::size_t r, std::size_t col, const Mat4& B) {
        for (int p = 0; p < 4; ++p)
            for (int q = 0; q < 4; ++q)
                if (B(p, q) != 0.0) trip.emplace_back(static_cast<int>(4 * r + p), static_cast<int>(4 * col + q), B(p, q));
    };
    for (int x0 = 0; x0 < N; ++x0)
        for (int x1 = 0; x1 < N; ++x1)
            for (int x2 = 0; x2 < N; ++x2) {
                const int x[3] = {x0, x1, x2};
                const std::size_t site = (static_cast<std::size_t>(x0) * N + x1) * N + x2;
                for (int j = 0; j < 3; ++j) {
                    int xp[3] = {x0, x1, x2}, xm[3] = {x0, x1, x2};
                    xp[j] = (x[j] + 1) % N;
                    xm[j] = (x[j] + N - 1) % N;
                    const std::size_t sp = (static_cast<std::size_t>(xp[0]) * N + xp[1]) * N + xp[2];
                    const std::size_t sm = (static_cast<std::size_t>(xm[0]) * N + xm[1]) * N + xm[2];
                    const Mat4 Up = c[3 * site + j] * Mat4::Identity() + s[3 * site + j] * Ri;
                    const Mat4 Um = c[3 * sm + j] * Mat4::Identity() - s[3 * sm + j] * Ri;
                    add(site, sp, Lj[j] * (inv2h * Up - lift * Ri * Up));
                    add(site, sm, Lj[j] * (-inv2h * Um - lift * Ri * Um));
                    add(site, site, Lj[j] * (2.0 * lift * Ri));
                }
            }
    Eigen::SparseMatrix<double> D(static_cast<int>(4 * sites), static_cast<int>(4 * sites));
    D.setFromTriplets(trip.begin(), trip.end());
    D.prune(0.0);
    return D;
}

double dirac_asymmetry(const Eigen::SparseMatrix<double>& D) {
    const Eigen::SparseMatrix<double> E = D - Eigen::SparseMatrix<double>(D.transpose());
    double m = 0;
    for (int k = 0; k < E.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(E, k); it; ++it) m = std::max(m, std::abs(it.value()));
    return m;
}

std::vector<SectorEigen> fourier_sectors(int n, const Eigen::Vector3d& theta, const DiracOptions& opt) {
    const double h = 1.0 / n;
    const double r = opt.stencil == Stencil::Lifted ? opt.r : 0.0;
    std::vector<SectorEigen> out;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                const int k[3] = {a, b, c};
                double t2 = 0;
                for (int j = 0; j < 3; ++j) {
                    const double p = 2 * M_PI * k[j] / n + theta[j] * h;
                    const double t = (std::sin(p) + r * (1 - std::cos(p))) / h;
                    t2 += t * t;
                }
                out.push_back({{a, b, c}, std::sqrt(t2)});
            }
    return out;
}

std::vector<double> symbol_spectrum(int n, const Eigen::Vector3d& theta, const DiracOptions& opt) {
    std::vector<double> ev;
    for (const auto& s : fourier_sectors(n, theta, opt)) {
        ev.push_back(s.t);
        ev.push_back(s.t);
        ev.push_back(-s.t);
        ev.push_back(-s.t);
    }
    std::sort(ev.begin(), ev.end());
    return ev;
}

std::vector<double> dense_spectrum(const Connection1Form& a, const DiracOptions& opt) {
    const Eigen::MatrixXd D = Eigen::MatrixXd(assemble_dirac(a, opt));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(D, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NoConvergenceError("dense eigensolver failed");
    const Eigen::VectorXd& v = es.eigenvalues();
    return std::vector<double>(v.data(), v.data() + v.size());
}

std::vector<double> dirac_spectrum(const Connection1Form& a, int count, const DiracOptions& opt,
                                   const SpectrumOptions& sopt) {
    const Eigen::SparseMatrix<double> D = assemble_dirac(a, opt);
    const int M = static_cast<int>(D.rows());
    if (count < 1 || count > M) throw std::invalid_argument("dirac_spectrum: count out of range");
    const int p = std::min(M, count + sopt.extra);

    // Iterate with (D - s)^-1 (D + s)^-1 = (D^2 - s^2)^-1, which ranks eigenvalues by |lambda|
    // so that the +-t pairs enter the subspace together.
    Eigen::SparseMatrix<double> I(M, M);
    I.setIdentity();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_m, lu_p;
    lu_m.compute(D - sopt.shift * I);
    lu_p.compute(D + sopt.shift * I);
    if (lu_m.info() != Eigen::Success || lu_p.info() != Eigen::Success)
        throw NoConvergenceError("shifted operator factorization failed");

    Rng rng(sopt.seed);
    Eigen::MatrixXd X(M, p);
    for (int c = 0; c < p; ++c)
        for (int r = 0; r < M; ++r) X(r, c) = rng.normal();

    for (int it = 0; it < sopt.max_iter; ++it) {
        const Eigen::MatrixXd Z = lu_m.solve(X);
        const Eigen::MatrixXd Y = lu_p.solve(Z);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(Y);
        const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(M, p);
        const Eigen::MatrixXd DQ = D * Q;
        Eigen::MatrixXd H = Q.transpose() * DQ;
        H = 0.5 * (H + H.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
        X = Q * es.eigenvectors();
        const Eigen::VectorXd& th = es.eigenvalues();
        const Eigen::MatrixXd DX = DQ * es.eigenvectors();

        // Ritz pairs from a partially captured +-t cluster are spurious: they
        // never converge but have |D x| >= t. Accept once count pairs have
        // converged and every unconverged vector lies above them in |D x|.
        std::vector<int> conv;
        double unconv_floor = std::numeric_limits<double>::infinity();
        for (int i = 0; i < p; ++i) {
            const double res = (DX.col(i) - th[i] * X.col(i)).norm();
            if (res <= sopt.tol * std::max(1.0, std::abs(th[i])))
                conv.push_back(i);
            else
                unconv_floor = std::min(unconv_floor, DX.col(i).norm());
        }
        if (static_cast<int>(conv.size()) < count) continue;
        std::stable_sort(conv.begin(), conv.end(), [&](int l, int r) { return std::abs(th[l]) < std::abs(th[r]); });
        const double tau = std::abs(th[conv[count - 1]]);
        if (unconv_floor < tau * (1 - 1e-8)) continue;
        std::vector<double> out;
        for (int i = 0; i < count; ++i) out.push_back(th[conv[i]]);
        std::sort(out.begin(), out.end());
        return out;
    }
    throw NoConvergenceError("eigensolver did not converge");
}

int count_below(const std::vector<double>& spectrum, double tol) {
    return static_cast<int>(std::count_if(spectrum.begin(), spectrum.end(), [&](double x) { return std::abs(x) < tol; }));
}

}  // namespace g2kit
