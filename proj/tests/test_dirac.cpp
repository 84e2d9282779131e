#include <algorithm>
#include <chrono>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "g2kit/dirac.hpp"
#include "g2kit/error.hpp"
#include "g2kit/random.hpp"

using namespace g2kit;

namespace {

LatticeSpinorField random_field(int n, Rng& rng) {
    LatticeSpinorField f(n);
    for (double& x : f.data()) x = rng.normal();
    return f;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
    REQUIRE(a.size() == b.size());
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// |t| for the lifted or central symbol, computed from the complex form:
// the operator acts on e^{i p x} v0 as sum_j c_j (i t_j).
double symbol_norm(const int k[3], int n, const Eigen::Vector3d& th, double r) {
    double s = 0;
    for (int j = 0; j < 3; ++j) {
        const std::complex<double> up = std::exp(std::complex<double>(0, 2 * M_PI * k[j] / n + th[j] / n));
        const std::complex<double> central = (up - std::conj(up)) * (n / 2.0);
        const std::complex<double> lift = std::complex<double>(0, r * n / 2.0) * (2.0 - up - std::conj(up));
        const double t = (central + lift).imag();
        s += t * t;
    }
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("constant fields are in the untwisted kernel") {
    const Connection1Form a(4);
    const auto v = LatticeSpinorField::constant(4, Eigen::Vector4d(0.3, -1, 2, 0.5));
    CHECK(dirac_apply(v, a).max_abs() < 1e-14);
    CHECK(dirac_apply(v, a, {Stencil::Central, 0}).max_abs() < 1e-14);
}

TEST_CASE("constant twist moves constants out of the kernel") {
    const auto a = Connection1Form::constant(4, Eigen::Vector3d(0.7, 0, 0));
    const auto v = LatticeSpinorField::constant(4, Eigen::Vector4d(1, 0, 0, 0));
    CHECK(dirac_apply(v, a).max_abs() > 0.1);
}

TEST_CASE("grid mismatch") {
    CHECK_THROWS_AS(dirac_apply(LatticeSpinorField(4), Connection1Form(3)), GridMismatchError);
    CHECK_THROWS(LatticeSpinorField(1));
}

TEST_CASE("assembled operator matches the stencil") {
    Rng rng(61);
    for (int n : {2, 3, 4}) {
        Connection1Form a(n);
        for (double& t : a.data()) t = rng.normal();
        for (Stencil st : {Stencil::Lifted, Stencil::Central}) {
            const DiracOptions opt{st, 0.5};
            const auto D = assemble_dirac(a, opt);
            const auto v = random_field(n, rng);
            const Eigen::Map<const Eigen::VectorXd> vv(v.data().data(), v.data().size());
            const Eigen::VectorXd Dv = D * vv;
            const auto w = dirac_apply(v, a, opt);
            double m = 0;
            for (int i = 0; i < Dv.size(); ++i) m = std::max(m, std::abs(Dv[i] - w.data()[i]));
            CHECK(m < 1e-12 * n);
            CHECK(dirac_asymmetry(D) < 1e-12);
        }
    }
}

TEST_CASE("single Fourier mode is an eigenvector") {
    // v(x) = v0 * exp(i p x) in the complex form, v0 an eigenvector of the 2x2 symbol.
    const int n = 4;
    const int k[3] = {1, 0, 3};
    const Connection1Form a(n);
    const double t = symbol_norm(k, n, Eigen::Vector3d::Zero(), 0.5);
    // The symbol is sum_j t_j (i c_j) with (i c_j) Hermitian; build it and pick an eigenvector.
    Eigen::Matrix2cd ic[3];
    ic[0] << std::complex<double>(0, 1) * std::complex<double>(0, 1), 0, 0, std::complex<double>(0, 1) * std::complex<double>(0, -1);
    ic[1] << 0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0;
    ic[2] << 0, 1, 1, 0;
    Eigen::Matrix2cd S = Eigen::Matrix2cd::Zero();
    for (int j = 0; j < 3; ++j) {
        const std::complex<double> up = std::exp(std::complex<double>(0, 2 * M_PI * k[j] / n));
        const double tj = ((up - std::conj(up)) * (n / 2.0) + std::complex<double>(0, 0.25 * n) * (2.0 - up - std::conj(up))).imag();
        S += tj * ic[j];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(S);
    CHECK(es.eigenvalues()[1] == doctest::Approx(t).epsilon(1e-12));
    for (int which = 0; which < 2; ++which) {
        const Eigen::Vector2cd v0 = es.eigenvectors().col(which);
        LatticeSpinorField v(n);
        for (int x0 = 0; x0 < n; ++x0)
            for (int x1 = 0; x1 < n; ++x1)
                for (int x2 = 0; x2 < n; ++x2) {
                    const std::complex<double> ph = std::exp(std::complex<double>(0, 2 * M_PI * (k[0] * x0 + k[1] * x1 + k[2] * x2) / n));
                    v.set_complex(v.index(x0, x1, x2), v0[0] * ph, v0[1] * ph);
                }
        const auto Dv = dirac_apply(v, a);
        const double lam = es.eigenvalues()[which];
        double m = 0;
        for (std::size_t i = 0; i < v.data().size(); ++i) m = std::max(m, std::abs(Dv.data()[i] - lam * v.data()[i]));
        CHECK(m < 1e-12);
    }
}

TEST_CASE("dense spectrum at N = 4 matches the symbol") {
    Rng rng(62);
    for (Stencil st : {Stencil::Lifted, Stencil::Central}) {
        const double r = st == Stencil::Lifted ? 0.5 : 0.0;
        for (const Eigen::Vector3d th : {Eigen::Vector3d::Zero().eval(), Eigen::Vector3d(0.61, -0.37, 1.13)}) {
            const int n = 4;
            std::vector<double> oracle;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    for (int c = 0; c < n; ++c) {
                        const int k[3] = {a, b, c};
                        const double t = symbol_norm(k, n, th, r);
                        oracle.insert(oracle.end(), {t, t, -t, -t});
                    }
            std::sort(oracle.begin(), oracle.end());
            const auto dense = dense_spectrum(Connection1Form::constant(n, th), {st, 0.5});
            CHECK(max_diff(dense, oracle) < 1e-10);
            CHECK(max_diff(symbol_spectrum(n, th, {st, 0.5}), oracle) < 1e-12);
        }
    }
}

TEST_CASE("operator square is the lattice Laplacian symbol") {
    const int n = 4;
    const auto D = Eigen::MatrixXd(assemble_dirac(Connection1Form(n)));
    const Eigen::MatrixXd D2 = D * D;
    // D^2 on each Fourier mode is +|t|^2: compare traces per mode via the full trace.
    double tr = 0;
    for (const auto& s : fourier_sectors(n, Eigen::Vector3d::Zero())) tr += 4 * s.t * s.t;
    CHECK(D2.trace() == doctest::Approx(tr).epsilon(1e-12));
    // D^2 commutes with the Clifford structure: it is block-scalar on each site (no cross terms).
    for (int s = 0; s < n * n * n; ++s) {
        const Eigen::Matrix4d B = D2.block<4, 4>(4 * s, 4 * s);
        CHECK((B - B(0, 0) * Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("central stencil has doublers, lifted does not") {
    const auto central = symbol_spectrum(8, Eigen::Vector3d::Zero(), {Stencil::Central, 0});
    const auto lifted = symbol_spectrum(8, Eigen::Vector3d::Zero(), {Stencil::Lifted, 0.5});
    CHECK(count_below(central, 1e-9) == 32);
    CHECK(count_below(lifted, 1e-9) == 4);
}

TEST_CASE("sparse spectrum at N = 8") {
    const int n = 8;
    const auto t0 = std::chrono::steady_clock::now();
    const auto sp = dirac_spectrum(Connection1Form(n), 32, {}, {});
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    MESSAGE("sparse spectrum N=8 took " << secs << " s");
    CHECK(count_below(sp, 1e-8) == 4);
    const auto exact = symbol_spectrum(n, Eigen::Vector3d::Zero());
    std::vector<double> byabs = exact;
    std::stable_sort(byabs.begin(), byabs.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
    // The smallest 32 by |lambda| are whole +- clusters (4 + 12 + 12 + 4).
    std::vector<double> want(byabs.begin(), byabs.begin() + 32);
    std::sort(want.begin(), want.end());
    CHECK(max_diff(sp, want) < 1e-10);

    const Eigen::Vector3d th(0.61, -0.37, 1.13);
    const auto tw = dirac_spectrum(Connection1Form::constant(n, th), 16, {}, {});
    CHECK(count_below(tw, 1e-6) == 0);
    std::vector<double> pos, neg;
    for (double x : tw) (x > 0 ? pos : neg).push_back(std::abs(x));
    CHECK(pos.size() == neg.size());
}

TEST_CASE("spectrum is deterministic and validates count") {
    const auto a = dirac_spectrum(Connection1Form(4), 8, {}, {});
    const auto b = dirac_spectrum(Connection1Form(4), 8, {}, {});
    CHECK(a == b);
    CHECK_THROWS(dirac_spectrum(Connection1Form(4), 0));
    SpectrumOptions tight;
    tight.max_iter = 1;
    tight.tol = 1e-30;
    CHECK_THROWS_AS(dirac_spectrum(Connection1Form(4), 8, {}, tight), NoConvergenceError);
}
