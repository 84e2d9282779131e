#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/LU>

#include "doctest.h"
#include "g2kit/dirac.hpp"
#include "g2kit/kernels.hpp"
#include "g2kit/random.hpp"

using namespace g2kit;
namespace k = g2kit::kernels;

namespace {

struct Batch {
    explicit Batch(std::size_t n) : c(7, std::vector<double>(n)) {
        for (int i = 0; i < 7; ++i) p[i] = c[i].data();
    }
    Vector7 at(std::size_t s) const {
        Vector7 v;
        for (int i = 0; i < 7; ++i) v[i] = c[i][s];
        return v;
    }
    std::vector<std::vector<double>> c;
    std::array<double*, 7> p{};
};

Batch random_batch(Rng& rng, std::size_t n) {
    Batch b(n);
    for (std::size_t s = 0; s < n; ++s)
        for (int i = 0; i < 7; ++i) b.c[i][s] = rng.normal();
    return b;
}

double max_diff(const Batch& a, const Batch& b) {
    double m = 0;
    for (int i = 0; i < 7; ++i)
        for (std::size_t s = 0; s < a.c[i].size(); ++s) m = std::max(m, std::abs(a.c[i][s] - b.c[i][s]));
    return m;
}

std::vector<const k::KernelTable*> tables() {
    std::vector<const k::KernelTable*> t{&k::scalar()};
    if (k::avx2()) t.push_back(k::avx2());
    return t;
}

}  // namespace

TEST_CASE("dispatch") {
    CHECK(std::string(k::scalar().name) == "scalar");
    CHECK((k::avx2() != nullptr) == k::cpu_has_avx2());
    if (!k::avx2()) MESSAGE("AVX2 unavailable; only the scalar table is exercised");
}

TEST_CASE("batched kernels agree with the reference functions") {
    const VectorValued3Form chi = chi_form(phi0(), Metric7::identity());
    const auto ct = chi_terms(chi);
    const auto pt = terms3(phi0());
    for (const auto* t : tables()) {
        CAPTURE(t->name);
        for (std::size_t n : {0, 1, 3, 4, 5, 8, 17, 1001}) {
            CAPTURE(n);
            Rng rng(81 + n);
            const Batch u = random_batch(rng, n), v = random_batch(rng, n), w = random_batch(rng, n);
            Batch cr(n), cc(n), ctab(n);
            std::vector<double> f(n), g(n);
            t->cross7(u.p.data(), v.p.data(), cr.p.data(), n);
            t->chi_cross(u.p.data(), v.p.data(), w.p.data(), cc.p.data(), n);
            t->chi_table(ct.data(), ct.size(), u.p.data(), v.p.data(), w.p.data(), ctab.p.data(), n);
            t->form3(pt.data(), pt.size(), u.p.data(), v.p.data(), w.p.data(), f.data(), n);
            t->gram3(u.p.data(), v.p.data(), w.p.data(), g.data(), n);
            for (std::size_t s = 0; s < n; ++s) {
                const Vector7 a = u.at(s), b = v.at(s), c = w.at(s);
                CHECK((cr.at(s) - cross7(a, b)).norm() < 1e-13);
                CHECK((cc.at(s) - chi_via_cross(a, b, c)).norm() < 1e-12);
                CHECK((ctab.at(s) - chi(a, b, c)).norm() < 1e-12);
                CHECK(std::abs(f[s] - phi0()(a, b, c)) < 1e-12);
                Eigen::Matrix<double, 7, 3> m;
                m << a, b, c;
                const double gd = (m.transpose() * m).determinant();
                CHECK(std::abs(g[s] - gd) < 1e-10 * std::max(1.0, std::abs(gd)));
            }
        }
    }
}

TEST_CASE("scalar and AVX2 kernels agree") {
    if (!k::avx2()) return;
    const auto& S = k::scalar();
    const auto& A = *k::avx2();
    const auto ct = chi_terms(chi_form(phi0(), Metric7::identity()));
    const auto pt = terms3(phi0());
    for (std::size_t n : {1, 2, 3, 4, 5, 7, 9, 64, 1023}) {
        CAPTURE(n);
        Rng rng(90 + n);
        const Batch u = random_batch(rng, n), v = random_batch(rng, n), w = random_batch(rng, n);
        Batch s1(n), a1(n);
        S.cross7(u.p.data(), v.p.data(), s1.p.data(), n);
        A.cross7(u.p.data(), v.p.data(), a1.p.data(), n);
        CHECK(max_diff(s1, a1) < 1e-14);
        S.chi_cross(u.p.data(), v.p.data(), w.p.data(), s1.p.data(), n);
        A.chi_cross(u.p.data(), v.p.data(), w.p.data(), a1.p.data(), n);
        CHECK(max_diff(s1, a1) < 1e-13);
        S.chi_table(ct.data(), ct.size(), u.p.data(), v.p.data(), w.p.data(), s1.p.data(), n);
        A.chi_table(ct.data(), ct.size(), u.p.data(), v.p.data(), w.p.data(), a1.p.data(), n);
        CHECK(max_diff(s1, a1) < 1e-13);
        std::vector<double> fs(n), fa(n), gs(n), ga(n);
        S.form3(pt.data(), pt.size(), u.p.data(), v.p.data(), w.p.data(), fs.data(), n);
        A.form3(pt.data(), pt.size(), u.p.data(), v.p.data(), w.p.data(), fa.data(), n);
        S.gram3(u.p.data(), v.p.data(), w.p.data(), gs.data(), n);
        A.gram3(u.p.data(), v.p.data(), w.p.data(), ga.data(), n);
        for (std::size_t s = 0; s < n; ++s) {
            CHECK(std::abs(fs[s] - fa[s]) < 1e-13);
            CHECK(std::abs(gs[s] - ga[s]) < 1e-10 * std::max(1.0, std::abs(gs[s])));
        }
    }
}

TEST_CASE("Dirac stencil kernels agree with the assembled operator") {
    for (int n : {2, 3, 5}) {
        Rng rng(100 + n);
        const std::size_t sites = static_cast<std::size_t>(n) * n * n;
        Connection1Form a(n);
        for (double& x : a.data()) x = rng.normal();
        std::vector<double> in(4 * sites);
        for (double& x : in) x = rng.normal();
        std::vector<double> lc(3 * sites), ls(3 * sites);
        for (std::size_t i = 0; i < lc.size(); ++i) {
            lc[i] = std::cos(a.data()[i] / n);
            ls[i] = std::sin(a.data()[i] / n);
        }
        for (const Stencil st : {Stencil::Lifted, Stencil::Central}) {
            const DiracOptions opt{st, 0.5};
            const Eigen::SparseMatrix<double> D = assemble_dirac(a, opt);
            const Eigen::VectorXd ref = D * Eigen::Map<const Eigen::VectorXd>(in.data(), in.size());
            for (const auto* t : tables()) {
                CAPTURE(t->name);
                std::vector<double> out(4 * sites, 99.0);
                k::StencilArgs args;
                args.n = n;
                args.inv_2h = n / 2.0;
                args.lift = st == Stencil::Lifted ? 0.5 * n / 2.0 : 0.0;
                args.link_c = lc.data();
                args.link_s = ls.data();
                args.in = in.data();
                args.out = out.data();
                t->dirac_stencil(args);
                double m = 0;
                for (std::size_t i = 0; i < out.size(); ++i) m = std::max(m, std::abs(out[i] - ref[i]));
                CHECK(m < 1e-12);
            }
        }
    }
}
