#include "g2kit/sw.hpp"

#include <algorithm>
#include <cmath>

#include "g2kit/error.hpp"
#include "g2kit/octonion.hpp"

namespace g2kit {

namespace {

Quaternion q_at(const double* p) { return {p[0], p[1], p[2], p[3]}; }

void put(double* p, const Quaternion& q) {
    p[0] = q.w;
    p[1] = q.x;
    p[2] = q.y;
    p[3] = q.z;
}

const Quaternion kUnits[3] = {Quaternion::i(), Quaternion::j(), Quaternion::k()};

std::size_t shift(int n, std::size_t site, int j, int by) {
    int s[3] = {static_cast<int>(site / (n * n)), static_cast<int>((site / n) % n), static_cast<int>(site % n)};
    s[j] = (s[j] + by + n) % n;
    return (static_cast<std::size_t>(s[0]) * n + s[1]) * n + s[2];
}

double l2(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double maxabs(const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

SigmaValue sigma_map(cplx z, cplx w) { return {(std::norm(z) - std::norm(w)) / 2.0, std::conj(z) * w}; }

Eigen::Vector3d sigma_one_form(cplx z, cplx w) {
    const SigmaValue s = sigma_map(z, w);
    return {s.r, -s.c.imag(), -s.c.real()};
}

Eigen::Vector3d sigma_bilinear(const double* v, const double* u) {
    // sigma_j(v, u) = <v, (c_j u)(-i)> / 2 in the real inner product.
    const Quaternion qv = q_at(v), qu = q_at(u);
    const Quaternion mi = -Quaternion::i();
    Eigen::Vector3d out;
    for (int j = 0; j < 3; ++j) {
        const Quaternion a = kUnits[j] * qu * mi;
        const Quaternion b = kUnits[j] * qv * mi;
        out[j] = 0.25 * (qv.vec().dot(a.vec()) + qu.vec().dot(b.vec()));
    }
    return out;
}

double SWResidual::dirac_l2() const { return dirac.norm(); }
double SWResidual::curvature_l2() const { return l2(curvature); }
double SWResidual::dirac_max() const { return dirac.max_abs(); }
double SWResidual::curvature_max() const { return maxabs(curvature); }

OneFormField lattice_curl(const Connection1Form& a) {
    const int n = a.n();
    const std::size_t sites = static_cast<std::size_t>(n) * n * n;
    OneFormField out(3 * sites);
    for (std::size_t x = 0; x < sites; ++x)
        for (int j = 0; j < 3; ++j) {
            const int k = (j + 1) % 3, l = (j + 2) % 3;
            out[3 * x + j] = n * (a.theta(shift(n, x, k, 1), l) - a.theta(x, l) - a.theta(shift(n, x, l, 1), k) +
                                  a.theta(x, k));
        }
    return out;
}

SWResidual sw_residual(const SWState& s, const DiracOptions& opt) {
    if (s.a.n() != s.n() || s.delta.size() != 3 * s.v.sites()) throw GridMismatchError();
    SWResidual r{dirac_apply(s.v, s.a, opt), lattice_curl(s.a)};
    for (std::size_t x = 0; x < s.v.sites(); ++x) {
        const Eigen::Vector3d sg = sigma_one_form(s.v.z(x), s.v.w(x));
        for (int j = 0; j < 3; ++j) r.curvature[3 * x + j] += s.delta[3 * x + j] - sg[j];
    }
    return r;
}

SWResidual sw_linearization(const SWState& s, const LatticeSpinorField& dv, const Connection1Form& da,
                            const OneFormField& ddelta, const DiracOptions& opt) {
    const int n = s.n();
    if (dv.n() != n || da.n() != n || s.a.n() != n || ddelta.size() != 3 * dv.sites() ||
        s.delta.size() != ddelta.size())
        throw GridMismatchError();
    SWResidual r{dirac_apply(dv, s.a, opt), lattice_curl(da)};

    // Derivative of the links: d/dtheta of v(x+) U is h dtheta v(x+) U i.
    const double h = 1.0 / n, inv2h = n / 2.0;
    const double lift = opt.stencil == Stencil::Lifted ? opt.r * n / 2.0 : 0.0;
    const Quaternion I = Quaternion::i();
    for (std::size_t x = 0; x < dv.sites(); ++x) {
        Quaternion acc{};
        for (int j = 0; j < 3; ++j) {
            const std::size_t xp = shift(n, x, j, 1), xm = shift(n, x, j, -1);
            const double tp = s.a.theta(x, j) * h, tm = s.a.theta(xm, j) * h;
            const Quaternion f = q_at(s.v.site(xp)) * Quaternion{std::cos(tp), std::sin(tp), 0, 0};
            const Quaternion b = q_at(s.v.site(xm)) * Quaternion{std::cos(tm), -std::sin(tm), 0, 0};
            const Quaternion df = f * I * (h * da.theta(x, j));
            const Quaternion db = b * I * (-h * da.theta(xm, j));
            const Quaternion d = (df - db) * inv2h + (-(df + db) * I) * lift;
            acc = acc + kUnits[j] * d;
        }
        double* o = r.dirac.site(x);
        o[0] += acc.w;
        o[1] += acc.x;
        o[2] += acc.y;
        o[3] += acc.z;

        const Eigen::Vector3d sg = sigma_bilinear(s.v.site(x), dv.site(x));
        for (int j = 0; j < 3; ++j) r.curvature[3 * x + j] += ddelta[3 * x + j] - 2.0 * sg[j];
    }
    return r;
}

LatticeSpinorField phase(const LatticeSpinorField& v, const std::vector<double>& psi) {
    if (psi.size() != v.sites()) throw GridMismatchError();
    LatticeSpinorField out(v.n());
    for (std::size_t x = 0; x < v.sites(); ++x)
        put(out.site(x), q_at(v.site(x)) * Quaternion{std::cos(psi[x]), std::sin(psi[x]), 0, 0});
    return out;
}

SWState gauge_transform(const SWState& s, const std::vector<double>& psi) {
    const int n = s.n();
    SWState out(n);
    out.v = phase(s.v, psi);
    out.delta = s.delta;
    for (std::size_t x = 0; x < s.v.sites(); ++x)
        for (int j = 0; j < 3; ++j) out.a.theta(x, j) = s.a.theta(x, j) - n * (psi[shift(n, x, j, 1)] - psi[x]);
    return out;
}

IndexComplex assemble_index_complex(int n) {
    if (n < 2) throw std::invalid_argument("grid size must be >= 2");
    const int S = n * n * n;
    const double inv_h = n;
    IndexComplex ic;
    ic.rows = ic.cols = 4 * S;
    // Unknowns: f at [0, S), theta_j(x) at S + 3x + j. Equations: d^*theta at
    // [0, S), (df + *d theta)_j(x) at S + 3x + j.
    std::vector<Eigen::Triplet<double>> t;
    for (int x = 0; x < S; ++x)
        for (int j = 0; j < 3; ++j) {
            const int xm = static_cast<int>(shift(n, x, j, -1)), xp = static_cast<int>(shift(n, x, j, 1));
            t.emplace_back(x, S + 3 * x + j, -inv_h);
            t.emplace_back(x, S + 3 * xm + j, inv_h);
            const int row = S + 3 * x + j;
            t.emplace_back(row, xp, inv_h);
            t.emplace_back(row, x, -inv_h);
            const int k = (j + 1) % 3, l = (j + 2) % 3;
            t.emplace_back(row, S + 3 * static_cast<int>(shift(n, x, k, 1)) + l, inv_h);
            t.emplace_back(row, S + 3 * x + l, -inv_h);
            t.emplace_back(row, S + 3 * static_cast<int>(shift(n, x, l, 1)) + k, -inv_h);
            t.emplace_back(row, S + 3 * x + k, inv_h);
        }
    ic.matrix.resize(ic.rows, ic.cols);
    ic.matrix.setFromTriplets(t.begin(), t.end());
    return ic;
}

long long sw_index_formula(long long c1_sq, long long euler, long long signature) {
    const long long num = c1_sq - (2 * euler + 3 * signature);
    if (num % 4 != 0) throw ConstraintError("not realizable");
    return num / 4;
}

}  // namespace g2kit
