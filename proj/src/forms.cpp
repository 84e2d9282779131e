#include "g2kit/forms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "g2kit/error.hpp"

namespace g2kit {

namespace {

struct SubsetCache {
    std::vector<std::vector<int>> list;
    std::vector<int> by_mask;
};

const SubsetCache& cache(int n, int k) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, SubsetCache> all;
    std::lock_guard<std::mutex> lock(mu);
    auto it = all.find({n, k});
    if (it != all.end()) return it->second;
    if (n < 0 || n > 8 || k < 0 || k > n) throw std::invalid_argument("subsets: need 0 <= k <= n <= 8");
    SubsetCache c;
    c.by_mask.assign(1u << n, -1);
    for (unsigned m = 0; m < (1u << n); ++m) {
        if (__builtin_popcount(m) != k) continue;
        std::vector<int> s;
        for (int b = 0; b < n; ++b)
            if (m & (1u << b)) s.push_back(b);
        c.list.push_back(s);
    }
    std::sort(c.list.begin(), c.list.end());
    for (std::size_t idx = 0; idx < c.list.size(); ++idx) {
        unsigned m = 0;
        for (int b : c.list[idx]) m |= 1u << b;
        c.by_mask[m] = static_cast<int>(idx);
    }
    return all.emplace(std::make_pair(n, k), std::move(c)).first->second;
}

// Sorts in place; returns the permutation sign, or 0 on a repeated index.
int sort_sign(std::vector<int>& v) {
    int sign = 1;
    for (std::size_t a = 1; a < v.size(); ++a)
        for (std::size_t b = a; b > 0 && v[b - 1] >= v[b]; --b) {
            if (v[b - 1] == v[b]) return 0;
            std::swap(v[b - 1], v[b]);
            sign = -sign;
        }
    return sign;
}

unsigned mask_of(const std::vector<int>& s) {
    unsigned m = 0;
    for (int b : s) m |= 1u << b;
    return m;
}

double det_small(const Eigen::MatrixXd& M) {
    const auto k = M.rows();
    if (k == 0) return 1.0;
    if (k == 1) return M(0, 0);
    if (k == 2) return M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
    if (k == 3)
        return M(0, 0) * (M(1, 1) * M(2, 2) - M(1, 2) * M(2, 1)) -
               M(0, 1) * (M(1, 0) * M(2, 2) - M(1, 2) * M(2, 0)) +
               M(0, 2) * (M(1, 0) * M(2, 1) - M(1, 1) * M(2, 0));
    return M.determinant();
}

}  // namespace

const std::vector<std::vector<int>>& subsets(int n, int k) { return cache(n, k).list; }

int subset_index(int n, const std::vector<int>& s) {
    return cache(n, static_cast<int>(s.size())).by_mask[mask_of(s)];
}

AlternatingForm::AlternatingForm(int degree, int dim)
    : k_(degree), n_(dim), c_(subsets(dim, degree).size(), 0.0) {}

double AlternatingForm::at(std::initializer_list<int> one_based) const {
    std::vector<int> v;
    for (int i : one_based) v.push_back(i - 1);
    if (static_cast<int>(v.size()) != k_) throw std::invalid_argument("at: wrong number of indices");
    const int s = sort_sign(v);
    if (s == 0) return 0.0;
    return s * c_[subset_index(n_, v)];
}

void AlternatingForm::set(std::initializer_list<int> one_based, double value) {
    std::vector<int> v;
    for (int i : one_based) v.push_back(i - 1);
    if (static_cast<int>(v.size()) != k_) throw std::invalid_argument("set: wrong number of indices");
    const int s = sort_sign(v);
    if (s == 0) throw std::invalid_argument("set: repeated index");
    c_[subset_index(n_, v)] = s * value;
}

double AlternatingForm::evaluate(const Eigen::MatrixXd& V) const {
    if (V.rows() != n_ || V.cols() != k_) throw std::invalid_argument("evaluate: shape mismatch");
    const auto& subs = subsets(n_, k_);
    Eigen::MatrixXd M(k_, k_);
    double sum = 0.0;
    for (std::size_t idx = 0; idx < c_.size(); ++idx) {
        if (c_[idx] == 0.0) continue;
        for (int r = 0; r < k_; ++r) M.row(r) = V.row(subs[idx][r]);
        sum += c_[idx] * det_small(M);
    }
    return sum;
}

double AlternatingForm::operator()(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                                   const Eigen::VectorXd& c) const {
    Eigen::MatrixXd V(n_, 3);
    V << a, b, c;
    return evaluate(V);
}

double AlternatingForm::operator()(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                                   const Eigen::VectorXd& c, const Eigen::VectorXd& d) const {
    Eigen::MatrixXd V(n_, 4);
    V << a, b, c, d;
    return evaluate(V);
}

AlternatingForm AlternatingForm::operator+(const AlternatingForm& o) const {
    if (o.k_ != k_ || o.n_ != n_) throw std::invalid_argument("form shape mismatch");
    AlternatingForm r = *this;
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
    return r;
}

AlternatingForm AlternatingForm::operator-(const AlternatingForm& o) const { return *this + o * -1.0; }

AlternatingForm AlternatingForm::operator*(double s) const {
    AlternatingForm r = *this;
    for (double& x : r.c_) x *= s;
    return r;
}

double AlternatingForm::max_abs_diff(const AlternatingForm& o) const {
    if (o.k_ != k_ || o.n_ != n_) throw std::invalid_argument("form shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < c_.size(); ++i) m = std::max(m, std::abs(c_[i] - o.c_[i]));
    return m;
}

AlternatingForm wedge(const AlternatingForm& a, const AlternatingForm& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("wedge: dimension mismatch");
    const int n = a.dim();
    if (a.degree() + b.degree() > n) throw std::invalid_argument("wedge: degree exceeds dimension");
    AlternatingForm r(a.degree() + b.degree(), n);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.coeff(i) == 0.0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (b.coeff(j) == 0.0) continue;
            std::vector<int> s = a.indices(i);
            s.insert(s.end(), b.indices(j).begin(), b.indices(j).end());
            const int sign = sort_sign(s);
            if (sign == 0) continue;
            r.coeff(subset_index(n, s)) += sign * a.coeff(i) * b.coeff(j);
        }
    }
    return r;
}

AlternatingForm interior(const Eigen::VectorXd& v, const AlternatingForm& f) {
    const int n = f.dim();
    if (v.size() != n) throw std::invalid_argument("interior: dimension mismatch");
    if (f.degree() == 0) throw std::invalid_argument("interior: degree 0");
    AlternatingForm r(f.degree() - 1, n);
    for (std::size_t idx = 0; idx < f.size(); ++idx) {
        if (f.coeff(idx) == 0.0) continue;
        const auto& s = f.indices(idx);
        for (std::size_t p = 0; p < s.size(); ++p) {
            std::vector<int> rest;
            for (std::size_t q = 0; q < s.size(); ++q)
                if (q != p) rest.push_back(s[q]);
            const double sign = (p % 2 == 0) ? 1.0 : -1.0;
            r.coeff(subset_index(n, rest)) += sign * v[s[p]] * f.coeff(idx);
        }
    }
    return r;
}

AlternatingForm pullback(const AlternatingForm& f, const Eigen::MatrixXd& A) {
    const int n = f.dim(), k = f.degree();
    if (A.rows() != n || A.cols() != n) throw std::invalid_argument("pullback: shape mismatch");
    AlternatingForm r(k, n);
    Eigen::MatrixXd V(n, k);
    for (std::size_t idx = 0; idx < r.size(); ++idx) {
        const auto& s = r.indices(idx);
        for (int c = 0; c < k; ++c) V.col(c) = A.col(s[c]);
        r.coeff(idx) = f.evaluate(V);
    }
    return r;
}

AlternatingForm covector(const Eigen::VectorXd& v) {
    AlternatingForm r(1, static_cast<int>(v.size()));
    for (int i = 0; i < v.size(); ++i) r.coeff(i) = v[i];
    return r;
}

Metric7 Metric7::from_matrix(const Matrix7& g) {
    Eigen::FullPivLU<Matrix7> lu(g);
    if (!lu.isInvertible()) throw DegenerateMetricError();
    return {g, lu.inverse()};
}

AlternatingForm hodge_star(const AlternatingForm& f, const Eigen::MatrixXd& g) {
    const int n = f.dim(), k = f.degree();
    if (g.rows() != n || g.cols() != n) throw std::invalid_argument("hodge_star: metric shape mismatch");
    Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
    if (!lu.isInvertible()) throw DegenerateMetricError();
    const double det = lu.determinant();
    if (det <= 0.0) throw DegenerateMetricError();
    const Eigen::MatrixXd ginv = lu.inverse();
    const bool flat = (g - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() == 0.0;

    // Raise all indices: f^I = sum_K det(ginv[I, K]) f_K.
    std::vector<double> raised(f.size());
    if (flat) {
        raised = f.coeffs();
    } else {
        Eigen::MatrixXd M(k, k);
        for (std::size_t I = 0; I < f.size(); ++I) {
            double s = 0.0;
            for (std::size_t K = 0; K < f.size(); ++K) {
                if (f.coeff(K) == 0.0) continue;
                for (int a = 0; a < k; ++a)
                    for (int b = 0; b < k; ++b) M(a, b) = ginv(f.indices(I)[a], f.indices(K)[b]);
                s += det_small(M) * f.coeff(K);
            }
            raised[I] = s;
        }
    }
    AlternatingForm r(n - k, n);
    const double vol = std::sqrt(det);
    for (std::size_t I = 0; I < f.size(); ++I) {
        if (raised[I] == 0.0) continue;
        std::vector<int> all = f.indices(I);
        std::vector<int> comp;
        for (int b = 0; b < n; ++b)
            if (std::find(all.begin(), all.end(), b) == all.end()) comp.push_back(b);
        all.insert(all.end(), comp.begin(), comp.end());
        const int sign = sort_sign(all);
        r.coeff(subset_index(n, comp)) += vol * sign * raised[I];
    }
    return r;
}

AlternatingForm hodge_star(const AlternatingForm& f, const Metric7& g) {
    return hodge_star(f, Eigen::MatrixXd(g.g));
}

AlternatingForm hodge_star(const AlternatingForm& f) {
    return hodge_star(f, Eigen::MatrixXd::Identity(f.dim(), f.dim()).eval());
}

AlternatingForm phi0() {
    AlternatingForm f(3, 7);
    f.set({1, 2, 3}, 1);
    f.set({1, 4, 5}, 1);
    f.set({1, 6, 7}, 1);
    f.set({2, 4, 6}, 1);
    f.set({2, 5, 7}, -1);
    f.set({3, 4, 7}, -1);
    f.set({3, 5, 6}, -1);
    return f;
}

AlternatingForm star_phi0() {
    AlternatingForm f(4, 7);
    f.set({4, 5, 6, 7}, 1);
    f.set({2, 3, 6, 7}, 1);
    f.set({2, 3, 4, 5}, 1);
    f.set({1, 3, 5, 7}, 1);
    f.set({1, 3, 4, 6}, -1);
    f.set({1, 2, 5, 6}, -1);
    f.set({1, 2, 4, 7}, -1);
    return f;
}

AlternatingForm psi8() {
    const AlternatingForm phi = phi0();
    const AlternatingForm sphi = star_phi0();
    AlternatingForm psi(4, 8);
    for (std::size_t i = 0; i < phi.size(); ++i) {
        std::vector<int> s = phi.indices(i);
        s.push_back(7);
        psi.coeff(subset_index(8, s)) += phi.coeff(i);
    }
    for (std::size_t i = 0; i < sphi.size(); ++i)
        psi.coeff(subset_index(8, sphi.indices(i))) -= sphi.coeff(i);
    return psi;
}

Vector7 VectorValued3Form::operator()(const Vector7& u, const Vector7& v, const Vector7& w) const {
    const auto& subs = subsets(7, 3);
    Vector7 out = Vector7::Zero();
    for (int J = 0; J < 35; ++J) {
        const int a = subs[J][0], b = subs[J][1], c = subs[J][2];
        const double d = u[a] * (v[b] * w[c] - v[c] * w[b]) - u[b] * (v[a] * w[c] - v[c] * w[a]) +
                         u[c] * (v[a] * w[b] - v[b] * w[a]);
        if (d != 0.0) out += d * a_.row(J).transpose();
    }
    return out;
}

VectorValued3Form chi_form(const AlternatingForm& phi, const Metric7& g) {
    if (phi.degree() != 3 || phi.dim() != 7) throw std::invalid_argument("chi_form: need a 3-form on R^7");
    const AlternatingForm sphi = hodge_star(phi, g);
    const auto& subs = subsets(7, 3);
    VectorValued3Form::Table a = VectorValued3Form::Table::Zero();
    for (int J = 0; J < 35; ++J) {
        Eigen::Matrix<double, 7, 1> low;  // *phi(e_J, e_s)
        for (int s = 0; s < 7; ++s) {
            std::vector<int> idx = subs[J];
            idx.push_back(s);
            const int sign = sort_sign(idx);
            low[s] = sign == 0 ? 0.0 : sign * sphi.coeff(subset_index(7, idx));
        }
        a.row(J) = (g.ginv * low).transpose();
    }
    return VectorValued3Form(a);
}

Vector7 chi_via_cross(const Vector7& u, const Vector7& v, const Vector7& w) {
    return -cross7(u, cross7(v, w)) - u.dot(v) * w + u.dot(w) * v;
}

Metric7 metric_from_phi(const AlternatingForm& phi) {
    if (phi.degree() != 3 || phi.dim() != 7) throw std::invalid_argument("metric_from_phi: need a 3-form on R^7");
    std::array<AlternatingForm, 7> ip;
    for (int i = 0; i < 7; ++i) ip[i] = interior(Vector7::Unit(i), phi);
    Matrix7 B;
    for (int i = 0; i < 7; ++i)
        for (int j = i; j < 7; ++j) {
            const AlternatingForm top = wedge(wedge(ip[i], ip[j]), phi);
            B(i, j) = B(j, i) = top.coeff(0) / 6.0;
        }
    Eigen::LLT<Matrix7> llt(B);
    if (llt.info() != Eigen::Success) throw NotPositiveError();
    const double det = B.determinant();
    if (!(det > 0.0)) throw NotPositiveError();
    return Metric7::from_matrix(std::pow(det, -1.0 / 9.0) * B);
}

Vector7 cross_from_phi(const AlternatingForm& phi, const Metric7& g, const Vector7& u, const Vector7& v) {
    const AlternatingForm beta = interior(v, interior(u, phi));
    Vector7 b;
    for (int i = 0; i < 7; ++i) b[i] = beta.coeff(i);
    return g.ginv * b;
}

std::vector<Term3> terms3(const AlternatingForm& f) {
    if (f.degree() != 3) throw std::invalid_argument("terms3: need a 3-form");
    std::vector<Term3> t;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f.coeff(i) != 0.0) t.push_back({f.indices(i)[0], f.indices(i)[1], f.indices(i)[2], f.coeff(i)});
    return t;
}

std::vector<ChiTerm> chi_terms(const VectorValued3Form& chi) {
    const auto& subs = subsets(7, 3);
    std::vector<ChiTerm> t;
    for (int J = 0; J < 35; ++J)
        for (int a = 0; a < 7; ++a)
            if (chi.table()(J, a) != 0.0) t.push_back({subs[J][0], subs[J][1], subs[J][2], a, chi.table()(J, a)});
    return t;
}

}  // namespace g2kit
