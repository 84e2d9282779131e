#pragma once

#include <initializer_list>
#include <vector>

#include <Eigen/Core>

#include "g2kit/octonion.hpp"

namespace g2kit {

using Matrix7 = Eigen::Matrix<double, 7, 7>;

// Lexicographic k-subsets of {0..n-1}; cached per (n, k), n <= 8.
const std::vector<std::vector<int>>& subsets(int n, int k);
int subset_index(int n, const std::vector<int>& sorted_indices);

class AlternatingForm {
public:
    AlternatingForm() = default;
    AlternatingForm(int degree, int dim);

    int degree() const { return k_; }
    int dim() const { return n_; }
    std::size_t size() const { return c_.size(); }
    double coeff(std::size_t idx) const { return c_[idx]; }
    double& coeff(std::size_t idx) { return c_[idx]; }
    const std::vector<double>& coeffs() const { return c_; }
    const std::vector<int>& indices(std::size_t idx) const { return subsets(n_, k_)[idx]; }

    // Component on e^{i1 ... ik} with 1-based indices in any order (sign of
    // the sorting permutation applied); repeated indices give 0.
    double at(std::initializer_list<int> one_based) const;
    void set(std::initializer_list<int> one_based, double value);

    // f(V.col(0), ..., V.col(k-1)) for an n x k matrix V.
    double evaluate(const Eigen::MatrixXd& V) const;
    double operator()(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c) const;
    double operator()(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                      const Eigen::VectorXd& d) const;

    AlternatingForm operator+(const AlternatingForm& o) const;
    AlternatingForm operator-(const AlternatingForm& o) const;
    AlternatingForm operator*(double s) const;
    double max_abs_diff(const AlternatingForm& o) const;

private:
    int k_ = 0, n_ = 0;
    std::vector<double> c_;
};

AlternatingForm wedge(const AlternatingForm& a, const AlternatingForm& b);
// Contraction in the first slot: (v ⌟ f)(x, ...) = f(v, x, ...).
AlternatingForm interior(const Eigen::VectorXd& v, const AlternatingForm& f);
// (A^* f)(x, ...) = f(Ax, ...).
AlternatingForm pullback(const AlternatingForm& f, const Eigen::MatrixXd& A);
// The 1-form dual to v under the flat metric.
AlternatingForm covector(const Eigen::VectorXd& v);

struct Metric7 {
    Matrix7 g = Matrix7::Identity();
    Matrix7 ginv = Matrix7::Identity();

    static Metric7 identity() { return {}; }
    static Metric7 from_matrix(const Matrix7& g);
};

// Hodge star for the orientation e^{1..n}; the metric must be n x n.
AlternatingForm hodge_star(const AlternatingForm& f, const Eigen::MatrixXd& g);
AlternatingForm hodge_star(const AlternatingForm& f, const Metric7& g);
AlternatingForm hodge_star(const AlternatingForm& f);

AlternatingForm phi0();
AlternatingForm star_phi0();
// 4-form on R^8 = R^7 + R e8: phi ∧ e^8 - *phi.
AlternatingForm psi8();

// chi as the map Λ³R^7 -> R^7, a(J, alpha) with J a lexicographic 3-subset.
class VectorValued3Form {
public:
    using Table = Eigen::Matrix<double, 35, 7>;

    VectorValued3Form() : a_(Table::Zero()) {}
    explicit VectorValued3Form(const Table& a) : a_(a) {}

    const Table& table() const { return a_; }
    Vector7 operator()(const Vector7& u, const Vector7& v, const Vector7& w) const;

private:
    Table a_;
};

VectorValued3Form chi_form(const AlternatingForm& phi, const Metric7& g);
// -u x (v x w) - <u,v> w + <u,w> v
Vector7 chi_via_cross(const Vector7& u, const Vector7& v, const Vector7& w);

Metric7 metric_from_phi(const AlternatingForm& phi);
Vector7 cross_from_phi(const AlternatingForm& phi, const Metric7& g, const Vector7& u, const Vector7& v);

struct Term3 {
    int i, j, k;
    double c;
};
// Nonzero terms of a 3-form, for the batched kernels.
std::vector<Term3> terms3(const AlternatingForm& f);

struct ChiTerm {
    int i, j, k, alpha;
    double c;
};
std::vector<ChiTerm> chi_terms(const VectorValued3Form& chi);

}  // namespace g2kit
