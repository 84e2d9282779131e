#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace g2kit {

using cplx = std::complex<double>;

// Periodic N^3 field with a quaternion per site (real form). The complex form
// C^2 uses the complex structure of right multiplication by i:
// q = z + j w with z = q0 + q1 i, w = q2 - q3 i.
class LatticeSpinorField {
public:
    explicit LatticeSpinorField(int n);

    int n() const { return n_; }
    std::size_t sites() const { return static_cast<std::size_t>(n_) * n_ * n_; }
    std::size_t index(int s0, int s1, int s2) const;
    double* site(std::size_t s) { return data_.data() + 4 * s; }
    const double* site(std::size_t s) const { return data_.data() + 4 * s; }
    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    cplx z(std::size_t s) const { return {data_[4 * s], data_[4 * s + 1]}; }
    cplx w(std::size_t s) const { return {data_[4 * s + 2], -data_[4 * s + 3]}; }
    void set_complex(std::size_t s, cplx z, cplx w);

    double norm() const;
    double max_abs() const;
    static LatticeSpinorField constant(int n, const Eigen::Vector4d& q);

private:
    int n_;
    std::vector<double> data_;
};

// U(1) connection a = i theta; theta_j(x) lives on the edge x -> x + e_j and
// enters through the link exp(i theta_j(x) h).
class Connection1Form {
public:
    explicit Connection1Form(int n);
    static Connection1Form constant(int n, const Eigen::Vector3d& theta);

    int n() const { return n_; }
    double& theta(std::size_t site, int j) { return th_[3 * site + j]; }
    double theta(std::size_t site, int j) const { return th_[3 * site + j]; }
    std::vector<double>& data() { return th_; }
    const std::vector<double>& data() const { return th_; }

private:
    int n_;
    std::vector<double> th_;
};

enum class Stencil {
    // Central difference plus r/(2h) i (2 - S_+ - S_-): no doublers, still self-adjoint.
    Lifted,
    // Pure central difference; doubles at every momentum component pi.
    Central,
};

struct DiracOptions {
    Stencil stencil = Stencil::Lifted;
    double r = 0.5;
};

LatticeSpinorField dirac_apply(const LatticeSpinorField& v, const Connection1Form& a, const DiracOptions& opt = {});
Eigen::SparseMatrix<double> assemble_dirac(const Connection1Form& a, const DiracOptions& opt = {});
// max |D - D^T| of the assembled real form.
double dirac_asymmetry(const Eigen::SparseMatrix<double>& D);

// Exact spectrum for constant theta from the Fourier symbol: for each momentum
// k the values +-|t(k)|, each twice, with t_j = (sin p_j + r (1 - cos p_j)) / h,
// p_j = 2 pi k_j / N + theta_j h (r = 0 for the central stencil). Sorted.
std::vector<double> symbol_spectrum(int n, const Eigen::Vector3d& theta, const DiracOptions& opt = {});

struct SectorEigen {
    int k[3];
    double t;  // |t(k)|
};
std::vector<SectorEigen> fourier_sectors(int n, const Eigen::Vector3d& theta, const DiracOptions& opt = {});

// All eigenvalues by dense diagonalization, ascending.
std::vector<double> dense_spectrum(const Connection1Form& a, const DiracOptions& opt = {});

struct SpectrumOptions {
    double shift = 1e-3;
    int extra = 16;      // block size beyond count
    int max_iter = 500;
    double tol = 1e-11;  // residual norm per Ritz pair
    std::uint64_t seed = 0;
};

// The count eigenvalues of smallest |lambda|, ascending. Shift-invert block
// subspace iteration; throws NoConvergenceError.
std::vector<double> dirac_spectrum(const Connection1Form& a, int count, const DiracOptions& opt = {},
                                   const SpectrumOptions& sopt = {});

int count_below(const std::vector<double>& spectrum, double tol);

}  // namespace g2kit
