#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include <Eigen/Core>

#include "g2kit/forms.hpp"

namespace g2kit {

// Ordered orthonormal k-frame in R^n; the order fixes the orientation.
class Frame {
public:
    Frame() = default;
    // Throws FrameError unless the Gram matrix is the identity within tol.
    explicit Frame(const Eigen::MatrixXd& columns, double tol = 1e-12);
    // Orthonormalizes the columns by modified Gram-Schmidt first.
    static Frame from_span(const Eigen::MatrixXd& columns);
    static Frame standard(int n, std::initializer_list<int> one_based);

    int n() const { return static_cast<int>(m_.rows()); }
    int k() const { return static_cast<int>(m_.cols()); }
    const Eigen::MatrixXd& matrix() const { return m_; }
    Eigen::VectorXd col(int i) const { return m_.col(i); }
    Eigen::MatrixXd projector() const { return m_ * m_.transpose(); }
    // Orthonormal basis of the orthogonal complement (n x (n-k)).
    Eigen::MatrixXd complement() const;

private:
    Eigen::MatrixXd m_;
};

// Modified Gram-Schmidt, columns in index order. Throws FrameError when a
// column falls below rank_tol after projection.
Eigen::MatrixXd mgs(const Eigen::MatrixXd& columns, double rank_tol = 1e-10);

struct CalibrationReport {
    double phi_value = 0;
    Vector7 chi_defect = Vector7::Zero();
    double defect_norm = 0;
    bool is_associative = false;
};

CalibrationReport associative_test(const Frame& L, double tol = 1e-10);
double coassociative_test(const Frame& X);
double cayley_test(const Frame& X);

struct NormalComplexStructure {
    Eigen::Matrix<double, 7, 4> basis;  // orthonormal basis of L-perp
    Eigen::Matrix4d j;                  // j in that basis
    Matrix7 ambient;                    // j extended by 0 on L
};

// j(X) = chi(u, v, X) on the normal space of an associative L.
NormalComplexStructure normal_complex_structure(const Frame& L, const Vector7& u, const Vector7& v,
                                                double tol = 1e-10);

// Haar-random oriented 3-planes from QR of Gaussian matrices.
std::vector<Frame> sample_grassmann(std::uint64_t seed, std::size_t count);

// Euclidean gradient of |chi(x1, x2, x3)|^2 as a 7 x 3 matrix.
Eigen::Matrix<double, 7, 3> defect_gradient(const Eigen::Matrix<double, 7, 3>& X);
Eigen::Matrix<double, 7, 3> defect_gradient_fd(const Eigen::Matrix<double, 7, 3>& X, double step = 1e-6);

struct ProjectionResult {
    Frame frame;
    int iterations = 0;
    double defect_norm = 0;
};

ProjectionResult project_to_associative(const Frame& L0, double step = 0.2, int max_iter = 5000,
                                        double tol = 1e-12);

// Rank of the linearized defect on the 12-dim tangent space of G(3,7).
int linearized_defect_rank(const Frame& L, double rel_tol = 1e-8);

// Periodic N^3 lattice of points of R^7, read modulo the period vectors.
class Immersion3Lattice {
public:
    Immersion3Lattice(int n, const Eigen::Matrix<double, 7, 3>& periods);
    // x(s) = h * sum_j s_j P_j with P = (e1, e2, e3) unless given.
    static Immersion3Lattice flat_torus(int n);
    static Immersion3Lattice flat_torus(int n, const Eigen::Matrix<double, 7, 3>& periods);

    int n() const { return n_; }
    double h() const { return 1.0 / n_; }
    std::size_t sites() const { return pts_.size(); }
    std::size_t index(int s0, int s1, int s2) const;
    const Vector7& point(std::size_t site) const { return pts_[site]; }
    Vector7& point(std::size_t site) { return pts_[site]; }
    const Eigen::Matrix<double, 7, 3>& periods() const { return periods_; }

    // Central-difference tangents (7 x 3), with period wrap.
    Eigen::Matrix<double, 7, 3> tangents(std::size_t site) const;
    // chi of the orthonormalized tangent frame; throws FrameError on rank < 3.
    Vector7 defect(std::size_t site) const;
    std::vector<double> defect_norms() const;
    double max_defect() const;

private:
    int n_;
    Eigen::Matrix<double, 7, 3> periods_;
    std::vector<Vector7> pts_;
};

Immersion3Lattice chi_flow_step(const Immersion3Lattice& Y, double dt);

enum class FlowPerturbation {
    None,
    // eps sin(2 pi t1) e4, t the lattice parameter in [0, 1)^3
    Sin,
    // eps (sin(2 pi t1) e4 - cos(2 pi t1) e5): a decaying eigenmode of the
    // linearized flow on the standard torus
    Eigen,
    // eps times an independent normal vector per site
    Random,
};

void perturb(Immersion3Lattice& Y, FlowPerturbation mode, double eps, std::uint64_t seed = 0);

struct FlowTrace {
    std::vector<double> max_defect;  // before the first step and after each step
    double first_step_displacement = 0;
};

// Runs steps explicit Euler steps in place; FrameError propagates.
FlowTrace chi_flow(Immersion3Lattice& Y, int steps, double dt);

}  // namespace g2kit
