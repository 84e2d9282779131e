#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace g2kit {

// mt19937_64 stream with a hand-rolled Box-Muller transform, so that the
// sequence of normals depends only on the seed and not on the standard
// library's distribution implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Uniform in [0, 1) from the top 53 bits.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * M_PI * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    template <int N>
    Eigen::Matrix<double, N, 1> normal_vec() {
        Eigen::Matrix<double, N, 1> v;
        for (int i = 0; i < N; ++i) v[i] = normal();
        return v;
    }

    Eigen::VectorXd normal_vec(int n) {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = normal();
        return v;
    }

    template <int N>
    Eigen::Matrix<double, N, 1> unit_vec() {
        Eigen::Matrix<double, N, 1> v;
        do {
            v = normal_vec<N>();
        } while (v.norm() < 1e-300);
        return v / v.norm();
    }

    std::uint64_t next_u64() { return eng_(); }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace g2kit
