#pragma once

#include <cstddef>

#include "g2kit/forms.hpp"

// Batched inner loops with a scalar reference and an AVX2 variant. Vector
// batches are structure-of-arrays: u[c][n] is component c of sample n.
namespace g2kit::kernels {

using In7 = const double* const*;
using Out7 = double* const*;

// Parameters of the real-form lattice Dirac stencil. Fields are site-major
// with 4 doubles (a quaternion) per site; link_c/link_s hold cos/sin of the
// link phase for direction j at site x at index 3 * site + j.
struct StencilArgs {
    int n = 0;
    double inv_2h = 0.0;    // 1 / (2h)
    double lift = 0.0;      // r / (2h), coefficient of the lifting term
    const double* link_c = nullptr;
    const double* link_s = nullptr;
    const double* in = nullptr;
    double* out = nullptr;
};

struct KernelTable {
    const char* name;
    void (*cross7)(In7 u, In7 v, Out7 out, std::size_t n);
    // -u x (v x w) - <u,v> w + <u,w> v
    void (*chi_cross)(In7 u, In7 v, In7 w, Out7 out, std::size_t n);
    // sum over terms of c * det(u,v,w restricted to (i,j,k)) e_alpha
    void (*chi_table)(const ChiTerm* t, std::size_t nt, In7 u, In7 v, In7 w, Out7 out, std::size_t n);
    void (*form3)(const Term3* t, std::size_t nt, In7 u, In7 v, In7 w, double* out, std::size_t n);
    // determinant of the Gram matrix of (u, v, w)
    void (*gram3)(In7 u, In7 v, In7 w, double* out, std::size_t n);
    void (*dirac_stencil)(const StencilArgs& a);
};

const KernelTable& scalar();
// nullptr when the CPU lacks AVX2/FMA.
const KernelTable* avx2();
// AVX2 when available unless G2KIT_KERNELS=scalar is set.
const KernelTable& active();
bool cpu_has_avx2();

}  // namespace g2kit::kernels
