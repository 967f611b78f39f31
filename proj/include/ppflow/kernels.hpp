#pragma once

#include <cstddef>
#include <string>

namespace ppflow::kernels {

// View of a univariate orthonormal-basis recurrence:
//   t        = (x - shift) * inv_scale
//   phi_0    = 1
//   phi_k+1  = ((t - d[k]) * phi_k - sqrt_b[k] * phi_k-1) / sqrt_b[k+1]
// d has degree+1 entries, sqrt_b has degree+1 entries (sqrt_b[0] unused
// by the recurrence itself).
struct BasisRef {
    const double* d;
    const double* sqrt_b;
    int degree;
    double shift;
    double inv_scale;
};

// out[m] = sum_k z[k] * phi_k(x[m])           (multiply == false)
// out[m] *= sum_k z[k] * phi_k(x[m])          (multiply == true)
void dot_basis_batch(const BasisRef& basis, const double* z, const double* x,
                     double* out, std::size_t n, bool multiply);

// y[m] += w * x[m]
void axpy(double w, const double* x, double* y, std::size_t n);

struct SumSq {
    double sum = 0.0;
    double sumsq = 0.0;
};
SumSq sum_sumsq(const double* x, std::size_t n);

enum class Isa { scalar, avx2 };

// Active instruction set; chosen once from CPU features, overridable via
// the PPFLOW_SIMD environment variable ("scalar" / "avx2" / "auto") or
// force_isa (tests).
Isa active_isa();
void force_isa(Isa isa);
std::string isa_name(Isa isa);

// Reference implementations, always available (equivalence tests).
namespace scalar {
void dot_basis_batch(const BasisRef& basis, const double* z, const double* x,
                     double* out, std::size_t n, bool multiply);
void axpy(double w, const double* x, double* y, std::size_t n);
SumSq sum_sumsq(const double* x, std::size_t n);
} // namespace scalar

} // namespace ppflow::kernels
