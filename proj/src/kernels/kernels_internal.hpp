#pragma once

#include "ppflow/kernels.hpp"

#if defined(__x86_64__)
namespace ppflow::kernels::avx2 {
void dot_basis_batch(const BasisRef& basis, const double* z, const double* x,
                     double* out, std::size_t n, bool multiply);
void axpy(double w, const double* x, double* y, std::size_t n);
SumSq sum_sumsq(const double* x, std::size_t n);
} // namespace ppflow::kernels::avx2
#endif
