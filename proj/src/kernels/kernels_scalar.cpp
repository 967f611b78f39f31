#include "ppflow/kernels.hpp"

namespace ppflow::kernels::scalar {

void dot_basis_batch(const BasisRef& basis, const double* z, const double* x,
                     double* out, std::size_t n, bool multiply) {
    const int p = basis.degree;
    const double* d = basis.d;
    const double* sb = basis.sqrt_b;
    for (std::size_t m = 0; m < n; ++m) {
        double t = (x[m] - basis.shift) * basis.inv_scale;
        double prev = 0.0, cur = 1.0;
        double acc = z[0];
        for (int k = 0; k < p; ++k) {
            double next = ((t - d[k]) * cur - sb[k] * prev) / sb[k + 1];
            prev = cur;
            cur = next;
            acc += z[k + 1] * cur;
        }
        out[m] = multiply ? out[m] * acc : acc;
    }
}

void axpy(double w, const double* x, double* y, std::size_t n) {
    for (std::size_t m = 0; m < n; ++m) y[m] += w * x[m];
}

SumSq sum_sumsq(const double* x, std::size_t n) {
    SumSq r;
    for (std::size_t m = 0; m < n; ++m) {
        r.sum += x[m];
        r.sumsq += x[m] * x[m];
    }
    return r;
}

} // namespace ppflow::kernels::scalar
