#include <cstdlib>
#include <cstring>

#include "kernels_internal.hpp"

namespace ppflow::kernels {

namespace {

Isa detect() {
#if defined(__x86_64__)
    const char* env = std::getenv("PPFLOW_SIMD");
    if (env != nullptr) {
        if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
        if (std::strcmp(env, "avx2") == 0) return Isa::avx2;
    }
    if (__builtin_cpu_supports("avx2")) return Isa::avx2;
#endif
    return Isa::scalar;
}

Isa g_isa = detect();

} // namespace

Isa active_isa() { return g_isa; }

void force_isa(Isa isa) {
#if !defined(__x86_64__)
    isa = Isa::scalar;
#endif
    g_isa = isa;
}

std::string isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

void dot_basis_batch(const BasisRef& basis, const double* z, const double* x,
                     double* out, std::size_t n, bool multiply) {
#if defined(__x86_64__)
    if (g_isa == Isa::avx2) {
        avx2::dot_basis_batch(basis, z, x, out, n, multiply);
        return;
    }
#endif
    scalar::dot_basis_batch(basis, z, x, out, n, multiply);
}

void axpy(double w, const double* x, double* y, std::size_t n) {
#if defined(__x86_64__)
    if (g_isa == Isa::avx2) {
        avx2::axpy(w, x, y, n);
        return;
    }
#endif
    scalar::axpy(w, x, y, n);
}

SumSq sum_sumsq(const double* x, std::size_t n) {
#if defined(__x86_64__)
    if (g_isa == Isa::avx2) return avx2::sum_sumsq(x, n);
#endif
    return scalar::sum_sumsq(x, n);
}

} // namespace ppflow::kernels
