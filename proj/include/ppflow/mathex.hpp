#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace ppflow {

// Standard normal density, CDF and quantile (Wichura's AS241, full double
// precision). The quantile clamps its argument away from {0,1} so tail
// lookups stay finite; callers that need the raw tails handle them first.
double norm_pdf(double x);
double norm_cdf(double x);
double norm_quantile(double p);

// Regularized incomplete beta I_x(a,b) and its inverse in x.
double beta_inc(double a, double b, double x);
double beta_inc_inv(double a, double b, double p);

// Gauss-Legendre rule on [-1,1].
struct QuadRule {
    std::vector<double> x;
    std::vector<double> w;
};
QuadRule gauss_legendre(int n);

// Gauss-Hermite rule for weight exp(-t^2) (physicists' convention),
// computed via Golub-Welsch.
QuadRule gauss_hermite(int n);

// Splittable counter-free PRNG (splitmix64 core). Streams derived with
// derive() are independent for distinct tags; identical (seed, tag)
// pairs always reproduce the same sequence.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

    // uniform integer in [0,n), unbiased
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t threshold = (-n) % n;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    Rng derive(std::uint64_t tag) const {
        Rng child(state_ ^ (0xd1342543de82ef95ull * (tag + 0x632be59bd9b4e019ull)));
        child.next_u64();
        return child;
    }

  private:
    std::uint64_t state_;
};

} // namespace ppflow
