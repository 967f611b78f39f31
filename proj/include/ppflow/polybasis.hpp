#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ppflow/kernels.hpp"
#include "ppflow/marginals.hpp"

namespace ppflow {

enum class BasisFamily { Hermite, Legendre, Jacobi, Laguerre, GeneralizedLaguerre, Numeric };

std::string family_name(BasisFamily f);

// Univariate polynomials orthonormal with respect to a reference marginal,
// held as the three-term recurrence
//   sqrt(b_{k+1}) phi_{k+1}(t) = (t - d_k) phi_k(t) - sqrt(b_k) phi_{k-1}(t)
// over the standardized variable t = (x - shift) / scale. phi_0 == 1.
class OrthonormalBasis {
  public:
    OrthonormalBasis() = default;
    OrthonormalBasis(BasisFamily family, Marginal marginal, std::vector<double> d,
                     std::vector<double> sqrt_b, double shift, double scale);

    BasisFamily family() const { return family_; }
    const Marginal& marginal() const { return marginal_; }
    int max_degree() const { return static_cast<int>(d_.size()) - 1; }
    double shift() const { return shift_; }
    double scale() const { return scale_; }
    const std::vector<double>& recurrence_d() const { return d_; }
    const std::vector<double>& recurrence_sqrt_b() const { return sqrt_b_; }

    // [phi_0(x) ... phi_p(x)], p = max_degree
    void eval(double x, std::span<double> out) const;
    std::vector<double> eval(double x) const;

    // kernel view truncated to `degree`
    kernels::BasisRef ref(int degree) const;

    OrthonormalBasis truncated(int degree) const;

  private:
    BasisFamily family_ = BasisFamily::Hermite;
    Marginal marginal_ = NormalMarginal{0.0, 1.0};
    std::vector<double> d_;
    std::vector<double> sqrt_b_;
    double shift_ = 0.0;
    double scale_ = 1.0;
};

// Closed-form family for a marginal with a classical match; throws
// UnsupportedMarginal (a NumericError) for Weibull.
struct UnsupportedMarginal : NumericError {
    using NumericError::NumericError;
};
OrthonormalBasis classical_basis(const Marginal& m, int p);

// Orthonormal basis for an arbitrary marginal by the discretized
// three-term-recurrence construction: inner products against the density
// on a refining composite Gauss-Legendre grid until the recurrence
// coefficients stabilize.
OrthonormalBasis stieltjes_basis(const Marginal& m, int p);

// classical family when one exists, numeric construction otherwise
OrthonormalBasis basis_for(const Marginal& m, int p);

// Gram matrix <phi_i, phi_j> under composite quadrature against the
// reference marginal (orthonormality checks).
Eigen::MatrixXd gram_matrix(const OrthonormalBasis& basis, int segments = 64,
                            int points_per_segment = 16);

} // namespace ppflow
