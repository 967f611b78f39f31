#include "ppflow/polybasis.hpp"

#include <cmath>

#include "ppflow/errors.hpp"
#include "ppflow/mathex.hpp"

namespace ppflow {

std::string family_name(BasisFamily f) {
    switch (f) {
        case BasisFamily::Hermite: return "hermite";
        case BasisFamily::Legendre: return "legendre";
        case BasisFamily::Jacobi: return "jacobi";
        case BasisFamily::Laguerre: return "laguerre";
        case BasisFamily::GeneralizedLaguerre: return "generalized_laguerre";
        case BasisFamily::Numeric: return "numeric";
    }
    return "?";
}

OrthonormalBasis::OrthonormalBasis(BasisFamily family, Marginal marginal, std::vector<double> d,
                                   std::vector<double> sqrt_b, double shift, double scale)
    : family_(family),
      marginal_(std::move(marginal)),
      d_(std::move(d)),
      sqrt_b_(std::move(sqrt_b)),
      shift_(shift),
      scale_(scale) {
    if (d_.size() != sqrt_b_.size() || d_.empty())
        throw NumericError("basis recurrence arrays inconsistent");
    for (std::size_t k = 1; k < sqrt_b_.size(); ++k)
        if (!(sqrt_b_[k] > 0.0)) throw NumericError("basis recurrence b_k <= 0");
}

void OrthonormalBasis::eval(double x, std::span<double> out) const {
    const int p = max_degree();
    double t = (x - shift_) / scale_;
    out[0] = 1.0;
    if (p == 0) return;
    double prev = 0.0, cur = 1.0;
    for (int k = 0; k < p; ++k) {
        double next = ((t - d_[k]) * cur - sqrt_b_[k] * prev) / sqrt_b_[k + 1];
        prev = cur;
        cur = next;
        out[k + 1] = cur;
    }
}

std::vector<double> OrthonormalBasis::eval(double x) const {
    std::vector<double> out(max_degree() + 1);
    eval(x, out);
    return out;
}

kernels::BasisRef OrthonormalBasis::ref(int degree) const {
    if (degree > max_degree()) throw NumericError("basis degree out of range");
    return {d_.data(), sqrt_b_.data(), degree, shift_, 1.0 / scale_};
}

OrthonormalBasis OrthonormalBasis::truncated(int degree) const {
    if (degree > max_degree()) throw NumericError("basis degree out of range");
    std::vector<double> d(d_.begin(), d_.begin() + degree + 1);
    std::vector<double> sb(sqrt_b_.begin(), sqrt_b_.begin() + degree + 1);
    return OrthonormalBasis(family_, marginal_, std::move(d), std::move(sb), shift_, scale_);
}

namespace {

OrthonormalBasis from_monic(BasisFamily family, const Marginal& m, std::vector<double> d,
                            std::vector<double> b, double shift, double scale) {
    std::vector<double> sb(b.size());
    for (std::size_t k = 0; k < b.size(); ++k) sb[k] = std::sqrt(b[k]);
    return OrthonormalBasis(family, m, std::move(d), std::move(sb), shift, scale);
}

// monic Jacobi recurrence for weight (1-t)^A (1+t)^B on [-1,1], with
// b_0 normalized to 1 (probability measure)
void jacobi_recurrence(double A, double B, int p, std::vector<double>& d,
                       std::vector<double>& b) {
    d.assign(p + 1, 0.0);
    b.assign(p + 1, 1.0);
    d[0] = (B - A) / (A + B + 2.0);
    for (int k = 1; k <= p; ++k) {
        double s = 2.0 * k + A + B;
        d[k] = (B * B - A * A) / (s * (s + 2.0));
        if (k == 1)
            b[k] = 4.0 * (1.0 + A) * (1.0 + B) / ((A + B + 2.0) * (A + B + 2.0) * (A + B + 3.0));
        else
            b[k] = 4.0 * k * (k + A) * (k + B) * (k + A + B) / (s * s * (s + 1.0) * (s - 1.0));
    }
}

} // namespace

OrthonormalBasis classical_basis(const Marginal& m, int p) {
    validate_marginal(m);
    if (p < 0) throw NumericError("degree must be >= 0");
    std::vector<double> d(p + 1, 0.0), b(p + 1, 1.0);
    return std::visit(
        [&](const auto& mm) -> OrthonormalBasis {
            using T = std::decay_t<decltype(mm)>;
            if constexpr (std::is_same_v<T, NormalMarginal>) {
                for (int k = 1; k <= p; ++k) b[k] = k;
                return from_monic(BasisFamily::Hermite, m, d, b, mm.mu, mm.sigma);
            } else if constexpr (std::is_same_v<T, UniformMarginal>) {
                for (int k = 1; k <= p; ++k) b[k] = k * k / (4.0 * k * k - 1.0);
                return from_monic(BasisFamily::Legendre, m, d, b, 0.5 * (mm.lo + mm.hi),
                                  0.5 * (mm.hi - mm.lo));
            } else if constexpr (std::is_same_v<T, BetaMarginal>) {
                // Beta(alpha,beta) on [lo,hi] mapped to t in [-1,1]:
                // density prop to (1-t)^(beta-1) (1+t)^(alpha-1)
                jacobi_recurrence(mm.beta - 1.0, mm.alpha - 1.0, p, d, b);
                return from_monic(BasisFamily::Jacobi, m, d, b, 0.5 * (mm.lo + mm.hi),
                                  0.5 * (mm.hi - mm.lo));
            } else if constexpr (std::is_same_v<T, ExponentialMarginal>) {
                for (int k = 0; k <= p; ++k) {
                    d[k] = 2.0 * k + 1.0;
                    if (k >= 1) b[k] = static_cast<double>(k) * k;
                }
                return from_monic(BasisFamily::Laguerre, m, d, b, 0.0, 1.0 / mm.rate);
            } else if constexpr (std::is_same_v<T, GammaMarginal>) {
                double a = mm.shape - 1.0;
                for (int k = 0; k <= p; ++k) {
                    d[k] = 2.0 * k + a + 1.0;
                    if (k >= 1) b[k] = k * (k + a);
                }
                return from_monic(BasisFamily::GeneralizedLaguerre, m, d, b, 0.0, 1.0 / mm.rate);
            } else {
                throw UnsupportedMarginal("no classical polynomial family for " +
                                          marginal_name(m) + "; use stieltjes_basis");
            }
        },
        m);
}

namespace {

struct DiscreteMeasure {
    std::vector<double> t;  // standardized abscissae
    std::vector<double> w;  // weights, sum 1
};

// composite Gauss-Legendre discretization of the marginal density over its
// truncated support, standardized by (shift, scale)
DiscreteMeasure discretize(const Marginal& m, double shift, double scale, int segments,
                           int pts) {
    Interval s = marginal_truncated_support(m);
    QuadRule gl = gauss_legendre(pts);
    DiscreteMeasure out;
    out.t.reserve(static_cast<std::size_t>(segments) * pts);
    out.w.reserve(out.t.capacity());
    double width = (s.hi - s.lo) / segments;
    double total = 0.0;
    for (int seg = 0; seg < segments; ++seg) {
        double a = s.lo + seg * width;
        for (int q = 0; q < pts; ++q) {
            double x = a + 0.5 * width * (gl.x[q] + 1.0);
            double w = 0.5 * width * gl.w[q] * marginal_pdf(m, x);
            out.t.push_back((x - shift) / scale);
            out.w.push_back(w);
            total += w;
        }
    }
    for (double& w : out.w) w /= total;
    return out;
}

struct Recurrence {
    std::vector<double> d, b;
};

// one pass of the three-term-recurrence construction on a discrete measure
Recurrence stieltjes_pass(const DiscreteMeasure& mu, int p) {
    const std::size_t n = mu.t.size();
    std::vector<double> prev(n, 0.0), cur(n, 1.0), next(n);
    Recurrence rec;
    rec.d.assign(p + 1, 0.0);
    rec.b.assign(p + 1, 1.0);
    double norm_cur = 1.0, norm_prev = 1.0;
    for (int k = 0; k <= p; ++k) {
        double num = 0.0;
        for (std::size_t q = 0; q < n; ++q) num += mu.w[q] * mu.t[q] * cur[q] * cur[q];
        rec.d[k] = num / norm_cur;
        if (k >= 1) rec.b[k] = norm_cur / norm_prev;
        if (k == p) break;
        for (std::size_t q = 0; q < n; ++q)
            next[q] = (mu.t[q] - rec.d[k]) * cur[q] - (k > 0 ? rec.b[k] : 0.0) * prev[q];
        prev.swap(cur);
        cur.swap(next);
        norm_prev = norm_cur;
        norm_cur = 0.0;
        for (std::size_t q = 0; q < n; ++q) norm_cur += mu.w[q] * cur[q] * cur[q];
        if (!(norm_cur > 0.0))
            throw NumericError("stieltjes_basis: vanishing norm at degree " +
                               std::to_string(k + 1));
    }
    return rec;
}

} // namespace

OrthonormalBasis stieltjes_basis(const Marginal& m, int p) {
    validate_marginal(m);
    if (p < 0) throw NumericError("degree must be >= 0");
    // standardize to keep the recurrence well-conditioned
    double shift = marginal_mean(m);
    double scale = marginal_stddev(m);

    const int pts = 16;
    int segments = 64;
    const int max_segments = 1 << 14;
    Recurrence rec = stieltjes_pass(discretize(m, shift, scale, segments, pts), p);
    for (;;) {
        if (segments * 2 > max_segments)
            throw NumericError("stieltjes_basis: quadrature did not converge (QuadratureNotConverged)");
        segments *= 2;
        Recurrence fine = stieltjes_pass(discretize(m, shift, scale, segments, pts), p);
        double delta = 0.0;
        for (int k = 0; k <= p; ++k) {
            delta = std::max(delta, std::fabs(fine.d[k] - rec.d[k]));
            delta = std::max(delta, std::fabs(fine.b[k] - rec.b[k]));
        }
        rec = std::move(fine);
        if (delta < 1e-10) break;
    }

    std::vector<double> sb(rec.b.size());
    for (std::size_t k = 0; k < rec.b.size(); ++k) sb[k] = std::sqrt(rec.b[k]);
    OrthonormalBasis basis(BasisFamily::Numeric, m, rec.d, sb, shift, scale);

    Eigen::MatrixXd G = gram_matrix(basis, 128, 16);
    double resid = (G - Eigen::MatrixXd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff();
    if (resid > 1e-6)
        throw NumericError("stieltjes_basis: Gram residual " + std::to_string(resid) +
                           " (LossOfOrthogonality)");
    return basis;
}

OrthonormalBasis basis_for(const Marginal& m, int p) {
    if (std::holds_alternative<WeibullMarginal>(m)) return stieltjes_basis(m, p);
    return classical_basis(m, p);
}

Eigen::MatrixXd gram_matrix(const OrthonormalBasis& basis, int segments, int pts) {
    const int p = basis.max_degree();
    Interval s = marginal_truncated_support(basis.marginal());
    QuadRule gl = gauss_legendre(pts);
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(p + 1, p + 1);
    std::vector<double> phi(p + 1);
    double width = (s.hi - s.lo) / segments;
    for (int seg = 0; seg < segments; ++seg) {
        double a = s.lo + seg * width;
        for (int q = 0; q < pts; ++q) {
            double x = a + 0.5 * width * (gl.x[q] + 1.0);
            double w = 0.5 * width * gl.w[q] * marginal_pdf(basis.marginal(), x);
            basis.eval(x, phi);
            for (int i = 0; i <= p; ++i)
                for (int j = 0; j <= p; ++j) G(i, j) += w * phi[i] * phi[j];
        }
    }
    return G;
}

} // namespace ppflow
