#include "ppflow/marginals.hpp"

#include <cmath>

#include "ppflow/errors.hpp"
#include "ppflow/mathex.hpp"

namespace ppflow {

namespace {

// Regularized lower incomplete gamma P(s, x): series for x < s+1,
// continued fraction otherwise.
double gamma_p(double s, double x) {
    if (x <= 0.0) return 0.0;
    double lg = std::lgamma(s);
    if (x < s + 1.0) {
        double ap = s, sum = 1.0 / s, del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
        }
        return sum * std::exp(-x + s * std::log(x) - lg);
    }
    const double fpmin = 1e-300;
    double b = x + 1.0 - s, c = 1.0 / fpmin, d = 1.0 / b, h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-15) break;
    }
    return 1.0 - std::exp(-x + s * std::log(x) - lg) * h;
}

double gamma_p_inv(double s, double p) {
    if (p <= 0.0) return 0.0;
    double lo = 0.0, hi = s + 1.0;
    while (gamma_p(s, hi) < p) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (gamma_p(s, mid) < p)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-14 * (1.0 + hi)) break;
    }
    return 0.5 * (lo + hi);
}

} // namespace

double marginal_pdf(const Marginal& m, double x) {
    return std::visit(
        [x](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, WeibullMarginal>) {
                if (x < 0.0) return 0.0;
                double t = x / d.scale;
                return d.shape / d.scale * std::pow(t, d.shape - 1.0) *
                       std::exp(-std::pow(t, d.shape));
            } else if constexpr (std::is_same_v<T, BetaMarginal>) {
                if (x <= d.lo || x >= d.hi) return 0.0;
                double w = d.hi - d.lo, u = (x - d.lo) / w;
                double lb = std::lgamma(d.alpha + d.beta) - std::lgamma(d.alpha) -
                            std::lgamma(d.beta);
                return std::exp(lb + (d.alpha - 1.0) * std::log(u) +
                                (d.beta - 1.0) * std::log1p(-u)) /
                       w;
            } else if constexpr (std::is_same_v<T, NormalMarginal>) {
                return norm_pdf((x - d.mu) / d.sigma) / d.sigma;
            } else if constexpr (std::is_same_v<T, UniformMarginal>) {
                return (x < d.lo || x > d.hi) ? 0.0 : 1.0 / (d.hi - d.lo);
            } else if constexpr (std::is_same_v<T, ExponentialMarginal>) {
                return x < 0.0 ? 0.0 : d.rate * std::exp(-d.rate * x);
            } else {
                if (x <= 0.0) return 0.0;
                return std::exp(d.shape * std::log(d.rate) + (d.shape - 1.0) * std::log(x) -
                                d.rate * x - std::lgamma(d.shape));
            }
        },
        m);
}

double marginal_cdf(const Marginal& m, double x) {
    return std::visit(
        [x](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, WeibullMarginal>) {
                if (x <= 0.0) return 0.0;
                return -std::expm1(-std::pow(x / d.scale, d.shape));
            } else if constexpr (std::is_same_v<T, BetaMarginal>) {
                if (x <= d.lo) return 0.0;
                if (x >= d.hi) return 1.0;
                return beta_inc(d.alpha, d.beta, (x - d.lo) / (d.hi - d.lo));
            } else if constexpr (std::is_same_v<T, NormalMarginal>) {
                return norm_cdf((x - d.mu) / d.sigma);
            } else if constexpr (std::is_same_v<T, UniformMarginal>) {
                if (x <= d.lo) return 0.0;
                if (x >= d.hi) return 1.0;
                return (x - d.lo) / (d.hi - d.lo);
            } else if constexpr (std::is_same_v<T, ExponentialMarginal>) {
                return x <= 0.0 ? 0.0 : -std::expm1(-d.rate * x);
            } else {
                return x <= 0.0 ? 0.0 : gamma_p(d.shape, d.rate * x);
            }
        },
        m);
}

double marginal_quantile(const Marginal& m, double p) {
    if (p < 0.0 || p > 1.0) throw NumericError("marginal_quantile: p outside [0,1]");
    return std::visit(
        [p](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, WeibullMarginal>) {
                return d.scale * std::pow(-std::log1p(-p), 1.0 / d.shape);
            } else if constexpr (std::is_same_v<T, BetaMarginal>) {
                return d.lo + (d.hi - d.lo) * beta_inc_inv(d.alpha, d.beta, p);
            } else if constexpr (std::is_same_v<T, NormalMarginal>) {
                return d.mu + d.sigma * norm_quantile(p);
            } else if constexpr (std::is_same_v<T, UniformMarginal>) {
                return d.lo + (d.hi - d.lo) * p;
            } else if constexpr (std::is_same_v<T, ExponentialMarginal>) {
                return -std::log1p(-p) / d.rate;
            } else {
                return gamma_p_inv(d.shape, p) / d.rate;
            }
        },
        m);
}

double marginal_mean(const Marginal& m) {
    return std::visit(
        [](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, WeibullMarginal>) {
                return d.scale * std::tgamma(1.0 + 1.0 / d.shape);
            } else if constexpr (std::is_same_v<T, BetaMarginal>) {
                return d.lo + (d.hi - d.lo) * d.alpha / (d.alpha + d.beta);
            } else if constexpr (std::is_same_v<T, NormalMarginal>) {
                return d.mu;
            } else if constexpr (std::is_same_v<T, UniformMarginal>) {
                return 0.5 * (d.lo + d.hi);
            } else if constexpr (std::is_same_v<T, ExponentialMarginal>) {
                return 1.0 / d.rate;
            } else {
                return d.shape / d.rate;
            }
        },
        m);
}

double marginal_stddev(const Marginal& m) {
    return std::visit(
        [](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, WeibullMarginal>) {
                double g1 = std::tgamma(1.0 + 1.0 / d.shape);
                double g2 = std::tgamma(1.0 + 2.0 / d.shape);
                return d.scale * std::sqrt(g2 - g1 * g1);
            } else if constexpr (std::is_same_v<T, BetaMarginal>) {
                double ab = d.alpha + d.beta;
                return (d.hi - d.lo) *
                       std::sqrt(d.alpha * d.beta / (ab * ab * (ab + 1.0)));
            } else if constexpr (std::is_same_v<T, NormalMarginal>) {
                return d.sigma;
            } else if constexpr (std::is_same_v<T, UniformMarginal>) {
                return (d.hi - d.lo) / std::sqrt(12.0);
            } else if constexpr (std::is_same_v<T, ExponentialMarginal>) {
                return 1.0 / d.rate;
            } else {
                return std::sqrt(d.shape) / d.rate;
            }
        },
        m);
}

Interval marginal_truncated_support(const Marginal& m, double tail_eps) {
    return std::visit(
        [&](const auto& d) -> Interval {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, WeibullMarginal> ||
                          std::is_same_v<T, ExponentialMarginal> ||
                          std::is_same_v<T, GammaMarginal>) {
                return {0.0, marginal_quantile(m, 1.0 - tail_eps)};
            } else if constexpr (std::is_same_v<T, BetaMarginal> ||
                                 std::is_same_v<T, UniformMarginal>) {
                return {d.lo, d.hi};
            } else {
                return {marginal_quantile(m, tail_eps), marginal_quantile(m, 1.0 - tail_eps)};
            }
        },
        m);
}

void validate_marginal(const Marginal& m) {
    std::visit(
        [](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, WeibullMarginal>) {
                if (d.shape <= 0.0 || d.scale <= 0.0)
                    throw SemanticError("weibull marginal needs shape, scale > 0");
            } else if constexpr (std::is_same_v<T, BetaMarginal>) {
                if (d.alpha <= 0.0 || d.beta <= 0.0)
                    throw SemanticError("beta marginal needs alpha, beta > 0");
                if (d.lo >= d.hi) throw SemanticError("beta marginal needs lo < hi");
            } else if constexpr (std::is_same_v<T, NormalMarginal>) {
                if (d.sigma <= 0.0) throw SemanticError("normal marginal needs sigma > 0");
            } else if constexpr (std::is_same_v<T, UniformMarginal>) {
                if (d.lo >= d.hi) throw SemanticError("uniform marginal needs lo < hi");
            } else if constexpr (std::is_same_v<T, ExponentialMarginal>) {
                if (d.rate <= 0.0) throw SemanticError("exponential marginal needs rate > 0");
            } else {
                if (d.shape <= 0.0 || d.rate <= 0.0)
                    throw SemanticError("gamma marginal needs shape, rate > 0");
            }
        },
        m);
}

std::string marginal_name(const Marginal& m) {
    return std::visit(
        [](const auto& d) -> std::string {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, WeibullMarginal>) return "weibull";
            else if constexpr (std::is_same_v<T, BetaMarginal>) return "beta";
            else if constexpr (std::is_same_v<T, NormalMarginal>) return "normal";
            else if constexpr (std::is_same_v<T, UniformMarginal>) return "uniform";
            else if constexpr (std::is_same_v<T, ExponentialMarginal>) return "exponential";
            else return "gamma";
        },
        m);
}

} // namespace ppflow
