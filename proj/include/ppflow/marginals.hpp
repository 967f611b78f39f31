#pragma once

#include <string>
#include <variant>

namespace ppflow {

// Continuous input marginals. Weibull/Beta/Normal are the stochastic-input
// models; Uniform/Exponential/Gamma round out the classical-basis table.
struct WeibullMarginal {
    double shape;  // k
    double scale;  // c, same unit as the variable
};
struct BetaMarginal {
    double alpha;
    double beta;
    double lo;
    double hi;
};
struct NormalMarginal {
    double mu;
    double sigma;
};
struct UniformMarginal {
    double lo;
    double hi;
};
struct ExponentialMarginal {
    double rate;
};
struct GammaMarginal {
    double shape;
    double rate;
};

using Marginal = std::variant<WeibullMarginal, BetaMarginal, NormalMarginal, UniformMarginal,
                              ExponentialMarginal, GammaMarginal>;

double marginal_pdf(const Marginal& m, double x);
double marginal_cdf(const Marginal& m, double x);
double marginal_quantile(const Marginal& m, double p);
double marginal_mean(const Marginal& m);
double marginal_stddev(const Marginal& m);

// support truncated to tail mass <= eps on unbounded sides (quadrature use)
struct Interval {
    double lo, hi;
};
Interval marginal_truncated_support(const Marginal& m, double tail_eps = 1e-12);

// throws SemanticError if parameters violate the marginal's constraints
void validate_marginal(const Marginal& m);

std::string marginal_name(const Marginal& m);

} // namespace ppflow
