#include "ppflow/mathex.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace ppflow {

double norm_pdf(double x) {
    static const double inv_sqrt_2pi = 0.3989422804014326779;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

double norm_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.70710678118654752440);
}

namespace {

double poly7(const double* c, double r) {
    return ((((((c[7] * r + c[6]) * r + c[5]) * r + c[4]) * r + c[3]) * r + c[2]) * r + c[1]) * r + c[0];
}

} // namespace

double norm_quantile(double p) {
    // AS241 (Wichura 1988), |error| < 1e-15 over the clamped range.
    static const double a[8] = {3.3871328727963666080e0,  1.3314166789178437745e2,
                                1.9715909503065514427e3,  1.3731693765509461125e4,
                                4.5921953931549871457e4,  6.7265770927008700853e4,
                                3.3430575583588128105e4,  2.5090809287301226727e3};
    static const double b[8] = {1.0,                      4.2313330701600911252e1,
                                6.8718700749205790830e2,  5.3941960214247511077e3,
                                2.1213794301586595867e4,  3.9307895800092710610e4,
                                2.8729085735721942674e4,  5.2264952788528545610e3};
    static const double c[8] = {1.42343711074968357734e0, 4.63033784615654529590e0,
                                5.76949722146069140550e0, 3.64784832476320460504e0,
                                1.27045825245236838258e0, 2.41780725177450611770e-1,
                                2.27238449892691845833e-2, 7.74545014278341407640e-4};
    static const double d[8] = {1.0,                      2.05319162663775882187e0,
                                1.67638483018380384940e0, 6.89767334985100004550e-1,
                                1.48103976427480074590e-1, 1.51986665636164571966e-2,
                                5.47593808499534494600e-4, 1.05075007164441684324e-9};
    static const double e[8] = {6.65790464350110377720e0, 5.46378491116411436990e0,
                                1.78482653991729133580e0, 2.96560571828504891230e-1,
                                2.65321895265761230930e-2, 1.24266094738807843860e-3,
                                2.71155556874348757815e-5, 2.01033439929228813265e-7};
    static const double f[8] = {1.0,                      5.99832206555887937690e-1,
                                1.36929880922735805310e-1, 1.48753612908506148525e-2,
                                7.86869131145613259100e-4, 1.84631831751005468180e-5,
                                1.42151175831644588870e-7, 2.04426310338993978564e-15};

    // clamp to the quantile of +-8.2 sigma
    static const double pmin = 1.2e-16;
    if (p < pmin) p = pmin;
    if (p > 1.0 - pmin) p = 1.0 - pmin;

    double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        double r = 0.180625 - q * q;
        return q * poly7(a, r) / poly7(b, r);
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = poly7(c, r) / poly7(d, r);
    } else {
        r -= 5.0;
        val = poly7(e, r) / poly7(f, r);
    }
    return (q < 0.0) ? -val : val;
}

namespace {

// Continued fraction for the incomplete beta (Lentz's method).
double beta_cf(double a, double b, double x) {
    const int max_iter = 300;
    const double eps = 1e-15, fpmin = 1e-300;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double cc = 1.0, dd = 1.0 - qab * x / qap;
    if (std::fabs(dd) < fpmin) dd = fpmin;
    dd = 1.0 / dd;
    double h = dd;
    for (int m = 1; m <= max_iter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        dd = 1.0 + aa * dd;
        if (std::fabs(dd) < fpmin) dd = fpmin;
        cc = 1.0 + aa / cc;
        if (std::fabs(cc) < fpmin) cc = fpmin;
        dd = 1.0 / dd;
        h *= dd * cc;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        dd = 1.0 + aa * dd;
        if (std::fabs(dd) < fpmin) dd = fpmin;
        cc = 1.0 + aa / cc;
        if (std::fabs(cc) < fpmin) cc = fpmin;
        dd = 1.0 / dd;
        double del = dd * cc;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

} // namespace

double beta_inc(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double lbeta = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
    double front = std::exp(lbeta + a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double beta_inc_inv(double a, double b, double p) {
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    // bisection start, then Newton polish
    double lo = 0.0, hi = 1.0, x = 0.5;
    for (int i = 0; i < 40; ++i) {
        x = 0.5 * (lo + hi);
        if (beta_inc(a, b, x) < p)
            lo = x;
        else
            hi = x;
    }
    double lbeta = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
    for (int i = 0; i < 10; ++i) {
        double err = beta_inc(a, b, x) - p;
        double pdf = std::exp(lbeta + (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x));
        if (pdf <= 0.0) break;
        double step = err / pdf;
        double xn = x - step;
        if (xn <= lo || xn >= hi) break;
        x = xn;
        if (std::fabs(step) < 1e-15 * std::max(x, 1e-15)) break;
    }
    return x;
}

QuadRule gauss_legendre(int n) {
    QuadRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 0; k < n; ++k) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        rule.x[i] = -x;
        rule.x[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.w[i] = w;
        rule.w[n - 1 - i] = w;
    }
    return rule;
}

QuadRule gauss_hermite(int n) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        double off = std::sqrt(0.5 * k);
        J(k, k - 1) = off;
        J(k - 1, k) = off;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    if (es.info() != Eigen::Success) throw std::runtime_error("gauss_hermite: eigensolver failed");
    QuadRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    const double sqrt_pi = 1.7724538509055160273;
    for (int i = 0; i < n; ++i) {
        rule.x[i] = es.eigenvalues()(i);
        double v0 = es.eigenvectors()(0, i);
        rule.w[i] = sqrt_pi * v0 * v0;
    }
    return rule;
}

} // namespace ppflow
