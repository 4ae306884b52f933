#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace cfceval {

struct SummaryStats {
    std::size_t n = 0;
    double mean = 0.0;
    double stddev = 0.0; // sample standard deviation (n-1 denominator)
    bool degenerate = false; // n < 2: stddev reported as 0
};

/// Mean and sample standard deviation. Empty input is a configuration error.
SummaryStats summarize(std::span<const double> values);

/// Sample Pearson correlation coefficient. Throws ConfigError on mismatched
/// or too-short input and InputError when either series is constant
/// (undefined correlation).
double pearson(std::span<const double> xs, std::span<const double> ys);

struct TTestResult {
    double t = 0.0;
    double p = 1.0; // two-sided
    std::size_t dof = 0;
};

/// Paired t-test: t = mean(d) / (sd(d)/sqrt(n)) over d = xs - ys, p from the
/// t-distribution with n-1 degrees of freedom. All-zero differences yield
/// (t=0, p=1); constant non-zero differences yield an infinite t with p=0.
TTestResult paired_t(std::span<const double> xs, std::span<const double> ys);

/// Cohen's kappa over two equal-length categorical rating vectors.
double cohens_kappa(std::span<const std::string> ratings_a,
                    std::span<const std::string> ratings_b);

/// Regularized incomplete beta function I_x(a, b).
double regularized_incomplete_beta(double a, double b, double x);

/// CDF of Student's t-distribution with `dof` degrees of freedom.
double student_t_cdf(double t, double dof);

/// Two-sided tail probability P(|T| >= |t|) for Student's t.
double student_t_two_sided_p(double t, double dof);

} // namespace cfceval
