#pragma once

#include <span>
#include <vector>

#include "cmg/core.hpp"

namespace cmg {

class DegenerateSeriesError : public Error {
public:
    DegenerateSeriesError(const std::string& operation, const std::string& message)
        : Error("stats", operation, "DegenerateSeries: " + message) {}
};

double mean(std::span<const double> x);
/// Sample variance (n - 1 denominator).
double variance(std::span<const double> x);
double stddev(std::span<const double> x);

/// Sample covariance over the product of sample standard deviations.
/// Requires equal lengths >= 2 and nonconstant inputs.
double pearson(std::span<const double> x, std::span<const double> y);

/// Pearson correlation of average ranks.
double spearman(std::span<const double> x, std::span<const double> y);

struct RegressionReport {
    double beta0 = 0.0;
    double beta1 = 0.0;
    double p_value = 1.0;  // two-sided, slope != 0, normal approximation
    double r_squared = 0.0;
    std::size_t n = 0;
};

/// Least squares y = beta0 + beta1 x. Requires n >= 3 and nonconstant x.
RegressionReport ols(std::span<const double> x, std::span<const double> y);

struct Ar1Report {
    double phi = 0.0;
    std::size_t n = 0;  // number of (r(t-1), r(t)) pairs
};

/// OLS slope of r(t) on r(t-1). Requires length >= 3.
Ar1Report ar1(std::span<const double> r);

/// AR(1) slope pooled over several series; lag pairs never straddle series.
Ar1Report ar1_pooled(const std::vector<std::vector<double>>& series);

/// Two-sided p-value of a standard normal statistic.
double normal_two_sided_p(double z);

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// Welch's unequal-variance t-test, Student-t reference distribution.
TestResult welch_t_test(std::span<const double> x, std::span<const double> y);

/// Paired t-test on x - y.
TestResult paired_t_test(std::span<const double> x, std::span<const double> y);

}  // namespace cmg
