#pragma once

#include <span>
#include <vector>

namespace lava {

/// Ranks starting at 1; tied values share their average rank.
std::vector<double> average_ranks(std::span<const double> xs);

/// Spearman rank correlation with average ranks for ties; 0 if either
/// input is constant.
double spearman(std::span<const double> xs, std::span<const double> ys);

struct Regression {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    /// Two-sided p-value of slope = 0 under Student's t with n - 2 dof.
    double p_value = 1.0;
    std::size_t n = 0;
};

/// Ordinary least squares y = intercept + slope * x; needs n >= 3 and
/// non-constant x.
Regression linear_regression(std::span<const double> xs, std::span<const double> ys);

struct MeanTest {
    double mean = 0.0;
    double standard_error = 0.0;
    /// Two-sided p-value of mean = 0 (one-sample t-test); 1 when all values are equal to 0.
    double p_value = 1.0;
};

MeanTest one_sample_t(std::span<const double> xs);

}  // namespace lava
