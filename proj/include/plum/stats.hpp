#pragma once

#include <span>
#include <vector>

namespace plum {

double mean(std::span<const double> values);

/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double sample_sd(std::span<const double> values);

/// Quantile of already sorted values by linear interpolation between order
/// statistics: position h = (n - 1) p, value x[floor h] + (h - floor h)(x[floor h + 1] - x[floor h]).
double sorted_quantile(std::span<const double> sorted, double p);

/// Same rule on unsorted input (copies and sorts).
double quantile(std::span<const double> values, double p);

struct Interval95 {
    double mean = 0.0;
    double sd = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

/// Mean, sd and equal-tailed 2.5% / 97.5% quantiles.
Interval95 summarize_sample(std::span<const double> values);

}  // namespace plum
