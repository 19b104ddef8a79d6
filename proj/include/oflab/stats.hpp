#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace oflab {

/// Neumaier compensated sum.
class CompensatedSum {
public:
    void add(double x);
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct SampleSummary {
    std::size_t count = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased
    double std_error = 0.0;
};

SampleSummary summarize(std::span<const double> xs);

/// Sup distance between the empirical CDF of `samples` and `cdf`.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// (2/pi) asin(sqrt(x)) on [0, 1].
double arcsine_cdf(double x);

/// Pearson statistic sum (o - e)^2 / e.
double chi_square_statistic(std::span<const double> observed, std::span<const double> expected);

/// Upper tail P(chi2_dof > stat).
double chi_square_pvalue(double stat, int dof);

}  // namespace oflab
