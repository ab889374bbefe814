#pragma once

#include <vector>

namespace sozloc {

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    bool degenerate = false;  // zero-variance input; statistic/p not meaningful
};

// One-sample Kolmogorov-Smirnov statistic against Normal(sample mean, sample
// std), p-value from the asymptotic Kolmogorov distribution.
TestResult ks_normality_test(const std::vector<double>& samples);

// Welch's t with Satterthwaite degrees of freedom; H1: mean(a) > mean(b).
TestResult welch_one_sided_t(const std::vector<double>& a, const std::vector<double>& b);

// Building blocks, exposed for direct testing.
double normal_cdf(double x);
double kolmogorov_survival(double lambda);               // Q_KS
double student_t_survival(double t, double dof);         // P(T > t)
double regularized_incomplete_beta(double a, double b, double x);

}  // namespace sozloc
