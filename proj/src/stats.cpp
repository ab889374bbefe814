#include "sozloc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sozloc/errors.hpp"

namespace sozloc {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double kolmogorov_survival(double lambda) {
    if (lambda <= 0.0) return 1.0;
    double acc = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        acc += sign * term;
        if (term < 1e-16) break;
        sign = -sign;
    }
    return std::clamp(2.0 * acc, 0.0, 1.0);
}

namespace {

// Lentz continued fraction for the incomplete beta function.
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-14;
    constexpr double kTiny = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * betacf(a, b, x) / a;
    }
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_survival(double t, double dof) {
    if (!(dof > 0)) throw ArgumentError("student_t_survival: dof must be positive");
    const double x = dof / (dof + t * t);
    const double tail = 0.5 * regularized_incomplete_beta(dof / 2.0, 0.5, x);
    return t >= 0.0 ? tail : 1.0 - tail;
}

TestResult ks_normality_test(const std::vector<double>& samples) {
    if (samples.size() < 3) throw ArgumentError("ks_normality_test: need at least 3 samples");
    const double n = static_cast<double>(samples.size());
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : samples) var += (v - mean) * (v - mean);
    var /= n;
    TestResult result;
    if (var <= 0.0) {
        result.degenerate = true;
        return result;
    }
    const double sd = std::sqrt(var);

    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double cdf = normal_cdf((sorted[i] - mean) / sd);
        d = std::max(d, std::abs(cdf - static_cast<double>(i + 1) / n));
        d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
    }
    result.statistic = d;
    result.p_value = kolmogorov_survival(std::sqrt(n) * d);
    return result;
}

TestResult welch_one_sided_t(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2) {
        throw ArgumentError("welch_one_sided_t: both samples need at least 2 values");
    }
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double ma = 0.0, mb = 0.0;
    for (double v : a) ma += v;
    for (double v : b) mb += v;
    ma /= na;
    mb /= nb;
    double va = 0.0, vb = 0.0;
    for (double v : a) va += (v - ma) * (v - ma);
    for (double v : b) vb += (v - mb) * (v - mb);
    va /= (na - 1);
    vb /= (nb - 1);

    TestResult result;
    const double se2 = va / na + vb / nb;
    if (se2 <= 0.0) {
        result.degenerate = true;
        result.p_value = ma > mb ? 0.0 : (ma < mb ? 1.0 : 0.5);
        return result;
    }
    const double t = (ma - mb) / std::sqrt(se2);
    const double dof = se2 * se2 / (va * va / (na * na * (na - 1)) + vb * vb / (nb * nb * (nb - 1)));
    result.statistic = t;
    result.p_value = student_t_survival(t, dof);
    return result;
}

}  // namespace sozloc
