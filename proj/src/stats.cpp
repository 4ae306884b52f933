#include "cfceval/stats.hpp"

#include "cfceval/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

namespace cfceval {

SummaryStats summarize(std::span<const double> values) {
    if (values.empty()) throw ConfigError("summarize requires a non-empty sample");
    SummaryStats s;
    s.n = values.size();
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(s.n);
    if (s.n < 2) {
        s.degenerate = true;
        return s;
    }
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(s.n - 1));
    return s;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw ConfigError("pearson requires equal-length series");
    if (xs.size() < 2) throw ConfigError("pearson requires at least two samples");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw InputError("pearson undefined for a constant series");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

TTestResult paired_t(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw ConfigError("paired_t requires equal-length series");
    if (xs.size() < 2) throw ConfigError("paired_t requires at least two pairs");
    std::vector<double> diffs(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) diffs[i] = xs[i] - ys[i];
    const SummaryStats d = summarize(diffs);

    TTestResult r;
    r.dof = xs.size() - 1;
    if (d.stddev == 0.0) {
        if (d.mean == 0.0) return r; // identical series: t=0, p=1
        r.t = d.mean > 0 ? std::numeric_limits<double>::infinity()
                         : -std::numeric_limits<double>::infinity();
        r.p = 0.0;
        return r;
    }
    r.t = d.mean / (d.stddev / std::sqrt(static_cast<double>(xs.size())));
    r.p = student_t_two_sided_p(r.t, static_cast<double>(r.dof));
    return r;
}

double cohens_kappa(std::span<const std::string> ratings_a,
                    std::span<const std::string> ratings_b) {
    if (ratings_a.size() != ratings_b.size())
        throw ConfigError("cohens_kappa requires equal-length rating vectors");
    if (ratings_a.empty()) throw ConfigError("cohens_kappa requires a non-empty sample");

    const double n = static_cast<double>(ratings_a.size());
    std::map<std::string, double> marg_a, marg_b;
    double agree = 0.0;
    for (std::size_t i = 0; i < ratings_a.size(); ++i) {
        marg_a[ratings_a[i]] += 1.0;
        marg_b[ratings_b[i]] += 1.0;
        if (ratings_a[i] == ratings_b[i]) agree += 1.0;
    }
    const double po = agree / n;
    double pe = 0.0;
    for (const auto& [cat, count_a] : marg_a) {
        auto it = marg_b.find(cat);
        if (it != marg_b.end()) pe += (count_a / n) * (it->second / n);
    }
    if (pe >= 1.0) return 1.0; // both raters constant and identical
    return (po - pe) / (1.0 - pe);
}

namespace {

/// Continued fraction for the incomplete beta function (Lentz's method).
double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
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

} // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log(1.0 - x);
    if (x < (a + 1.0) / (a + b + 2.0))
        return std::exp(ln_front) * beta_continued_fraction(a, b, x) / a;
    return 1.0 - std::exp(ln_front) * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double dof) {
    if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
    const double x = dof / (dof + t * t);
    const double tail = 0.5 * regularized_incomplete_beta(dof / 2.0, 0.5, x);
    return t >= 0.0 ? 1.0 - tail : tail;
}

double student_t_two_sided_p(double t, double dof) {
    if (std::isinf(t)) return 0.0;
    if (t == 0.0) return 1.0;
    return regularized_incomplete_beta(dof / 2.0, 0.5, dof / (dof + t * t));
}

} // namespace cfceval
