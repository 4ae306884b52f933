#include "cfceval/stats.hpp"

#include "cfceval/errors.hpp"
#include "testutil.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace cfceval;

namespace {

// Quadrature oracle: adaptive Simpson integration of the t density, with the
// tail beyond a cutoff integrated under the substitution x -> 1/u so heavy
// tails (small dof) lose no mass.
double t_norm_const(double nu) {
    return std::exp(std::lgamma((nu + 1.0) / 2.0) - std::lgamma(nu / 2.0)) /
           std::sqrt(nu * M_PI);
}

double t_pdf(double x, double nu) {
    return t_norm_const(nu) * std::pow(1.0 + x * x / nu, -(nu + 1.0) / 2.0);
}

// f(1/u)/u^2, the transformed tail integrand; smooth on [0, 1/T] for nu >= 1.
double t_tail_transformed(double u, double nu) {
    return t_norm_const(nu) * std::pow(nu, (nu + 1.0) / 2.0) * std::pow(u, nu - 1.0) *
           std::pow(nu * u * u + 1.0, -(nu + 1.0) / 2.0);
}

template <typename Fn>
double simpson(const Fn& f, double a, double b) {
    const double c = (a + b) / 2.0;
    return (b - a) / 6.0 * (f(a) + 4.0 * f(c) + f(b));
}

template <typename Fn>
double adaptive(const Fn& f, double a, double b, double whole, double eps, int depth) {
    const double c = (a + b) / 2.0;
    const double left = simpson(f, a, c);
    const double right = simpson(f, c, b);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * eps)
        return left + right + (left + right - whole) / 15.0;
    return adaptive(f, a, c, left, eps / 2.0, depth - 1) +
           adaptive(f, c, b, right, eps / 2.0, depth - 1);
}

template <typename Fn>
double integrate(const Fn& f, double a, double b) {
    return adaptive(f, a, b, simpson(f, a, b), 1e-14, 50);
}

// One-sided upper tail P(T > t) for t >= 0.
double oracle_upper_tail(double t, double nu) {
    const double cutoff = std::max(2.0 * t, 30.0);
    const auto pdf = [nu](double x) { return t_pdf(x, nu); };
    const auto transformed = [nu](double u) { return t_tail_transformed(u, nu); };
    return integrate(pdf, t, cutoff) + integrate(transformed, 0.0, 1.0 / cutoff);
}

double oracle_pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    long double sx = 0, sy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const long double mx = sx / xs.size();
    const long double my = sy / ys.size();
    long double num = 0, dx = 0, dy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        dx += (xs[i] - mx) * (xs[i] - mx);
        dy += (ys[i] - my) * (ys[i] - my);
    }
    return static_cast<double>(num / std::sqrt(dx * dy));
}

} // namespace

TEST_CASE("summarize") {
    const std::vector<double> flat = {5, 5, 5};
    const SummaryStats s1 = summarize(flat);
    CHECK(s1.mean == 5.0);
    CHECK(s1.stddev == 0.0);

    const std::vector<double> ramp = {1, 2, 3};
    const SummaryStats s2 = summarize(ramp);
    CHECK(s2.mean == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(s2.stddev == doctest::Approx(1.0).epsilon(1e-12)); // n-1 denominator

    const std::vector<double> single = {42.0};
    const SummaryStats s3 = summarize(single);
    CHECK(s3.mean == 42.0);
    CHECK(s3.stddev == 0.0);
    CHECK(s3.degenerate);

    CHECK_THROWS_AS((void)summarize(std::vector<double>{}), ConfigError);
}

TEST_CASE("pearson basics") {
    const std::vector<double> xs = {1, 2, 3, 4};
    std::vector<double> ys;
    for (double x : xs) ys.push_back(2.0 * x + 1.0);
    CHECK(pearson(xs, ys) == doctest::Approx(1.0).epsilon(1e-12));
    std::vector<double> neg;
    for (double x : xs) neg.push_back(-x);
    CHECK(pearson(xs, neg) == doctest::Approx(-1.0).epsilon(1e-12));

    const std::vector<double> a = {1, 2, 3};
    const std::vector<double> b = {1, 2, 4};
    CHECK(pearson(a, b) == doctest::Approx(9.0 / std::sqrt(84.0)).epsilon(1e-12));

    const std::vector<double> constant = {7, 7, 7};
    CHECK_THROWS_AS((void)pearson(a, constant), InputError);
    CHECK_THROWS_AS((void)pearson(a, std::vector<double>{1, 2}), ConfigError);
}

TEST_CASE("pearson affine invariance and sign flip") {
    testutil::Rng rng(314);
    for (int i = 0; i < 300; ++i) {
        const int n = rng.range(3, 40);
        std::vector<double> xs, ys;
        for (int k = 0; k < n; ++k) {
            xs.push_back(rng.real(-50, 50));
            ys.push_back(rng.real(-50, 50));
        }
        double r;
        try {
            r = pearson(xs, ys);
        } catch (const InputError&) {
            continue;
        }
        CHECK(r >= -1.0);
        CHECK(r <= 1.0);
        CHECK(r == doctest::Approx(oracle_pearson(xs, ys)).epsilon(1e-9));

        const double scale = rng.real(0.1, 5.0);
        const double shift = rng.real(-10, 10);
        std::vector<double> affine;
        for (double x : xs) affine.push_back(scale * x + shift);
        CHECK(pearson(affine, ys) == doctest::Approx(r).epsilon(1e-9));

        std::vector<double> negated;
        for (double x : xs) negated.push_back(-x);
        CHECK(pearson(negated, ys) == doctest::Approx(-r).epsilon(1e-9));
    }
}

TEST_CASE("paired t basics") {
    const std::vector<double> xs = {1, 2, 3};
    const std::vector<double> zeros = {0, 0, 0};
    const TTestResult same = paired_t(xs, xs);
    CHECK(same.t == 0.0);
    CHECK(same.p == 1.0);

    const TTestResult r = paired_t(xs, zeros);
    CHECK(r.t == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-12));
    CHECK(r.dof == 2);

    const TTestResult flipped = paired_t(zeros, xs);
    CHECK(flipped.t == doctest::Approx(-r.t).epsilon(1e-12));
    CHECK(flipped.p == doctest::Approx(r.p).epsilon(1e-12));

    // Constant non-zero differences: infinite t, zero p.
    const std::vector<double> shifted = {2, 3, 4};
    const TTestResult inf = paired_t(shifted, xs);
    CHECK(std::isinf(inf.t));
    CHECK(inf.p == 0.0);
}

TEST_CASE("paired t matches the closed form on random samples") {
    testutil::Rng rng(6174);
    for (int i = 0; i < 300; ++i) {
        const int n = rng.range(2, 30);
        std::vector<double> xs, ys;
        for (int k = 0; k < n; ++k) {
            xs.push_back(rng.real(-10, 10));
            ys.push_back(rng.real(-10, 10));
        }
        std::vector<double> d(xs.size());
        long double sum = 0;
        for (std::size_t k = 0; k < xs.size(); ++k) {
            d[k] = xs[k] - ys[k];
            sum += d[k];
        }
        const long double mean = sum / n;
        long double ss = 0;
        for (double v : d) ss += (v - mean) * (v - mean);
        const long double sd = std::sqrt(ss / (n - 1));
        if (sd == 0) continue;
        const double expected = static_cast<double>(mean / (sd / std::sqrt((long double)n)));
        const TTestResult r = paired_t(xs, ys);
        CHECK(r.t == doctest::Approx(expected).epsilon(1e-9));
        CHECK(r.p >= 0.0);
        CHECK(r.p <= 1.0);
    }
}

TEST_CASE("t distribution cdf agrees with numeric integration") {
    for (double nu : {1.0, 2.0, 3.0, 7.0, 19.0, 79.0}) {
        for (double t : {0.0, 0.31, 1.0, 2.81, 4.5}) {
            const double tail = oracle_upper_tail(t, nu);
            CHECK(student_t_cdf(t, nu) == doctest::Approx(1.0 - tail).epsilon(1e-9));
            CHECK(student_t_cdf(-t, nu) == doctest::Approx(tail).epsilon(1e-9));
            const double expected_p = t == 0.0 ? 1.0 : 2.0 * tail;
            CHECK(student_t_two_sided_p(t, nu) == doctest::Approx(expected_p).epsilon(1e-9));
        }
    }
}

TEST_CASE("a 2.81 t statistic with ample dof is significant at the 1% level") {
    const double p = student_t_two_sided_p(2.81, 96);
    CHECK(p < 0.01);
    CHECK(p > 0.001);
}

TEST_CASE("cohens kappa") {
    const std::vector<std::string> a = {"x", "y", "x", "y"};
    CHECK(cohens_kappa(a, a) == 1.0);

    // Confusion counts [[20,5],[10,15]]: po=0.7, pe=0.5, kappa=0.4.
    std::vector<std::string> ra, rb;
    auto fill = [&](const char* va, const char* vb, int n) {
        for (int i = 0; i < n; ++i) {
            ra.push_back(va);
            rb.push_back(vb);
        }
    };
    fill("pos", "pos", 20);
    fill("pos", "neg", 5);
    fill("neg", "pos", 10);
    fill("neg", "neg", 15);
    CHECK(cohens_kappa(ra, rb) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(cohens_kappa(rb, ra) == doctest::Approx(0.4).epsilon(1e-12));

    CHECK_THROWS_AS((void)cohens_kappa(ra, std::vector<std::string>{"x"}), ConfigError);
}

TEST_CASE("kappa of independent raters is near zero") {
    testutil::Rng rng(123456);
    const int n = 20000;
    std::vector<std::string> a, b;
    const std::vector<std::string> cats = {"1", "2", "3"};
    for (int i = 0; i < n; ++i) {
        a.push_back(rng.pick(cats));
        b.push_back(rng.pick(cats));
    }
    CHECK(std::abs(cohens_kappa(a, b)) < 0.03);
}

TEST_CASE("regularized incomplete beta endpoints") {
    CHECK(regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0);
    CHECK(regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0);
    // I_x(1,1) is the identity.
    for (double x : {0.1, 0.25, 0.5, 0.9})
        CHECK(regularized_incomplete_beta(1.0, 1.0, x) == doctest::Approx(x).epsilon(1e-12));
}
