#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cmg/stats.hpp"

using namespace cmg;

namespace {

std::vector<double> normal_fixture(std::uint64_t seed, std::size_t n) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> z;
    std::vector<double> out(n);
    for (auto& v : out) v = z(gen);
    return out;
}

}  // namespace

TEST_CASE("pearson examples") {
    const std::vector<double> x{1, 2, 3, 4};
    const std::vector<double> y{2, 1, 4, 3};
    std::vector<double> neg(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) neg[k] = -x[k];
    CHECK(pearson(x, x) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(pearson(x, neg) == doctest::Approx(-1.0).epsilon(1e-15));
    // Centered products sum to 4 * 0.75 = 3 and both sums of squares are 5.
    CHECK(pearson(x, y) == doctest::Approx(0.6).epsilon(1e-14));
}

TEST_CASE("pearson rejects degenerate input") {
    const std::vector<double> c{2, 2, 2};
    const std::vector<double> x{1, 2, 3};
    CHECK_THROWS_AS(pearson(c, x), DegenerateSeriesError);
    CHECK_THROWS_AS(pearson(x, std::vector<double>{1, 2}), Error);
    CHECK_THROWS_AS(pearson(std::vector<double>{1}, std::vector<double>{1}), Error);
}

TEST_CASE("pearson affine invariance") {
    const auto x = normal_fixture(1, 200);
    const auto y = normal_fixture(2, 200);
    const double base = pearson(x, y);
    std::vector<double> scaled(x.size());
    std::vector<double> flipped(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        scaled[k] = 3.7 * x[k] - 11.0;
        flipped[k] = -0.2 * x[k] + 4.0;
    }
    CHECK(pearson(scaled, y) == doctest::Approx(base).epsilon(1e-12));
    CHECK(pearson(flipped, y) == doctest::Approx(-base).epsilon(1e-12));
    CHECK(pearson(y, scaled) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("ols on exact linear data") {
    std::vector<double> x;
    std::vector<double> y;
    for (int k = 0; k < 20; ++k) {
        x.push_back(0.5 * k - 3.0);
        y.push_back(2.0 * x.back() + 1.0);
    }
    const auto r = ols(x, y);
    CHECK(r.beta1 == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.beta0 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.p_value < 1e-12);
    CHECK(r.n == 20);
}

TEST_CASE("ols on independent noise finds no slope") {
    const auto x = normal_fixture(41, 100);
    const auto y = normal_fixture(42, 100);
    const auto r = ols(x, y);
    CHECK(std::abs(r.beta1) < 0.25);
    CHECK(r.p_value > 0.05);
}

TEST_CASE("ols slope rescaled by the deviation ratio is pearson") {
    const auto x = normal_fixture(5, 500);
    auto y = normal_fixture(6, 500);
    for (std::size_t k = 0; k < y.size(); ++k) y[k] += 0.7 * x[k];
    const auto r = ols(x, y);
    CHECK(std::abs(r.beta1 * stddev(x) / stddev(y) - pearson(x, y)) < 1e-9);
    CHECK(r.r_squared == doctest::Approx(pearson(x, y) * pearson(x, y)).epsilon(1e-12));
}

TEST_CASE("ols matches a reference least-squares fit") {
    // scipy.stats.linregress on the same data.
    const std::vector<double> x{0.3, 1.1, 1.9, 3.2, 4.0, 5.5};
    const std::vector<double> y{1.0, 2.9, 4.2, 7.1, 8.8, 12.0};
    const auto r = ols(x, y);
    CHECK(r.beta1 == doctest::Approx(2.1026690391459075).epsilon(1e-12));
    CHECK(r.beta0 == doctest::Approx(0.3928825622775802).epsilon(1e-12));
    CHECK(r.r_squared == doctest::Approx(0.9990848426050336).epsilon(1e-12));
}

TEST_CASE("ols rejects constant regressors and short input") {
    CHECK_THROWS_AS(ols(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}), DegenerateSeriesError);
    CHECK_THROWS_AS(ols(std::vector<double>{1, 2}, std::vector<double>{1, 2}), Error);
}

TEST_CASE("ar1 examples") {
    std::vector<double> trend;
    for (int k = 0; k < 50; ++k) trend.push_back(0.01 * k + 0.2);
    CHECK(ar1(trend).phi == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ar1(trend).n == 49);

    std::vector<double> alternating;
    for (int k = 0; k < 50; ++k) alternating.push_back(k % 2 == 0 ? 0.003 : -0.003);
    CHECK(ar1(alternating).phi == doctest::Approx(-1.0).epsilon(1e-12));

    CHECK(std::abs(ar1(normal_fixture(77, 10000)).phi) < 0.05);
}

TEST_CASE("ar1 agrees with the lagged correlation") {
    auto r = normal_fixture(8, 1000);
    for (std::size_t k = 1; k < r.size(); ++k) r[k] += 0.4 * r[k - 1];
    const std::span<const double> all(r);
    const auto now = all.subspan(1);
    const auto lag = all.first(all.size() - 1);
    const double expected = pearson(lag, now) * stddev(now) / stddev(lag);
    CHECK(ar1(r).phi == doctest::Approx(expected).epsilon(1e-12));
    CHECK(ar1(r).phi > 0.3);
}

TEST_CASE("pooled ar1 never pairs across series") {
    const std::vector<double> up{1.0, 2.0, 3.0};
    const std::vector<double> down{-5.0, -6.0, -7.0};
    // Pairs (1,2) (2,3) (-5,-6) (-6,-7): centered sums give Sxy = 64, Sxx = 50.
    // Including the straddling pair (3,-5) would give a different slope.
    CHECK(ar1_pooled({up, down}).phi == doctest::Approx(64.0 / 50.0).epsilon(1e-12));
    CHECK(ar1_pooled({up, down}).n == 4);
}

TEST_CASE("spearman uses average ranks") {
    // scipy.stats.spearmanr on the same data.
    const std::vector<double> x{1, 2, 2, 3, 5};
    const std::vector<double> y{2, 1, 4, 4, 9};
    CHECK(spearman(x, y) == doctest::Approx(0.7631578947368421).epsilon(1e-12));
    const std::vector<double> mono{0.1, 0.4, 0.5, 3.0};
    const std::vector<double> cube{0.001, 0.064, 0.125, 27.0};
    CHECK(spearman(mono, cube) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("t tests match reference values") {
    // scipy.stats.ttest_ind(equal_var=False) and ttest_rel on the same data.
    const std::vector<double> x{1.2, 2.3, 3.1, 4.8, 5.0, 6.7};
    const std::vector<double> y{0.5, 1.1, 1.9, 2.2, 2.8};
    const auto w = welch_t_test(x, y);
    CHECK(w.statistic == doctest::Approx(2.3418960187476427).epsilon(1e-10));
    CHECK(w.p_value == doctest::Approx(0.050723940121485615).epsilon(1e-8));

    const std::vector<double> a{2.1, 3.4, 1.9, 5.6, 4.2, 3.3, 2.8};
    const std::vector<double> b{1.8, 3.9, 1.1, 4.9, 4.0, 2.7, 2.9};
    const auto p = paired_t_test(a, b);
    CHECK(p.statistic == doctest::Approx(1.618668383655077).epsilon(1e-10));
    CHECK(p.p_value == doctest::Approx(0.15664594615765945).epsilon(1e-8));
}

TEST_CASE("normal two-sided p values") {
    CHECK(normal_two_sided_p(0.0) == doctest::Approx(1.0));
    CHECK(normal_two_sided_p(1.959963984540054) == doctest::Approx(0.05).epsilon(1e-9));
    CHECK(normal_two_sided_p(-1.959963984540054) == doctest::Approx(0.05).epsilon(1e-9));
}

TEST_CASE("mean and variance") {
    const std::vector<double> x{1, 2, 3, 4};
    CHECK(mean(x) == 2.5);
    CHECK(variance(x) == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
    CHECK(stddev(x) == doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-15));
}
