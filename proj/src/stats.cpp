#include "cmg/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <boost/math/distributions/students_t.hpp>

namespace cmg {

namespace {

void require_pairs(std::span<const double> x, std::span<const double> y, std::size_t min_n, const char* op) {
    if (x.size() != y.size()) {
        throw DegenerateSeriesError(op, "length mismatch " + std::to_string(x.size()) + " vs " +
                                            std::to_string(y.size()));
    }
    if (x.size() < min_n) {
        throw DegenerateSeriesError(op, "need at least " + std::to_string(min_n) + " samples, got " +
                                            std::to_string(x.size()));
    }
}

struct Moments {
    double mean_x, mean_y, sxx, syy, sxy;
};

// Two-pass centered sums.
Moments moments(std::span<const double> x, std::span<const double> y) {
    Moments m{mean(x), mean(y), 0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double dx = x[k] - m.mean_x;
        const double dy = y[k] - m.mean_y;
        m.sxx += dx * dx;
        m.syy += dy * dy;
        m.sxy += dx * dy;
    }
    return m;
}

std::vector<double> average_ranks(std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

double student_two_sided_p(double t, double dof) {
    if (!std::isfinite(t)) return 0.0;
    boost::math::students_t dist(dof);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

}  // namespace

double mean(std::span<const double> x) {
    if (x.empty()) return 0.0;
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
    if (x.size() < 2) return 0.0;
    const double m = mean(x);
    double ss = 0.0;
    for (const double v : x) ss += (v - m) * (v - m);
    return ss / static_cast<double>(x.size() - 1);
}

double stddev(std::span<const double> x) { return std::sqrt(variance(x)); }

double pearson(std::span<const double> x, std::span<const double> y) {
    require_pairs(x, y, 2, "pearson");
    const Moments m = moments(x, y);
    if (m.sxx == 0.0 || m.syy == 0.0) throw DegenerateSeriesError("pearson", "zero variance");
    const double r = m.sxy / (std::sqrt(m.sxx) * std::sqrt(m.syy));
    return std::clamp(r, -1.0, 1.0);
}

double spearman(std::span<const double> x, std::span<const double> y) {
    require_pairs(x, y, 2, "spearman");
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    return pearson(rx, ry);
}

double normal_two_sided_p(double z) {
    return std::erfc(std::abs(z) / std::sqrt(2.0));
}

RegressionReport ols(std::span<const double> x, std::span<const double> y) {
    require_pairs(x, y, 3, "ols");
    const Moments m = moments(x, y);
    if (m.sxx == 0.0) throw DegenerateSeriesError("ols", "regressor has zero variance");
    RegressionReport report;
    report.n = x.size();
    report.beta1 = m.sxy / m.sxx;
    report.beta0 = m.mean_y - report.beta1 * m.mean_x;
    double ssr = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double e = y[k] - report.beta0 - report.beta1 * x[k];
        ssr += e * e;
    }
    report.r_squared = m.syy > 0.0 ? std::clamp(1.0 - ssr / m.syy, 0.0, 1.0) : 1.0;
    const double sigma2 = ssr / static_cast<double>(report.n - 2);
    const double se = std::sqrt(sigma2 / m.sxx);
    if (se == 0.0) {
        report.p_value = report.beta1 == 0.0 ? 1.0 : 0.0;
    } else {
        report.p_value = normal_two_sided_p(report.beta1 / se);
    }
    return report;
}

Ar1Report ar1(std::span<const double> r) {
    if (r.size() < 3) throw DegenerateSeriesError("ar1", "need at least 3 observations");
    const auto reg = ols(r.first(r.size() - 1), r.subspan(1));
    return Ar1Report{reg.beta1, reg.n};
}

Ar1Report ar1_pooled(const std::vector<std::vector<double>>& series) {
    std::vector<double> lagged;
    std::vector<double> current;
    for (const auto& s : series) {
        for (std::size_t k = 1; k < s.size(); ++k) {
            lagged.push_back(s[k - 1]);
            current.push_back(s[k]);
        }
    }
    if (lagged.size() < 2) throw DegenerateSeriesError("ar1", "need at least 3 observations");
    const auto reg = ols(lagged, current);
    return Ar1Report{reg.beta1, reg.n};
}

TestResult welch_t_test(std::span<const double> x, std::span<const double> y) {
    if (x.size() < 2 || y.size() < 2) throw DegenerateSeriesError("welch_t_test", "need two samples per group");
    const double vx = variance(x) / static_cast<double>(x.size());
    const double vy = variance(y) / static_cast<double>(y.size());
    const double diff = mean(x) - mean(y);
    if (vx + vy == 0.0) return {diff == 0.0 ? 0.0 : INFINITY, diff == 0.0 ? 1.0 : 0.0};
    const double t = diff / std::sqrt(vx + vy);
    const double dof = (vx + vy) * (vx + vy) /
                       (vx * vx / static_cast<double>(x.size() - 1) + vy * vy / static_cast<double>(y.size() - 1));
    return {t, student_two_sided_p(t, dof)};
}

TestResult paired_t_test(std::span<const double> x, std::span<const double> y) {
    require_pairs(x, y, 2, "paired_t_test");
    std::vector<double> d(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) d[k] = x[k] - y[k];
    const double md = mean(d);
    const double se = stddev(d) / std::sqrt(static_cast<double>(d.size()));
    if (se == 0.0) return {md == 0.0 ? 0.0 : INFINITY, md == 0.0 ? 1.0 : 0.0};
    const double t = md / se;
    return {t, student_two_sided_p(t, static_cast<double>(d.size() - 1))};
}

}  // namespace cmg
