#include "lava/sim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "lava/core/types.hpp"

namespace lava {

std::vector<double> average_ranks(std::span<const double> xs) {
    std::vector<std::size_t> idx(xs.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> ranks(xs.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && xs[idx[j + 1]] == xs[idx[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t t = i; t <= j; ++t) ranks[idx[t]] = r;
        i = j + 1;
    }
    return ranks;
}

namespace {

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

double two_sided_p(double t, double dof) {
    if (!std::isfinite(t)) return 0.0;
    boost::math::students_t dist(dof);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

}  // namespace

double spearman(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw InvalidArgument("spearman inputs differ in length");
    if (xs.size() < 2) return 0.0;
    return pearson(average_ranks(xs), average_ranks(ys));
}

Regression linear_regression(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw InvalidArgument("regression inputs differ in length");
    if (xs.size() < 3) throw InvalidArgument("regression needs at least 3 points");
    Regression r;
    r.n = xs.size();
    const double n = static_cast<double>(r.n);
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < r.n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) throw InvalidArgument("regression needs non-constant x");
    r.slope = sxy / sxx;
    r.intercept = my - r.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < r.n; ++i) {
        const double e = ys[i] - (r.intercept + r.slope * xs[i]);
        sse += e * e;
    }
    r.slope_stderr = std::sqrt(sse / (n - 2.0) / sxx);
    if (r.slope_stderr > 0.0) {
        r.p_value = two_sided_p(r.slope / r.slope_stderr, n - 2.0);
    } else {
        r.p_value = r.slope != 0.0 ? 0.0 : 1.0;
    }
    return r;
}

MeanTest one_sample_t(std::span<const double> xs) {
    MeanTest t;
    if (xs.empty()) return t;
    const double n = static_cast<double>(xs.size());
    t.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    if (xs.size() < 2) return t;
    double ss = 0.0;
    for (double x : xs) ss += (x - t.mean) * (x - t.mean);
    t.standard_error = std::sqrt(ss / (n - 1.0) / n);
    if (t.standard_error > 0.0) {
        t.p_value = two_sided_p(t.mean / t.standard_error, n - 1.0);
    } else {
        t.p_value = t.mean != 0.0 ? 0.0 : 1.0;
    }
    return t;
}

}  // namespace lava
