#pragma once

// Small statistics toolkit: running moments, OLS on transformed data,
// Kolmogorov-Smirnov against an arbitrary reference CDF, a two-sample
// chi-square, and an adaptive Gauss-Kronrod integrator.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace yulefam {

// Welford accumulator.
class RunningStat {
public:
    void add(double x) noexcept {
        ++n_;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d * (x - mean_);
    }

    std::size_t count() const noexcept { return n_; }
    double mean() const noexcept { return mean_; }

    double variance() const noexcept {
        return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
    }
    double sd() const noexcept { return std::sqrt(variance()); }
    double stderr_of_mean() const noexcept {
        return n_ > 1 ? sd() / std::sqrt(static_cast<double>(n_)) : 0.0;
    }

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    std::size_t points = 0;
};

// Ordinary least squares y = a + b x. slope_stderr is the usual
// sqrt(s^2 / Sxx) with s^2 the residual variance (needs >= 3 points).
inline LineFit ols_line(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("ols_line: need >= 2 matched points");
    const auto n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) { mx += xs[i]; my += ys[i]; }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx <= 0.0) throw std::invalid_argument("ols_line: degenerate x values");
    LineFit fit;
    fit.points = xs.size();
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (xs.size() > 2) {
        double rss = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double r = ys[i] - fit.intercept - fit.slope * xs[i];
            rss += r * r;
        }
        fit.slope_stderr = std::sqrt(rss / (n - 2.0) / sxx);
    }
    return fit;
}

// Kolmogorov's asymptotic survival function Q(lambda) = 2 sum (-1)^{j-1} exp(-2 j^2 lambda^2).
// The alternating series converges slowly for small lambda, where the dual
// theta-series for the CDF takes over.
inline double kolmogorov_q(double lambda) noexcept {
    if (lambda <= 0.0) return 1.0;
    if (lambda < 0.755) {
        const double f = std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
        double cdf = 0.0;
        for (int j = 1; j <= 19; j += 2) {
            const double term = std::exp(-f * j * j);
            cdf += term;
            if (term < 1e-18 * cdf) break;
        }
        cdf *= std::sqrt(2.0 * std::numbers::pi) / lambda;
        return std::clamp(1.0 - cdf, 0.0, 1.0);
    }
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 200; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += sign * term;
        if (term < 1e-16 * std::max(sum, 1e-300)) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

struct KsResult {
    double d = 0.0;
    double p_value = 1.0;
};

// One-sample KS of `samples` against a monotone reference CDF. The p-value
// uses Stephens' effective sample size with the asymptotic Kolmogorov law.
inline KsResult ks_statistic(std::vector<double> samples,
                             const std::function<double(double)>& reference_cdf) {
    if (samples.size() < 10) throw std::invalid_argument("ks_statistic: need >= 10 samples");
    std::sort(samples.begin(), samples.end());
    const auto n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = reference_cdf(samples[i]);
        d = std::max(d, f - static_cast<double>(i) / n);
        d = std::max(d, static_cast<double>(i + 1) / n - f);
    }
    const double sn = std::sqrt(n);
    return {d, kolmogorov_q((sn + 0.12 + 0.11 / sn) * d)};
}

// Same statistic when reference CDF values at the sorted sample points are
// already available (avoids re-evaluating an expensive CDF).
inline KsResult ks_from_sorted(std::span<const double> cdf_at_sorted_samples) {
    const auto n = static_cast<double>(cdf_at_sorted_samples.size());
    if (cdf_at_sorted_samples.size() < 10)
        throw std::invalid_argument("ks_from_sorted: need >= 10 samples");
    double d = 0.0;
    for (std::size_t i = 0; i < cdf_at_sorted_samples.size(); ++i) {
        const double f = cdf_at_sorted_samples[i];
        d = std::max(d, f - static_cast<double>(i) / n);
        d = std::max(d, static_cast<double>(i + 1) / n - f);
    }
    const double sn = std::sqrt(n);
    return {d, kolmogorov_q((sn + 0.12 + 0.11 / sn) * d)};
}

// Regularized incomplete gamma Q(a,x) = Gamma(a,x)/Gamma(a); series for
// x < a+1, continued fraction otherwise.
inline double gamma_q(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw std::domain_error("gamma_q: a > 0, x >= 0 required");
    if (x == 0.0) return 1.0;
    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        double ap = a;
        double sum = 1.0 / a;
        double del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
        }
        return 1.0 - sum * std::exp(-x + a * std::log(x) - lg);
    }
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - lg) * h;
}

struct Chi2Result {
    double statistic = 0.0;
    std::size_t dof = 0;
    double p_value = 1.0;
};

// Two-sample chi-square on matched histogram bins; bins where both samples
// are empty are dropped.
inline Chi2Result chi2_two_sample(std::span<const double> counts1,
                                  std::span<const double> counts2) {
    if (counts1.size() != counts2.size())
        throw std::invalid_argument("chi2_two_sample: bin count mismatch");
    double n1 = 0.0, n2 = 0.0;
    for (double c : counts1) n1 += c;
    for (double c : counts2) n2 += c;
    if (n1 <= 0.0 || n2 <= 0.0) throw std::invalid_argument("chi2_two_sample: empty sample");
    const double k1 = std::sqrt(n2 / n1);
    const double k2 = std::sqrt(n1 / n2);
    Chi2Result res;
    for (std::size_t i = 0; i < counts1.size(); ++i) {
        const double tot = counts1[i] + counts2[i];
        if (tot <= 0.0) continue;
        const double d = k1 * counts1[i] - k2 * counts2[i];
        res.statistic += d * d / tot;
        ++res.dof;
    }
    if (res.dof < 2) throw std::invalid_argument("chi2_two_sample: fewer than 2 occupied bins");
    --res.dof;
    res.p_value = gamma_q(0.5 * static_cast<double>(res.dof), 0.5 * res.statistic);
    return res;
}

namespace detail {

// Gauss-Kronrod 7-15 nodes/weights on [-1,1].
inline constexpr double gk_nodes[8] = {
    0.0,
    0.2077849550078984676006894037732449,
    0.4058451513773971669066064120769615,
    0.5860872354676911302941448382587296,
    0.7415311855993944398638647732807884,
    0.8648644233597690727897127886409262,
    0.9491079123427585245261896840478513,
    0.9914553711208126392068546975263285};
inline constexpr double gk_wk[8] = {
    0.2094821410847278280129991748917143,
    0.2044329400752988924141619992346491,
    0.1903505780647854099132564024210137,
    0.1690047266392679028265834265985503,
    0.1406532597155259187451895905102379,
    0.1047900103222501838398763225415180,
    0.0630920926299785532907006631892042,
    0.0229353220105292249637320080589695};
inline constexpr double gk_wg[4] = {
    0.4179591836734693877551020408163265,
    0.3818300505051189449503697754889751,
    0.2797053914892766679014677714237796,
    0.1294849661688696932706114326790820};

struct GkEstimate {
    double integral;
    double error;
};

template <typename F>
GkEstimate gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = gk_wk[0] * fc;
    double resg = gk_wg[0] * fc;
    for (int i = 1; i < 8; ++i) {
        const double x = h * gk_nodes[i];
        const double f1 = f(c - x);
        const double f2 = f(c + x);
        resk += gk_wk[i] * (f1 + f2);
        if (i % 2 == 0) resg += gk_wg[i / 2] * (f1 + f2);
    }
    return {resk * h, std::fabs((resk - resg) * h)};
}

template <typename F>
double integrate_rec(const F& f, double a, double b, double tol, int depth) {
    const auto est = gk15(f, a, b);
    if (est.error <= tol || depth >= 48) {
        if (depth >= 48 && est.error > 64.0 * tol)
            throw std::runtime_error("integrate: quadrature failed to converge");
        return est.integral;
    }
    const double m = 0.5 * (a + b);
    return integrate_rec(f, a, m, 0.5 * tol, depth + 1) +
           integrate_rec(f, m, b, 0.5 * tol, depth + 1);
}

}  // namespace detail

// Adaptive Gauss-Kronrod quadrature with an absolute tolerance.
template <typename F>
double integrate(const F& f, double a, double b, double tol = 1e-9) {
    if (!(b >= a)) throw std::invalid_argument("integrate: b < a");
    if (a == b) return 0.0;
    return detail::integrate_rec(f, a, b, tol, 0);
}

}  // namespace yulefam
