#pragma once

// Closed-form limit laws for the duplication model: the power-law count
// prediction g(S), the Mittag-Leffler distribution of the scaled top-family
// size (density, CDF, moments, sampler), the one-sided positive stable
// sampler behind it, and the tail constants A_1, A_2.
//
// The Mittag-Leffler density is evaluated from its power series for small and
// moderate arguments. The series is alternating with growing intermediate
// terms, so the evaluator tracks the largest term and hands off to a
// saddle-point tail expansion once cancellation would erode double precision.
// The tail expansion is written for the stable law normalized by
// E[exp(-lambda X)] = exp(-lambda^alpha); in that normalization the exponent
// constant is (1-alpha) alpha^{alpha/(1-alpha)} with no cosine factor, and at
// alpha = 1/2 the expansion collapses to the exact closed form
// (1/sqrt(pi)) exp(-x^2/4). tail_constants() keeps the cosine-factored
// constants quoted for the asymptotic literature form; see the tests for the
// numerical relation between the two.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "yulefam/rng.hpp"
#include "yulefam/stats.hpp"

namespace yulefam {

inline void validate_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("alpha must be in (0,1)");
}

// g(S) = r Gamma((2-r)/(1-r)) N S^{-1/(1-r)}.
inline double g_of_s(double r, double n, double s) {
    if (!(r > 0.0 && r < 1.0)) throw std::domain_error("g_of_s: r must be in (0,1)");
    if (!(s >= 1.0)) throw std::domain_error("g_of_s: S must be >= 1");
    if (!(n >= 1.0)) throw std::domain_error("g_of_s: N must be >= 1");
    const double lg = std::lgamma((2.0 - r) / (1.0 - r));
    return r * n * std::exp(lg - std::log(s) / (1.0 - r));
}

// E[M^m] = Gamma(m+1)/Gamma(m alpha + 1) for the Mittag-Leffler law.
inline double ml_moment(double alpha, double m) {
    validate_alpha(alpha);
    if (!(m > 0.0)) throw std::domain_error("ml_moment: m must be > 0");
    return std::exp(std::lgamma(m + 1.0) - std::lgamma(m * alpha + 1.0));
}

// E[Z_k^m] = r Gamma(m+1) Gamma(k) / Gamma(m(1-r)+k), k >= 2.
inline double z_moment(double r, std::uint64_t k, double m) {
    if (!(r > 0.0 && r < 1.0)) throw std::domain_error("z_moment: r must be in (0,1)");
    if (k < 2) throw std::domain_error("z_moment: k must be >= 2");
    if (!(m > 0.0)) throw std::domain_error("z_moment: m must be > 0");
    const double kk = static_cast<double>(k);
    return r * std::exp(std::lgamma(m + 1.0) + std::lgamma(kk) -
                        std::lgamma(m * (1.0 - r) + kk));
}

struct TailConstants {
    double a1 = 0.0;
    double a2 = 0.0;
};

// Constants of the literature tail form, cosine factors included:
//   A1 = alpha^{1/(2(1-alpha))} (cos(pi alpha/2))^{-1/(2(1-alpha))} [2 pi (1-alpha)]^{-1/2}
//   A2 = (1-alpha) alpha^{alpha/(1-alpha)} (cos(pi alpha/2))^{-1/(1-alpha)}
inline TailConstants tail_constants(double alpha) {
    validate_alpha(alpha);
    const double c = std::cos(std::numbers::pi * alpha / 2.0);
    const double om = 1.0 - alpha;
    TailConstants t;
    t.a1 = std::pow(alpha, 1.0 / (2.0 * om)) * std::pow(c, -1.0 / (2.0 * om)) /
           std::sqrt(2.0 * std::numbers::pi * om);
    t.a2 = om * std::pow(alpha, alpha / om) * std::pow(c, -1.0 / om);
    return t;
}

// Tail constants in the exp(-lambda^alpha) normalization (no cosine factors);
// these drive the density's own asymptotic branch.
inline TailConstants laplace_tail_constants(double alpha) {
    validate_alpha(alpha);
    const double om = 1.0 - alpha;
    TailConstants t;
    t.a1 = std::pow(alpha, 1.0 / (2.0 * om)) / std::sqrt(2.0 * std::numbers::pi * om);
    t.a2 = om * std::pow(alpha, alpha / om);
    return t;
}

class MlEvaluationError : public std::runtime_error {
public:
    MlEvaluationError(double x, int terms)
        : std::runtime_error("ml_density: series cancellation defeated double precision at x = " +
                             std::to_string(x) + " after " + std::to_string(terms) + " terms"),
          x_(x),
          terms_(terms) {}
    double x() const noexcept { return x_; }
    int terms() const noexcept { return terms_; }

private:
    double x_;
    int terms_;
};

// Mittag-Leffler distribution with parameter alpha in (0,1): the law of
// X^{-alpha} for X one-sided stable with E[exp(-lambda X)] = exp(-lambda^alpha).
// For the duplication model, R_{1,N}/N^{1-r} converges to this law with
// alpha = 1 - r.
class MittagLeffler {
public:
    static constexpr int max_terms = 400;

    explicit MittagLeffler(double alpha) : alpha_(alpha) {
        validate_alpha(alpha);
        const auto lt = laplace_tail_constants(alpha);
        b1_ = lt.a1;
        b2_ = lt.a2;
        // Saddle-point correction coefficients; both vanish at alpha = 1/2,
        // where the expansion is exact.
        const double a = alpha;
        const double b = 2.0 - a, c = 3.0 - a, d = 4.0 - a, e = 5.0 - a;
        c1_ = b * (2.0 * a - 1.0) / (24.0 * a);
        c2_ = (b * c * d * (7.0 * b - e) / 48.0 + 35.0 * b * b * c * c / 384.0 -
               35.0 * b * b * b * c / 64.0 + 385.0 * b * b * b * b / 1152.0) /
              (a * a);
        log_coeff_.resize(max_terms + 1);
        sin_coeff_.resize(max_terms + 1);
        for (int k = 1; k <= max_terms; ++k) {
            log_coeff_[k] = std::lgamma(alpha * k + 1.0) - std::lgamma(k + 1.0);
            const double sgn = (k % 2 == 1) ? 1.0 : -1.0;
            sin_coeff_[k] = sgn * std::sin(std::numbers::pi * alpha * k);
        }
    }

    double alpha() const noexcept { return alpha_; }

    // Density of M at x > 0.
    double density(double x) const {
        if (!(x > 0.0)) throw std::domain_error("ml_density: x must be > 0");
        const double u = b2_ * std::pow(x, 1.0 / (1.0 - alpha_));
        if (u > series_cutoff_u) return density_asymptotic(x);
        const auto s = density_series(x);
        if (s.converged && s.max_abs_term <= cancellation_guard * std::fabs(s.value))
            return std::max(s.value, 0.0);
        if (u >= asymptotic_floor_u) return density_asymptotic(x);
        throw MlEvaluationError(x, s.terms);
    }

    // P(M <= x) by adaptive quadrature of the density; 1e-6 absolute accuracy.
    double cdf(double x) const {
        if (x < 0.0) throw std::domain_error("ml_cdf: x must be >= 0");
        if (x == 0.0) return 0.0;
        const double hi = std::min(x, upper_support());
        const double v = integrate([this](double t) { return density(t); }, 0.0, hi, 1e-9);
        return std::clamp(v, 0.0, 1.0);
    }

    // CDF at each of an ascending sequence of points, integrating segment by
    // segment so large sorted batches cost one sweep.
    std::vector<double> cdf_sorted(const std::vector<double>& ascending) const {
        std::vector<double> out(ascending.size());
        double prev = 0.0;
        double acc = 0.0;
        const double hi = upper_support();
        for (std::size_t i = 0; i < ascending.size(); ++i) {
            const double x = std::min(ascending[i], hi);
            if (x < prev) throw std::invalid_argument("cdf_sorted: points must ascend");
            if (x > prev) {
                acc += integrate([this](double t) { return density(t); }, prev, x, 1e-10);
                prev = x;
            }
            out[i] = std::clamp(acc, 0.0, 1.0);
        }
        return out;
    }

    // Point beyond which the remaining mass is below ~1e-18.
    double upper_support() const { return std::pow(46.0 / b2_, 1.0 - alpha_); }

    struct SeriesResult {
        double value = 0.0;
        double max_abs_term = 0.0;
        bool converged = false;
        int terms = 0;
    };

    // Power series: (1/(pi alpha)) sum_{k>=1} (-1)^{k+1}/k! sin(pi alpha k)
    // Gamma(alpha k + 1) x^{k-1}. Kahan-compensated; stops after two
    // consecutive terms below 1e-15 of the partial sum.
    SeriesResult density_series(double x) const {
        const double lx = std::log(x);
        SeriesResult res;
        double sum = 0.0, comp = 0.0;
        int small_streak = 0;
        for (int k = 1; k <= max_terms; ++k) {
            const double ln_mag = log_coeff_[k] + (k - 1) * lx;
            const double term = sin_coeff_[k] * std::exp(ln_mag);
            const double t = sum + term;
            if (std::fabs(sum) >= std::fabs(term))
                comp += (sum - t) + term;
            else
                comp += (term - t) + sum;
            sum = t;
            res.max_abs_term = std::max(res.max_abs_term, std::fabs(term));
            res.terms = k;
            if (std::fabs(term) < 1e-15 * std::fabs(sum + comp)) {
                if (++small_streak >= 2) {
                    res.converged = true;
                    break;
                }
            } else {
                small_streak = 0;
            }
        }
        res.value = (sum + comp) / (std::numbers::pi * alpha_);
        return res;
    }

    // Saddle-point tail with two correction orders:
    //   (B1/alpha) x^{1/(2(1-alpha)) - 1} exp(-u) [1 + c1/u + c2/u^2],
    // u = B2 x^{1/(1-alpha)}.
    double density_asymptotic(double x) const {
        const double om = 1.0 - alpha_;
        const double u = b2_ * std::pow(x, 1.0 / om);
        const double corr = 1.0 + c1_ / u + c2_ / (u * u);
        return b1_ / alpha_ * std::pow(x, 1.0 / (2.0 * om) - 1.0) * std::exp(-u) * corr;
    }

    // Draw from the law via the stable representation M = X^{-alpha}.
    double sample(Rng& rng) const;

private:
    // The series keeps ~1e-6 relative accuracy while max|term| <= 1e8 |sum|;
    // past that the tail expansion is the more accurate evaluator (its
    // relative error is below 5e-5 whenever u >= 8 for alpha in [0.15, 0.95]).
    static constexpr double cancellation_guard = 1e8;
    static constexpr double series_cutoff_u = 30.0;
    static constexpr double asymptotic_floor_u = 8.0;

    double alpha_;
    double b1_, b2_;
    double c1_, c2_;
    std::vector<double> log_coeff_;
    std::vector<double> sin_coeff_;
};

// One-sided positive stable variate with E[exp(-lambda X)] = exp(-lambda^alpha),
// by Kanter's representation: X = (A(U)/E)^{(1-alpha)/alpha} with U uniform on
// (0,pi), E unit exponential, and
// A(u) = [sin(alpha u)/sin u]^{alpha/(1-alpha)} sin((1-alpha) u)/sin u.
inline double sample_stable(double alpha, Rng& rng) {
    validate_alpha(alpha);
    const double u = std::numbers::pi * rng.uniform_open();
    const double e = rng.exponential();
    const double su = std::sin(u);
    const double a = std::pow(std::sin(alpha * u) / su, alpha / (1.0 - alpha)) *
                     std::sin((1.0 - alpha) * u) / su;
    return std::pow(a / e, (1.0 - alpha) / alpha);
}

inline double sample_ml(double alpha, Rng& rng) {
    return std::pow(sample_stable(alpha, rng), -alpha);
}

inline double MittagLeffler::sample(Rng& rng) const { return sample_ml(alpha_, rng); }

// Seed-taking conveniences matching the operation signatures.
inline double sample_stable(double alpha, std::uint64_t seed) {
    Rng rng(seed);
    return sample_stable(alpha, rng);
}
inline double sample_ml(double alpha, std::uint64_t seed) {
    Rng rng(seed);
    return sample_ml(alpha, rng);
}

inline double ml_density(double alpha, double x) { return MittagLeffler(alpha).density(x); }
inline double ml_cdf(double alpha, double x) { return MittagLeffler(alpha).cdf(x); }

}  // namespace yulefam
