#pragma once

// Direct sampler and exact-expectation evaluators for the stick-breaking
// distribution Q_{r,N}: W_1 = 1 and, independently for k >= 2,
// W_k = Bernoulli(r) * Beta(1, k-1). The induced simplex point has
// p_1 = Y_1 and p_k = W_k Y_k with Y_k the suffix product of (1 - W_j).

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "yulefam/rng.hpp"

namespace yulefam {

struct StickSequence {
    double r = 0.0;
    std::uint64_t n = 0;
    std::vector<double> w;  // w[k-1] = W_k; W_1 = 1
    std::vector<double> y;  // y[k-1] = Y_k; Y_N = 1
    std::vector<double> p;  // simplex point; sums to 1 by telescoping
};

inline void validate_qrn_params(double r, std::uint64_t n) {
    if (!(r > 0.0 && r < 1.0)) throw std::domain_error("qrn: r must be in (0,1)");
    if (n < 1) throw std::domain_error("qrn: N must be >= 1");
}

inline StickSequence sample_qrn(double r, std::uint64_t n, std::uint64_t seed) {
    validate_qrn_params(r, n);
    Rng rng(seed);
    StickSequence s;
    s.r = r;
    s.n = n;
    s.w.assign(n, 0.0);
    s.w[0] = 1.0;
    for (std::uint64_t k = 2; k <= n; ++k)
        if (rng.bernoulli(r)) s.w[k - 1] = rng.beta_1_b(static_cast<double>(k - 1));

    s.y.assign(n, 1.0);
    for (std::uint64_t k = n - 1; k >= 1; --k) s.y[k - 1] = s.y[k] * (1.0 - s.w[k]);

    s.p.assign(n, 0.0);
    s.p[0] = s.y[0];
    for (std::uint64_t k = 2; k <= n; ++k) s.p[k - 1] = s.w[k - 1] * s.y[k - 1];
    return s;
}

// Sparse alternative for large N: only founded indices are stored. The draw
// sequence matches sample_qrn, so the same seed yields the same sticks.
struct SparseSticks {
    double r = 0.0;
    std::uint64_t n = 0;
    std::vector<std::uint64_t> index;  // k with W_k > 0, ascending, k >= 2
    std::vector<double> w;

    // Y_k as a product over founded j > k.
    double y_at(std::uint64_t k) const {
        double y = 1.0;
        for (std::size_t i = index.size(); i-- > 0 && index[i] > k;) y *= 1.0 - w[i];
        return y;
    }
};

inline SparseSticks sample_qrn_sparse(double r, std::uint64_t n, std::uint64_t seed) {
    validate_qrn_params(r, n);
    Rng rng(seed);
    SparseSticks s;
    s.r = r;
    s.n = n;
    for (std::uint64_t k = 2; k <= n; ++k)
        if (rng.bernoulli(r)) {
            s.index.push_back(k);
            s.w.push_back(rng.beta_1_b(static_cast<double>(k - 1)));
        }
    return s;
}

// E[Y_k] = E[X_k] = prod_{j=k+1}^{N} (1 - r/j); equals 1 at k = N.
inline double expected_y(double r, std::uint64_t n, std::uint64_t k) {
    if (k < 1 || k > n) throw std::domain_error("expected_y: need 1 <= k <= N");
    double prod = 1.0;
    for (std::uint64_t j = k + 1; j <= n; ++j) prod *= 1.0 - r / static_cast<double>(j);
    return prod;
}

// All of E[Y_k] for k = 1..N in one backward pass.
inline std::vector<double> expected_y_all(double r, std::uint64_t n) {
    std::vector<double> e(n, 1.0);
    for (std::uint64_t k = n - 1; k >= 1; --k)
        e[k - 1] = e[k] * (1.0 - r / static_cast<double>(k + 1));
    return e;
}

// P(W_k >= a) = r (1-a)^{k-1} for k >= 2, 0 < a < 1.
inline double stick_tail_prob(double r, std::uint64_t k, double a) {
    if (k < 2) throw std::domain_error("stick_tail_prob: k must be >= 2");
    if (!(a > 0.0 && a < 1.0)) throw std::domain_error("stick_tail_prob: a must be in (0,1)");
    return r * std::pow(1.0 - a, static_cast<double>(k - 1));
}

}  // namespace yulefam
