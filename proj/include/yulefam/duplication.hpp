#pragma once

// Forward simulation of the duplication model: a growing population in which
// each newcomer founds a new family with probability r and otherwise copies
// the family of an individual picked uniformly among those already present.
// All individuals give birth at equal rate, so the embedded discrete chain
// simulated here has exactly the law of the population when it reaches size N;
// no clocks are needed.
//
// Two simulators are provided. simulate_duplication is the plain O(N) chain.
// simulate_coupled realizes the latent sticks W_k on the same probability
// space: founders draw W_k ~ Beta(1, k-1) and every non-founder descends
// through the founded labels from the highest down, settling on label k with
// probability W_k and on label 1 if every coin fails. The census marginal is
// identical to the plain simulator's, and the construction makes the
// cumulative fractions X_k directly comparable with the suffix products Y_k.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "yulefam/rng.hpp"

namespace yulefam {

struct ModelParams {
    double r = 0.5;          // probability that a birth founds a new family
    std::uint64_t n = 1;     // final population size N

    void validate_plain() const {
        if (!(r >= 0.0 && r <= 1.0)) throw std::domain_error("ModelParams: r must be in [0,1]");
        if (n < 1) throw std::domain_error("ModelParams: n must be >= 1");
    }
    void validate_coupled() const {
        if (!(r > 0.0 && r < 1.0))
            throw std::domain_error("simulate_coupled: r must be strictly inside (0,1)");
        if (n < 1) throw std::domain_error("ModelParams: n must be >= 1");
    }
};

// Family labels per birth order. Individual 1 has label 1; an individual born
// at position k that founds a family gets label k. labels are stored
// 0-indexed: label_of(n) is the label of the n-th individual born (n >= 1).
struct TypeAssignment {
    std::uint64_t n = 0;
    std::vector<std::uint32_t> labels;  // size n, values in 1..n

    std::uint32_t label_of(std::uint64_t individual) const { return labels[individual - 1]; }

    static TypeAssignment from_labels(std::vector<std::uint32_t> ls) {
        TypeAssignment t;
        t.n = ls.size();
        t.labels = std::move(ls);
        for (std::uint64_t i = 1; i <= t.n; ++i)
            if (t.labels[i - 1] < 1 || t.labels[i - 1] > i)
                throw std::domain_error("TypeAssignment: labels[n] must lie in 1..n");
        return t;
    }
};

// Family sizes R_k plus the cumulative fractions X_k = (sum_{j<=k} R_j)/N.
struct FamilyCensus {
    std::uint64_t n = 0;
    std::vector<std::uint32_t> size_by_label;  // index 0 unused; size n+1

    std::uint32_t size_of(std::uint32_t label) const { return size_by_label[label]; }

    std::uint64_t family_count() const {
        std::uint64_t c = 0;
        for (std::uint64_t k = 1; k <= n; ++k) c += size_by_label[k] > 0;
        return c;
    }

    // F_{S,N}: number of families of size at least S.
    std::uint64_t tail_count(std::uint64_t s) const {
        if (s < 1) throw std::domain_error("tail_count: S must be >= 1");
        std::uint64_t c = 0;
        for (std::uint64_t k = 1; k <= n; ++k) c += size_by_label[k] >= s;
        return c;
    }

    // X_k for k = 1..N (labels never founded contribute 0).
    std::vector<double> cumulative() const {
        std::vector<double> x(n);
        std::uint64_t run = 0;
        for (std::uint64_t k = 1; k <= n; ++k) {
            run += size_by_label[k];
            x[k - 1] = static_cast<double>(run) / static_cast<double>(n);
        }
        return x;
    }

    // Histogram of family sizes (index = size, 0..n); useful for tail grids.
    std::vector<std::uint32_t> size_histogram() const {
        std::vector<std::uint32_t> h(n + 1, 0);
        for (std::uint64_t k = 1; k <= n; ++k)
            if (size_by_label[k] > 0) ++h[size_by_label[k]];
        return h;
    }
};

// Core chain, writing into caller-provided storage so replicate loops can
// reuse one buffer.
inline void simulate_duplication_into(const ModelParams& params, std::uint64_t seed,
                                      std::vector<std::uint32_t>& labels) {
    params.validate_plain();
    Rng rng(seed);
    labels.resize(params.n);
    labels[0] = 1;
    for (std::uint64_t n = 2; n <= params.n; ++n) {
        if (rng.bernoulli(params.r))
            labels[n - 1] = static_cast<std::uint32_t>(n);
        else
            labels[n - 1] = labels[rng.below(n - 1)];
    }
}

inline TypeAssignment simulate_duplication(const ModelParams& params, std::uint64_t seed) {
    TypeAssignment out;
    out.n = params.n;
    simulate_duplication_into(params, seed, out.labels);
    return out;
}

inline FamilyCensus census(const TypeAssignment& assignment) {
    FamilyCensus c;
    c.n = assignment.n;
    c.size_by_label.assign(assignment.n + 1, 0);
    for (std::uint64_t i = 1; i <= assignment.n; ++i) ++c.size_by_label[assignment.labels[i - 1]];
    return c;
}

inline std::uint64_t tail_count(const FamilyCensus& c, std::uint64_t s) { return c.tail_count(s); }

// Joint realization of the census with the stick variables of Q_{r,N}.
struct CoupledRun {
    ModelParams params;
    TypeAssignment assignment;
    std::vector<double> w;  // w[k-1] = W_k; W_1 = 1, W_k = 0 for non-founders
    std::vector<double> x;  // x[k-1] = X_k
    std::vector<double> y;  // y[k-1] = Y_k = prod_{j>k} (1 - W_j)
    FamilyCensus census;
};

inline CoupledRun simulate_coupled(const ModelParams& params, std::uint64_t seed) {
    params.validate_coupled();
    Rng rng(seed);
    const std::uint64_t n_total = params.n;

    CoupledRun run;
    run.params = params;
    run.assignment.n = n_total;
    run.assignment.labels.assign(n_total, 1);
    run.w.assign(n_total, 0.0);
    run.w[0] = 1.0;

    std::vector<std::uint32_t> founded;  // labels >= 2 that exist, ascending
    std::vector<double> founded_w;

    for (std::uint64_t n = 2; n <= n_total; ++n) {
        if (rng.bernoulli(params.r)) {
            const double w = rng.beta_1_b(static_cast<double>(n - 1));
            run.w[n - 1] = w;
            founded.push_back(static_cast<std::uint32_t>(n));
            founded_w.push_back(w);
            run.assignment.labels[n - 1] = static_cast<std::uint32_t>(n);
        } else {
            std::uint32_t label = 1;
            for (std::size_t i = founded.size(); i-- > 0;) {
                if (rng.bernoulli(founded_w[i])) {
                    label = founded[i];
                    break;
                }
            }
            run.assignment.labels[n - 1] = label;
        }
    }

    run.census = census(run.assignment);
    run.x = run.census.cumulative();
    run.y.assign(n_total, 1.0);
    for (std::uint64_t k = n_total - 1; k >= 1; --k)
        run.y[k - 1] = run.y[k] * (1.0 - run.w[k]);
    return run;
}

inline double max_coupling_gap(const CoupledRun& run) {
    double m = 0.0;
    for (std::size_t k = 0; k < run.x.size(); ++k)
        m = std::max(m, std::fabs(run.x[k] - run.y[k]));
    return m;
}

}  // namespace yulefam
