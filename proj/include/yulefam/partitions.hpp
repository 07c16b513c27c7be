#pragma once

// Exact partition-probability evaluators and baseline partition samplers:
// the duplication model's sampling formula, the Ewens sampling formula, the
// Polya-urn sequence probability, the two-parameter Chinese restaurant
// process, Poisson-Dirichlet stick-breaking, and a brute-force enumerator
// over set partitions (restricted-growth-string order).

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "yulefam/duplication.hpp"
#include "yulefam/rng.hpp"

namespace yulefam {

// Partition of {1..n} into blocks ordered by least element; elements within a
// block ascend. a_1 = 1 always.
struct SetPartition {
    std::vector<std::vector<std::uint32_t>> blocks;

    std::uint64_t n() const {
        std::uint64_t c = 0;
        for (const auto& b : blocks) c += b.size();
        return c;
    }
    std::size_t block_count() const { return blocks.size(); }

    std::vector<std::uint64_t> sizes() const {
        std::vector<std::uint64_t> s;
        s.reserve(blocks.size());
        for (const auto& b : blocks) s.push_back(b.size());
        return s;
    }

    std::vector<std::uint32_t> least_elements() const {
        std::vector<std::uint32_t> a;
        a.reserve(blocks.size());
        for (const auto& b : blocks) a.push_back(b.front());
        return a;
    }

    // Block index (0-based) of each element 1..n; a restricted growth string.
    std::vector<std::uint32_t> rgs() const {
        std::vector<std::uint32_t> g(n());
        for (std::size_t j = 0; j < blocks.size(); ++j)
            for (auto e : blocks[j]) g[e - 1] = static_cast<std::uint32_t>(j);
        return g;
    }

    void validate() const {
        const std::uint64_t total = n();
        std::vector<bool> seen(total + 1, false);
        std::uint32_t prev_least = 0;
        for (const auto& b : blocks) {
            if (b.empty()) throw std::domain_error("SetPartition: empty block");
            if (b.front() <= prev_least)
                throw std::domain_error("SetPartition: blocks must be ordered by least element");
            prev_least = b.front();
            std::uint32_t prev = 0;
            for (auto e : b) {
                if (e < 1 || e > total || e <= prev || seen[e])
                    throw std::domain_error("SetPartition: elements must partition 1..n");
                seen[e] = true;
                prev = e;
            }
        }
        if (blocks.empty() || blocks.front().front() != 1)
            throw std::domain_error("SetPartition: a_1 must be 1");
    }

    // Group individuals by family label / customers by table.
    static SetPartition from_labels(const std::vector<std::uint32_t>& labels) {
        SetPartition p;
        std::vector<std::int64_t> block_of(labels.size() + 1, -1);
        for (std::uint32_t i = 0; i < labels.size(); ++i) {
            const auto lab = labels[i];
            if (block_of[lab] < 0) {
                block_of[lab] = static_cast<std::int64_t>(p.blocks.size());
                p.blocks.emplace_back();
            }
            p.blocks[static_cast<std::size_t>(block_of[lab])].push_back(i + 1);
        }
        return p;
    }

    static SetPartition from_assignment(const TypeAssignment& t) { return from_labels(t.labels); }

    static SetPartition from_blocks(std::vector<std::vector<std::uint32_t>> blocks) {
        SetPartition p;
        p.blocks = std::move(blocks);
        p.validate();
        return p;
    }
};

// log P(Theta_n = pi) for the duplication model:
//   r^{k-1} (1-r)^{n-k} / (n-1)! * prod_i (n_i - 1)! * prod_{j>=2} (a_j - 1).
inline double dup_partition_log_prob(double r, const SetPartition& pi) {
    if (!(r > 0.0 && r < 1.0)) throw std::domain_error("dup_partition_prob: r must be in (0,1)");
    const double n = static_cast<double>(pi.n());
    const double k = static_cast<double>(pi.block_count());
    double lp = (k - 1.0) * std::log(r) + (n - k) * std::log1p(-r) - std::lgamma(n);
    for (const auto& b : pi.blocks) lp += std::lgamma(static_cast<double>(b.size()));
    const auto least = pi.least_elements();
    for (std::size_t j = 1; j < least.size(); ++j)
        lp += std::log(static_cast<double>(least[j] - 1));
    return lp;
}

// Direct-space product for small n (factorials up to 20! are exact in
// doubles), log space beyond.
inline double dup_partition_prob(double r, const SetPartition& pi) {
    const std::uint64_t n = pi.n();
    if (n > 20) return std::exp(dup_partition_log_prob(r, pi));
    if (!(r > 0.0 && r < 1.0)) throw std::domain_error("dup_partition_prob: r must be in (0,1)");
    const std::uint64_t k = pi.block_count();
    double prob = 1.0;
    for (std::uint64_t i = 1; i < k; ++i) prob *= r;
    for (std::uint64_t i = 0; i < n - k; ++i) prob *= 1.0 - r;
    for (std::uint64_t m = 2; m < n; ++m) prob /= static_cast<double>(m);
    for (const auto& b : pi.blocks)
        for (std::uint64_t m = 2; m < b.size(); ++m) prob *= static_cast<double>(m);
    const auto least = pi.least_elements();
    for (std::size_t j = 1; j < least.size(); ++j) prob *= static_cast<double>(least[j] - 1);
    return prob;
}

// log P(Pi_n = pi) under the Ewens sampling formula:
//   theta^{k-1} / prod_{m=1}^{n-1} (m + theta) * prod_i (n_i - 1)!.
inline double ewens_log_prob(double theta, const SetPartition& pi) {
    if (!(theta > 0.0)) throw std::domain_error("ewens_prob: theta must be > 0");
    const std::uint64_t n = pi.n();
    double lp = (static_cast<double>(pi.block_count()) - 1.0) * std::log(theta);
    for (std::uint64_t m = 1; m < n; ++m) lp -= std::log(static_cast<double>(m) + theta);
    for (const auto& b : pi.blocks) lp += std::lgamma(static_cast<double>(b.size()));
    return lp;
}

inline double ewens_prob(double theta, const SetPartition& pi) {
    const std::uint64_t n = pi.n();
    if (n > 20) return std::exp(ewens_log_prob(theta, pi));
    if (!(theta > 0.0)) throw std::domain_error("ewens_prob: theta must be > 0");
    double prob = 1.0;
    for (std::uint64_t i = 1; i < pi.block_count(); ++i) prob *= theta;
    for (std::uint64_t m = 1; m < n; ++m) prob /= static_cast<double>(m) + theta;
    for (const auto& b : pi.blocks)
        for (std::uint64_t m = 2; m < b.size(); ++m) prob *= static_cast<double>(m);
    return prob;
}

// Probability of one specific draw pattern from a Polya urn started with
// a white and b black balls; depends on the pattern only through the number
// of white draws (exchangeability).
inline double polya_sequence_prob(std::uint64_t a, std::uint64_t b,
                                  const std::vector<int>& outcome) {
    if (a < 1 || b < 1) throw std::domain_error("polya_sequence_prob: a, b must be >= 1");
    std::uint64_t s = 0;
    for (int v : outcome) {
        if (v != 0 && v != 1) throw std::domain_error("polya_sequence_prob: outcome must be 0/1");
        s += static_cast<std::uint64_t>(v);
    }
    const double n = static_cast<double>(outcome.size());
    const double aa = static_cast<double>(a), bb = static_cast<double>(b);
    const double ss = static_cast<double>(s);
    return std::exp(std::lgamma(aa + ss) + std::lgamma(bb + n - ss) + std::lgamma(aa + bb) -
                    std::lgamma(aa) - std::lgamma(bb) - std::lgamma(aa + bb + n));
}

struct CrpParams {
    double alpha = 0.0;  // discount
    double theta = 1.0;  // strength

    void validate() const {
        if (!(alpha >= 0.0 && alpha < 1.0))
            throw std::domain_error("CrpParams: alpha must be in [0,1)");
        // (0,0) is admitted by the first-customer convention: table 1 always
        // opens and every later customer joins an occupied table.
        if (!(theta > -alpha) && !(alpha == 0.0 && theta == 0.0))
            throw std::domain_error("CrpParams: theta must exceed -alpha");
    }
};

// Two-parameter CRP seating of n customers. Customer 1 always opens table 1,
// which also covers (alpha, theta) = (0, 0): every later customer then joins
// an occupied table, giving the single-block partition.
inline SetPartition simulate_crp(const CrpParams& params, std::uint64_t n, std::uint64_t seed) {
    params.validate();
    if (n < 1) throw std::domain_error("simulate_crp: n must be >= 1");
    Rng rng(seed);
    SetPartition p;
    p.blocks.push_back({1});
    std::vector<double> occupancy{1.0};
    for (std::uint64_t c = 2; c <= n; ++c) {
        const double k = static_cast<double>(p.blocks.size());
        const double total = static_cast<double>(c - 1) + params.theta;
        double x = rng.uniform() * total;
        if (x < params.theta + k * params.alpha) {
            p.blocks.push_back({static_cast<std::uint32_t>(c)});
            occupancy.push_back(1.0);
            continue;
        }
        x -= params.theta + k * params.alpha;
        std::size_t table = p.blocks.size() - 1;  // fallback guards roundoff
        for (std::size_t i = 0; i < occupancy.size(); ++i) {
            x -= occupancy[i] - params.alpha;
            if (x < 0.0) {
                table = i;
                break;
            }
        }
        p.blocks[table].push_back(static_cast<std::uint32_t>(c));
        occupancy[table] += 1.0;
    }
    return p;
}

// First K terms of the Poisson-Dirichlet(alpha, theta) stick-breaking
// construction: P_k = D_k prod_{j<k} (1 - D_j), D_j ~ Beta(1-alpha, theta + j alpha).
inline std::vector<double> pd_stick_sample(const CrpParams& params, std::uint64_t k,
                                           std::uint64_t seed) {
    params.validate();
    if (k < 1) throw std::domain_error("pd_stick_sample: K must be >= 1");
    if (params.alpha == 0.0 && params.theta == 0.0)
        throw std::domain_error("pd_stick_sample: (alpha, theta) = (0,0) has no stick law");
    Rng rng(seed);
    std::vector<double> p(k);
    double remaining = 1.0;
    for (std::uint64_t j = 1; j <= k; ++j) {
        const double d = rng.beta(1.0 - params.alpha,
                                  params.theta + static_cast<double>(j) * params.alpha);
        p[j - 1] = d * remaining;
        remaining *= 1.0 - d;
    }
    return p;
}

inline constexpr std::uint64_t max_enumeration_n = 12;  // Bell(12) = 4,213,597

// Stream every set partition of {1..n} in restricted-growth-string order.
template <typename Fn>
void for_each_partition(std::uint64_t n, Fn&& fn) {
    if (n < 1 || n > max_enumeration_n)
        throw std::domain_error("for_each_partition: need 1 <= n <= 12");
    std::vector<std::uint32_t> g(n, 0);   // growth string
    std::vector<std::uint32_t> m(n, 0);   // m[i] = max(g[0..i])
    for (;;) {
        SetPartition p;
        std::uint32_t nblocks = m[n - 1] + 1;
        p.blocks.assign(nblocks, {});
        for (std::uint32_t i = 0; i < n; ++i) p.blocks[g[i]].push_back(i + 1);
        fn(p);
        std::uint64_t i = n - 1;
        while (i > 0 && g[i] == m[i - 1] + 1) --i;
        if (i == 0) break;
        ++g[i];
        m[i] = std::max(m[i - 1], g[i]);
        for (std::uint64_t j = i + 1; j < n; ++j) {
            g[j] = 0;
            m[j] = m[i];
        }
    }
}

inline std::vector<SetPartition> enumerate_partitions(std::uint64_t n) {
    std::vector<SetPartition> out;
    for_each_partition(n, [&](const SetPartition& p) { out.push_back(p); });
    return out;
}

}  // namespace yulefam
