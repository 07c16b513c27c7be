#pragma once

// Monte Carlo experiment drivers. Replicate i always runs on the stream
// mix64(master_seed, i) (cells of multi-cell experiments interpose one more
// mix), and per-replicate results are written into slots keyed by replicate
// index before a serial reduction, so any thread count produces bit-identical
// tables.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "yulefam/duplication.hpp"
#include "yulefam/limit_laws.hpp"
#include "yulefam/qrn.hpp"
#include "yulefam/rng.hpp"
#include "yulefam/stats.hpp"

namespace yulefam {

inline unsigned resolve_threads(unsigned requested, std::uint64_t work_items) {
    unsigned t = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (work_items < t) t = static_cast<unsigned>(std::max<std::uint64_t>(1, work_items));
    return t;
}

// Run fn(begin, end) over a static partition of [0, count) across threads.
template <typename Fn>
void parallel_chunks(std::uint64_t count, unsigned threads, Fn&& fn) {
    const unsigned t = resolve_threads(threads, count);
    if (t <= 1) {
        fn(std::uint64_t{0}, count);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const std::uint64_t base = count / t, rem = count % t;
    std::uint64_t start = 0;
    for (unsigned i = 0; i < t; ++i) {
        const std::uint64_t size = base + (i < rem ? 1 : 0);
        pool.emplace_back([&fn, start, size, &first_error, &error_mutex] {
            try {
                fn(start, start + size);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
        start += size;
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

// Log-spaced grid rounded to unique integers. Tail counts are step functions
// of S, so integer grid points keep the g(S) comparison unbiased.
inline std::vector<double> geometric_int_grid(double lo, double hi, std::size_t points) {
    if (!(lo >= 1.0 && hi >= lo) || points < 1)
        throw std::invalid_argument("geometric_int_grid: need 1 <= lo <= hi, points >= 1");
    std::vector<double> g;
    for (std::size_t i = 0; i < points; ++i) {
        const double f = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1.0);
        const double v = std::round(lo * std::pow(hi / lo, f));
        if (g.empty() || v > g.back()) g.push_back(v);
    }
    return g;
}

// Default tail grid: 40 geometric points from 1 to 2 N^{1-r}, spanning the
// power-law window and its breakdown.
inline std::vector<double> default_s_grid(double r, std::uint64_t n) {
    const double top = std::max(2.0, 2.0 * std::pow(static_cast<double>(n), 1.0 - r));
    return geometric_int_grid(1.0, top, 40);
}

struct TailRow {
    double s = 0.0;
    double mean_f = 0.0;
    double stderr_f = 0.0;
    double prediction = 0.0;  // g(S)
};

struct TailTable {
    double r = 0.0;
    std::uint64_t n = 0;
    std::uint64_t replicates = 0;
    std::uint64_t master_seed = 0;
    std::vector<TailRow> rows;
};

namespace detail {

// Suffix counts by family size for one run: out[s] = #families with size >= s.
inline void tail_suffix_counts(const std::vector<std::uint32_t>& labels,
                               std::vector<std::uint32_t>& size_scratch,
                               std::vector<std::uint32_t>& suffix) {
    const std::uint64_t n = labels.size();
    size_scratch.assign(n + 1, 0);
    for (auto lab : labels) ++size_scratch[lab];
    suffix.assign(n + 2, 0);
    for (auto sz : size_scratch)
        if (sz > 0) ++suffix[sz];
    for (std::uint64_t s = n; s >= 1; --s) suffix[s] += suffix[s + 1];
}

}  // namespace detail

inline TailTable run_tail_experiment(double r, std::uint64_t n, std::uint64_t replicates,
                                     std::vector<double> s_grid, std::uint64_t master_seed,
                                     unsigned threads = 0) {
    if (replicates < 1) throw std::domain_error("run_tail_experiment: replicates must be >= 1");
    if (s_grid.empty() || !std::is_sorted(s_grid.begin(), s_grid.end()))
        throw std::domain_error("run_tail_experiment: S grid must be ascending and nonempty");
    for (double s : s_grid)
        if (!(s >= 1.0)) throw std::domain_error("run_tail_experiment: S values must be >= 1");
    ModelParams params{r, n};
    params.validate_plain();

    std::vector<std::vector<double>> per_rep(replicates);
    parallel_chunks(replicates, threads, [&](std::uint64_t begin, std::uint64_t end) {
        std::vector<std::uint32_t> labels, sizes, suffix;
        for (std::uint64_t rep = begin; rep < end; ++rep) {
            simulate_duplication_into(params, mix64(master_seed, rep), labels);
            detail::tail_suffix_counts(labels, sizes, suffix);
            auto& row = per_rep[rep];
            row.resize(s_grid.size());
            for (std::size_t j = 0; j < s_grid.size(); ++j) {
                const auto s = static_cast<std::uint64_t>(std::ceil(s_grid[j]));
                row[j] = s <= n ? static_cast<double>(suffix[s]) : 0.0;
            }
        }
    });

    TailTable table{r, n, replicates, master_seed, {}};
    table.rows.resize(s_grid.size());
    for (std::size_t j = 0; j < s_grid.size(); ++j) {
        RunningStat st;
        for (std::uint64_t rep = 0; rep < replicates; ++rep) st.add(per_rep[rep][j]);
        table.rows[j] = {s_grid[j], st.mean(), st.stderr_of_mean(),
                         g_of_s(r, static_cast<double>(n), s_grid[j])};
    }
    return table;
}

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double s_min = 0.0;
    double s_max = 0.0;
    std::size_t points = 0;
};

// OLS of log(mean F) on log S over grid rows with positive means in range.
inline SlopeFit fit_loglog_slope(const TailTable& table, double s_min, double s_max) {
    std::vector<double> xs, ys;
    for (const auto& row : table.rows)
        if (row.s >= s_min && row.s <= s_max && row.mean_f > 0.0) {
            xs.push_back(std::log(row.s));
            ys.push_back(std::log(row.mean_f));
        }
    if (xs.size() < 3)
        throw std::domain_error("fit_loglog_slope: need >= 3 positive rows in range");
    const auto fit = ols_line(xs, ys);
    return {fit.slope, fit.intercept, fit.slope_stderr, s_min, s_max, fit.points};
}

struct CouplingRow {
    std::uint64_t n = 0;
    double mean_gap = 0.0;
    double stderr_gap = 0.0;
    double bound = 0.0;  // 5 / sqrt(N)
    double ratio = 0.0;  // mean_gap / bound
};

struct CouplingReport {
    double r = 0.0;
    std::uint64_t replicates = 0;
    std::uint64_t master_seed = 0;
    std::vector<CouplingRow> rows;
};

inline CouplingReport run_coupling_experiment(double r, const std::vector<std::uint64_t>& n_list,
                                              std::uint64_t replicates, std::uint64_t master_seed,
                                              unsigned threads = 0) {
    if (replicates < 1) throw std::domain_error("run_coupling_experiment: replicates >= 1");
    for (auto n : n_list)
        if (n < 2) throw std::domain_error("run_coupling_experiment: each N must be >= 2");
    CouplingReport report{r, replicates, master_seed, {}};
    for (std::size_t cell = 0; cell < n_list.size(); ++cell) {
        ModelParams params{r, n_list[cell]};
        params.validate_coupled();
        const std::uint64_t cell_seed = mix64(master_seed, 0x100000 + cell);
        std::vector<double> gaps(replicates);
        parallel_chunks(replicates, threads, [&](std::uint64_t begin, std::uint64_t end) {
            for (std::uint64_t rep = begin; rep < end; ++rep)
                gaps[rep] = max_coupling_gap(simulate_coupled(params, mix64(cell_seed, rep)));
        });
        RunningStat st;
        for (double g : gaps) st.add(g);
        const double bound = 5.0 / std::sqrt(static_cast<double>(n_list[cell]));
        report.rows.push_back({n_list[cell], st.mean(), st.stderr_of_mean(), bound,
                               st.mean() / bound});
    }
    return report;
}

struct MomentRow {
    double order = 0.0;
    double empirical = 0.0;      // unconditional mean of (R_k / N^{1-r})^m
    double empirical_se = 0.0;
    double reference = 0.0;      // z_moment (k >= 2) or ml_moment (k = 1)
};

struct LargestFamilyReport {
    double r = 0.0;
    std::uint64_t n = 0;
    std::uint64_t k = 1;
    std::uint64_t replicates = 0;
    std::uint64_t retained = 0;  // replicates where individual k founded
    std::uint64_t master_seed = 0;
    std::vector<double> scaled_samples;  // R_k/N^{1-r}; conditional for k >= 2
    KsResult ks;
    std::vector<MomentRow> moments;
};

inline LargestFamilyReport run_largest_family_experiment(double r, std::uint64_t n,
                                                         std::uint64_t replicates,
                                                         std::uint64_t k,
                                                         std::uint64_t master_seed,
                                                         unsigned threads = 0,
                                                         std::uint64_t reference_samples = 200000) {
    if (replicates < 1) throw std::domain_error("run_largest_family_experiment: replicates >= 1");
    if (k < 1 || k > n) throw std::domain_error("run_largest_family_experiment: need 1 <= k <= N");
    ModelParams params{r, n};
    params.validate_coupled();  // limit statements need 0 < r < 1

    std::vector<std::uint32_t> counts(replicates);
    std::vector<std::uint8_t> founded(replicates);
    parallel_chunks(replicates, threads, [&](std::uint64_t begin, std::uint64_t end) {
        std::vector<std::uint32_t> labels;
        for (std::uint64_t rep = begin; rep < end; ++rep) {
            simulate_duplication_into(params, mix64(master_seed, rep), labels);
            counts[rep] = static_cast<std::uint32_t>(
                std::count(labels.begin(), labels.end(), static_cast<std::uint32_t>(k)));
            founded[rep] = k == 1 || labels[k - 1] == k;
        }
    });

    const double scale = std::pow(static_cast<double>(n), 1.0 - r);
    LargestFamilyReport report;
    report.r = r;
    report.n = n;
    report.k = k;
    report.replicates = replicates;
    report.master_seed = master_seed;
    for (std::uint64_t rep = 0; rep < replicates; ++rep) {
        report.retained += founded[rep];
        if (founded[rep]) report.scaled_samples.push_back(counts[rep] / scale);
    }
    if (k >= 2 && report.retained == 0)
        throw std::runtime_error("run_largest_family_experiment: no replicate founded family k");

    // Unconditional moments, zeros included, against the exact formulas.
    const double alpha = 1.0 - r;
    for (double m : {1.0, 2.0}) {
        RunningStat st;
        for (std::uint64_t rep = 0; rep < replicates; ++rep)
            st.add(std::pow(counts[rep] / scale, m));
        const double ref = k == 1 ? ml_moment(alpha, m) : z_moment(r, k, m);
        report.moments.push_back({m, st.mean(), st.stderr_of_mean(), ref});
    }

    std::vector<double> sorted = report.scaled_samples;
    std::sort(sorted.begin(), sorted.end());
    if (k == 1) {
        const MittagLeffler ml(alpha);
        report.ks = ks_from_sorted(ml.cdf_sorted(sorted));
    } else {
        // Reference oracle: empirical CDF of M B_k^{1-r} from the limit-law
        // samplers, evaluated at the sorted sample points by a merge sweep.
        Rng rng(mix64(master_seed, 0xFEFE0000ULL));
        std::vector<double> ref(reference_samples);
        for (auto& v : ref)
            v = sample_ml(alpha, rng) * std::pow(rng.beta_1_b(static_cast<double>(k - 1)), alpha);
        std::sort(ref.begin(), ref.end());
        std::vector<double> cdf_vals(sorted.size());
        std::size_t j = 0;
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            while (j < ref.size() && ref[j] <= sorted[i]) ++j;
            cdf_vals[i] = static_cast<double>(j) / static_cast<double>(ref.size());
        }
        report.ks = ks_from_sorted(cdf_vals);
        // Two-sample flavor: effective sample size replaces n in the p-value.
        const double n1 = static_cast<double>(sorted.size());
        const double n2 = static_cast<double>(ref.size());
        const double ne = std::sqrt(n1 * n2 / (n1 + n2));
        report.ks.p_value = kolmogorov_q((ne + 0.12 + 0.11 / ne) * report.ks.d);
    }
    return report;
}

struct DecayRow {
    double x = 0.0;
    double estimate = 0.0;  // MC mean of #{k : R_k > x N^{1-r}}
    double stderr_e = 0.0;
};

struct DecayTable {
    double r = 0.0;
    std::uint64_t n = 0;
    std::uint64_t replicates = 0;
    std::uint64_t master_seed = 0;
    std::vector<DecayRow> rows;
};

inline DecayTable run_tail_decay_experiment(double r, std::uint64_t n, std::uint64_t replicates,
                                            std::vector<double> x_grid,
                                            std::uint64_t master_seed, unsigned threads = 0) {
    if (replicates < 1) throw std::domain_error("run_tail_decay_experiment: replicates >= 1");
    if (x_grid.empty() || !std::is_sorted(x_grid.begin(), x_grid.end()))
        throw std::domain_error("run_tail_decay_experiment: x grid must be ascending");
    for (double x : x_grid)
        if (!(x >= 1.0)) throw std::domain_error("run_tail_decay_experiment: x must be >= 1");
    ModelParams params{r, n};
    params.validate_coupled();
    const double scale = std::pow(static_cast<double>(n), 1.0 - r);

    std::vector<std::vector<double>> per_rep(replicates);
    parallel_chunks(replicates, threads, [&](std::uint64_t begin, std::uint64_t end) {
        std::vector<std::uint32_t> labels, sizes, suffix;
        for (std::uint64_t rep = begin; rep < end; ++rep) {
            simulate_duplication_into(params, mix64(master_seed, rep), labels);
            detail::tail_suffix_counts(labels, sizes, suffix);
            auto& row = per_rep[rep];
            row.resize(x_grid.size());
            for (std::size_t j = 0; j < x_grid.size(); ++j) {
                const auto s = static_cast<std::uint64_t>(std::floor(x_grid[j] * scale)) + 1;
                row[j] = s <= n ? static_cast<double>(suffix[s]) : 0.0;
            }
        }
    });

    DecayTable table{r, n, replicates, master_seed, {}};
    for (std::size_t j = 0; j < x_grid.size(); ++j) {
        RunningStat st;
        for (std::uint64_t rep = 0; rep < replicates; ++rep) st.add(per_rep[rep][j]);
        table.rows.push_back({x_grid[j], st.mean(), st.stderr_of_mean()});
    }
    return table;
}

}  // namespace yulefam
