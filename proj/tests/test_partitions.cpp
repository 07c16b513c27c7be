#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <set>
#include <string>

#include "oracle_helpers.hpp"
#include "yulefam/duplication.hpp"
#include "yulefam/partitions.hpp"
#include "yulefam/stats.hpp"

using namespace yulefam;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::string rgs_string(const SetPartition& p) {
    std::string key;
    for (auto g : p.rgs()) key += static_cast<char>('0' + g);
    return key;
}

}  // namespace

TEST_CASE("enumeration counts match Bell numbers", "[partitions]") {
    const auto bell = oracle::bell_numbers(10);
    CHECK(enumerate_partitions(1).size() == 1);
    CHECK(enumerate_partitions(3).size() == 5);
    CHECK(enumerate_partitions(6).size() == 203);
    for (std::uint64_t n = 1; n <= 10; ++n) {
        std::uint64_t count = 0;
        for_each_partition(n, [&](const SetPartition&) { ++count; });
        REQUIRE(count == bell[n]);
    }
    CHECK_THROWS_AS(enumerate_partitions(13), std::domain_error);
    CHECK_THROWS_AS(enumerate_partitions(0), std::domain_error);
}

TEST_CASE("enumeration order and uniqueness", "[partitions]") {
    const auto parts = enumerate_partitions(3);
    CHECK(rgs_string(parts.front()) == "000");  // {{1,2,3}}
    CHECK(rgs_string(parts.back()) == "012");   // {{1},{2},{3}}
    std::set<std::string> keys;
    for (const auto& p : enumerate_partitions(5)) {
        p.validate();
        keys.insert(rgs_string(p));
    }
    CHECK(keys.size() == 52);
}

TEST_CASE("duplication partition formula, hand values", "[partitions]") {
    for (const double r : {0.2, 0.5, 0.8}) {
        CHECK_THAT(dup_partition_prob(r, SetPartition::from_blocks({{1, 2}})),
                   WithinRel(1.0 - r, 1e-13));
        CHECK_THAT(dup_partition_prob(r, SetPartition::from_blocks({{1}, {2}})),
                   WithinRel(r, 1e-13));
    }
    CHECK_THAT(dup_partition_prob(0.5, SetPartition::from_blocks({{1, 2, 3}})),
               WithinRel(0.25, 1e-13));
    CHECK_THAT(dup_partition_prob(0.5, SetPartition::from_blocks({{1, 2}, {3}})),
               WithinRel(0.25, 1e-13));
    CHECK_THAT(dup_partition_prob(0.5, SetPartition::from_blocks({{1, 3}, {2}})),
               WithinRel(0.125, 1e-13));
    CHECK_THAT(dup_partition_prob(0.5, SetPartition::from_blocks({{1}, {2, 3}})),
               WithinRel(0.125, 1e-13));
    CHECK_THAT(dup_partition_prob(0.5, SetPartition::from_blocks({{1}, {2}, {3}})),
               WithinRel(0.25, 1e-13));
}

TEST_CASE("non-exchangeability witness is exact", "[partitions]") {
    const double p12 = dup_partition_prob(0.5, SetPartition::from_blocks({{1, 2}, {3}}));
    const double p13 = dup_partition_prob(0.5, SetPartition::from_blocks({{1, 3}, {2}}));
    CHECK(p12 == 0.25);
    CHECK(p13 == 0.125);
    CHECK(p12 != p13);
}

TEST_CASE("duplication and Ewens probabilities sum to one", "[partitions]") {
    for (std::uint64_t n = 1; n <= 6; ++n) {
        for (const double r : {0.2, 0.5, 0.8}) {
            double sum = 0.0;
            for_each_partition(n, [&](const SetPartition& p) { sum += dup_partition_prob(r, p); });
            INFO("dup n=" << n << " r=" << r);
            REQUIRE_THAT(sum, WithinAbs(1.0, 1e-12));
        }
        for (const double theta : {0.5, 1.0, 2.0}) {
            double sum = 0.0;
            for_each_partition(n, [&](const SetPartition& p) { sum += ewens_prob(theta, p); });
            INFO("ewens n=" << n << " theta=" << theta);
            REQUIRE_THAT(sum, WithinAbs(1.0, 1e-12));
        }
    }
}

TEST_CASE("Ewens values and exchangeability", "[partitions]") {
    CHECK_THAT(ewens_prob(1.7, SetPartition::from_blocks({{1}})), WithinRel(1.0, 1e-13));
    for (const double theta : {0.5, 1.0, 2.0}) {
        CHECK_THAT(ewens_prob(theta, SetPartition::from_blocks({{1, 2}})),
                   WithinRel(1.0 / (1.0 + theta), 1e-13));
        CHECK_THAT(ewens_prob(theta, SetPartition::from_blocks({{1}, {2}})),
                   WithinRel(theta / (1.0 + theta), 1e-13));
    }
    // Depends only on block sizes: the two 2+1 partitions have equal mass.
    CHECK_THAT(ewens_prob(1.3, SetPartition::from_blocks({{1, 2}, {3}})),
               WithinRel(ewens_prob(1.3, SetPartition::from_blocks({{1, 3}, {2}})), 1e-13));
}

TEST_CASE("Polya sequence probability", "[partitions]") {
    CHECK_THAT(polya_sequence_prob(1, 1, {1}), WithinRel(0.5, 1e-13));
    CHECK_THAT(polya_sequence_prob(1, 1, {0}), WithinRel(0.5, 1e-13));
    CHECK_THAT(polya_sequence_prob(1, 1, {1, 1}), WithinRel(1.0 / 3.0, 1e-13));

    // Exchangeability: any reordering of a pattern has identical probability.
    Rng rng(8);
    std::vector<int> pattern{1, 0, 0, 1, 1, 0, 1, 0, 0, 0, 1};
    const double base = polya_sequence_prob(2, 3, pattern);
    for (int rep = 0; rep < 10; ++rep) {
        for (std::size_t i = pattern.size(); i > 1; --i)
            std::swap(pattern[i - 1], pattern[rng.below(i)]);
        REQUIRE_THAT(polya_sequence_prob(2, 3, pattern), WithinRel(base, 1e-13));
    }

    // de Finetti: the pattern probability is the Beta(a,b) mixture of
    // i.i.d. Bernoulli paths.
    for (const auto& [a, b, n, s] : {std::tuple{1, 1, 4, 2}, {2, 3, 5, 3}, {3, 1, 6, 1}}) {
        std::vector<int> seq(static_cast<std::size_t>(n), 0);
        for (int i = 0; i < s; ++i) seq[i] = 1;
        const double direct = polya_sequence_prob(a, b, seq);
        const double lbeta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
        const double mixture = oracle::simpson(
            [&](double x) {
                if (x <= 0.0 || x >= 1.0) return 0.0;
                return std::pow(x, s + a - 1.0) * std::pow(1.0 - x, n - s + b - 1.0) /
                       std::exp(lbeta);
            },
            0.0, 1.0, 1e-12);
        REQUIRE_THAT(direct, WithinRel(mixture, 1e-8));
    }

    CHECK_THROWS_AS(polya_sequence_prob(0, 1, {1}), std::domain_error);
    CHECK_THROWS_AS(polya_sequence_prob(1, 1, {2}), std::domain_error);
}

TEST_CASE("CRP conventions and edge cases", "[partitions]") {
    // (alpha, theta) = (0, 0): customer 1 opens table 1, everyone joins it.
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto p = simulate_crp({0.0, 0.0}, 12, mix64(3, seed));
        REQUIRE(p.block_count() == 1);
    }
    CHECK_THROWS_AS(simulate_crp({-0.1, 1.0}, 5, 1), std::domain_error);
    CHECK_THROWS_AS(simulate_crp({0.5, -0.6}, 5, 1), std::domain_error);

    // alpha=0.5, theta=0, n=2: two tables with probability alpha.
    int two = 0;
    const int reps = 200000;
    for (int i = 0; i < reps; ++i)
        two += simulate_crp({0.5, 0.0}, 2, mix64(5, i)).block_count() == 2;
    CHECK(std::fabs(two / static_cast<double>(reps) - 0.5) <
          3.0 * std::sqrt(0.25 / reps));
}

TEST_CASE("CRP at alpha=0 realizes the Ewens law", "[partitions][slow]") {
    // P(all singletons) at theta=1, n=3 is 1/6.
    const int reps = 200000;
    int singletons = 0;
    for (int i = 0; i < reps; ++i)
        singletons += simulate_crp({0.0, 1.0}, 3, mix64(9, i)).block_count() == 3;
    const double p3 = ewens_prob(1.0, SetPartition::from_blocks({{1}, {2}, {3}}));
    CHECK_THAT(p3, WithinRel(1.0 / 6.0, 1e-13));
    CHECK(std::fabs(singletons / static_cast<double>(reps) - p3) <
          3.0 * std::sqrt(p3 * (1 - p3) / reps));

    // Full partition frequencies at n=4, theta=1 against ewens_prob.
    std::map<std::string, double> exact;
    for_each_partition(4, [&](const SetPartition& p) {
        exact[rgs_string(p)] = ewens_prob(1.0, p);
    });
    std::map<std::string, int> freq;
    const int reps4 = 100000;
    for (int i = 0; i < reps4; ++i) ++freq[rgs_string(simulate_crp({0.0, 1.0}, 4, mix64(11, i)))];
    for (const auto& [key, p] : exact) {
        const double emp = freq[key] / static_cast<double>(reps4);
        const double se = std::sqrt(p * (1.0 - p) / reps4) + 1e-12;
        INFO("partition " << key);
        REQUIRE(std::fabs(emp - p) < 4.0 * se);
    }
}

TEST_CASE("Poisson-Dirichlet sticks", "[partitions]") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto p = pd_stick_sample({0.5, 0.5}, 30, mix64(13, seed));
        double sum = 0.0;
        for (double v : p) {
            REQUIRE(v > 0.0);
            sum += v;
            REQUIRE(sum < 1.0);
        }
    }

    // alpha = 0, theta = 1: D_j ~ Beta(1,1), so E[P_1] = 1/2.
    RunningStat p1_uniform;
    for (int i = 0; i < 100000; ++i)
        p1_uniform.add(pd_stick_sample({0.0, 1.0}, 1, mix64(17, i))[0]);
    CHECK(std::fabs(p1_uniform.mean() - 0.5) < 3.0 * p1_uniform.stderr_of_mean());

    // D_1 ~ Beta(1-alpha, theta+alpha), so E[P_1] = (1-alpha)/(1+theta);
    // at (0.5, 0.5) that is 1/3.
    RunningStat p1_py;
    for (int i = 0; i < 100000; ++i) p1_py.add(pd_stick_sample({0.5, 0.5}, 1, mix64(19, i))[0]);
    CHECK(std::fabs(p1_py.mean() - 1.0 / 3.0) < 3.0 * p1_py.stderr_of_mean());

    CHECK_THROWS_AS(pd_stick_sample({0.0, 0.0}, 3, 1), std::domain_error);
}

TEST_CASE("CRP(1-r, 0) table count matches the type-1 family size", "[partitions][slow]") {
    // The number of occupied tables after n customers has the law of the
    // type-1 family size in the duplication model at population n.
    const double r = 0.5;
    const std::uint64_t n = 200;
    const int reps = 100000;
    std::vector<std::uint64_t> tables_hist(n + 1, 0), family_hist(n + 1, 0);
    for (int i = 0; i < reps; ++i) {
        ++tables_hist[simulate_crp({1.0 - r, 0.0}, n, mix64(23, i)).block_count()];
        ++family_hist[census(simulate_duplication({r, n}, mix64(29, i))).size_of(1)];
    }
    const auto [b1, b2] = oracle::merge_bins(tables_hist, family_hist, 20);
    REQUIRE(b1.size() >= 5);
    const auto res = chi2_two_sample(b1, b2);
    INFO("chi2 = " << res.statistic << " dof = " << res.dof << " p = " << res.p_value);
    CHECK(res.p_value > 0.001);
}

TEST_CASE("partition construction and validation", "[partitions]") {
    const auto p = SetPartition::from_labels({1, 1, 3, 3, 5});
    CHECK(p.block_count() == 3);
    CHECK(p.least_elements() == std::vector<std::uint32_t>{1, 3, 5});
    CHECK(p.sizes() == std::vector<std::uint64_t>{2, 2, 1});
    CHECK(p.n() == 5);

    CHECK_THROWS_AS(SetPartition::from_blocks({{2}, {1}}), std::domain_error);
    CHECK_THROWS_AS(SetPartition::from_blocks({{1, 1}}), std::domain_error);
    CHECK_THROWS_AS(SetPartition::from_blocks({{1}, {3}}), std::domain_error);
}
