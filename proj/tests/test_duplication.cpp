#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <string>

#include "yulefam/duplication.hpp"
#include "yulefam/partitions.hpp"
#include "yulefam/qrn.hpp"
#include "yulefam/stats.hpp"

using namespace yulefam;

namespace {

std::string rgs_key(const TypeAssignment& t) {
    std::string key;
    for (auto g : SetPartition::from_assignment(t).rgs()) key += static_cast<char>('0' + g);
    return key;
}

std::string sorted_sizes_key(const FamilyCensus& c) {
    std::vector<std::uint32_t> sizes;
    for (std::uint64_t k = 1; k <= c.n; ++k)
        if (c.size_by_label[k]) sizes.push_back(c.size_by_label[k]);
    std::sort(sizes.rbegin(), sizes.rend());
    std::string key;
    for (auto s : sizes) key += std::to_string(s) + ",";
    return key;
}

}  // namespace

TEST_CASE("degenerate rates", "[duplication]") {
    const auto none = simulate_duplication({0.0, 5}, 1);
    CHECK(none.labels == std::vector<std::uint32_t>{1, 1, 1, 1, 1});
    CHECK(census(none).size_of(1) == 5);

    const auto all = simulate_duplication({1.0, 4}, 1);
    CHECK(all.labels == std::vector<std::uint32_t>{1, 2, 3, 4});
    CHECK(census(all).family_count() == 4);

    CHECK_THROWS_AS(simulate_duplication({1.5, 4}, 1), std::domain_error);
    CHECK_THROWS_AS(simulate_duplication({0.5, 0}, 1), std::domain_error);
}

TEST_CASE("census examples", "[duplication]") {
    const auto c1 = census(TypeAssignment::from_labels({1, 1, 1}));
    CHECK(c1.size_of(1) == 3);
    CHECK(c1.cumulative() == std::vector<double>{1.0, 1.0, 1.0});

    const auto c2 = census(TypeAssignment::from_labels({1, 2, 2}));
    CHECK(c2.size_of(1) == 1);
    CHECK(c2.size_of(2) == 2);
    CHECK(c2.cumulative() == std::vector<double>{1.0 / 3.0, 1.0, 1.0});

    const auto c3 = census(TypeAssignment::from_labels({1, 1, 3, 3}));
    CHECK(c3.size_of(1) == 2);
    CHECK(c3.size_of(3) == 2);
    CHECK(c3.cumulative() == std::vector<double>{0.5, 0.5, 1.0, 1.0});

    CHECK_THROWS_AS(TypeAssignment::from_labels({2, 1}), std::domain_error);
}

TEST_CASE("tail counts", "[duplication]") {
    // Sizes {5, 3, 1}.
    const auto c = census(TypeAssignment::from_labels({1, 1, 1, 1, 1, 6, 6, 6, 9}));
    CHECK(c.tail_count(3) == 2);
    CHECK(c.tail_count(1) == 3);
    CHECK(c.tail_count(6) == 0);
    CHECK(tail_count(c, 5) == 1);
    CHECK_THROWS_AS(c.tail_count(0), std::domain_error);
}

TEST_CASE("size-multiset law at N=3 matches the exact partition formula", "[duplication]") {
    // Oracle: aggregate dup_partition_prob over the 5 set partitions of {1,2,3}.
    const double r = 0.5;
    std::map<std::string, double> expected;
    for (const auto& p : enumerate_partitions(3)) {
        auto sizes = p.sizes();
        std::sort(sizes.rbegin(), sizes.rend());
        std::string key;
        for (auto s : sizes) key += std::to_string(s) + ",";
        expected[key] += dup_partition_prob(r, p);
    }
    REQUIRE(expected.size() == 3);
    CHECK_THAT(expected.at("3,"), Catch::Matchers::WithinAbs(0.25, 1e-12));
    CHECK_THAT(expected.at("2,1,"), Catch::Matchers::WithinAbs(0.50, 1e-12));
    CHECK_THAT(expected.at("1,1,1,"), Catch::Matchers::WithinAbs(0.25, 1e-12));

    const int reps = 1000000;
    std::map<std::string, int> observed;
    for (int i = 0; i < reps; ++i)
        ++observed[sorted_sizes_key(census(simulate_duplication({r, 3}, mix64(101, i))))];
    for (const auto& [key, p] : expected) {
        const double emp = observed[key] / static_cast<double>(reps);
        const double se = std::sqrt(p * (1.0 - p) / reps);
        INFO(key << " emp=" << emp << " exact=" << p);
        CHECK(std::fabs(emp - p) < 3.0 * se);
    }
}

TEST_CASE("conservation and label validity", "[duplication]") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const double r = (seed % 10) / 10.0;
        const std::uint64_t n = 1 + (seed * 37) % 300;
        const auto t = simulate_duplication({r, n}, mix64(7, seed));
        const auto c = census(t);
        std::uint64_t total = 0;
        for (std::uint64_t k = 1; k <= n; ++k) total += c.size_by_label[k];
        REQUIRE(total == n);
        for (std::uint64_t i = 1; i <= n; ++i) REQUIRE(t.label_of(i) <= i);
        // R_k >= 1 only when individual k founded.
        for (std::uint64_t k = 2; k <= n; ++k)
            REQUIRE((c.size_by_label[k] > 0) == (t.label_of(k) == k));
    }
}

TEST_CASE("determinism per seed", "[duplication]") {
    const auto a = simulate_duplication({0.4, 5000}, 99);
    const auto b = simulate_duplication({0.4, 5000}, 99);
    CHECK(a.labels == b.labels);
    const auto ca = simulate_coupled({0.4, 500}, 99);
    const auto cb = simulate_coupled({0.4, 500}, 99);
    CHECK(ca.w == cb.w);
    CHECK(ca.census.size_by_label == cb.census.size_by_label);
}

TEST_CASE("coupled run structure", "[duplication]") {
    CHECK_THROWS_AS(simulate_coupled({0.0, 5}, 1), std::domain_error);
    CHECK_THROWS_AS(simulate_coupled({1.0, 5}, 1), std::domain_error);

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto run = simulate_coupled({0.3, 200}, mix64(3, seed));
        CHECK(run.x.back() == 1.0);
        CHECK(run.y.back() == 1.0);
        CHECK(run.w[0] == 1.0);
        for (std::uint64_t k = 2; k <= 200; ++k) {
            REQUIRE((run.w[k - 1] > 0.0) == (run.census.size_by_label[k] > 0));
            REQUIRE(run.w[k - 1] < 1.0);
        }
        // Y nondecreasing, everything in [0,1].
        for (std::uint64_t k = 1; k < 200; ++k) REQUIRE(run.y[k - 1] <= run.y[k]);
        std::uint64_t total = 0;
        for (auto s : run.census.size_by_label) total += s;
        REQUIRE(total == 200);
    }
}

TEST_CASE("coupled N=2 marginals", "[duplication]") {
    // With probability r the second individual founds and W_2 ~ Uniform(0,1);
    // E[W_2 1{founder}] = r/2 = 0.25 at r = 1/2.
    const int reps = 1000000;
    int split = 0;
    RunningStat w2;
    for (int i = 0; i < reps; ++i) {
        const auto run = simulate_coupled({0.5, 2}, mix64(17, i));
        split += run.census.size_by_label[2] > 0;
        w2.add(run.w[1]);
    }
    const double emp = split / static_cast<double>(reps);
    CHECK(std::fabs(emp - 0.5) < 3.0 * std::sqrt(0.25 / reps));
    CHECK(std::fabs(w2.mean() - 0.25) < 3.0 * w2.stderr_of_mean());
}

TEST_CASE("max coupling gap", "[duplication]") {
    CoupledRun run;
    run.x = {0.2, 1.0};
    run.y = {0.5, 1.0};
    CHECK_THAT(max_coupling_gap(run), Catch::Matchers::WithinAbs(0.3, 1e-15));
    run.y = run.x;
    CHECK(max_coupling_gap(run) == 0.0);
}

TEST_CASE("mean coupling gap at N=400 respects the 5/sqrt(N) bound", "[duplication]") {
    RunningStat st;
    for (int i = 0; i < 400; ++i)
        st.add(max_coupling_gap(simulate_coupled({0.3, 400}, mix64(23, i))));
    CHECK(st.mean() > 0.0);
    CHECK(st.mean() + 3.0 * st.stderr_of_mean() <= 5.0 / std::sqrt(400.0));
}

TEST_CASE("both simulators match exact partition probabilities at small n",
          "[duplication][slow]") {
    const int reps = 100000;
    for (const double r : {0.2, 0.5, 0.8}) {
        for (const std::uint64_t n : {3ULL, 4ULL}) {
            std::map<std::string, double> exact;
            for (const auto& p : enumerate_partitions(n)) {
                std::string key;
                for (auto g : p.rgs()) key += static_cast<char>('0' + g);
                exact[key] = dup_partition_prob(r, p);
            }
            std::map<std::string, int> plain, coupled;
            for (int i = 0; i < reps; ++i) {
                ++plain[rgs_key(simulate_duplication({r, n}, mix64(31, i)))];
                ++coupled[rgs_key(simulate_coupled({r, n}, mix64(37, i)).assignment)];
            }
            for (const auto& [key, p] : exact) {
                const double se = std::sqrt(p * (1.0 - p) / reps) + 1e-12;
                const double emp_plain = plain[key] / static_cast<double>(reps);
                const double emp_coupled = coupled[key] / static_cast<double>(reps);
                INFO("r=" << r << " n=" << n << " partition " << key);
                CHECK(std::fabs(emp_plain - p) < 4.0 * se);
                CHECK(std::fabs(emp_coupled - p) < 4.0 * se);
            }
        }
    }
}

TEST_CASE("mean fraction law and bracketing", "[duplication][slow]") {
    // E[X_k] = prod_{j=k+1}^{N}(1 - r/j), with the sandwich
    // (k/N)^r e^{-r^2/k} <= E[X_k] <= (k/N)^r e^{r/k}.
    struct Spot {
        double r;
        std::uint64_t n, k;
    };
    for (const auto& spot : {Spot{0.3, 50, 5}, Spot{0.5, 100, 10}, Spot{0.7, 64, 32}}) {
        RunningStat st;
        for (int i = 0; i < 20000; ++i) {
            const auto c = census(simulate_duplication({spot.r, spot.n}, mix64(41, i)));
            st.add(c.cumulative()[spot.k - 1]);
        }
        const double expect = expected_y(spot.r, spot.n, spot.k);
        INFO("r=" << spot.r << " N=" << spot.n << " k=" << spot.k);
        CHECK(std::fabs(st.mean() - expect) < 3.0 * st.stderr_of_mean());

        const double base = std::pow(static_cast<double>(spot.k) / spot.n, spot.r);
        const double lower = base * std::exp(-spot.r * spot.r / spot.k);
        const double upper = base * std::exp(spot.r / spot.k);
        CHECK(st.mean() >= lower - 3.0 * st.stderr_of_mean());
        CHECK(st.mean() <= upper + 3.0 * st.stderr_of_mean());
    }
}
