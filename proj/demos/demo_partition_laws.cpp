// Exact partition probabilities for n = 3 under the duplication model and
// the Ewens sampling formula, next to empirical frequencies, showing the
// duplication partition's non-exchangeability ({1,2|3} vs {1,3|2}).

#include <cstdio>
#include <map>
#include <string>

#include "yulefam/duplication.hpp"
#include "yulefam/partitions.hpp"

int main() {
    using namespace yulefam;
    const double r = 0.5;
    const int reps = 200000;

    std::map<std::string, int> freq;
    for (int i = 0; i < reps; ++i) {
        const auto p = SetPartition::from_assignment(simulate_duplication({r, 3}, mix64(7, i)));
        std::string key;
        for (const auto& b : p.blocks) {
            for (auto e : b) key += std::to_string(e);
            key += "|";
        }
        ++freq[key];
    }

    std::printf("%-12s %10s %10s %10s\n", "partition", "dup exact", "empirical", "ewens(th=1)");
    for (const auto& p : enumerate_partitions(3)) {
        std::string key;
        for (const auto& b : p.blocks) {
            for (auto e : b) key += std::to_string(e);
            key += "|";
        }
        std::printf("%-12s %10.5f %10.5f %10.5f\n", key.c_str(), dup_partition_prob(r, p),
                    static_cast<double>(freq[key]) / reps, ewens_prob(1.0, p));
    }
    return 0;
}
