#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace purechain {

// Components of a purification strategy for an N-node chain, 2N-3 of them.
// Canonical order lists the adjacent links first, then the long-range pairs
// produced by the swap cascade:
//   n(1,2), n(2,3), ..., n(N-1,N), n(1,3), n(1,4), ..., n(1,N)
int strategy_dimension(int n_nodes);

class Strategy {
public:
    Strategy(int n_nodes, std::vector<int> rounds);

    int n_nodes() const noexcept { return n_nodes_; }
    const std::vector<int>& rounds() const noexcept { return rounds_; }

    // Rounds on adjacent link (i, i+1), i in [1, N-1].
    int base_rounds(int i) const;
    // Rounds on long-range pair (1, j) after the swap that creates it, j in [3, N].
    int long_rounds(int j) const;

    long long total_rounds() const noexcept;
    double mean_rounds() const noexcept;

    bool operator==(const Strategy& other) const = default;

private:
    int n_nodes_;
    std::vector<int> rounds_;
};

// Shifted order interleaves each extension step's two components:
//   n(1,2), n(2,3), n(1,3), n(3,4), n(1,4), n(4,5), n(1,5), ...
// so growing the chain by one node appends exactly two integers.
std::vector<int> to_shifted(const Strategy& strategy);
Strategy from_shifted(int n_nodes, std::span<const int> shifted);

// Appends the two components of one extension step to a shifted vector.
std::vector<int> extend_shifted(std::span<const int> shifted, int link_rounds,
                                int long_rounds);

// Number of strategies with every component in [0, n_max]; nullopt when the
// count (n_max+1)^(2N-3) overflows 64 bits.
std::optional<std::uint64_t> strategy_count(int n_nodes, int n_max);

// Strategy at `index` in lexicographic enumeration order (last component
// varies fastest); index 0 is all zeros.
Strategy strategy_from_index(int n_nodes, int n_max, std::uint64_t index);

}  // namespace purechain
