#include "core/strategy.hpp"

#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "core/errors.hpp"

namespace purechain {

int strategy_dimension(int n_nodes) {
    if (n_nodes < 3) {
        throw std::invalid_argument("a repeater chain needs at least 3 nodes, got " +
                                    std::to_string(n_nodes));
    }
    return 2 * n_nodes - 3;
}

Strategy::Strategy(int n_nodes, std::vector<int> rounds)
    : n_nodes_(n_nodes), rounds_(std::move(rounds)) {
    int dim = strategy_dimension(n_nodes);
    if (static_cast<int>(rounds_.size()) != dim) {
        throw DimensionMismatchError("strategy for " + std::to_string(n_nodes) +
                                     " nodes needs " + std::to_string(dim) +
                                     " components, got " + std::to_string(rounds_.size()));
    }
    for (int n : rounds_) {
        if (n < 0) throw std::invalid_argument("purification rounds must be >= 0");
    }
}

int Strategy::base_rounds(int i) const {
    if (i < 1 || i >= n_nodes_) {
        throw std::out_of_range("adjacent link index " + std::to_string(i) +
                                " outside [1, " + std::to_string(n_nodes_ - 1) + "]");
    }
    return rounds_[static_cast<std::size_t>(i) - 1];
}

int Strategy::long_rounds(int j) const {
    if (j < 3 || j > n_nodes_) {
        throw std::out_of_range("long-range pair endpoint " + std::to_string(j) +
                                " outside [3, " + std::to_string(n_nodes_) + "]");
    }
    return rounds_[static_cast<std::size_t>(n_nodes_) - 1 + (j - 3)];
}

long long Strategy::total_rounds() const noexcept {
    return std::accumulate(rounds_.begin(), rounds_.end(), 0LL);
}

double Strategy::mean_rounds() const noexcept {
    return static_cast<double>(total_rounds()) / static_cast<double>(rounds_.size());
}

std::vector<int> to_shifted(const Strategy& strategy) {
    int n = strategy.n_nodes();
    std::vector<int> shifted;
    shifted.reserve(strategy.rounds().size());
    shifted.push_back(strategy.base_rounds(1));
    shifted.push_back(strategy.base_rounds(2));
    shifted.push_back(strategy.long_rounds(3));
    for (int k = 4; k <= n; ++k) {
        shifted.push_back(strategy.base_rounds(k - 1));
        shifted.push_back(strategy.long_rounds(k));
    }
    return shifted;
}

Strategy from_shifted(int n_nodes, std::span<const int> shifted) {
    int dim = strategy_dimension(n_nodes);
    if (static_cast<int>(shifted.size()) != dim) {
        throw DimensionMismatchError("shifted strategy for " + std::to_string(n_nodes) +
                                     " nodes needs " + std::to_string(dim) +
                                     " components, got " + std::to_string(shifted.size()));
    }
    std::vector<int> rounds(static_cast<std::size_t>(dim));
    rounds[0] = shifted[0];
    rounds[1] = shifted[1];
    rounds[static_cast<std::size_t>(n_nodes) - 1] = shifted[2];
    for (int k = 4; k <= n_nodes; ++k) {
        rounds[static_cast<std::size_t>(k) - 2] = shifted[3 + 2 * (k - 4)];
        rounds[static_cast<std::size_t>(n_nodes) - 1 + (k - 3)] = shifted[4 + 2 * (k - 4)];
    }
    return Strategy(n_nodes, std::move(rounds));
}

std::vector<int> extend_shifted(std::span<const int> shifted, int link_rounds,
                                int long_rounds) {
    if (shifted.size() < 3 || shifted.size() % 2 == 0) {
        throw DimensionMismatchError("shifted strategy must have odd length >= 3, got " +
                                     std::to_string(shifted.size()));
    }
    if (link_rounds < 0 || long_rounds < 0) {
        throw std::invalid_argument("purification rounds must be >= 0");
    }
    std::vector<int> out(shifted.begin(), shifted.end());
    out.push_back(link_rounds);
    out.push_back(long_rounds);
    return out;
}

std::optional<std::uint64_t> strategy_count(int n_nodes, int n_max) {
    int dim = strategy_dimension(n_nodes);
    if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
    std::uint64_t base = static_cast<std::uint64_t>(n_max) + 1;
    std::uint64_t count = 1;
    for (int i = 0; i < dim; ++i) {
        if (count > std::numeric_limits<std::uint64_t>::max() / base) return std::nullopt;
        count *= base;
    }
    return count;
}

Strategy strategy_from_index(int n_nodes, int n_max, std::uint64_t index) {
    int dim = strategy_dimension(n_nodes);
    std::uint64_t base = static_cast<std::uint64_t>(n_max) + 1;
    std::vector<int> rounds(static_cast<std::size_t>(dim));
    for (int i = dim - 1; i >= 0; --i) {
        rounds[static_cast<std::size_t>(i)] = static_cast<int>(index % base);
        index /= base;
    }
    if (index != 0) throw std::out_of_range("strategy index outside enumeration range");
    return Strategy(n_nodes, std::move(rounds));
}

}  // namespace purechain
