#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace purechain {

// Thrown when a rounds vector does not match the 2N-3 layout of its path.
class DimensionMismatchError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Thrown when an exhaustive search would exceed the configured evaluation cap.
class BudgetExceededError : public std::runtime_error {
public:
    BudgetExceededError(std::uint64_t requested, std::uint64_t cap)
        : std::runtime_error("search space of " + std::to_string(requested) +
                             " evaluations exceeds budget cap " + std::to_string(cap) +
                             "; raise the cap or shrink n_max / the node count"),
          requested_(requested),
          cap_(cap) {}

    std::uint64_t requested() const noexcept { return requested_; }
    std::uint64_t cap() const noexcept { return cap_; }

private:
    std::uint64_t requested_;
    std::uint64_t cap_;
};

}  // namespace purechain
