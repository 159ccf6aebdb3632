#pragma once

#include <span>
#include <vector>

namespace purechain {

// Scalar in [0, 1]. Construction and every model operation keep the invariant.
class Fidelity {
public:
    explicit Fidelity(double value);
    double value() const noexcept { return value_; }

private:
    double value_;
};

// Exponential memory decay: F -> F * exp(-(gamma * t)^kappa).
struct DecoherenceParams {
    double gamma = 0.0;             // decay rate, 1/s
    double kappa = 1.0;             // stretch exponent
    double slot_duration = 1e-3;    // seconds per time slot

    void validate() const;
};

// Physical link between adjacent nodes; drives the entanglement success model.
struct LinkModel {
    double attenuation = 0.0;   // per km
    double length = 0.0;        // km
    int attempts = 1;           // multiplexed generation attempts per slot

    void validate() const;
};

struct OperationProbabilities {
    double swap_success = 1.0;
    double purify_success = 1.0;

    void validate() const;
};

Fidelity decohere(Fidelity f, double seconds, const DecoherenceParams& params);

// Entanglement swap of two pairs sharing a node: F1*F2 + (1-F1)(1-F2)/3.
Fidelity swap_fidelity(Fidelity f1, Fidelity f2);

// One recurrence purification round: (10F^2 - 2F + 1) / (8F^2 - 4F + 5).
// Requires F >= 0.5; below that the recurrence diverges from the target state.
Fidelity purify_once(Fidelity f);

Fidelity purify_rounds(Fidelity f, int rounds);

// Probability that a link produces at least one pair in a slot:
// 1 - (1 - exp(-attenuation * length))^attempts.
double entangle_success(const LinkModel& link);

// Probability that one end-to-end delivery attempt succeeds along the chain:
// product of per-link generation, purify_success^(total rounds) and
// swap_success^(N-2). `rounds` is the flat vector over all 2N-3 components;
// `links` may be empty, which models ideal generation.
double path_success(std::span<const LinkModel> links,
                    const OperationProbabilities& ops,
                    std::span<const int> rounds);

}  // namespace purechain
