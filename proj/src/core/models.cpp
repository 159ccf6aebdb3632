#include "core/models.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "core/errors.hpp"

namespace purechain {

Fidelity::Fidelity(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw std::out_of_range("fidelity " + std::to_string(value) + " outside [0, 1]");
    }
}

void DecoherenceParams::validate() const {
    if (!(gamma >= 0.0)) throw std::invalid_argument("decoherence gamma must be >= 0");
    if (!(kappa > 0.0)) throw std::invalid_argument("decoherence kappa must be > 0");
    if (!(slot_duration > 0.0)) throw std::invalid_argument("slot_duration must be > 0");
}

void LinkModel::validate() const {
    if (!(attenuation >= 0.0)) throw std::invalid_argument("link attenuation must be >= 0");
    if (!(length >= 0.0)) throw std::invalid_argument("link length must be >= 0");
    if (attempts < 1) throw std::invalid_argument("link attempts must be >= 1");
}

void OperationProbabilities::validate() const {
    if (!(swap_success >= 0.0 && swap_success <= 1.0)) {
        throw std::invalid_argument("swap_success must be in [0, 1]");
    }
    if (!(purify_success >= 0.0 && purify_success <= 1.0)) {
        throw std::invalid_argument("purify_success must be in [0, 1]");
    }
}

Fidelity decohere(Fidelity f, double seconds, const DecoherenceParams& params) {
    params.validate();
    if (!(seconds >= 0.0)) throw std::invalid_argument("decoherence time must be >= 0");
    double exponent = std::pow(params.gamma * seconds, params.kappa);
    return Fidelity(f.value() * std::exp(-exponent));
}

Fidelity swap_fidelity(Fidelity f1, Fidelity f2) {
    double a = f1.value();
    double b = f2.value();
    return Fidelity(a * b + (1.0 - a) * (1.0 - b) / 3.0);
}

Fidelity purify_once(Fidelity f) {
    double v = f.value();
    if (v < 0.5) {
        throw std::domain_error("purification requires fidelity >= 0.5, got " +
                                std::to_string(v));
    }
    double num = 10.0 * v * v - 2.0 * v + 1.0;
    double den = 8.0 * v * v - 4.0 * v + 5.0;
    return Fidelity(num / den);
}

Fidelity purify_rounds(Fidelity f, int rounds) {
    if (rounds < 0) throw std::invalid_argument("purification rounds must be >= 0");
    Fidelity out = f;
    for (int i = 0; i < rounds; ++i) out = purify_once(out);
    return out;
}

double entangle_success(const LinkModel& link) {
    link.validate();
    double single = std::exp(-link.attenuation * link.length);
    return 1.0 - std::pow(1.0 - single, static_cast<double>(link.attempts));
}

double path_success(std::span<const LinkModel> links,
                    const OperationProbabilities& ops,
                    std::span<const int> rounds) {
    ops.validate();
    if (rounds.empty() || rounds.size() % 2 == 0) {
        throw DimensionMismatchError("rounds vector must have odd length 2N-3, got " +
                                     std::to_string(rounds.size()));
    }
    std::size_t n_links = (rounds.size() + 1) / 2;
    if (!links.empty() && links.size() != n_links) {
        throw DimensionMismatchError("expected " + std::to_string(n_links) +
                                     " links for a rounds vector of length " +
                                     std::to_string(rounds.size()) + ", got " +
                                     std::to_string(links.size()));
    }

    double prob = 1.0;
    for (const LinkModel& link : links) prob *= entangle_success(link);

    long long total_rounds = 0;
    for (int n : rounds) {
        if (n < 0) throw std::invalid_argument("purification rounds must be >= 0");
        total_rounds += n;
    }
    prob *= std::pow(ops.purify_success, static_cast<double>(total_rounds));

    std::size_t n_swaps = n_links - 1;
    prob *= std::pow(ops.swap_success, static_cast<double>(n_swaps));
    return prob;
}

}  // namespace purechain
