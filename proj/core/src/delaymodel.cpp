#include "orsim/delaymodel.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace orsim {

namespace {

void check_probs(std::span<const double> probs) {
    if (probs.empty()) {
        throw std::invalid_argument("priority profile must have at least one node");
    }
    for (double p : probs) {
        if (!(p > 0.0 && p < 1.0)) {
            throw std::invalid_argument("delivery probability must be in (0,1)");
        }
    }
}

}  // namespace

double network_pdp(std::span<const double> probs) {
    check_probs(probs);
    double miss = 1.0;
    for (double p : probs) {
        miss *= 1.0 - p;
    }
    return 1.0 - miss;
}

double relaying_delay(const PriorityProfile& profile) {
    check_probs(profile.probs);
    if (!(profile.slot > 0.0)) {
        throw std::invalid_argument("slot duration must be positive");
    }
    const auto& p = profile.probs;
    const std::size_t n = p.size();
    double slots = 0.0;
    double miss = 1.0;  // prod_{j<=i}(1 - P_j)
    for (std::size_t i = 1; i < n; ++i) {
        miss *= 1.0 - p[i - 1];
        slots += static_cast<double>(i) * p[i] * miss;
    }
    miss *= 1.0 - p[n - 1];
    slots += static_cast<double>(n) * miss;
    return slots * profile.slot;
}

std::vector<std::size_t> optimal_priority_order(std::span<const double> probs) {
    check_probs(probs);
    std::vector<std::size_t> order(probs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return probs[a] > probs[b]; });
    return order;
}

double delay_sensitivity(const PriorityProfile& profile, std::size_t i, double dp) {
    check_probs(profile.probs);
    if (i >= profile.probs.size()) {
        throw std::invalid_argument("priority index out of range");
    }
    const double raised = profile.probs[i] + dp;
    if (!(raised > 0.0 && raised < 1.0)) {
        throw std::invalid_argument("probability increment leaves (0,1)");
    }
    PriorityProfile after = profile;
    after.probs[i] = raised;
    return relaying_delay(profile) - relaying_delay(after);
}

double sensitivity_gap(const PriorityProfile& profile, std::size_t i, std::size_t j, double dp) {
    if (i >= j) {
        throw std::invalid_argument("sensitivity gap requires i < j");
    }
    return delay_sensitivity(profile, i, dp) - delay_sensitivity(profile, j, dp);
}

double adjusted_utility(double utility, double prob) {
    if (!(utility > 0.0)) {
        throw std::invalid_argument("utility must be positive");
    }
    if (!(prob > 0.0 && prob < 1.0)) {
        throw std::invalid_argument("delivery probability must be in (0,1)");
    }
    return utility * prob;
}

}  // namespace orsim
