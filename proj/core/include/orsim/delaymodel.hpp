#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace orsim {

/// Delivery probabilities of a relay set in forwarding-priority order
/// (probs[0] is the first-priority node) plus the waiting-slot duration
/// in seconds.
struct PriorityProfile {
    std::vector<double> probs;
    double slot = 0.045;
};

/// Probability that at least one member receives: 1 - prod(1 - P_i).
/// Order-independent.
double network_pdp(std::span<const double> probs);

/// Expected one-hop relaying delay of a single transmission try, in
/// seconds. The i-th priority receiver waits (i-1) slots; if nobody
/// receives, the full n slots elapse.
double relaying_delay(const PriorityProfile& profile);

/// Permutation of indices sorting probs descending (ties by original
/// index ascending). This ordering minimizes the relaying delay.
std::vector<std::size_t> optimal_priority_order(std::span<const double> probs);

/// Delay reduction when probs[i] increases by dp while the others stay
/// fixed (0-based i). Positive means raising the probability lowers the
/// expected delay. Computed by direct double evaluation of the delay
/// formula.
double delay_sensitivity(const PriorityProfile& profile, std::size_t i, double dp);

/// delay_sensitivity(i) - delay_sensitivity(j) for i < j (0-based).
double sensitivity_gap(const PriorityProfile& profile, std::size_t i, std::size_t j, double dp);

/// Utility deteriorated by the one-hop ETX of the node: U * P.
double adjusted_utility(double utility, double prob);

}  // namespace orsim
