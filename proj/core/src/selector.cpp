#include "orsim/selector.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace orsim {

double one_hop_etx(std::span<const double> probs) {
    return 1.0 / network_pdp(probs);
}

double effective_delay(const PriorityProfile& profile) {
    return relaying_delay(profile) * one_hop_etx(profile.probs);
}

double expected_network_utility(std::span<const double> utils, std::span<const double> probs) {
    if (utils.size() != probs.size() || utils.empty()) {
        throw std::invalid_argument("utils and probs must be nonempty and aligned");
    }
    double expected = 0.0;
    double miss = 1.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        expected += utils[i] * probs[i] * miss;
        miss *= 1.0 - probs[i];
    }
    return expected;
}

double effective_utility(std::span<const double> utils, std::span<const double> probs) {
    return expected_network_utility(utils, probs) * network_pdp(probs);
}

double relative_variance(std::span<const double> values) {
    if (values.size() < 2) {
        throw std::invalid_argument("relative variance needs at least two values");
    }
    const double mean =
        std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    if (mean == 0.0) {
        throw std::invalid_argument("relative variance undefined for zero mean");
    }
    double acc = 0.0;
    for (double v : values) {
        const double rel = (v - mean) / mean;
        acc += rel * rel;
    }
    return acc / static_cast<double>(values.size());
}

ResolutionRatio resolution_ratio(double v_r_delay, double v_r_utility) {
    if (v_r_delay < 0.0 || v_r_utility < 0.0) {
        throw std::invalid_argument("relative variances must be nonnegative");
    }
    if (v_r_delay == v_r_utility) {
        return {1.0, v_r_delay == 0.0};
    }
    const double lo = std::min(v_r_delay, v_r_utility);
    const double hi = std::max(v_r_delay, v_r_utility);
    if (lo == 0.0) {
        // One metric is constant across networks; the other fully decides.
        return {std::numeric_limits<double>::infinity(), false};
    }
    return {hi / lo, false};
}

std::vector<int> order_numbers(std::span<const double> values, RankDirection direction) {
    if (values.empty()) {
        throw std::invalid_argument("order_numbers needs at least one value");
    }
    const std::size_t k = values.size();
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    // Least desirable first, so position+1 is the rank.
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (values[a] != values[b]) {
            return direction == RankDirection::HigherBetter ? values[a] < values[b]
                                                            : values[a] > values[b];
        }
        return a < b;
    });
    std::vector<int> ranks(k, 0);
    for (std::size_t pos = 0; pos < k; ++pos) {
        const std::size_t i = idx[pos];
        if (pos > 0 && values[idx[pos - 1]] == values[i]) {
            ranks[i] = ranks[idx[pos - 1]];  // ties share the lower rank
        } else {
            ranks[i] = static_cast<int>(pos) + 1;
        }
    }
    return ranks;
}

std::vector<double> weighted_rank_scores(std::span<const double> metric_delay,
                                         RankDirection delay_direction,
                                         std::span<const double> metric_utility,
                                         RankDirection utility_direction) {
    if (metric_delay.size() != metric_utility.size() || metric_delay.empty()) {
        throw std::invalid_argument("metric vectors must be nonempty and aligned");
    }
    const std::size_t k = metric_delay.size();
    if (k == 1) {
        return {2.0};  // both weights and both ranks degenerate to 1
    }
    const double w_delay = relative_variance(metric_delay);
    const double w_utility = relative_variance(metric_utility);
    const auto ranks_delay = order_numbers(metric_delay, delay_direction);
    const auto ranks_utility = order_numbers(metric_utility, utility_direction);
    std::vector<double> scores(k);
    for (std::size_t i = 0; i < k; ++i) {
        scores[i] = w_delay * ranks_delay[i] + w_utility * ranks_utility[i];
    }
    return scores;
}

std::vector<double> final_utilities(std::span<const double> effective_delays,
                                    std::span<const double> effective_utilities) {
    return weighted_rank_scores(effective_delays, RankDirection::LowerBetter,
                                effective_utilities, RankDirection::HigherBetter);
}

double legacy_weighted_utility(double effective_delay, double effective_utility,
                               double weight_delay, double weight_utility) {
    if (weight_delay < 0.0 || weight_utility < 0.0) {
        throw std::invalid_argument("weights must be nonnegative");
    }
    return weight_delay * effective_delay + weight_utility * effective_utility;
}

namespace {

// Priorities inside a network: descending U_i * P_i, ties by CFS position.
std::vector<std::size_t> network_priorities(const CandidateSet& cfs,
                                            const std::vector<std::size_t>& members) {
    std::vector<std::size_t> order = members;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double ua = adjusted_utility(cfs.utils[a], cfs.probs[a]);
        const double ub = adjusted_utility(cfs.utils[b], cfs.probs[b]);
        if (ua != ub) return ua > ub;
        return a < b;
    });
    return order;
}

NetworkMetrics compute_metrics(const CandidateSet& cfs, const std::vector<std::size_t>& priorities,
                               double slot) {
    PriorityProfile profile;
    profile.slot = slot;
    std::vector<double> utils;
    for (std::size_t pos : priorities) {
        profile.probs.push_back(cfs.probs[pos]);
        utils.push_back(cfs.utils[pos]);
    }
    NetworkMetrics metrics;
    metrics.one_hop_etx = one_hop_etx(profile.probs);
    metrics.effective_delay = effective_delay(profile);
    metrics.expected_utility = expected_network_utility(utils, profile.probs);
    metrics.effective_utility = effective_utility(utils, profile.probs);
    return metrics;
}

}  // namespace

SelectionResult select_relay_network(const CandidateSet& cfs,
                                     const std::vector<NeighborMatrix>& matrices,
                                     SelectorConfig config) {
    if (cfs.size() == 0) {
        throw std::invalid_argument("no candidates");
    }

    SelectionResult result;
    auto enumerated = enumerate_relay_networks(cfs, matrices, config.caps);
    result.truncated = enumerated.truncated;

    for (auto& net : enumerated.networks) {
        if (config.require_descending_head > 0) {
            const auto prio = network_priorities(cfs, net.members);
            const std::size_t head = std::min(config.require_descending_head, prio.size());
            bool descending = true;
            for (std::size_t i = 1; i < head; ++i) {
                if (cfs.probs[prio[i]] > cfs.probs[prio[i - 1]]) {
                    descending = false;
                    break;
                }
            }
            if (!descending) {
                continue;
            }
        }
        result.candidates.push_back(std::move(net));
    }

    if (result.candidates.empty()) {
        // Degenerate case: forward through the single best node.
        std::size_t best = 0;
        double best_util = -1.0;
        for (std::size_t pos = 0; pos < cfs.size(); ++pos) {
            const double u = adjusted_utility(cfs.utils[pos], cfs.probs[pos]);
            if (u > best_util) {
                best_util = u;
                best = pos;
            }
        }
        result.fallback_single = true;
        result.chosen.members = {best};
        result.chosen.kind = NetworkKind::ONetwork;
        result.chosen.matrix_sum = 1;
        result.node_priorities = {best};
        result.chosen_metrics = compute_metrics(cfs, result.node_priorities, config.slot);
        result.final_utility = {2.0};
        result.delay_ranks = {1};
        result.utility_ranks = {1};
        return result;
    }

    std::vector<double> delays, utilities;
    std::vector<std::vector<std::size_t>> priorities;
    for (const auto& net : result.candidates) {
        priorities.push_back(network_priorities(cfs, net.members));
        const auto metrics = compute_metrics(cfs, priorities.back(), config.slot);
        delays.push_back(metrics.effective_delay);
        utilities.push_back(metrics.effective_utility);
        result.metrics.push_back(metrics);
    }

    const std::size_t k = result.candidates.size();
    if (k == 1) {
        result.final_utility = {2.0};
        result.delay_ranks = {1};
        result.utility_ranks = {1};
    } else {
        result.v_r_delay = relative_variance(delays);
        result.v_r_utility = relative_variance(utilities);
        result.xi = resolution_ratio(result.v_r_delay, result.v_r_utility);
        result.delay_ranks = order_numbers(delays, RankDirection::LowerBetter);
        result.utility_ranks = order_numbers(utilities, RankDirection::HigherBetter);
        result.final_utility.resize(k);
        for (std::size_t i = 0; i < k; ++i) {
            result.final_utility[i] = result.v_r_delay * result.delay_ranks[i] +
                                      result.v_r_utility * result.utility_ranks[i];
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < k; ++i) {
        const double du = result.final_utility[i] - result.final_utility[best];
        if (du > 0.0) {
            best = i;
        } else if (du == 0.0) {
            if (delays[i] < delays[best] ||
                (delays[i] == delays[best] &&
                 result.candidates[i].members < result.candidates[best].members)) {
                best = i;
            }
        }
    }
    result.chosen = result.candidates[best];
    result.chosen_metrics = result.metrics[best];
    result.node_priorities = priorities[best];
    return result;
}

}  // namespace orsim
