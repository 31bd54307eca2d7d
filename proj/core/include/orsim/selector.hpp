#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "orsim/delaymodel.hpp"
#include "orsim/rnr.hpp"

namespace orsim {

/// Per-relay-network figures of merit, all computed with the network's
/// node priorities already applied.
struct NetworkMetrics {
    double one_hop_etx = 0.0;       // t_G = 1 / P_G
    double effective_delay = 0.0;   // DT*_G = DT_G * t_G, seconds
    double expected_utility = 0.0;  // U-bar_G
    double effective_utility = 0.0; // U*_G = U-bar_G * P_G
};

double one_hop_etx(std::span<const double> probs);
double effective_delay(const PriorityProfile& profile);

/// U-bar = U_1 P_1 + sum_{i>=2} U_i P_i prod_{j<i}(1-P_j); utils and
/// probs are in priority order.
double expected_network_utility(std::span<const double> utils, std::span<const double> probs);
double effective_utility(std::span<const double> utils, std::span<const double> probs);

/// Relative variance: (1/k) sum ((x_i - mean)/mean)^2. Requires at least
/// two values and a nonzero mean.
double relative_variance(std::span<const double> values);

struct ResolutionRatio {
    double value = 1.0;
    bool degenerate = false;  // both relative variances were zero
};

ResolutionRatio resolution_ratio(double v_r_delay, double v_r_utility);

enum class RankDirection { HigherBetter, LowerBetter };

/// Desirability ranks 1..k; the most desirable value gets rank k. Ties
/// share the lower rank, resolved deterministically by index.
std::vector<int> order_numbers(std::span<const double> values, RankDirection direction);

/// Rank-weighted scores of two metric vectors: weights are the relative
/// variances, ranks come from order_numbers with the given directions.
/// For a single network both weights and ranks degenerate to 1.
std::vector<double> weighted_rank_scores(std::span<const double> metric_delay,
                                         RankDirection delay_direction,
                                         std::span<const double> metric_utility,
                                         RankDirection utility_direction);

/// Final per-network utilities U^F with the delay metric ranked
/// lower-better and the utility metric higher-better.
std::vector<double> final_utilities(std::span<const double> effective_delays,
                                    std::span<const double> effective_utilities);

/// Raw-value weighted sum, kept for comparison with the rank-based form.
double legacy_weighted_utility(double effective_delay, double effective_utility,
                               double weight_delay, double weight_utility);

struct SelectorConfig {
    double slot = 0.045;
    EnumerationCaps caps;
    /// Optional pre-filter: keep only networks whose top-k priority nodes
    /// have descending delivery probabilities. 0 disables it.
    std::size_t require_descending_head = 0;
};

struct SelectionResult {
    RelayNetwork chosen;
    NetworkMetrics chosen_metrics;
    /// Node priorities inside the chosen network: CFS positions in
    /// descending adjusted-utility (U_i * P_i) order.
    std::vector<std::size_t> node_priorities;
    bool fallback_single = false;  // no relay network of degree >= 2 existed

    // Full decision table, aligned index-wise.
    std::vector<RelayNetwork> candidates;
    std::vector<NetworkMetrics> metrics;
    std::vector<double> final_utility;
    std::vector<int> delay_ranks;
    std::vector<int> utility_ranks;
    double v_r_delay = 1.0;
    double v_r_utility = 1.0;
    ResolutionRatio xi;
    bool truncated = false;
};

/// Enumerates the relay networks of the CFS, scores each with the
/// rank-weighted utility, and returns the argmax (ties: lower effective
/// delay, then lexicographic members). Falls back to the single best
/// node by adjusted utility when no relay network of degree >= 2 exists.
SelectionResult select_relay_network(const CandidateSet& cfs,
                                     const std::vector<NeighborMatrix>& matrices,
                                     SelectorConfig config = {});

}  // namespace orsim
