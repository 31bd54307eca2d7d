#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "orsim/linkmodel.hpp"
#include "orsim/topology.hpp"

namespace orsim {

enum class UtilityMetric {
    Progress,  // euclidean distance reduction toward the destination, normalized to (0,1]
    Energy,    // per-node residual energy
};

struct CfsPolicy {
    UtilityMetric utility = UtilityMetric::Progress;
};

/// Raised when a sender has no link-neighbor strictly closer to the
/// destination. The simulator counts this as a routing failure.
class NoProgressNeighbors : public std::runtime_error {
public:
    NoProgressNeighbors() : std::runtime_error("no progress neighbors") {}
};

/// Candidate forwarding set of one sender toward one destination.
/// Members are sorted by descending raw utility U_i (ties by node id).
/// Delivery probabilities are clamped to [0.01, 0.99] on ingestion.
struct CandidateSet {
    NodeId sender = 0;
    NodeId destination = 0;
    std::vector<NodeId> members;
    std::vector<double> probs;
    std::vector<double> utils;

    std::size_t size() const { return members.size(); }
};

CandidateSet build_cfs(const Topology& t, const LinkProbModel& model, NodeId sender,
                       NodeId destination, CfsPolicy policy = {});

/// One boolean adjacency row over the CFS index space. The owner's own
/// bit is always set.
struct NeighborMatrix {
    NodeId owner = 0;
    std::vector<std::uint8_t> bits;
};

std::vector<NeighborMatrix> neighbor_matrices(const Topology& t, const CandidateSet& cfs);

}  // namespace orsim
