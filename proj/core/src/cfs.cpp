#include "orsim/cfs.hpp"

#include <algorithm>
#include <numeric>

namespace orsim {

namespace {
constexpr double kProbFloor = 0.01;
constexpr double kProbCeil = 0.99;
}  // namespace

CandidateSet build_cfs(const Topology& t, const LinkProbModel& model, NodeId sender,
                       NodeId destination, CfsPolicy policy) {
    if (sender == destination) {
        throw std::invalid_argument("sender equals destination");
    }
    const double d_sender = distance(t.position(sender), t.position(destination));

    CandidateSet cfs;
    cfs.sender = sender;
    cfs.destination = destination;
    for (NodeId nb : t.neighbors(sender)) {
        const double d_nb = distance(t.position(nb), t.position(destination));
        if (d_nb >= d_sender) {
            continue;
        }
        double util = 0.0;
        switch (policy.utility) {
            case UtilityMetric::Progress:
                util = (d_sender - d_nb) / d_sender;
                break;
            case UtilityMetric::Energy:
                util = t.energy(nb);
                break;
        }
        if (!(util > 0.0)) {
            throw std::invalid_argument("node utility must be positive");
        }
        cfs.members.push_back(nb);
        cfs.utils.push_back(util);
        cfs.probs.push_back(std::clamp(link_probability(model, t, sender, nb), kProbFloor, kProbCeil));
    }
    if (cfs.members.empty()) {
        throw NoProgressNeighbors{};
    }

    std::vector<std::size_t> order(cfs.members.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (cfs.utils[a] != cfs.utils[b]) return cfs.utils[a] > cfs.utils[b];
        return cfs.members[a] < cfs.members[b];
    });
    CandidateSet sorted;
    sorted.sender = cfs.sender;
    sorted.destination = cfs.destination;
    for (std::size_t idx : order) {
        sorted.members.push_back(cfs.members[idx]);
        sorted.probs.push_back(cfs.probs[idx]);
        sorted.utils.push_back(cfs.utils[idx]);
    }
    return sorted;
}

std::vector<NeighborMatrix> neighbor_matrices(const Topology& t, const CandidateSet& cfs) {
    if (cfs.members.empty()) {
        throw std::invalid_argument("empty candidate set");
    }
    const std::size_t m = cfs.members.size();
    std::vector<NeighborMatrix> rows(m);
    for (std::size_t i = 0; i < m; ++i) {
        rows[i].owner = cfs.members[i];
        rows[i].bits.assign(m, 0);
        for (std::size_t j = 0; j < m; ++j) {
            rows[i].bits[j] = (i == j || t.linked(cfs.members[i], cfs.members[j])) ? 1 : 0;
        }
    }
    return rows;
}

}  // namespace orsim
