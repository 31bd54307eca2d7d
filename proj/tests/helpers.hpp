#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "orsim/cfs.hpp"
#include "orsim/rng.hpp"
#include "orsim/topology.hpp"

namespace testutil {

/// Neighbor rows for an arbitrary symmetric graph on vertices 0..n-1,
/// bypassing geometry. Self-bits set, as the CFS builder does.
inline std::vector<orsim::NeighborMatrix> matrices_from_edges(
    std::size_t n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<orsim::NeighborMatrix> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        rows[i].owner = static_cast<orsim::NodeId>(i);
        rows[i].bits.assign(n, 0);
        rows[i].bits[i] = 1;
    }
    for (auto [a, b] : edges) {
        rows[a].bits[b] = 1;
        rows[b].bits[a] = 1;
    }
    return rows;
}

/// Matching fake candidate set (members = vertex ids, unit probs/utils).
inline orsim::CandidateSet fake_cfs(std::size_t n) {
    orsim::CandidateSet cfs;
    for (std::size_t i = 0; i < n; ++i) {
        cfs.members.push_back(static_cast<orsim::NodeId>(i));
        cfs.probs.push_back(0.5);
        cfs.utils.push_back(1.0);
    }
    return cfs;
}

inline bool edge_in(const std::vector<std::pair<int, int>>& edges, std::size_t a, std::size_t b) {
    for (auto [x, y] : edges) {
        if ((static_cast<std::size_t>(x) == a && static_cast<std::size_t>(y) == b) ||
            (static_cast<std::size_t>(x) == b && static_cast<std::size_t>(y) == a)) {
            return true;
        }
    }
    return false;
}

/// Independent clique check straight off the edge list.
inline bool is_clique(const std::vector<std::pair<int, int>>& edges,
                      const std::vector<std::size_t>& subset) {
    for (std::size_t i = 0; i < subset.size(); ++i) {
        for (std::size_t j = i + 1; j < subset.size(); ++j) {
            if (!edge_in(edges, subset[i], subset[j])) return false;
        }
    }
    return true;
}

inline std::vector<std::pair<int, int>> random_edges(std::size_t n, double p,
                                                     orsim::RngStream& rng) {
    std::vector<std::pair<int, int>> edges;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (rng.bernoulli(p)) edges.push_back({static_cast<int>(i), static_cast<int>(j)});
        }
    }
    return edges;
}

/// Uniform random topology over a square, fixed shared range.
inline orsim::Topology random_topology(unsigned nodes, double side, double range,
                                       orsim::RngStream& rng) {
    std::vector<orsim::Vec2> positions;
    std::vector<double> ranges;
    for (unsigned i = 0; i < nodes; ++i) {
        positions.push_back({rng.uniform_real(0.0, side), rng.uniform_real(0.0, side)});
        ranges.push_back(range);
    }
    return orsim::Topology::build(std::move(positions), std::move(ranges), {side, side});
}

/// A tight cluster where every pair is linked.
inline orsim::Topology complete_topology(unsigned nodes) {
    std::vector<orsim::Vec2> positions;
    std::vector<double> ranges;
    for (unsigned i = 0; i < nodes; ++i) {
        positions.push_back({1.0 + 0.1 * i, 1.0});
        ranges.push_back(50.0);
    }
    return orsim::Topology::build(std::move(positions), std::move(ranges), {100.0, 100.0});
}

}  // namespace testutil
