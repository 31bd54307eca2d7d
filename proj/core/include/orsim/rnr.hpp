#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "orsim/cfs.hpp"

namespace orsim {

enum class NetworkKind { NotRelay, ONetwork, SNetwork };

/// A subset of CFS member positions classified by the neighbor-matrix sum.
/// For an s-network, parent_degree is the matrix sum D, the degree of the
/// o-network it derives from.
struct RelayNetwork {
    std::vector<std::size_t> members;  // CFS positions, sorted ascending
    NetworkKind kind = NetworkKind::NotRelay;
    std::size_t matrix_sum = 0;
    std::size_t parent_degree = 0;  // meaningful for SNetwork only

    std::size_t degree() const { return members.size(); }
};

/// Position-wise AND across all rows, then popcount. Requires at least
/// two rows of equal length.
std::size_t matrix_sum(std::span<const NeighborMatrix> rows);

/// Classifies the subset of CFS positions:
///   D < n  -> not a relay network
///   D = n  -> o-network
///   D > n  -> s-network derived from an o-network of degree D
RelayNetwork classify(std::vector<std::size_t> subset, const std::vector<NeighborMatrix>& matrices);

struct EnumerationCaps {
    std::size_t max_degree = 8;
    std::size_t max_count = 4096;
};

struct EnumerationResult {
    std::vector<RelayNetwork> networks;  // ascending degree, then lexicographic
    bool truncated = false;
};

/// Enumerates every fully connected subset of size 2..max_degree of the
/// CFS link graph and classifies each one.
EnumerationResult enumerate_relay_networks(const CandidateSet& cfs,
                                           const std::vector<NeighborMatrix>& matrices,
                                           EnumerationCaps caps = {});

struct DegreeCounts {
    std::vector<std::size_t> by_degree;  // by_degree[d] = number of d-degree relay networks
    std::size_t total = 0;
    bool truncated = false;
};

DegreeCounts count_relay_networks(const CandidateSet& cfs,
                                  const std::vector<NeighborMatrix>& matrices,
                                  EnumerationCaps caps = {});

/// Test-support oracle: true iff all pairs in the subset are linked,
/// i.e. the induced edge count equals n(n-1)/2.
bool oracle_is_clique(std::span<const NodeId> subset, const Topology& t);

/// All maximal cliques of the CFS link graph that contain the given
/// subset (subset need not itself be a clique member-wise; if it is not a
/// clique the result is empty).
std::vector<std::vector<std::size_t>> maximal_cliques_containing(
    const std::vector<std::size_t>& subset, const std::vector<NeighborMatrix>& matrices);

}  // namespace orsim
