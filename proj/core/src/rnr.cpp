#include "orsim/rnr.hpp"

#include <algorithm>
#include <stdexcept>

namespace orsim {

namespace {

// Common-neighbor bit row of a subset: AND of the subset's matrix rows.
std::vector<std::uint8_t> and_rows(const std::vector<std::size_t>& subset,
                                   const std::vector<NeighborMatrix>& matrices) {
    const std::size_t m = matrices.empty() ? 0 : matrices.front().bits.size();
    std::vector<std::uint8_t> acc(m, 1);
    for (std::size_t pos : subset) {
        if (pos >= matrices.size() || matrices[pos].bits.size() != m) {
            throw std::invalid_argument("subset position out of range or mismatched row length");
        }
        for (std::size_t k = 0; k < m; ++k) {
            acc[k] &= matrices[pos].bits[k];
        }
    }
    return acc;
}

bool adjacent(const std::vector<NeighborMatrix>& matrices, std::size_t a, std::size_t b) {
    return a != b && matrices[a].bits[b] != 0;
}

}  // namespace

std::size_t matrix_sum(std::span<const NeighborMatrix> rows) {
    if (rows.size() < 2) {
        throw std::invalid_argument("matrix_sum requires at least two rows");
    }
    const std::size_t m = rows.front().bits.size();
    std::vector<std::uint8_t> acc(m, 1);
    for (const auto& row : rows) {
        if (row.bits.size() != m) {
            throw std::invalid_argument("mismatched neighbor matrix lengths");
        }
        for (std::size_t k = 0; k < m; ++k) {
            acc[k] &= row.bits[k];
        }
    }
    std::size_t d = 0;
    for (std::uint8_t b : acc) {
        d += b;
    }
    return d;
}

RelayNetwork classify(std::vector<std::size_t> subset, const std::vector<NeighborMatrix>& matrices) {
    if (subset.size() < 2) {
        throw std::invalid_argument("relay network degree must be at least 2");
    }
    std::sort(subset.begin(), subset.end());
    const auto acc = and_rows(subset, matrices);
    std::size_t d = 0;
    for (std::uint8_t b : acc) {
        d += b;
    }

    // The subset is fully connected exactly when every member's own bit
    // survives the AND; external common neighbors alone can push D past n
    // without that, so D >= n by itself is not a sufficient certificate.
    bool members_survive = true;
    for (std::size_t pos : subset) {
        if (!acc[pos]) {
            members_survive = false;
            break;
        }
    }

    RelayNetwork net;
    net.matrix_sum = d;
    const std::size_t n = subset.size();
    if (!members_survive || d < n) {
        net.kind = NetworkKind::NotRelay;
    } else if (d == n) {
        net.kind = NetworkKind::ONetwork;
    } else {
        net.kind = NetworkKind::SNetwork;
        net.parent_degree = d;
    }
    net.members = std::move(subset);
    return net;
}

EnumerationResult enumerate_relay_networks(const CandidateSet& cfs,
                                           const std::vector<NeighborMatrix>& matrices,
                                           EnumerationCaps caps) {
    if (caps.max_degree < 2 || caps.max_count == 0) {
        throw std::invalid_argument("enumeration caps must be positive");
    }
    if (matrices.size() != cfs.size()) {
        throw std::invalid_argument("matrices do not match candidate set");
    }
    const std::size_t m = matrices.size();

    EnumerationResult result;
    std::vector<std::size_t> current;

    // Depth-first clique extension: only vertices greater than the last
    // member and adjacent to every current member are candidates.
    auto extend = [&](auto&& self, std::size_t from) -> void {
        for (std::size_t v = from; v < m; ++v) {
            if (result.truncated) {
                return;
            }
            bool ok = true;
            for (std::size_t u : current) {
                if (!adjacent(matrices, u, v)) {
                    ok = false;
                    break;
                }
            }
            if (!ok) {
                continue;
            }
            current.push_back(v);
            if (current.size() >= 2) {
                if (result.networks.size() >= caps.max_count) {
                    result.truncated = true;
                    current.pop_back();
                    return;
                }
                result.networks.push_back(classify(current, matrices));
            }
            if (current.size() < caps.max_degree) {
                self(self, v + 1);
            }
            current.pop_back();
        }
    };
    extend(extend, 0);

    std::sort(result.networks.begin(), result.networks.end(),
              [](const RelayNetwork& a, const RelayNetwork& b) {
                  if (a.degree() != b.degree()) return a.degree() < b.degree();
                  return a.members < b.members;
              });
    return result;
}

DegreeCounts count_relay_networks(const CandidateSet& cfs,
                                  const std::vector<NeighborMatrix>& matrices,
                                  EnumerationCaps caps) {
    const auto enumerated = enumerate_relay_networks(cfs, matrices, caps);
    DegreeCounts counts;
    counts.truncated = enumerated.truncated;
    counts.by_degree.assign(caps.max_degree + 1, 0);
    for (const auto& net : enumerated.networks) {
        ++counts.by_degree[net.degree()];
        ++counts.total;
    }
    return counts;
}

bool oracle_is_clique(std::span<const NodeId> subset, const Topology& t) {
    if (subset.size() < 2) {
        throw std::invalid_argument("clique oracle needs at least two nodes");
    }
    std::size_t edges = 0;
    for (std::size_t i = 0; i < subset.size(); ++i) {
        for (std::size_t j = i + 1; j < subset.size(); ++j) {
            if (t.linked(subset[i], subset[j])) {
                ++edges;
            }
        }
    }
    return edges == subset.size() * (subset.size() - 1) / 2;
}

std::vector<std::vector<std::size_t>> maximal_cliques_containing(
    const std::vector<std::size_t>& subset, const std::vector<NeighborMatrix>& matrices) {
    for (std::size_t i = 0; i < subset.size(); ++i) {
        for (std::size_t j = i + 1; j < subset.size(); ++j) {
            if (!adjacent(matrices, subset[i], subset[j])) {
                return {};
            }
        }
    }
    const auto common = and_rows(subset, matrices);
    std::vector<std::size_t> candidates;
    for (std::size_t v = 0; v < common.size(); ++v) {
        if (common[v] && std::find(subset.begin(), subset.end(), v) == subset.end()) {
            candidates.push_back(v);
        }
    }

    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> r = subset;
    // Bron-Kerbosch without pivoting; candidate sets here are small.
    auto bk = [&](auto&& self, std::vector<std::size_t> p, std::vector<std::size_t> x) -> void {
        if (p.empty() && x.empty()) {
            auto clique = r;
            std::sort(clique.begin(), clique.end());
            out.push_back(std::move(clique));
            return;
        }
        auto pending = p;
        for (std::size_t v : pending) {
            std::vector<std::size_t> p2, x2;
            for (std::size_t u : p) {
                if (adjacent(matrices, u, v)) p2.push_back(u);
            }
            for (std::size_t u : x) {
                if (adjacent(matrices, u, v)) x2.push_back(u);
            }
            r.push_back(v);
            self(self, std::move(p2), std::move(x2));
            r.pop_back();
            p.erase(std::find(p.begin(), p.end(), v));
            x.push_back(v);
        }
    };
    bk(bk, candidates, {});
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace orsim
