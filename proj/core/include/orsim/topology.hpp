#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace orsim {

using NodeId = std::uint32_t;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

double distance(const Vec2& a, const Vec2& b);

struct Area {
    double width = 0.0;
    double height = 0.0;

    bool contains(const Vec2& p) const {
        return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
    }
};

/// Static node topology. Links follow the bi-directional rule: (i,j) is a
/// link iff the euclidean distance is within both nodes' transmission
/// ranges. Immutable after construction.
class Topology {
public:
    static Topology build(std::vector<Vec2> positions, std::vector<double> ranges,
                          Area area, std::vector<double> energies = {});

    /// Loads a plain-text node file: one line per node `id x y r [energy]`,
    /// whitespace-separated, '#' starts a comment. Node ids must be dense
    /// 0..N-1 (any order).
    static Topology load(const std::string& path);

    std::size_t size() const { return positions_.size(); }
    const Vec2& position(NodeId i) const { return positions_[i]; }
    double range(NodeId i) const { return ranges_[i]; }
    double energy(NodeId i) const { return energies_[i]; }
    const Area& area() const { return area_; }

    bool linked(NodeId i, NodeId j) const {
        return i != j && adjacency_[static_cast<std::size_t>(i) * positions_.size() + j] != 0;
    }
    const std::vector<NodeId>& neighbors(NodeId i) const { return neighbors_[i]; }
    std::size_t link_count() const { return link_count_; }

private:
    Topology() = default;

    std::vector<Vec2> positions_;
    std::vector<double> ranges_;
    std::vector<double> energies_;
    Area area_;
    std::vector<std::uint8_t> adjacency_;  // row-major N*N, symmetric, zero diagonal
    std::vector<std::vector<NodeId>> neighbors_;
    std::size_t link_count_ = 0;
};

}  // namespace orsim
