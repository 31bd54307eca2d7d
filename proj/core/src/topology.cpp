#include "orsim/topology.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace orsim {

double distance(const Vec2& a, const Vec2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

Topology Topology::build(std::vector<Vec2> positions, std::vector<double> ranges,
                         Area area, std::vector<double> energies) {
    if (positions.empty()) {
        throw std::invalid_argument("empty topology");
    }
    const std::size_t n = positions.size();
    if (ranges.size() != n) {
        throw std::invalid_argument("ranges size does not match node count");
    }
    if (energies.empty()) {
        energies.assign(n, 1.0);
    } else if (energies.size() != n) {
        throw std::invalid_argument("energies size does not match node count");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!area.contains(positions[i])) {
            throw std::invalid_argument("node position outside area");
        }
        if (!(ranges[i] > 0.0)) {
            throw std::invalid_argument("transmission range must be positive");
        }
    }

    Topology t;
    t.positions_ = std::move(positions);
    t.ranges_ = std::move(ranges);
    t.energies_ = std::move(energies);
    t.area_ = area;
    t.adjacency_.assign(n * n, 0);
    t.neighbors_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = distance(t.positions_[i], t.positions_[j]);
            if (d <= t.ranges_[i] && d <= t.ranges_[j]) {
                t.adjacency_[i * n + j] = 1;
                t.adjacency_[j * n + i] = 1;
                t.neighbors_[i].push_back(static_cast<NodeId>(j));
                t.neighbors_[j].push_back(static_cast<NodeId>(i));
                ++t.link_count_;
            }
        }
    }
    return t;
}

Topology Topology::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open node file: " + path);
    }
    struct Row {
        Vec2 pos;
        double range = 0.0;
        double energy = 1.0;
        bool seen = false;
    };
    std::vector<Row> rows;
    std::string line;
    std::size_t lineno = 0;
    double max_x = 0.0, max_y = 0.0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream ls(line);
        long id = -1;
        if (!(ls >> id)) {
            continue;  // blank or comment-only line
        }
        Row r;
        if (id < 0 || !(ls >> r.pos.x >> r.pos.y >> r.range)) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed node line");
        }
        ls >> r.energy;  // optional
        r.seen = true;
        if (static_cast<std::size_t>(id) >= rows.size()) {
            rows.resize(static_cast<std::size_t>(id) + 1);
        }
        if (rows[static_cast<std::size_t>(id)].seen) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": duplicate node id");
        }
        rows[static_cast<std::size_t>(id)] = r;
        max_x = std::max(max_x, r.pos.x);
        max_y = std::max(max_y, r.pos.y);
    }
    if (rows.empty()) {
        throw std::invalid_argument("empty topology");
    }
    std::vector<Vec2> positions;
    std::vector<double> ranges;
    std::vector<double> energies;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].seen) {
            throw std::runtime_error(path + ": node ids not dense, missing id " + std::to_string(i));
        }
        positions.push_back(rows[i].pos);
        ranges.push_back(rows[i].range);
        energies.push_back(rows[i].energy);
    }
    return build(std::move(positions), std::move(ranges), Area{max_x, max_y}, std::move(energies));
}

}  // namespace orsim
