#include "orsim/linkmodel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace orsim {

LinkProbModel LinkProbModel::constant(double p) {
    if (!(p > 0.0 && p <= 1.0)) {
        throw std::invalid_argument("constant link probability must be in (0,1]");
    }
    LinkProbModel m;
    m.mode_ = Mode::Constant;
    m.param_ = p;
    return m;
}

LinkProbModel LinkProbModel::distance_decay(double beta) {
    if (!(beta > 0.0)) {
        throw std::invalid_argument("distance-decay exponent must be positive");
    }
    LinkProbModel m;
    m.mode_ = Mode::DistanceDecay;
    m.param_ = beta;
    return m;
}

LinkProbModel LinkProbModel::table(std::map<std::pair<NodeId, NodeId>, double> probs) {
    for (const auto& [pair, p] : probs) {
        if (!(p > 0.0 && p <= 1.0)) {
            throw std::invalid_argument("table link probability must be in (0,1]");
        }
    }
    LinkProbModel m;
    m.mode_ = Mode::Table;
    m.table_ = std::move(probs);
    return m;
}

double LinkProbModel::operator()(const Topology& t, NodeId i, NodeId j) const {
    if (!t.linked(i, j)) {
        throw std::invalid_argument("no link");
    }
    switch (mode_) {
        case Mode::Constant:
            return param_;
        case Mode::DistanceDecay: {
            const double d = distance(t.position(i), t.position(j));
            const double r_min = std::min(t.range(i), t.range(j));
            const double p = 1.0 - std::pow(d / r_min, param_);
            return std::clamp(p, kDecayFloor, 1.0);
        }
        case Mode::Table: {
            auto key = i < j ? std::make_pair(i, j) : std::make_pair(j, i);
            auto it = table_.find(key);
            if (it == table_.end()) {
                throw std::invalid_argument("no link probability table entry");
            }
            return it->second;
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace orsim
