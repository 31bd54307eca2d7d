#pragma once

#include <map>
#include <utility>

#include "orsim/topology.hpp"

namespace orsim {

/// Per-link delivery probability model. Deterministic given (model, i, j);
/// every produced probability lies in (0, 1].
class LinkProbModel {
public:
    enum class Mode { Constant, DistanceDecay, Table };

    static LinkProbModel constant(double p);
    /// p(i,j) = clamp(1 - (d / r_min)^beta, kDecayFloor, 1) with
    /// r_min = min(r_i, r_j).
    static LinkProbModel distance_decay(double beta = 2.0);
    static LinkProbModel table(std::map<std::pair<NodeId, NodeId>, double> probs);

    Mode mode() const { return mode_; }
    double param() const { return param_; }

    /// Throws std::invalid_argument("no link") for non-linked pairs.
    double operator()(const Topology& t, NodeId i, NodeId j) const;

    static constexpr double kDecayFloor = 0.05;

private:
    LinkProbModel() = default;

    Mode mode_ = Mode::Constant;
    double param_ = 1.0;  // p for Constant, beta for DistanceDecay
    std::map<std::pair<NodeId, NodeId>, double> table_;
};

inline double link_probability(const LinkProbModel& model, const Topology& t, NodeId i, NodeId j) {
    return model(t, i, j);
}

}  // namespace orsim
