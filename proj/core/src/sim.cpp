#include "orsim/sim.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

namespace orsim {

std::string to_string(Policy p) {
    switch (p) {
        case Policy::Dda: return "dda";
        case Policy::ExorLite: return "exor";
        case Policy::SoarLite: return "soar";
    }
    return "?";
}

std::optional<Policy> policy_from_string(std::string_view s) {
    if (s == "dda") return Policy::Dda;
    if (s == "exor" || s == "exor-lite") return Policy::ExorLite;
    if (s == "soar" || s == "soar-lite") return Policy::SoarLite;
    return std::nullopt;
}

CoordinationOutcome coordination_round(const Topology& t, const LinkProbModel& model,
                                       NodeId sender, std::span<const NodeId> relay_by_priority,
                                       RngStream& links, RngStream& acks,
                                       const CoordinationParams& params) {
    CoordinationOutcome out;
    if (relay_by_priority.empty()) {
        return out;
    }
    const std::size_t n = relay_by_priority.size();
    const unsigned max_tries = params.max_retries + 1;

    while (out.tries < max_tries) {
        ++out.tries;
        std::vector<std::size_t> receivers;
        for (std::size_t i = 0; i < n; ++i) {
            const NodeId m = relay_by_priority[i];
            const double p = t.linked(sender, m) ? model(t, sender, m) : 0.0;
            if (links.bernoulli(p)) {
                receivers.push_back(i);
            }
        }
        if (receivers.empty()) {
            out.slots_waited += static_cast<unsigned>(n);
            continue;
        }

        out.slots_waited += static_cast<unsigned>(receivers.front());
        out.forwarder = relay_by_priority[receivers.front()];
        for (std::size_t i : receivers) {
            out.receivers.push_back(relay_by_priority[i]);
        }

        // Lower-priority holders suppress only on an overheard ACK from
        // an earlier forwarder; ACKs cannot traverse a missing link.
        std::vector<NodeId> forwarders{*out.forwarder};
        for (std::size_t idx = 1; idx < receivers.size(); ++idx) {
            const NodeId holder = relay_by_priority[receivers[idx]];
            bool suppressed = false;
            for (NodeId f : forwarders) {
                if (!t.linked(holder, f)) {
                    continue;
                }
                if (params.perfect_acks || acks.bernoulli(model(t, holder, f))) {
                    suppressed = true;
                    break;
                }
            }
            if (!suppressed) {
                forwarders.push_back(holder);
                out.duplicate_forwarders.push_back(holder);
            }
        }
        out.retransmissions_used = out.tries - 1;
        return out;
    }

    out.retransmissions_used = out.tries - 1;
    return out;  // forwarder == nullopt: every try failed
}

std::vector<NodeId> choose_relay_set(Policy policy, const Topology& t, const LinkProbModel& model,
                                     const CandidateSet& cfs, const RoutingParams& params) {
    switch (policy) {
        case Policy::Dda: {
            const auto matrices = neighbor_matrices(t, cfs);
            SelectorConfig cfg;
            cfg.slot = params.coordination.slot;
            cfg.caps = params.caps;
            const auto selection = select_relay_network(cfs, matrices, cfg);
            std::vector<NodeId> set;
            for (std::size_t pos : selection.node_priorities) {
                set.push_back(cfs.members[pos]);
            }
            return set;
        }
        case Policy::ExorLite: {
            // Whole CFS, no connectivity filtering; ETX-progress priority.
            std::vector<std::size_t> order(cfs.size());
            for (std::size_t i = 0; i < cfs.size(); ++i) order[i] = i;
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                const double sa = cfs.utils[a] * cfs.probs[a];
                const double sb = cfs.utils[b] * cfs.probs[b];
                if (sa != sb) return sa > sb;
                return cfs.members[a] < cfs.members[b];
            });
            std::vector<NodeId> set;
            for (std::size_t pos : order) set.push_back(cfs.members[pos]);
            return set;
        }
        case Policy::SoarLite: {
            // Candidates near the default path: the default next hop (best
            // ETX-progress node) plus the members linked to it, prioritized
            // by the same ETX-progress score. No clique requirement, so
            // ACK overhearing can still fail inside the set.
            std::size_t anchor = 0;
            auto score = [&](std::size_t i) { return cfs.utils[i] * cfs.probs[i]; };
            for (std::size_t i = 1; i < cfs.size(); ++i) {
                if (score(i) > score(anchor)) anchor = i;
            }
            std::vector<std::size_t> order;
            for (std::size_t i = 0; i < cfs.size(); ++i) {
                if (i == anchor || t.linked(cfs.members[i], cfs.members[anchor])) {
                    order.push_back(i);
                }
            }
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                if (score(a) != score(b)) return score(a) > score(b);
                return cfs.members[a] < cfs.members[b];
            });
            std::vector<NodeId> set;
            for (std::size_t pos : order) set.push_back(cfs.members[pos]);
            return set;
        }
    }
    throw std::logic_error("unreachable");
}

DeliveryRecord route_packet(const Packet& packet, Policy policy, const Topology& t,
                            const LinkProbModel& model, RngStream& rng,
                            const RoutingParams& params) {
    DeliveryRecord rec;
    auto links = rng.substream("links");
    auto acks = rng.substream("acks");

    NodeId current = packet.source;
    unsigned ttl = std::min(packet.ttl_remaining, params.ttl);
    while (current != packet.destination) {
        CandidateSet cfs;
        try {
            CfsPolicy cfs_policy;
            cfs_policy.utility = params.utility;
            cfs = build_cfs(t, model, current, packet.destination, cfs_policy);
        } catch (const NoProgressNeighbors&) {
            rec.status = DeliveryStatus::NoProgress;
            return rec;
        }
        const auto relay_set = choose_relay_set(policy, t, model, cfs, params);
        const auto outcome =
            coordination_round(t, model, current, relay_set, links, acks, params.coordination);

        rec.transmissions += outcome.tries + static_cast<unsigned>(outcome.duplicate_forwarders.size());
        rec.duplicates += static_cast<unsigned>(outcome.duplicate_forwarders.size());
        rec.delay += outcome.slots_waited * params.coordination.slot;
        HopRecord hop;
        hop.from = current;
        hop.to = outcome.forwarder;
        hop.slots = outcome.slots_waited;
        hop.tries = outcome.tries;
        hop.duplicates = static_cast<unsigned>(outcome.duplicate_forwarders.size());
        rec.trace.push_back(hop);

        if (!outcome.forwarder) {
            rec.status = DeliveryStatus::RetriesExhausted;
            return rec;
        }
        ++rec.hops;
        current = *outcome.forwarder;
        if (ttl == 0 || --ttl == 0) {
            if (current != packet.destination) {
                rec.status = DeliveryStatus::TtlExpired;
                return rec;
            }
        }
    }
    rec.status = DeliveryStatus::Delivered;
    return rec;
}

namespace {

struct PacketCopy {
    std::uint64_t id = 0;
    NodeId destination = 0;
    double created_at = 0.0;
    unsigned ttl = 0;
};

struct Event {
    double time = 0.0;
    std::uint64_t seq = 0;
    enum class Kind { Arrival, NodeFree } kind = Kind::Arrival;
    NodeId node = 0;
    PacketCopy copy;
};

struct EventOrder {
    bool operator()(const Event& a, const Event& b) const {
        if (a.time != b.time) return a.time > b.time;
        return a.seq > b.seq;
    }
};

}  // namespace

MetricsRow run_scenario(const ScenarioConfig& config, std::uint64_t seed) {
    MetricsRow row;
    row.policy = to_string(config.policy);
    row.nodes = config.nodes;
    row.cbr = config.cbr_connections;
    row.seed = seed;

    if (config.nodes < 2 || config.cbr_connections == 0 || !(config.cbr_rate > 0.0) ||
        !(config.duration > 0.0) || config.queue_len == 0) {
        row.error = "invalid scenario config";
        return row;
    }
    if (static_cast<std::uint64_t>(config.cbr_connections) >
        static_cast<std::uint64_t>(config.nodes) * (config.nodes - 1)) {
        row.error = "more CBR connections than node pairs";
        return row;
    }

    RngStream root(seed);
    auto topo_rng = root.substream("topology");
    auto traffic_rng = root.substream("traffic");
    auto links = root.substream("links");
    auto acks = root.substream("acks");

    std::vector<Vec2> positions(config.nodes);
    for (auto& p : positions) {
        p.x = topo_rng.uniform_real(0.0, config.area.width);
        p.y = topo_rng.uniform_real(0.0, config.area.height);
    }
    const Topology t = Topology::build(std::move(positions),
                                       std::vector<double>(config.nodes, config.range),
                                       config.area);

    std::set<std::pair<NodeId, NodeId>> used;
    std::vector<std::pair<NodeId, NodeId>> flows;
    while (flows.size() < config.cbr_connections) {
        const auto src = static_cast<NodeId>(traffic_rng.uniform_int(config.nodes));
        const auto dst = static_cast<NodeId>(traffic_rng.uniform_int(config.nodes));
        if (src == dst || !used.insert({src, dst}).second) {
            continue;
        }
        flows.emplace_back(src, dst);
    }

    RoutingParams routing;
    routing.coordination.slot = config.slot;
    routing.coordination.max_retries = config.max_retries;
    routing.coordination.perfect_acks = config.perfect_acks;
    routing.utility = config.utility;
    routing.caps = config.caps;
    routing.ttl = config.ttl;

    std::priority_queue<Event, std::vector<Event>, EventOrder> events;
    std::uint64_t seq = 0;
    const double interval = 1.0 / config.cbr_rate;
    std::uint64_t next_packet_id = 0;
    for (std::size_t f = 0; f < flows.size(); ++f) {
        const double offset = interval * static_cast<double>(f) / static_cast<double>(flows.size());
        for (double when = offset; when < config.duration; when += interval) {
            Event ev;
            ev.time = when;
            ev.seq = seq++;
            ev.kind = Event::Kind::Arrival;
            ev.node = flows[f].first;
            ev.copy = {next_packet_id++, flows[f].second, when, config.ttl};
            events.push(ev);
        }
    }
    row.generated = static_cast<unsigned>(next_packet_id);
    if (row.generated == 0) {
        row.error = "no packets generated";
        return row;
    }

    // Relay-set choice is deterministic per (node, destination); cache it.
    std::map<std::pair<NodeId, NodeId>, std::optional<std::vector<NodeId>>> relay_cache;
    auto relay_set_for = [&](NodeId node, NodeId dest) -> const std::optional<std::vector<NodeId>>& {
        auto [it, inserted] = relay_cache.try_emplace({node, dest});
        if (inserted) {
            try {
                CfsPolicy cfs_policy;
                cfs_policy.utility = config.utility;
                const auto cfs = build_cfs(t, config.link, node, dest, cfs_policy);
                it->second = choose_relay_set(config.policy, t, config.link, cfs, routing);
            } catch (const NoProgressNeighbors&) {
                it->second = std::nullopt;
            }
        }
        return it->second;
    };

    std::vector<std::deque<PacketCopy>> queues(config.nodes);
    std::vector<std::uint8_t> busy(config.nodes, 0);
    std::set<std::uint64_t> delivered_ids;
    double delay_sum = 0.0;
    std::uint64_t transmissions = 0;
    std::uint64_t duplicate_events = 0;

    auto start_service = [&](double now, NodeId node) {
        while (!busy[node] && !queues[node].empty()) {
            PacketCopy copy = queues[node].front();
            queues[node].pop_front();

            const auto& relay = relay_set_for(node, copy.destination);
            if (!relay) {
                continue;  // dead end, drop and serve the next packet
            }
            const auto outcome =
                coordination_round(t, config.link, node, *relay, links, acks, routing.coordination);
            transmissions += outcome.tries;
            duplicate_events += outcome.duplicate_forwarders.size();
            const double duration = outcome.slots_waited * config.slot;

            busy[node] = 1;
            Event free_ev;
            free_ev.time = now + duration;
            free_ev.seq = seq++;
            free_ev.kind = Event::Kind::NodeFree;
            free_ev.node = node;
            events.push(free_ev);

            auto hand_over = [&](NodeId next) {
                Event ev;
                ev.time = now + duration;
                ev.seq = seq++;
                ev.kind = Event::Kind::Arrival;
                ev.node = next;
                ev.copy = copy;
                ev.copy.ttl = copy.ttl - 1;
                events.push(ev);
            };
            if (outcome.forwarder) {
                hand_over(*outcome.forwarder);
                for (NodeId dup : outcome.duplicate_forwarders) {
                    transmissions += 1;  // the duplicate's own forwarding broadcast
                    hand_over(dup);
                }
            }
        }
    };

    while (!events.empty()) {
        const Event ev = events.top();
        events.pop();
        switch (ev.kind) {
            case Event::Kind::Arrival: {
                if (ev.node == ev.copy.destination) {
                    if (delivered_ids.insert(ev.copy.id).second) {
                        delay_sum += ev.time - ev.copy.created_at;
                    }
                    break;
                }
                if (ev.copy.ttl == 0 || queues[ev.node].size() >= config.queue_len) {
                    break;  // ttl expired or queue overflow, drop
                }
                queues[ev.node].push_back(ev.copy);
                start_service(ev.time, ev.node);
                break;
            }
            case Event::Kind::NodeFree:
                busy[ev.node] = 0;
                start_service(ev.time, ev.node);
                break;
        }
    }

    row.delivered = static_cast<unsigned>(delivered_ids.size());
    row.failures = row.generated - row.delivered;
    row.pdr = static_cast<double>(row.delivered) / row.generated;
    row.mean_delay_ms = row.delivered ? delay_sum / row.delivered * 1000.0 : 0.0;
    row.throughput = transmissions ? static_cast<double>(row.delivered) / transmissions : 0.0;
    row.dup_per_delivery =
        row.delivered ? static_cast<double>(duplicate_events) / row.delivered : 0.0;
    return row;
}

}  // namespace orsim
