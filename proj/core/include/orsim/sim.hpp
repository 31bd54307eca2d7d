#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orsim/rng.hpp"
#include "orsim/selector.hpp"

namespace orsim {

enum class Policy { Dda, ExorLite, SoarLite };

std::string to_string(Policy p);
std::optional<Policy> policy_from_string(std::string_view s);

struct Packet {
    std::uint64_t id = 0;
    NodeId source = 0;
    NodeId destination = 0;
    double created_at = 0.0;
    unsigned size_bytes = 512;
    unsigned ttl_remaining = 32;
};

/// Result of one priority-slotted coordination attempt (with retries) at
/// a single hop.
struct CoordinationOutcome {
    std::optional<NodeId> forwarder;  // highest-priority data holder, or none
    unsigned slots_waited = 0;        // total slots over all tries, failed tries charge n each
    std::vector<NodeId> duplicate_forwarders;
    std::vector<NodeId> receivers;  // receivers on the successful try
    unsigned retransmissions_used = 0;
    unsigned tries = 0;  // total sender broadcasts, 1 + retransmissions_used
};

struct CoordinationParams {
    double slot = 0.045;
    unsigned max_retries = 7;
    /// Force every in-set ACK that can physically traverse a link to be
    /// heard. ACKs still cannot cross a nonexistent link.
    bool perfect_acks = false;
};

/// Runs the time-based coordination scheme for one hop: every member
/// independently receives the data with its link probability from the
/// sender, the highest-priority receiver forwards after (priority-1)
/// slots, and lower-priority holders suppress only if they overhear an
/// ACK from an earlier forwarder across an existing link.
CoordinationOutcome coordination_round(const Topology& t, const LinkProbModel& model,
                                       NodeId sender, std::span<const NodeId> relay_by_priority,
                                       RngStream& links, RngStream& acks,
                                       const CoordinationParams& params);

enum class DeliveryStatus { Delivered, NoProgress, TtlExpired, RetriesExhausted };

struct HopRecord {
    NodeId from = 0;
    std::optional<NodeId> to;
    unsigned slots = 0;
    unsigned tries = 0;
    unsigned duplicates = 0;
};

struct DeliveryRecord {
    DeliveryStatus status = DeliveryStatus::Delivered;
    double delay = 0.0;  // slot-driven transmission delay, seconds
    unsigned hops = 0;
    unsigned duplicates = 0;
    unsigned transmissions = 0;
    std::vector<HopRecord> trace;
};

struct RoutingParams {
    CoordinationParams coordination;
    UtilityMetric utility = UtilityMetric::Progress;
    EnumerationCaps caps;
    unsigned ttl = 32;
};

/// Per-policy relay set for one hop: members in forwarding-priority order.
std::vector<NodeId> choose_relay_set(Policy policy, const Topology& t, const LinkProbModel& model,
                                     const CandidateSet& cfs, const RoutingParams& params);

/// Routes a single packet hop by hop without queueing; duplicates are
/// counted but their copies are not propagated. The scenario engine in
/// run_scenario does propagate them.
DeliveryRecord route_packet(const Packet& packet, Policy policy, const Topology& t,
                            const LinkProbModel& model, RngStream& rng,
                            const RoutingParams& params);

struct ScenarioConfig {
    Area area{1000.0, 1000.0};
    unsigned nodes = 100;
    double range = 250.0;
    unsigned cbr_connections = 10;
    double cbr_rate = 4.0;  // packets per second per connection
    double duration = 10.0;
    unsigned packet_size = 512;
    unsigned ttl = 32;
    unsigned queue_len = 50;
    Policy policy = Policy::Dda;
    LinkProbModel link = LinkProbModel::distance_decay();
    UtilityMetric utility = UtilityMetric::Progress;
    EnumerationCaps caps;
    double slot = 0.045;
    unsigned max_retries = 7;
    bool perfect_acks = false;
};

struct MetricsRow {
    std::string policy;
    unsigned nodes = 0;
    unsigned cbr = 0;
    std::uint64_t seed = 0;
    double mean_delay_ms = 0.0;
    double pdr = 0.0;
    double throughput = 0.0;
    double dup_per_delivery = 0.0;
    unsigned failures = 0;
    unsigned generated = 0;
    unsigned delivered = 0;
    std::string error;  // nonempty marks an error row

    bool ok() const { return error.empty(); }
};

/// Deterministic discrete-event run of one scenario: seeded topology,
/// CBR flows, FIFO node queues, slot-driven coordination per hop, and
/// propagation of duplicate-forwarded copies.
MetricsRow run_scenario(const ScenarioConfig& config, std::uint64_t seed);

}  // namespace orsim
