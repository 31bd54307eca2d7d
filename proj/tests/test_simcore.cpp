#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>

#include "helpers.hpp"
#include "orsim/delaymodel.hpp"
#include "orsim/sim.hpp"

using namespace orsim;

TEST_CASE("policy names round-trip") {
    for (Policy p : {Policy::Dda, Policy::ExorLite, Policy::SoarLite}) {
        CHECK(policy_from_string(to_string(p)) == p);
    }
    CHECK_FALSE(policy_from_string("bogus").has_value());
}

TEST_CASE("coordination round") {
    SUBCASE("certain first priority, full connectivity") {
        auto t = testutil::complete_topology(4);
        auto model = LinkProbModel::constant(1.0);
        RngStream rng(1);
        auto links = rng.substream("links");
        auto acks = rng.substream("acks");
        const std::vector<NodeId> relay{1, 2, 3};
        auto out = coordination_round(t, model, 0, relay, links, acks, {});
        REQUIRE(out.forwarder.has_value());
        CHECK(*out.forwarder == 1);
        CHECK(out.slots_waited == 0);
        CHECK(out.duplicate_forwarders.empty());
        CHECK(out.tries == 1);
        CHECK(out.receivers.size() == 3);
    }
    SUBCASE("empty relay set") {
        auto t = testutil::complete_topology(2);
        RngStream rng(1);
        auto links = rng.substream("links");
        auto acks = rng.substream("acks");
        auto out = coordination_round(t, LinkProbModel::constant(1.0), 0, {}, links, acks, {});
        CHECK_FALSE(out.forwarder.has_value());
        CHECK(out.tries == 0);
    }
    SUBCASE("missing mutual link forces a duplicate") {
        // Sender 0 reaches 1 and 2, but 1 and 2 cannot hear each other.
        auto t = Topology::build({{100, 100}, {100, 160}, {100, 40}}, {70, 70, 70}, {200, 200});
        REQUIRE(t.linked(0, 1));
        REQUIRE(t.linked(0, 2));
        REQUIRE_FALSE(t.linked(1, 2));
        auto model = LinkProbModel::constant(1.0);
        RngStream rng(2);
        auto links = rng.substream("links");
        auto acks = rng.substream("acks");
        CoordinationParams params;
        params.perfect_acks = true;  // even perfect ACKs cannot cross a missing link
        const std::vector<NodeId> relay{1, 2};
        auto out = coordination_round(t, model, 0, relay, links, acks, params);
        REQUIRE(out.forwarder.has_value());
        CHECK(*out.forwarder == 1);
        CHECK(out.duplicate_forwarders == std::vector<NodeId>{2});
    }
    SUBCASE("retries exhaust when nobody can receive") {
        auto t = testutil::complete_topology(3);
        auto model = LinkProbModel::table({{{0, 1}, 1e-9}, {{0, 2}, 1e-9}, {{1, 2}, 0.5}});
        RngStream rng(3);
        auto links = rng.substream("links");
        auto acks = rng.substream("acks");
        CoordinationParams params;
        params.max_retries = 4;
        const std::vector<NodeId> relay{1, 2};
        auto out = coordination_round(t, model, 0, relay, links, acks, params);
        CHECK_FALSE(out.forwarder.has_value());
        CHECK(out.tries == 5);
        CHECK(out.retransmissions_used == 4);
        CHECK(out.slots_waited == 5 * 2);  // n slots per failed try
    }
    SUBCASE("statistics agree with the closed forms") {
        auto t = testutil::complete_topology(3);
        const std::vector<double> probs{0.8, 0.6};
        auto model = LinkProbModel::table({{{0, 1}, probs[0]}, {{0, 2}, probs[1]}, {{1, 2}, 0.9}});
        const std::vector<NodeId> relay{1, 2};
        RngStream rng(404);
        auto links = rng.substream("links");
        auto acks = rng.substream("acks");

        // One-try waiting vs the expected-delay formula.
        CoordinationParams one_try;
        one_try.max_retries = 0;
        const int trials = 60000;
        double slot_sum = 0.0, slot_sq = 0.0;
        int any = 0;
        for (int k = 0; k < trials; ++k) {
            auto out = coordination_round(t, model, 0, relay, links, acks, one_try);
            const double s = out.slots_waited;
            slot_sum += s;
            slot_sq += s * s;
            if (out.forwarder) ++any;
        }
        const double mean = slot_sum / trials;
        const double se = std::sqrt((slot_sq / trials - mean * mean) / trials);
        const double expected_slots = relaying_delay({probs, 1.0});
        CHECK(std::fabs(mean - expected_slots) <= 3.0 * se);

        const double p_g = network_pdp(probs);
        const double freq = static_cast<double>(any) / trials;
        const double se_p = std::sqrt(p_g * (1.0 - p_g) / trials);
        CHECK(std::fabs(freq - p_g) <= 3.0 * se_p);

        // Mean tries vs the one-hop ETX.
        CoordinationParams many;
        many.max_retries = 1000;
        double try_sum = 0.0, try_sq = 0.0;
        for (int k = 0; k < trials; ++k) {
            auto out = coordination_round(t, model, 0, relay, links, acks, many);
            try_sum += out.tries;
            try_sq += static_cast<double>(out.tries) * out.tries;
        }
        const double mean_tries = try_sum / trials;
        const double se_t = std::sqrt((try_sq / trials - mean_tries * mean_tries) / trials);
        CHECK(std::fabs(mean_tries - 1.0 / p_g) <= 3.0 * se_t);
    }
}

TEST_CASE("relay set choice per policy") {
    // Sender 0, destination far right; candidates form two groups.
    auto t = Topology::load(std::string(ORSIM_DATA_DIR) + "/two_relay_regions.nodes");
    auto model = LinkProbModel::distance_decay();
    auto cfs = build_cfs(t, model, 0, 9);
    RoutingParams params;

    auto dda = choose_relay_set(Policy::Dda, t, model, cfs, params);
    CHECK(dda.size() >= 2);
    // DDA only ever picks a clique.
    for (std::size_t i = 0; i < dda.size(); ++i) {
        for (std::size_t j = i + 1; j < dda.size(); ++j) {
            CHECK(t.linked(dda[i], dda[j]));
        }
    }

    auto exor = choose_relay_set(Policy::ExorLite, t, model, cfs, params);
    CHECK(exor.size() == cfs.size());  // whole CFS, no filtering

    auto soar = choose_relay_set(Policy::SoarLite, t, model, cfs, params);
    // Anchor = default next hop = best utility*prob candidate.
    std::size_t anchor = 0;
    for (std::size_t i = 1; i < cfs.size(); ++i) {
        if (cfs.utils[i] * cfs.probs[i] > cfs.utils[anchor] * cfs.probs[anchor]) anchor = i;
    }
    CHECK(soar.front() == cfs.members[anchor]);
    for (std::size_t i = 1; i < soar.size(); ++i) {
        CHECK(t.linked(soar[i], soar.front()));
    }
    CHECK(soar.size() <= cfs.size());
}

TEST_CASE("route packet") {
    SUBCASE("adjacent destination, certain link") {
        auto t = Topology::build({{0, 0}, {100, 0}}, {250, 250}, {500, 500});
        RngStream rng(5);
        Packet pkt;
        pkt.source = 0;
        pkt.destination = 1;
        auto rec = route_packet(pkt, Policy::Dda, t, LinkProbModel::constant(1.0), rng, {});
        CHECK(rec.status == DeliveryStatus::Delivered);
        CHECK(rec.hops == 1);
        CHECK(rec.delay == doctest::Approx(0.0));
        CHECK(rec.duplicates == 0);
    }
    SUBCASE("disconnected destination") {
        auto t = Topology::build({{0, 0}, {100, 0}, {2000, 0}}, {250, 250, 250}, {2100, 100});
        RngStream rng(6);
        Packet pkt;
        pkt.source = 0;
        pkt.destination = 2;
        auto rec = route_packet(pkt, Policy::Dda, t, LinkProbModel::constant(1.0), rng, {});
        CHECK(rec.status == DeliveryStatus::NoProgress);
    }
    SUBCASE("ttl expiry on a long line") {
        std::vector<Vec2> positions;
        std::vector<double> ranges;
        for (int i = 0; i < 10; ++i) {
            positions.push_back({100.0 * i, 0.0});
            ranges.push_back(120.0);
        }
        auto t = Topology::build(positions, ranges, {1000, 10});
        RngStream rng(7);
        Packet pkt;
        pkt.source = 0;
        pkt.destination = 9;
        RoutingParams params;
        params.ttl = 3;  // 9 hops needed
        auto rec = route_packet(pkt, Policy::Dda, t, LinkProbModel::constant(1.0), rng, params);
        CHECK(rec.status == DeliveryStatus::TtlExpired);
    }
    SUBCASE("line topology delay matches per-hop closed form") {
        // Each hop has exactly one candidate with a known link prob, so the
        // end-to-end expected delay is the sum of per-hop expected values
        // including retry penalties.
        std::vector<Vec2> positions;
        std::vector<double> ranges;
        for (int i = 0; i < 4; ++i) {
            positions.push_back({100.0 * i, 0.0});
            ranges.push_back(120.0);
        }
        auto t = Topology::build(positions, ranges, {400, 10});
        const double p = 0.7;
        auto model = LinkProbModel::table(
            {{{0, 1}, p}, {{1, 2}, p}, {{2, 3}, p}});
        RoutingParams params;
        params.coordination.max_retries = 200;
        const int trials = 20000;
        double sum = 0.0, sq = 0.0;
        int delivered = 0;
        for (int k = 0; k < trials; ++k) {
            RngStream rng(900000 + k);
            Packet pkt;
            pkt.source = 0;
            pkt.destination = 3;
            auto rec = route_packet(pkt, Policy::Dda, t, model, rng, params);
            if (rec.status != DeliveryStatus::Delivered) continue;
            ++delivered;
            sum += rec.delay;
            sq += rec.delay * rec.delay;
        }
        REQUIRE(delivered > trials * 9 / 10);
        const double mean = sum / delivered;
        const double se = std::sqrt((sq / delivered - mean * mean) / delivered);
        // Single candidate: each failed try waits 1 slot (n = 1); expected
        // failed tries per hop = (1-p)/p. Three hops.
        const double per_hop = (1.0 - p) / p * 0.045;
        CHECK(std::fabs(mean - 3.0 * per_hop) <= 3.0 * se);
    }
}

TEST_CASE("scenario runs") {
    SUBCASE("invalid configs become error rows") {
        ScenarioConfig bad;
        bad.nodes = 1;
        CHECK_FALSE(run_scenario(bad, 1).ok());

        ScenarioConfig too_many;
        too_many.nodes = 3;
        too_many.cbr_connections = 100;
        auto row = run_scenario(too_many, 1);
        CHECK_FALSE(row.ok());
        CHECK(row.error.find("connections") != std::string::npos);
    }
    SUBCASE("perfect links, complete graph: PDR 1 and no duplicates under DDA") {
        ScenarioConfig cfg;
        cfg.area = {250.0, 250.0};
        cfg.nodes = 25;
        cfg.range = 400.0;  // everyone hears everyone
        cfg.cbr_connections = 4;
        cfg.cbr_rate = 2.0;
        cfg.duration = 3.0;
        cfg.link = LinkProbModel::constant(1.0);
        auto row = run_scenario(cfg, 11);
        REQUIRE(row.ok());
        CHECK(row.pdr == doctest::Approx(1.0));
        CHECK(row.failures == 0);
        CHECK(row.dup_per_delivery == doctest::Approx(0.0));
        CHECK(row.throughput > 0.0);
        CHECK(row.throughput <= 1.0);
    }
    SUBCASE("determinism: identical rows for identical seeds") {
        ScenarioConfig cfg;
        cfg.nodes = 50;
        cfg.area = {800.0, 800.0};
        cfg.cbr_connections = 6;
        cfg.duration = 4.0;
        auto a = run_scenario(cfg, 31);
        auto b = run_scenario(cfg, 31);
        REQUIRE(a.ok());
        CHECK(a.mean_delay_ms == b.mean_delay_ms);
        CHECK(a.pdr == b.pdr);
        CHECK(a.throughput == b.throughput);
        CHECK(a.dup_per_delivery == b.dup_per_delivery);
        CHECK(a.failures == b.failures);
        CHECK(a.generated == b.generated);
        auto c = run_scenario(cfg, 32);
        CHECK(a.generated == c.generated);  // same grid, different outcomes
    }
    SUBCASE("raising link probability never hurts delivery on average") {
        ScenarioConfig lo, hi;
        for (auto* cfg : {&lo, &hi}) {
            cfg->nodes = 40;
            cfg->area = {700.0, 700.0};
            cfg->range = 280.0;
            cfg->cbr_connections = 5;
            cfg->duration = 3.0;
        }
        lo.link = LinkProbModel::constant(0.45);
        hi.link = LinkProbModel::constant(0.9);
        double pdr_lo = 0.0, pdr_hi = 0.0;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            auto a = run_scenario(lo, seed);
            auto b = run_scenario(hi, seed);
            REQUIRE(a.ok());
            REQUIRE(b.ok());
            pdr_lo += a.pdr;
            pdr_hi += b.pdr;
        }
        CHECK(pdr_hi >= pdr_lo);
    }
}
