#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "orsim/sim.hpp"

namespace orsim {

/// Experiment parameters. Defaults mirror the reference simulation setup
/// (2000x2000 m, 100..300 nodes, 250 m range, CBR 20..100, 512 B packets,
/// TTL 32, queue 50, 45 ms slot).
struct ExperimentConfig {
    Area area{2000.0, 2000.0};
    std::vector<unsigned> node_counts{100, 150, 200, 250, 300};
    double range = 250.0;
    std::vector<unsigned> cbr_connections{20, 40, 60, 80, 100};
    double cbr_rate = 4.0;
    unsigned packet_size = 512;
    unsigned ttl = 32;
    unsigned queue_len = 50;
    double slot = 0.045;
    double duration = 20.0;
    unsigned max_retries = 7;
    bool perfect_acks = false;

    std::string link_mode = "decay";  // constant | decay | table
    double link_p = 0.8;              // constant mode
    double link_beta = 2.0;           // decay mode

    std::string utility = "progress";  // progress | energy
    std::vector<Policy> policies{Policy::Dda, Policy::ExorLite, Policy::SoarLite};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    EnumerationCaps caps;

    unsigned density_cbr = 60;  // fixed CBR count for the density sweep
    unsigned load_nodes = 200;  // fixed node count for the load sweep

    LinkProbModel link_model() const;
    UtilityMetric utility_metric() const;
    ScenarioConfig scenario(Policy policy, unsigned nodes, unsigned cbr) const;
};

/// Flat key=value text config, '#' comments, lists as `a,b,c`. Unknown
/// keys are rejected. `base` supplies the defaults being overridden.
ExperimentConfig parse_config_text(const std::string& text, ExperimentConfig base = {});
ExperimentConfig parse_config_file(const std::string& path, ExperimentConfig base = {});
std::string serialize_config(const ExperimentConfig& config);

/// Desk-scale profile: small area and load so full sweeps run in minutes.
ExperimentConfig desk_profile();
/// Full-scale profile (the defaults).
ExperimentConfig paper_profile();

struct SweepResult {
    std::vector<MetricsRow> rows;  // canonical (policy, scenario, seed) order
};

/// Density sweep: node_counts vary, CBR fixed at density_cbr.
SweepResult run_density_sweep(const ExperimentConfig& config, unsigned threads = 0);
/// Load sweep: cbr_connections vary, nodes fixed at load_nodes.
SweepResult run_load_sweep(const ExperimentConfig& config, unsigned threads = 0);

extern const char* const kCsvHeader;
void write_csv(std::ostream& out, const std::vector<MetricsRow>& rows);

/// Per-(policy,nodes,cbr) mean and 95% CI over seeds, gnuplot-friendly.
void write_aggregate(std::ostream& out, const std::vector<MetricsRow>& rows);

/// One-shot Algorithm-2 dump for a topology file: CFS, every enumerated
/// relay network with kind and metrics, weights, order numbers and the
/// chosen network with node priorities.
std::string explain_selection(const std::string& topology_path, NodeId sender, NodeId destination,
                              const ExperimentConfig& config = {});

/// Worker count: explicit argument, else the ORSIM_THREADS environment
/// variable, else hardware concurrency.
unsigned effective_threads(unsigned requested);

}  // namespace orsim
