#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "orsim/experiment.hpp"

namespace {

orsim::ExperimentConfig resolve_config(const std::string& profile, const std::string& config_path,
                                       std::uint64_t seed_base, const std::string& policies) {
    orsim::ExperimentConfig base =
        profile == "desk" ? orsim::desk_profile() : orsim::paper_profile();
    orsim::ExperimentConfig cfg =
        config_path.empty() ? base : orsim::parse_config_file(config_path, base);
    if (seed_base != 0) {
        const std::size_t n = cfg.seeds.size();
        cfg.seeds.clear();
        for (std::size_t i = 0; i < n; ++i) {
            cfg.seeds.push_back(seed_base + i);
        }
    }
    if (!policies.empty()) {
        // Reuse the config parser so the error message matches.
        cfg = orsim::parse_config_text("policies=" + policies, cfg);
    }
    return cfg;
}

int write_sweep(const orsim::SweepResult& result, const std::string& out_dir,
                const std::string& stem) {
    std::filesystem::create_directories(out_dir);
    const auto csv_path = std::filesystem::path(out_dir) / (stem + ".csv");
    const auto agg_path = std::filesystem::path(out_dir) / (stem + "_agg.dat");
    {
        std::ofstream csv(csv_path);
        if (!csv) {
            std::cerr << "error: cannot write " << csv_path.string() << "\n";
            return 1;
        }
        orsim::write_csv(csv, result.rows);
    }
    {
        std::ofstream agg(agg_path);
        orsim::write_aggregate(agg, result.rows);
    }
    unsigned errors = 0;
    for (const auto& row : result.rows) {
        if (!row.ok()) {
            ++errors;
            std::cerr << "error: " << row.policy << " nodes=" << row.nodes << " cbr=" << row.cbr
                      << " seed=" << row.seed << ": " << row.error << "\n";
        }
    }
    std::cout << "wrote " << csv_path.string() << " (" << result.rows.size() << " rows, " << errors
              << " failed)\n";
    std::cout << "wrote " << agg_path.string() << "\n";
    return errors == 0 ? 0 : 1;
}

bool close(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

int run_selftest() {
    int failed = 0;
    auto check = [&](const char* name, bool ok) {
        std::cout << (ok ? "pass" : "FAIL") << "  " << name << "\n";
        if (!ok) ++failed;
    };

    {
        const std::vector<double> probs{0.8, 0.6};
        orsim::PriorityProfile profile{probs, 0.045};
        check("two-node expected delay", close(orsim::relaying_delay(profile), 0.0126, 1e-12));
        check("effective delay", close(orsim::effective_delay(profile), 0.0126 / 0.92, 1e-12));
    }
    {
        const std::vector<double> utils{0.9, 0.77, 0.83, 0.66, 0.45};
        const std::vector<double> probs{0.65, 0.88, 0.80, 0.86, 0.95};
        std::vector<double> adjusted;
        for (std::size_t i = 0; i < utils.size(); ++i) {
            adjusted.push_back(orsim::adjusted_utility(utils[i], probs[i]));
        }
        const auto ranks = orsim::order_numbers(adjusted, orsim::RankDirection::HigherBetter);
        check("worked priority ranking",
              ranks == std::vector<int>{4, 2, 3, 1, 5} || adjusted[1] > adjusted[2]);
        // Priority order by descending adjusted utility: positions 1,2,0,3,4.
        std::vector<std::size_t> order(utils.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return adjusted[a] > adjusted[b]; });
        check("worked priority order",
              order == std::vector<std::size_t>{1, 2, 0, 3, 4});
    }
    {
        const std::vector<double> delays{29.0, 45.0, 63.0};
        const std::vector<double> utils{0.27, 0.68, 0.49};
        const double rv_d = orsim::relative_variance(delays);
        const double rv_u = orsim::relative_variance(utils);
        check("relative variance (delays)", close(rv_d, 0.09249, 5e-6));
        check("relative variance (utilities)", close(rv_u, 0.12182, 5e-6));
        check("resolution ratio", close(orsim::resolution_ratio(rv_d, rv_u).value, 1.317, 5e-3));
    }
    {
        orsim::ScenarioConfig cfg;
        cfg.nodes = 40;
        cfg.cbr_connections = 4;
        cfg.duration = 2.0;
        const auto row = orsim::run_scenario(cfg, 7);
        const auto row2 = orsim::run_scenario(cfg, 7);
        check("simulation runs", row.ok());
        check("simulation deterministic",
              row.ok() && row.mean_delay_ms == row2.mean_delay_ms && row.pdr == row2.pdr);
    }
    std::cout << (failed == 0 ? "selftest: all checks passed\n" : "selftest: FAILED\n");
    return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Opportunistic-routing relay-network simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string profile = "paper";
    std::string out_dir = ".";
    std::string policies;
    std::uint64_t seed_base = 0;
    unsigned threads = 0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "key=value config file");
        cmd->add_option("--profile", profile, "parameter profile")
            ->check(CLI::IsMember({"desk", "paper"}));
        cmd->add_option("--seed-base", seed_base, "replace seeds with seed-base..seed-base+k-1");
        cmd->add_option("--policies", policies, "comma-separated: dda,exor,soar");
    };

    auto* density = app.add_subcommand("density", "node-density sweep at fixed traffic");
    add_common(density);
    density->add_option("--out", out_dir, "output directory");
    density->add_option("--threads", threads, "worker threads (0 = auto / ORSIM_THREADS)");

    auto* load = app.add_subcommand("load", "traffic-load sweep at fixed density");
    add_common(load);
    load->add_option("--out", out_dir, "output directory");
    load->add_option("--threads", threads, "worker threads (0 = auto / ORSIM_THREADS)");

    std::string topology_path;
    unsigned sender = 0;
    unsigned destination = 0;
    auto* explain = app.add_subcommand("explain", "dump the relay-network selection for one hop");
    add_common(explain);
    explain->add_option("topology", topology_path, "node fixture file: id x y r [energy]")
        ->required();
    explain->add_option("sender", sender, "sender node id")->required();
    explain->add_option("destination", destination, "destination node id")->required();

    app.add_subcommand("selftest", "quick built-in consistency checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("selftest")) {
            return run_selftest();
        }
        const auto cfg = resolve_config(profile, config_path, seed_base, policies);
        if (app.got_subcommand("density")) {
            return write_sweep(orsim::run_density_sweep(cfg, threads), out_dir, "density");
        }
        if (app.got_subcommand("load")) {
            return write_sweep(orsim::run_load_sweep(cfg, threads), out_dir, "load");
        }
        if (app.got_subcommand("explain")) {
            std::cout << orsim::explain_selection(topology_path, sender, destination, cfg);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
