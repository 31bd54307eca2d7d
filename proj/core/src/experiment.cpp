#include "orsim/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace orsim {

LinkProbModel ExperimentConfig::link_model() const {
    if (link_mode == "constant") {
        return LinkProbModel::constant(link_p);
    }
    if (link_mode == "decay") {
        return LinkProbModel::distance_decay(link_beta);
    }
    throw std::invalid_argument("link_mode must be constant or decay");
}

UtilityMetric ExperimentConfig::utility_metric() const {
    if (utility == "progress") return UtilityMetric::Progress;
    if (utility == "energy") return UtilityMetric::Energy;
    throw std::invalid_argument("utility must be progress or energy");
}

ScenarioConfig ExperimentConfig::scenario(Policy policy, unsigned nodes, unsigned cbr) const {
    ScenarioConfig s;
    s.area = area;
    s.nodes = nodes;
    s.range = range;
    s.cbr_connections = cbr;
    s.cbr_rate = cbr_rate;
    s.duration = duration;
    s.packet_size = packet_size;
    s.ttl = ttl;
    s.queue_len = queue_len;
    s.policy = policy;
    s.link = link_model();
    s.utility = utility_metric();
    s.caps = caps;
    s.slot = slot;
    s.max_retries = max_retries;
    s.perfect_acks = perfect_acks;
    return s;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& value) {
    std::vector<T> out;
    for (const auto& item : split(value, ',')) {
        try {
            if constexpr (std::is_same_v<T, std::uint64_t>) {
                out.push_back(std::stoull(item));
            } else {
                const long long v = std::stoll(item);
                if (v < 0) throw std::out_of_range(key);
                out.push_back(static_cast<T>(v));
            }
        } catch (const std::exception&) {
            throw std::invalid_argument("config key '" + key + "': bad list item '" + item + "'");
        }
    }
    if (out.empty()) {
        throw std::invalid_argument("config key '" + key + "': empty list");
    }
    return out;
}

double parse_num(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(key);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': bad number '" + value + "'");
    }
}

unsigned parse_unsigned(const std::string& key, const std::string& value) {
    const double v = parse_num(key, value);
    if (v < 0 || v != std::floor(v)) {
        throw std::invalid_argument("config key '" + key + "': expected nonnegative integer");
    }
    return static_cast<unsigned>(v);
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true" || value == "yes") return true;
    if (value == "0" || value == "false" || value == "no") return false;
    throw std::invalid_argument("config key '" + key + "': expected boolean");
}

void validate(const ExperimentConfig& c) {
    if (!(c.area.width > 0.0 && c.area.height > 0.0)) {
        throw std::invalid_argument("config key 'area': dimensions must be positive");
    }
    for (unsigned n : c.node_counts) {
        if (n < 2) throw std::invalid_argument("config key 'node_counts': counts must be >= 2");
    }
    for (unsigned n : c.cbr_connections) {
        if (n == 0) throw std::invalid_argument("config key 'cbr_connections': counts must be >= 1");
    }
    if (!(c.range > 0.0)) throw std::invalid_argument("config key 'range': must be positive");
    if (!(c.cbr_rate > 0.0)) throw std::invalid_argument("config key 'cbr_rate': must be positive");
    if (!(c.slot > 0.0)) throw std::invalid_argument("config key 'slot_ms': must be positive");
    if (!(c.duration > 0.0)) throw std::invalid_argument("config key 'duration': must be positive");
    if (c.ttl == 0) throw std::invalid_argument("config key 'ttl': must be >= 1");
    if (c.queue_len == 0) throw std::invalid_argument("config key 'queue_len': must be >= 1");
    if (c.seeds.empty()) throw std::invalid_argument("config key 'seeds': must be nonempty");
    if (c.policies.empty()) throw std::invalid_argument("config key 'policies': must be nonempty");
    if (c.caps.max_degree < 2) throw std::invalid_argument("config key 'max_degree': must be >= 2");
    if (c.caps.max_count == 0) throw std::invalid_argument("config key 'max_count': must be >= 1");
    c.link_model();
    c.utility_metric();
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text, ExperimentConfig base) {
    ExperimentConfig c = std::move(base);
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key=value");
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "area") {
            const auto parts = split(value, 'x');
            if (parts.size() != 2) {
                throw std::invalid_argument("config key 'area': expected WxH");
            }
            c.area = {parse_num(key, parts[0]), parse_num(key, parts[1])};
        } else if (key == "node_counts") {
            c.node_counts = parse_list<unsigned>(key, value);
        } else if (key == "range") {
            c.range = parse_num(key, value);
        } else if (key == "cbr_connections") {
            c.cbr_connections = parse_list<unsigned>(key, value);
        } else if (key == "cbr_rate") {
            c.cbr_rate = parse_num(key, value);
        } else if (key == "packet_size") {
            c.packet_size = parse_unsigned(key, value);
        } else if (key == "ttl") {
            c.ttl = parse_unsigned(key, value);
        } else if (key == "queue_len") {
            c.queue_len = parse_unsigned(key, value);
        } else if (key == "slot_ms") {
            c.slot = parse_num(key, value) / 1000.0;
        } else if (key == "duration") {
            c.duration = parse_num(key, value);
        } else if (key == "max_retries") {
            c.max_retries = parse_unsigned(key, value);
        } else if (key == "perfect_acks") {
            c.perfect_acks = parse_bool(key, value);
        } else if (key == "link_mode") {
            c.link_mode = value;
        } else if (key == "link_p") {
            c.link_p = parse_num(key, value);
        } else if (key == "link_beta") {
            c.link_beta = parse_num(key, value);
        } else if (key == "utility") {
            c.utility = value;
        } else if (key == "policies") {
            c.policies.clear();
            for (const auto& name : split(value, ',')) {
                const auto p = policy_from_string(name);
                if (!p) {
                    throw std::invalid_argument("config key 'policies': unknown policy '" + name +
                                                "'");
                }
                c.policies.push_back(*p);
            }
        } else if (key == "seeds") {
            c.seeds = parse_list<std::uint64_t>(key, value);
        } else if (key == "max_degree") {
            c.caps.max_degree = parse_unsigned(key, value);
        } else if (key == "max_count") {
            c.caps.max_count = parse_unsigned(key, value);
        } else if (key == "density_cbr") {
            c.density_cbr = parse_unsigned(key, value);
        } else if (key == "load_nodes") {
            c.load_nodes = parse_unsigned(key, value);
        } else {
            throw std::invalid_argument("unknown config key '" + key + "'");
        }
    }
    validate(c);
    return c;
}

ExperimentConfig parse_config_file(const std::string& path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file: " + path);
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str(), std::move(base));
}

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream out;
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    auto list = [](const auto& values) {
        std::string s;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(values[i]);
        }
        return s;
    };
    out << "area=" << num(c.area.width) << "x" << num(c.area.height) << "\n";
    out << "node_counts=" << list(c.node_counts) << "\n";
    out << "range=" << num(c.range) << "\n";
    out << "cbr_connections=" << list(c.cbr_connections) << "\n";
    out << "cbr_rate=" << num(c.cbr_rate) << "\n";
    out << "packet_size=" << c.packet_size << "\n";
    out << "ttl=" << c.ttl << "\n";
    out << "queue_len=" << c.queue_len << "\n";
    out << "slot_ms=" << num(c.slot * 1000.0) << "\n";
    out << "duration=" << num(c.duration) << "\n";
    out << "max_retries=" << c.max_retries << "\n";
    out << "perfect_acks=" << (c.perfect_acks ? "true" : "false") << "\n";
    out << "link_mode=" << c.link_mode << "\n";
    out << "link_p=" << num(c.link_p) << "\n";
    out << "link_beta=" << num(c.link_beta) << "\n";
    out << "utility=" << c.utility << "\n";
    std::string policies;
    for (std::size_t i = 0; i < c.policies.size(); ++i) {
        if (i) policies += ',';
        policies += to_string(c.policies[i]);
    }
    out << "policies=" << policies << "\n";
    out << "seeds=" << list(c.seeds) << "\n";
    out << "max_degree=" << c.caps.max_degree << "\n";
    out << "max_count=" << c.caps.max_count << "\n";
    out << "density_cbr=" << c.density_cbr << "\n";
    out << "load_nodes=" << c.load_nodes << "\n";
    return out.str();
}

ExperimentConfig desk_profile() {
    ExperimentConfig c;
    c.area = {1000.0, 1000.0};
    c.node_counts = {50, 75, 100};
    c.cbr_connections = {5, 10, 15};
    c.density_cbr = 10;
    c.load_nodes = 75;
    c.duration = 10.0;
    return c;
}

ExperimentConfig paper_profile() { return {}; }

unsigned effective_threads(unsigned requested) {
    if (requested > 0) {
        return requested;
    }
    if (const char* env = std::getenv("ORSIM_THREADS")) {
        const long v = std::atol(env);
        if (v > 0) {
            return static_cast<unsigned>(v);
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

namespace {

SweepResult run_grid(const ExperimentConfig& config, const std::vector<unsigned>& node_grid,
                     const std::vector<unsigned>& cbr_grid, unsigned threads) {
    struct Task {
        Policy policy;
        unsigned nodes;
        unsigned cbr;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (Policy policy : config.policies) {
        for (unsigned nodes : node_grid) {
            for (unsigned cbr : cbr_grid) {
                for (std::uint64_t seed : config.seeds) {
                    tasks.push_back({policy, nodes, cbr, seed});
                }
            }
        }
    }

    SweepResult result;
    result.rows.resize(tasks.size());
    const unsigned workers = std::min<unsigned>(effective_threads(threads),
                                                static_cast<unsigned>(tasks.size()));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
            const Task& task = tasks[i];
            try {
                result.rows[i] =
                    run_scenario(config.scenario(task.policy, task.nodes, task.cbr), task.seed);
            } catch (const std::exception& e) {
                MetricsRow row;
                row.policy = to_string(task.policy);
                row.nodes = task.nodes;
                row.cbr = task.cbr;
                row.seed = task.seed;
                row.error = e.what();
                result.rows[i] = row;
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    return result;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return std::string(buf);
}

}  // namespace

SweepResult run_density_sweep(const ExperimentConfig& config, unsigned threads) {
    return run_grid(config, config.node_counts, {config.density_cbr}, threads);
}

SweepResult run_load_sweep(const ExperimentConfig& config, unsigned threads) {
    return run_grid(config, {config.load_nodes}, config.cbr_connections, threads);
}

const char* const kCsvHeader =
    "policy,nodes,cbr,seed,mean_delay_ms,pdr,throughput,dup_per_delivery,failures";

void write_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
    out << kCsvHeader << "\n";
    for (const auto& row : rows) {
        if (!row.ok()) {
            out << row.policy << "," << row.nodes << "," << row.cbr << "," << row.seed
                << ",nan,nan,nan,nan," << row.failures << "\n";
            out << "# error: " << row.error << "\n";
            continue;
        }
        out << row.policy << "," << row.nodes << "," << row.cbr << "," << row.seed << ","
            << fmt(row.mean_delay_ms) << "," << fmt(row.pdr) << "," << fmt(row.throughput) << ","
            << fmt(row.dup_per_delivery) << "," << row.failures << "\n";
    }
}

void write_aggregate(std::ostream& out, const std::vector<MetricsRow>& rows) {
    struct Group {
        std::vector<const MetricsRow*> rows;
    };
    std::vector<std::tuple<std::string, unsigned, unsigned>> order;
    std::map<std::tuple<std::string, unsigned, unsigned>, Group> groups;
    for (const auto& row : rows) {
        if (!row.ok()) continue;
        auto key = std::make_tuple(row.policy, row.nodes, row.cbr);
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted) order.push_back(key);
        it->second.rows.push_back(&row);
    }

    auto mean_ci = [](const std::vector<double>& xs) {
        const double n = static_cast<double>(xs.size());
        double mean = 0.0;
        for (double x : xs) mean += x;
        mean /= n;
        double var = 0.0;
        if (xs.size() > 1) {
            for (double x : xs) var += (x - mean) * (x - mean);
            var /= n - 1.0;
        }
        const double ci = xs.size() > 1 ? 1.96 * std::sqrt(var / n) : 0.0;
        return std::make_pair(mean, ci);
    };

    out << "# policy nodes cbr seeds delay_ms delay_ci pdr pdr_ci throughput throughput_ci "
           "dup dup_ci\n";
    for (const auto& key : order) {
        const auto& group = groups.at(key);
        std::vector<double> delay, pdr, thr, dup;
        for (const auto* row : group.rows) {
            delay.push_back(row->mean_delay_ms);
            pdr.push_back(row->pdr);
            thr.push_back(row->throughput);
            dup.push_back(row->dup_per_delivery);
        }
        const auto [dm, dc] = mean_ci(delay);
        const auto [pm, pc] = mean_ci(pdr);
        const auto [tm, tc] = mean_ci(thr);
        const auto [um, uc] = mean_ci(dup);
        out << std::get<0>(key) << " " << std::get<1>(key) << " " << std::get<2>(key) << " "
            << group.rows.size() << " " << fmt(dm) << " " << fmt(dc) << " " << fmt(pm) << " "
            << fmt(pc) << " " << fmt(tm) << " " << fmt(tc) << " " << fmt(um) << " " << fmt(uc)
            << "\n";
    }
}

std::string explain_selection(const std::string& topology_path, NodeId sender, NodeId destination,
                              const ExperimentConfig& config) {
    const Topology t = Topology::load(topology_path);
    if (sender >= t.size() || destination >= t.size()) {
        throw std::invalid_argument("sender or destination id out of range");
    }
    CfsPolicy policy;
    policy.utility = config.utility_metric();
    const auto model = config.link_model();
    const auto cfs = build_cfs(t, model, sender, destination, policy);
    const auto matrices = neighbor_matrices(t, cfs);

    SelectorConfig sel;
    sel.slot = config.slot;
    sel.caps = config.caps;
    const auto selection = select_relay_network(cfs, matrices, sel);

    std::ostringstream out;
    auto names = [&](const std::vector<std::size_t>& positions) {
        std::string s = "(";
        for (std::size_t i = 0; i < positions.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(cfs.members[positions[i]]);
        }
        return s + ")";
    };
    auto kind_name = [](NetworkKind k) {
        switch (k) {
            case NetworkKind::ONetwork: return "o-network";
            case NetworkKind::SNetwork: return "s-network";
            case NetworkKind::NotRelay: return "not-relay";
        }
        return "?";
    };

    out << "sender " << sender << " -> destination " << destination << "\n";
    out << "candidate forwarding set (" << cfs.size() << " nodes):\n";
    for (std::size_t i = 0; i < cfs.size(); ++i) {
        out << "  node " << cfs.members[i] << "  P=" << fmt(cfs.probs[i])
            << "  U=" << fmt(cfs.utils[i]) << "  U*=" << fmt(cfs.utils[i] * cfs.probs[i]) << "\n";
    }

    out << "relay networks:\n";
    for (std::size_t i = 0; i < selection.candidates.size(); ++i) {
        const auto& net = selection.candidates[i];
        const auto& m = selection.metrics[i];
        out << "  " << names(net.members) << "  degree=" << net.degree() << "  "
            << kind_name(net.kind);
        if (net.kind == NetworkKind::SNetwork) {
            out << "(parent degree " << net.parent_degree << ")";
        }
        out << "  D=" << net.matrix_sum << "  P_G=" << fmt(1.0 / m.one_hop_etx)
            << "  t_G=" << fmt(m.one_hop_etx) << "  DT*=" << fmt(m.effective_delay * 1000.0)
            << "ms  U*=" << fmt(m.effective_utility);
        if (!selection.final_utility.empty()) {
            out << "  n_DT=" << selection.delay_ranks[i] << "  n_U=" << selection.utility_ranks[i]
                << "  U^F=" << fmt(selection.final_utility[i]);
        }
        out << "\n";
    }
    if (selection.truncated) {
        out << "  (enumeration truncated at " << sel.caps.max_count << " networks)\n";
    }

    // Worked rejections: small subsets that fail the matrix-sum test.
    constexpr std::size_t kMaxRejections = 128;
    std::size_t printed = 0;
    bool clipped = false;
    out << "non-relay subsets (size 2-3):\n";
    std::vector<std::size_t> subset;
    const std::size_t m = cfs.size();
    auto emit = [&](const std::vector<std::size_t>& positions) {
        const auto net = classify(positions, matrices);
        if (net.kind != NetworkKind::NotRelay) {
            return;
        }
        if (printed >= kMaxRejections) {
            clipped = true;
            return;
        }
        ++printed;
        out << "  " << names(net.members) << "  D=" << net.matrix_sum << " < " << net.degree()
            << "\n";
    };
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a + 1; b < m; ++b) {
            emit({a, b});
            for (std::size_t c = b + 1; c < m; ++c) {
                emit({a, b, c});
            }
        }
    }
    if (printed == 0) {
        out << "  (none)\n";
    } else if (clipped) {
        out << "  ...\n";
    }

    if (selection.candidates.size() > 1) {
        out << "weights: v_rDT=" << fmt(selection.v_r_delay)
            << "  v_rU=" << fmt(selection.v_r_utility) << "  xi=" << fmt(selection.xi.value)
            << "\n";
    }
    out << "chosen: " << names(selection.chosen.members);
    if (selection.fallback_single) {
        out << "  (no relay network of degree >= 2; single-node fallback)";
    }
    out << "\n";
    out << "node priorities: ";
    for (std::size_t i = 0; i < selection.node_priorities.size(); ++i) {
        if (i) out << " > ";
        out << cfs.members[selection.node_priorities[i]];
    }
    out << "\n";
    return out.str();
}

}  // namespace orsim
