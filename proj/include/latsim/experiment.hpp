#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <future>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "latsim/advantage.hpp"
#include "latsim/peri.hpp"
#include "latsim/topology.hpp"

namespace latsim {

/// Flat key=value document. Blank lines and # comments ignored; later keys
/// override earlier ones.
inline std::unordered_map<std::string, std::string> parse_kv_config(std::istream& in) {
    std::unordered_map<std::string, std::string> kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos || line[start] == '#') continue;
        std::size_t eq = line.find('=', start);
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key=value");
        auto trim = [](std::string s) {
            std::size_t a = s.find_first_not_of(" \t");
            std::size_t b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw std::invalid_argument("config line " + std::to_string(lineno) +
                                                     ": empty key");
        kv[key] = value;
    }
    return kv;
}

inline std::unordered_map<std::string, std::string> parse_kv_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    return parse_kv_config(in);
}

enum class SelectionMethod { kGreedy, kRandom, kPeri };

inline std::string method_name(SelectionMethod m) {
    switch (m) {
        case SelectionMethod::kGreedy: return "greedy";
        case SelectionMethod::kRandom: return "random";
        case SelectionMethod::kPeri: return "peri";
    }
    return "?";
}

inline SelectionMethod parse_method(const std::string& name) {
    if (name == "greedy") return SelectionMethod::kGreedy;
    if (name == "random") return SelectionMethod::kRandom;
    if (name == "peri") return SelectionMethod::kPeri;
    throw std::invalid_argument("unknown method: " + name);
}

struct ExperimentConfig {
    GraphSpec graph;
    std::size_t hub_count = 0;
    std::size_t hub_links = 0;
    std::optional<std::string> import_path;
    double destination_fraction = 0.1;
    double tau = 0.0;
    std::vector<SelectionMethod> methods = {SelectionMethod::kGreedy, SelectionMethod::kRandom,
                                            SelectionMethod::kPeri};
    std::vector<std::size_t> k_list = {2, 4, 6, 9, 12, 16, 20};
    std::uint64_t master_seed = 1;
    std::size_t instance_count = 25;
    std::size_t peri_periods = 800;
    std::string output_path;

    void validate() const {
        if (!(destination_fraction > 0.0 && destination_fraction <= 1.0))
            throw std::invalid_argument("destination fraction must be in (0, 1]");
        if (instance_count == 0) throw std::invalid_argument("need at least one instance seed");
        if (methods.empty() || k_list.empty())
            throw std::invalid_argument("need at least one method and one k");
        if (tau < 0.0) throw std::invalid_argument("tau must be >= 0");
    }
};

struct ResultRow {
    std::string experiment;
    std::uint64_t seed = 0;
    std::string method;
    std::size_t k = 0;
    std::string metric;
    double value = 0.0;
    std::string error;       // empty on success
    double wall_seconds = 0.0;  // timing sidecar only, never in the main CSV
};

inline constexpr const char* kCsvHeader = "# latsim-csv v1";

/// Deterministic CSV: only config-derived fields, so identical configs give
/// byte-identical files. Wall-clock timings go to a separate sidecar.
inline void write_result_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
    out << kCsvHeader << "\n";
    out << "experiment,seed,method,k,metric,value,error\n";
    std::ostringstream fmt;
    fmt.precision(17);
    for (const ResultRow& r : rows) {
        fmt.str("");
        fmt << r.value;
        out << r.experiment << ',' << r.seed << ',' << r.method << ',' << r.k << ',' << r.metric
            << ',' << fmt.str() << ',' << r.error << "\n";
    }
}

inline void write_timing_sidecar(std::ostream& out, const std::vector<ResultRow>& rows) {
    out << "# latsim-timing v1 (non-deterministic)\n";
    for (const ResultRow& r : rows)
        out << r.experiment << ',' << r.seed << ',' << r.method << ',' << r.k << ','
            << r.wall_seconds << "\n";
}

struct SweepSummary {
    std::string method;
    std::size_t k = 0;
    double mean = 0.0;
    double stddev = 0.0;
    std::size_t count = 0;
};

inline std::vector<SweepSummary> summarize_sweep(const std::vector<ResultRow>& rows) {
    std::map<std::pair<std::string, std::size_t>, std::vector<double>> cells;
    for (const ResultRow& r : rows)
        if (r.error.empty()) cells[{r.method, r.k}].push_back(r.value);
    std::vector<SweepSummary> out;
    for (const auto& [key, values] : cells) {
        SweepSummary s;
        s.method = key.first;
        s.k = key.second;
        s.count = values.size();
        double sum = 0.0;
        for (double v : values) sum += v;
        s.mean = sum / static_cast<double>(values.size());
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.stddev = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
        out.push_back(s);
    }
    return out;
}

namespace detail {

struct SweepInstance {
    Topology topo;
    SourceDestSpec sd;
};

inline SweepInstance build_sweep_instance(const ExperimentConfig& cfg, std::uint64_t seed) {
    SweepInstance inst;
    if (cfg.import_path) {
        std::ifstream in(*cfg.import_path);
        if (!in) throw std::invalid_argument("cannot open edge list: " + *cfg.import_path);
        inst.topo = import_edge_list(in);
    } else {
        GraphSpec gs = cfg.graph;
        gs.seed = derive_seed(seed, 0);
        inst.topo = generate_graph(gs);
        if (cfg.hub_count > 0)
            inst.topo = enrich_with_hubs(inst.topo, cfg.hub_count, cfg.hub_links,
                                         derive_seed(seed, 1));
    }
    std::size_t n = inst.topo.node_count();
    inst.sd.sources.resize(n);
    for (NodeId v = 0; v < n; ++v) inst.sd.sources[v] = v;
    std::size_t t_count = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(cfg.destination_fraction * static_cast<double>(n))));
    std::vector<NodeId> pool = inst.sd.sources;
    Rng rng = make_rng(derive_seed(seed, 2));
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(t_count);
    std::sort(pool.begin(), pool.end());
    inst.sd.destinations = pool;
    return inst;
}

}  // namespace detail

/// Full sweep: methods x k x instance seeds, advantage metric per cell.
/// Cells for one instance share the generated graph; instances run in a
/// worker pool and rows come back in deterministic (seed, method, k) order.
inline std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    auto run_instance = [&cfg](std::size_t index) {
        std::uint64_t seed = derive_seed(cfg.master_seed, index);
        std::vector<ResultRow> rows;
        detail::SweepInstance inst;
        std::string build_error;
        try {
            inst = detail::build_sweep_instance(cfg, seed);
        } catch (const std::exception& e) {
            build_error = e.what();
        }
        std::optional<AdvantageEvaluator> eval;
        if (build_error.empty()) eval.emplace(inst.topo, inst.sd);
        for (SelectionMethod m : cfg.methods) {
            for (std::size_t k : cfg.k_list) {
                ResultRow row;
                row.experiment = "advantage-sweep";
                row.seed = seed;
                row.method = method_name(m);
                row.k = k;
                row.metric = "advantage";
                auto started = std::chrono::steady_clock::now();
                try {
                    if (!build_error.empty()) throw std::runtime_error(build_error);
                    AgentPlacement placement;
                    switch (m) {
                        case SelectionMethod::kGreedy:
                            placement = greedy_select(*eval, k, cfg.tau);
                            break;
                        case SelectionMethod::kRandom:
                            placement = random_select(inst.topo, k, derive_seed(seed, 3),
                                                      cfg.tau);
                            break;
                        case SelectionMethod::kPeri:
                            placement = peri_triangular_sim(inst.topo, inst.sd, k,
                                                            cfg.peri_periods,
                                                            derive_seed(seed, 4), cfg.tau)
                                            .placement;
                            break;
                    }
                    row.value = static_cast<double>(
                                    eval->doubled_value(placement.peers, placement.tau)) /
                                2.0;
                } catch (const std::exception& e) {
                    row.error = e.what();
                }
                row.wall_seconds =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
                        .count();
                rows.push_back(std::move(row));
            }
        }
        return rows;
    };

    std::vector<std::future<std::vector<ResultRow>>> futures;
    futures.reserve(cfg.instance_count);
    for (std::size_t i = 0; i < cfg.instance_count; ++i)
        futures.push_back(std::async(std::launch::async, run_instance, i));
    std::vector<ResultRow> rows;
    for (auto& f : futures) {
        std::vector<ResultRow> part = f.get();
        rows.insert(rows.end(), part.begin(), part.end());
    }
    std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        if (a.method != b.method) return a.method < b.method;
        if (a.k != b.k) return a.k < b.k;
        return a.seed < b.seed;
    });
    return rows;
}

}  // namespace latsim
