// latsim command-line front end: graph generation and import, advantage
// evaluation and selection, Peri triangular simulation, flood simulation,
// liveness schedule checks, experiment sweeps, and the verification battery.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "latsim/advantage.hpp"
#include "latsim/experiment.hpp"
#include "latsim/floodsim.hpp"
#include "latsim/liveness.hpp"
#include "latsim/peri.hpp"
#include "latsim/topology.hpp"

using json = nlohmann::json;
using namespace latsim;

namespace {

Topology load_topology(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open topology file: " + path);
    return import_edge_list(in);
}

void write_topology(const Topology& topo, const std::string& path) {
    if (path.empty() || path == "-") {
        export_edge_list(topo, std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open output file: " + path);
    export_edge_list(topo, out);
}

std::vector<NodeId> parse_id_list(const std::string& csv) {
    std::vector<NodeId> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(static_cast<NodeId>(std::stoul(tok)));
    return out;
}

GraphModel parse_model(const std::string& name) {
    if (name == "er") return GraphModel::kErdosRenyi;
    if (name == "regular") return GraphModel::kRandomRegular;
    if (name == "ba") return GraphModel::kBarabasiAlbert;
    if (name == "ws") return GraphModel::kWattsStrogatz;
    throw std::invalid_argument("unknown graph model: " + name + " (er|regular|ba|ws)");
}

/// S = all nodes, T = a seeded uniform sample of fraction * n nodes.
SourceDestSpec default_sd(const Topology& topo, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw std::invalid_argument("destination fraction must be in (0, 1]");
    SourceDestSpec sd;
    std::size_t n = topo.node_count();
    sd.sources.resize(n);
    for (NodeId v = 0; v < n; ++v) sd.sources[v] = v;
    std::vector<NodeId> pool = sd.sources;
    Rng rng = make_rng(seed);
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)))));
    std::sort(pool.begin(), pool.end());
    sd.destinations = pool;
    return sd;
}

/// First line `p q`, then one subset per line as whitespace-separated
/// element indices in 1..p.
SetCoverInstance load_setcover(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open set-cover file: " + path);
    SetCoverInstance inst;
    std::size_t q = 0;
    if (!(in >> inst.element_count >> q))
        throw std::invalid_argument("set-cover file must start with 'p q'");
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::vector<std::size_t> subset;
        std::size_t e;
        while (ls >> e) subset.push_back(e);
        if (!subset.empty()) inst.subsets.push_back(subset);
    }
    if (inst.subsets.size() != q)
        throw std::invalid_argument("set-cover file subset count does not match header");
    inst.validate();
    return inst;
}

json placement_json(const AdvantageEvaluator& eval, const AgentPlacement& placement) {
    AdvantageResult res = eval.evaluate(placement.peers, placement.tau);
    return json{{"peers", placement.peers},
                {"tau", placement.tau},
                {"advantage", res.value()},
                {"advantage_doubled", res.doubled},
                {"shortcut_pairs", res.shortcut_pairs.size()},
                {"tie_pairs", res.tie_pairs.size()}};
}

SimConfig sim_config_from_kv(const std::unordered_map<std::string, std::string>& kv) {
    auto get = [&](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        return it->second;
    };
    auto require = [&](const std::string& key) {
        auto v = get(key);
        if (!v) throw std::invalid_argument("config missing key: " + key);
        return *v;
    };

    SimConfig cfg;
    if (auto path = get("topology")) {
        cfg.topology = load_topology(*path);
    } else {
        GraphSpec gs;
        gs.model = parse_model(require("graph.model"));
        gs.node_count = std::stoul(require("graph.n"));
        gs.target_avg_degree = std::stod(require("graph.avg_degree"));
        if (auto b = get("graph.beta")) gs.rewire_prob = std::stod(*b);
        gs.seed = std::stoull(require("graph.seed"));
        cfg.topology = generate_graph(gs);
        if (auto hc = get("graph.hubs"))
            cfg.topology = enrich_with_hubs(cfg.topology, std::stoul(*hc),
                                            std::stoul(require("graph.hub_links")),
                                            derive_seed(gs.seed, 7));
    }
    cfg.source_weights.assign(cfg.topology.node_count(), 1.0);
    if (auto src = get("source")) {
        cfg.source_weights.assign(cfg.topology.node_count(), 0.0);
        for (NodeId v : parse_id_list(*src)) cfg.source_weights.at(v) = 1.0;
    }
    cfg.tx_rate = std::stod(require("tx_rate"));
    cfg.duration = std::stod(require("duration"));
    if (auto v = get("relay_delay")) cfg.relay_delay = std::stod(*v);
    if (auto v = get("hop_multiplier")) cfg.hop_multiplier = std::stod(*v);
    if (auto v = get("churn.lambda")) {
        ChurnConfig churn;
        churn.lambda = std::stod(*v);
        if (auto h = get("churn.peer_cap")) churn.peer_cap = std::stoul(*h);
        cfg.churn = churn;
    }
    if (auto v = get("forward_subset")) cfg.forward_subset = std::stoul(*v);
    if (auto v = get("observers")) cfg.observers = parse_id_list(*v);
    return cfg;
}

AgentConfig agent_from_strategy(const std::string& name, const SimConfig& cfg,
                                const std::unordered_map<std::string, std::string>& kv) {
    auto get_num = [&](const std::string& key, double fallback) {
        auto it = kv.find(key);
        return it == kv.end() ? fallback : std::stod(it->second);
    };
    AgentConfig a;
    a.peer_count = static_cast<std::size_t>(get_num("agent.peers", 8));
    if (name == "baseline") {
        a.strategy = AgentStrategy::kBaseline;
    } else if (name == "static") {
        a.strategy = AgentStrategy::kStaticSet;
        auto it = kv.find("agent.static_peers");
        if (it != kv.end()) a.initial_peers = parse_id_list(it->second);
    } else if (name == "peri") {
        a.strategy = AgentStrategy::kPeri;
        a.peri.max_peers = a.peer_count;
        a.peri.keep_count = static_cast<std::size_t>(
            get_num("agent.keep", std::max<double>(1.0, static_cast<double>(a.peer_count) - 2.0)));
        a.peri.period_length = get_num("agent.period", cfg.duration / 10.0);
        a.peri.delta_max = get_num("agent.delta_max", 20.0);
    } else {
        throw std::invalid_argument("unknown strategy: " + name + " (baseline|static|peri)");
    }
    auto vic = kv.find("agent.victim");
    if (vic != kv.end()) {
        a.victim = static_cast<NodeId>(std::stoul(vic->second));
        if (a.strategy == AgentStrategy::kPeri) {
            a.peri.relevance = Relevance::kTargetSet;
            a.peri.target_sources.insert(vic->second);
        }
    }
    return a;
}

int run_verify_suite() {
    struct Check {
        std::string name;
        bool ok;
    };
    std::vector<Check> checks;
    auto add = [&](const std::string& name, bool ok) { checks.push_back({name, ok}); };

    {
        CounterexampleInstance ce = build_greedy_counterexample(3);
        AdvantageEvaluator eval(ce.topology, ce.sd);
        AgentPlacement greedy = greedy_select(eval, 6, ce.tau);
        std::vector<NodeId> alt = ce.mixed_s;
        alt.insert(alt.end(), ce.mixed_r.begin(), ce.mixed_r.end());
        add("counterexample greedy value 6l-3",
            eval.doubled_value(greedy.peers, ce.tau) == 2 * (6 * 3 - 3));
        add("counterexample alternative value l(l-1)",
            eval.doubled_value(alt, ce.tau) == 2 * (3 * 2));
    }
    {
        SetCoverInstance sc{4, {{1, 2}, {2, 3}, {3, 4}}};
        ReductionInstance red = build_setcover_reduction(sc);
        std::vector<NodeId> peers{red.center, red.gamma_minus[0], red.gamma_minus[2]};
        add("set-cover reduction advantage |union|",
            AdvantageEvaluator(red.topology, red.sd).doubled_value(peers, red.tau) == 2 * 4);
    }
    {
        GraphSpec gs{GraphModel::kErdosRenyi, 40, 6.0, 0.1, 11};
        Topology topo = generate_graph(gs);
        SimConfig cfg;
        cfg.topology = topo;
        cfg.source_weights.assign(topo.node_count(), 1.0);
        cfg.tx_rate = 1.0;
        cfg.hop_multiplier = 1.0;
        cfg.duration = 20.0;
        for (NodeId v = 0; v < topo.node_count(); ++v) cfg.observers.push_back(v);
        LatencyReport rep = run_flood_sim(cfg, 5);
        DistanceMatrix dm = shortest_distances(topo, cfg.observers);
        bool ok = rep.tx_count > 0;
        for (const LatencySample& s : rep.samples)
            ok = ok && s.latency == dm.row(s.source)[s.observer];
        add("flood arrivals match shortest paths", ok);
    }
    {
        LiveNetParams params;
        params.q = 0.2;
        params.peer_budget = 5;
        Schedule sched = derive_schedule(0.3, params);
        std::size_t hits = 0;
        const std::size_t trials = 400;
        for (std::size_t t = 0; t < trials; ++t)
            if (run_find_target(params, sched, derive_seed(99, t)).success) ++hits;
        add("liveness schedule success floor", wilson_lower_bound(hits, trials) >= 0.7);
    }

    bool all = true;
    for (const Check& c : checks) {
        std::cout << (c.ok ? "PASS  " : "FAIL  ") << c.name << "\n";
        all = all && c.ok;
    }
    return all ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"strategic latency simulator"};
    app.require_subcommand(1);
    int exit_code = 0;

    // graph family
    auto* graph = app.add_subcommand("graph", "topology generation and transforms");
    graph->require_subcommand(1);
    struct {
        std::string model = "er", input, output;
        std::size_t n = 100, hubs = 0, hub_links = 0, size = 0;
        double avg_degree = 4.0, beta = 0.1;
        std::uint64_t seed = 0;
        bool have_seed = false;
    } g;
    auto* ggen = graph->add_subcommand("gen", "generate a random graph");
    ggen->add_option("--model", g.model, "er|regular|ba|ws");
    ggen->add_option("--n", g.n, "node count");
    ggen->add_option("--avg-degree", g.avg_degree, "target average degree");
    ggen->add_option("--beta", g.beta, "rewiring probability (ws)");
    ggen->add_option("--seed", g.seed)->required();
    ggen->add_option("--hubs", g.hubs, "extra hub nodes to append");
    ggen->add_option("--hub-links", g.hub_links, "links per appended hub");
    ggen->add_option("-o,--output", g.output);
    ggen->callback([&] {
        GraphSpec gs{parse_model(g.model), g.n, g.avg_degree, g.beta, g.seed};
        Topology topo = generate_graph(gs);
        if (g.hubs > 0) topo = enrich_with_hubs(topo, g.hubs, g.hub_links, derive_seed(g.seed, 7));
        write_topology(topo, g.output);
    });
    auto* gimp = graph->add_subcommand("import", "normalize an edge list");
    gimp->add_option("--input", g.input)->required();
    gimp->add_option("-o,--output", g.output);
    gimp->callback([&] { write_topology(load_topology(g.input), g.output); });
    auto* ghub = graph->add_subcommand("hubs", "append hub nodes to a topology");
    ghub->add_option("--input", g.input)->required();
    ghub->add_option("--count", g.hubs)->required();
    ghub->add_option("--links", g.hub_links)->required();
    ghub->add_option("--seed", g.seed)->required();
    ghub->add_option("-o,--output", g.output);
    ghub->callback([&] {
        write_topology(enrich_with_hubs(load_topology(g.input), g.hubs, g.hub_links, g.seed),
                       g.output);
    });
    auto* gsnow = graph->add_subcommand("snowball", "snowball-sample a topology");
    gsnow->add_option("--input", g.input)->required();
    gsnow->add_option("--size", g.size)->required();
    gsnow->add_option("--seed", g.seed)->required();
    gsnow->add_option("-o,--output", g.output);
    gsnow->callback([&] {
        write_topology(snowball_sample(load_topology(g.input), g.size, g.seed), g.output);
    });

    // advantage family
    auto* adv = app.add_subcommand("advantage", "adversarial advantage computation");
    adv->require_subcommand(1);
    struct {
        std::string input, peers, setcover_path, subsets;
        double tau = 0.0, dest_fraction = 0.1;
        std::size_t k = 2, l = 2;
        std::uint64_t seed = 0, sd_seed = 0;
    } a;
    auto add_sd_opts = [&](CLI::App* cmd) {
        cmd->add_option("--input", a.input)->required();
        cmd->add_option("--tau", a.tau);
        cmd->add_option("--dest-fraction", a.dest_fraction);
        cmd->add_option("--sd-seed", a.sd_seed, "destination sampling seed");
    };
    auto* aeval = adv->add_subcommand("eval", "evaluate an explicit peer set");
    add_sd_opts(aeval);
    aeval->add_option("--peers", a.peers)->required();
    aeval->callback([&] {
        Topology topo = load_topology(a.input);
        AdvantageEvaluator eval(topo, default_sd(topo, a.dest_fraction, a.sd_seed));
        std::cout << placement_json(eval, {parse_id_list(a.peers), a.tau}).dump(2) << "\n";
    });
    auto* agreedy = adv->add_subcommand("greedy", "greedy peer selection");
    add_sd_opts(agreedy);
    agreedy->add_option("--k", a.k)->required();
    agreedy->callback([&] {
        Topology topo = load_topology(a.input);
        AdvantageEvaluator eval(topo, default_sd(topo, a.dest_fraction, a.sd_seed));
        std::cout << placement_json(eval, greedy_select(eval, a.k, a.tau)).dump(2) << "\n";
    });
    auto* arandom = adv->add_subcommand("random", "random peer selection");
    add_sd_opts(arandom);
    arandom->add_option("--k", a.k)->required();
    arandom->add_option("--seed", a.seed)->required();
    arandom->callback([&] {
        Topology topo = load_topology(a.input);
        AdvantageEvaluator eval(topo, default_sd(topo, a.dest_fraction, a.sd_seed));
        std::cout << placement_json(eval, random_select(topo, a.k, a.seed, a.tau)).dump(2) << "\n";
    });
    auto* abrute = adv->add_subcommand("brute", "exact optimum by enumeration");
    add_sd_opts(abrute);
    abrute->add_option("--k", a.k)->required();
    abrute->callback([&] {
        Topology topo = load_topology(a.input);
        AdvantageEvaluator eval(topo, default_sd(topo, a.dest_fraction, a.sd_seed));
        std::cout << placement_json(eval, brute_force_select(eval, a.k, a.tau)).dump(2) << "\n";
    });
    auto* ace = adv->add_subcommand("counterexample", "greedy-vs-optimal tree family");
    ace->add_option("--l", a.l)->required();
    ace->callback([&] {
        CounterexampleInstance ce = build_greedy_counterexample(a.l);
        AdvantageEvaluator eval(ce.topology, ce.sd);
        AgentPlacement greedy = greedy_select(eval, 2 * a.l, ce.tau);
        std::vector<NodeId> alt = ce.mixed_s;
        alt.insert(alt.end(), ce.mixed_r.begin(), ce.mixed_r.end());
        std::sort(alt.begin(), alt.end());
        json out{{"l", a.l},
                 {"greedy", placement_json(eval, greedy)},
                 {"mixed_placement", placement_json(eval, {alt, ce.tau})}};
        std::cout << out.dump(2) << "\n";
    });
    auto* asc = adv->add_subcommand("setcover", "hardness reduction instance");
    asc->add_option("--instance", a.setcover_path)->required();
    asc->add_option("--subsets", a.subsets, "subset indices J, comma separated (0-based)");
    asc->callback([&] {
        SetCoverInstance sc = load_setcover(a.setcover_path);
        ReductionInstance red = build_setcover_reduction(sc);
        std::vector<NodeId> peers{red.center};
        std::vector<char> in_union(sc.element_count + 1, 0);
        for (NodeId j : parse_id_list(a.subsets)) {
            peers.push_back(red.gamma_minus.at(j));
            for (std::size_t e : sc.subsets.at(j)) in_union[e] = 1;
        }
        std::size_t covered = 0;
        for (std::size_t e = 1; e <= sc.element_count; ++e) covered += in_union[e];
        AdvantageEvaluator eval(red.topology, red.sd);
        json out = placement_json(eval, {peers, red.tau});
        out["covered_elements"] = covered;
        std::cout << out.dump(2) << "\n";
    });

    // peri family
    auto* peri = app.add_subcommand("peri", "peer scoring and eviction");
    peri->require_subcommand(1);
    struct {
        std::string input;
        std::size_t k = 8, periods = 800;
        double tau = 0.0, dest_fraction = 0.1;
        std::uint64_t seed = 0, sd_seed = 0;
    } p;
    auto* ptri = peri->add_subcommand("tri-sim", "message-free triangular run");
    ptri->add_option("--input", p.input)->required();
    ptri->add_option("--k", p.k)->required();
    ptri->add_option("--periods", p.periods);
    ptri->add_option("--tau", p.tau);
    ptri->add_option("--dest-fraction", p.dest_fraction);
    ptri->add_option("--sd-seed", p.sd_seed);
    ptri->add_option("--seed", p.seed)->required();
    ptri->callback([&] {
        Topology topo = load_topology(p.input);
        SourceDestSpec sd = default_sd(topo, p.dest_fraction, p.sd_seed);
        TriangularSimResult res = peri_triangular_sim(topo, sd, p.k, p.periods, p.seed, p.tau);
        AdvantageEvaluator eval(topo, sd);
        json out = placement_json(eval, res.placement);
        out["advantage_trajectory"] = res.advantage_trajectory;
        out["kept_hub_fraction"] = res.kept_hub_fraction;
        std::cout << out.dump(2) << "\n";
    });

    // floodsim family
    auto* flood = app.add_subcommand("floodsim", "discrete-event flood simulation");
    flood->require_subcommand(1);
    struct {
        std::string config, output, strategies = "baseline,peri";
        std::uint64_t seed = 0;
    } f;
    auto* frun = flood->add_subcommand("run", "single simulation run");
    frun->add_option("--config", f.config)->required();
    frun->add_option("--seed", f.seed)->required();
    frun->add_option("-o,--output", f.output);
    frun->callback([&] {
        SimConfig cfg = sim_config_from_kv(parse_kv_config_file(f.config));
        LatencyReport rep = run_flood_sim(cfg, f.seed);
        std::ostream* out = &std::cout;
        std::ofstream file;
        if (!f.output.empty()) {
            file.open(f.output);
            if (!file) throw std::invalid_argument("cannot open output file: " + f.output);
            out = &file;
        }
        *out << kCsvHeader << "\n" << "tx_id,source,observer,strategy,arrival,delta_vs_baseline\n";
        std::ostringstream fmt;
        fmt.precision(17);
        for (const LatencySample& s : rep.samples) {
            fmt.str("");
            fmt << s.latency;
            *out << s.tx_id << ',' << s.source << ',' << s.observer << ",," << fmt.str() << ",\n";
        }
    });
    auto* fcmp = flood->add_subcommand("compare", "paired strategy comparison");
    fcmp->add_option("--config", f.config)->required();
    fcmp->add_option("--strategies", f.strategies, "comma list, first is the baseline");
    fcmp->add_option("--seed", f.seed)->required();
    fcmp->add_option("-o,--output", f.output);
    fcmp->callback([&] {
        auto kv = parse_kv_config_file(f.config);
        SimConfig cfg = sim_config_from_kv(kv);
        std::vector<std::string> names;
        std::stringstream ss(f.strategies);
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (!tok.empty()) names.push_back(tok);
        for (const std::string& name : names) cfg.agents.push_back(agent_from_strategy(name, cfg, kv));
        StrategyComparison cmp = run_strategy_comparison(cfg, f.seed);
        json out;
        out["tx_count"] = cmp.sim.report.tx_count;
        for (std::size_t i = 0; i < names.size(); ++i) {
            out["strategies"][names[i]] = {{"mean_delta_vs_baseline", cmp.mean_delta[i]},
                                           {"paired_samples", cmp.deltas[i].size()},
                                           {"skipped", cmp.skipped[i]},
                                           {"victim_peer_at_end",
                                            cmp.sim.agents[i].victim_peer_at_end},
                                           {"victim_uptime", cmp.sim.agents[i].victim_uptime}};
        }
        std::cout << out.dump(2) << "\n";
    });

    // liveness family
    auto* live = app.add_subcommand("liveness", "victim-discovery schedule checks");
    live->require_subcommand(1);
    struct {
        double eps = 0.1, q = 0.1, nu = 1.0, lambda = 1.0, dmin = 0.01, dmax = 10000.0;
        std::size_t d = 2, trials = 2000, points = 60, targets = 1;
        std::string eps_list = "0.5,0.2,0.1,0.05,0.02,0.01";
        std::uint64_t seed = 0;
    } lv;
    auto add_live_params = [&](CLI::App* cmd) {
        cmd->add_option("--q", lv.q);
        cmd->add_option("--nu", lv.nu);
        cmd->add_option("--lambda", lv.lambda);
        cmd->add_option("--d", lv.d);
    };
    auto make_params = [&] {
        LiveNetParams params;
        params.q = lv.q;
        params.nu = lv.nu;
        params.lambda = lv.lambda;
        params.peer_budget = lv.d;
        params.peer_cap = std::max<std::size_t>(lv.d, 8);
        params.target_count = lv.targets;
        return params;
    };
    auto schedule_json = [](const Schedule& s) {
        return json{{"K", s.iterations}, {"delta1", s.delta1},   {"delta2", s.delta2},
                    {"eps1", s.eps1},    {"eps2", s.eps2},       {"gamma", s.gamma},
                    {"mu", s.mu},        {"zeta", s.zeta},       {"total_time_bound",
                                                                 s.total_time_bound()}};
    };
    auto* lsched = live->add_subcommand("schedule", "derive the search schedule");
    lsched->add_option("--eps", lv.eps)->required();
    add_live_params(lsched);
    lsched->callback([&] {
        std::cout << schedule_json(derive_schedule(lv.eps, make_params())).dump(2) << "\n";
    });
    auto* lrun = live->add_subcommand("run", "Monte-Carlo schedule validation");
    lrun->add_option("--eps", lv.eps)->required();
    add_live_params(lrun);
    lrun->add_option("--trials", lv.trials);
    lrun->add_option("--targets", lv.targets);
    lrun->add_option("--seed", lv.seed)->required();
    lrun->callback([&] {
        LiveNetParams params = make_params();
        std::size_t hits = 0;
        double elapsed = 0.0;
        for (std::size_t t = 0; t < lv.trials; ++t) {
            FindResult r = find_multi_targets(params, lv.eps, derive_seed(lv.seed, t));
            if (r.success) ++hits;
            elapsed += r.elapsed;
        }
        json out{{"trials", lv.trials},
                 {"successes", hits},
                 {"success_rate", static_cast<double>(hits) / static_cast<double>(lv.trials)},
                 {"wilson_lower_bound", wilson_lower_bound(hits, lv.trials)},
                 {"target_rate", 1.0 - lv.eps},
                 {"mean_elapsed", elapsed / static_cast<double>(lv.trials)}};
        std::cout << out.dump(2) << "\n";
    });
    auto* ltail = live->add_subcommand("tail", "Poisson tail bound check");
    ltail->add_option("--nu", lv.nu)->required();
    ltail->add_option("--dmin", lv.dmin);
    ltail->add_option("--dmax", lv.dmax);
    ltail->add_option("--points", lv.points);
    ltail->callback([&] {
        std::vector<double> deltas;
        for (std::size_t i = 0; i < lv.points; ++i)
            deltas.push_back(lv.dmin * std::pow(lv.dmax / lv.dmin,
                                                static_cast<double>(i) /
                                                    static_cast<double>(lv.points - 1)));
        json rows = json::array();
        bool all = true;
        for (const TailWitness& w : poisson_tail_check(lv.nu, deltas)) {
            rows.push_back({{"delta", w.delta},
                            {"probability", w.probability},
                            {"bound", w.bound},
                            {"holds", w.holds}});
            all = all && w.holds;
        }
        std::cout << json{{"mu", compute_mu(lv.nu)}, {"all_hold", all}, {"grid", rows}}.dump(2)
                  << "\n";
        if (!all) throw std::runtime_error("tail bound violated on the grid");
    });
    auto* llb = live->add_subcommand("lower-bound", "draws-to-hit quantile probe");
    llb->add_option("--q", lv.q);
    llb->add_option("--trials", lv.trials);
    llb->add_option("--eps-list", lv.eps_list);
    llb->add_option("--seed", lv.seed)->required();
    llb->callback([&] {
        std::vector<double> grid;
        std::stringstream ss(lv.eps_list);
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (!tok.empty()) grid.push_back(std::stod(tok));
        std::vector<LowerBoundPoint> pts = lower_bound_probe(lv.q, grid, lv.trials, lv.seed);
        std::vector<double> xs, ys;
        json rows = json::array();
        for (const LowerBoundPoint& pt : pts) {
            rows.push_back({{"epsilon", pt.epsilon}, {"draws", pt.draws}});
            xs.push_back(std::log(1.0 / pt.epsilon));
            ys.push_back(static_cast<double>(pt.draws));
        }
        LinearFit fit = linear_fit(xs, ys);
        std::cout << json{{"points", rows},
                          {"fit", {{"slope", fit.slope}, {"intercept", fit.intercept},
                                   {"r2", fit.r2}}}}
                         .dump(2)
                  << "\n";
    });

    // sweep + verify
    auto* sweep = app.add_subcommand("sweep", "advantage experiment sweep");
    struct {
        std::string config, output = "sweep.csv";
    } sw;
    sweep->add_option("--config", sw.config)->required();
    sweep->add_option("-o,--output", sw.output);
    sweep->callback([&] {
        auto kv = parse_kv_config_file(sw.config);
        ExperimentConfig cfg;
        auto get = [&](const std::string& key) -> std::optional<std::string> {
            auto it = kv.find(key);
            if (it == kv.end()) return std::nullopt;
            return it->second;
        };
        cfg.graph.model = parse_model(get("graph.model").value_or("ba"));
        cfg.graph.node_count = std::stoul(get("graph.n").value_or("300"));
        cfg.graph.target_avg_degree = std::stod(get("graph.avg_degree").value_or("4"));
        if (auto b = get("graph.beta")) cfg.graph.rewire_prob = std::stod(*b);
        if (auto h = get("graph.hubs")) cfg.hub_count = std::stoul(*h);
        if (auto h = get("graph.hub_links")) cfg.hub_links = std::stoul(*h);
        if (auto path = get("import")) cfg.import_path = *path;
        if (auto v = get("dest_fraction")) cfg.destination_fraction = std::stod(*v);
        if (auto v = get("tau")) cfg.tau = std::stod(*v);
        if (auto v = get("seed")) cfg.master_seed = std::stoull(*v);
        if (auto v = get("instances")) cfg.instance_count = std::stoul(*v);
        if (auto v = get("peri_periods")) cfg.peri_periods = std::stoul(*v);
        if (auto v = get("methods")) {
            cfg.methods.clear();
            std::stringstream ss(*v);
            std::string tok;
            while (std::getline(ss, tok, ','))
                if (!tok.empty()) cfg.methods.push_back(parse_method(tok));
        }
        if (auto v = get("k_list")) {
            cfg.k_list.clear();
            std::stringstream ss(*v);
            std::string tok;
            while (std::getline(ss, tok, ','))
                if (!tok.empty()) cfg.k_list.push_back(std::stoul(tok));
        }
        cfg.output_path = sw.output;

        std::vector<ResultRow> rows = run_experiment(cfg);
        std::ofstream out(sw.output);
        if (!out) throw std::invalid_argument("cannot open output file: " + sw.output);
        write_result_csv(out, rows);
        std::ofstream timing(sw.output + ".timing");
        write_timing_sidecar(timing, rows);
        bool any_error = false;
        json summary = json::array();
        for (const SweepSummary& s : summarize_sweep(rows))
            summary.push_back({{"method", s.method},
                               {"k", s.k},
                               {"mean", s.mean},
                               {"stddev", s.stddev},
                               {"instances", s.count}});
        for (const ResultRow& r : rows) any_error = any_error || !r.error.empty();
        std::cout << json{{"rows", rows.size()}, {"summary", summary}}.dump(2) << "\n";
        if (any_error) throw std::runtime_error("sweep finished with failed rows");
    });

    auto* verify = app.add_subcommand("verify", "oracle and property battery");
    bool verify_requested = false;
    verify->callback([&] { verify_requested = true; });

    try {
        app.parse(argc, argv);
        if (verify_requested) exit_code = run_verify_suite();
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return exit_code;
}
