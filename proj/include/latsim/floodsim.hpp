#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "latsim/peri.hpp"
#include "latsim/rng.hpp"
#include "latsim/topology.hpp"

namespace latsim {

struct ChurnConfig {
    double lambda = 0.0;      // per-connection teardown rate
    std::size_t peer_cap = 0; // h, 0 means unlimited
    std::size_t dynamic_slots = 1;  // F, informational here
};

enum class AgentStrategy {
    kBaseline,   // random initial peers, links churn like everyone else's
    kStaticSet,  // pinned placement, links never torn down
    kPeri        // peer set driven by periodic scoring and eviction
};

struct AgentConfig {
    AgentStrategy strategy = AgentStrategy::kBaseline;
    std::vector<NodeId> initial_peers;  // kStaticSet, or explicit start for others
    std::size_t peer_count = 0;         // sampled uniformly when initial_peers empty
    double link_weight = 1.0;
    PeriConfig peri;                    // kPeri only
    std::optional<NodeId> victim;       // tracked for discovery statistics
};

struct SimConfig {
    Topology topology;
    std::vector<double> source_weights;  // per base node
    double tx_rate = 1.0;
    double relay_delay = 0.0;
    double hop_multiplier = 3.0;
    std::optional<ChurnConfig> churn;
    double duration = 0.0;
    std::vector<AgentConfig> agents;
    std::vector<NodeId> observers;                 // base observers; agents always observe
    std::optional<std::size_t> forward_subset;     // per-hop random fanout cap

    void validate() const {
        if (!(duration > 0.0)) throw std::invalid_argument("duration must be > 0");
        if (!(tx_rate > 0.0)) throw std::invalid_argument("tx_rate must be > 0");
        if (hop_multiplier < 1.0) throw std::invalid_argument("hop_multiplier must be >= 1");
        if (relay_delay < 0.0) throw std::invalid_argument("relay_delay must be >= 0");
        if (source_weights.size() != topology.node_count())
            throw std::invalid_argument("source_weights size mismatch");
        double total = 0.0;
        for (double w : source_weights) {
            if (w < 0.0) throw std::invalid_argument("source weight must be >= 0");
            total += w;
        }
        if (!(total > 0.0)) throw std::invalid_argument("source weights must not all be zero");
        if (churn && !(churn->lambda > 0.0))
            throw std::invalid_argument("churn lambda must be > 0");
        if (forward_subset && *forward_subset == 0)
            throw std::invalid_argument("forward subset must be >= 1");
        for (const AgentConfig& a : agents) {
            for (NodeId p : a.initial_peers)
                if (p >= topology.node_count())
                    throw std::invalid_argument("agent peer outside topology");
            if (a.strategy == AgentStrategy::kPeri) a.peri.validate();
        }
    }
};

struct LatencySample {
    std::uint64_t tx_id;
    NodeId source;
    NodeId observer;
    double arrival;                // absolute time, infinity when never delivered
    double first_network_arrival;  // emission time at the source
    // accumulated along the delivery path from the emission instant, so it
    // matches a shortest-path sum exactly instead of arrival minus emission
    double latency;
};

struct ObserverSummary {
    NodeId observer = 0;
    std::size_t delivered = 0;
    std::size_t absent = 0;
    double mean_latency = 0.0;
    double median_latency = 0.0;
};

struct LatencyReport {
    std::vector<LatencySample> samples;
    std::vector<ObserverSummary> summaries;
    std::size_t tx_count = 0;
    bool any_absent = false;
};

struct AgentOutcome {
    NodeId node = 0;  // the agent's id in the extended node space
    std::vector<NodeId> final_peers;
    std::size_t periods_run = 0;
    bool victim_peer_at_end = false;
    double victim_uptime = 0.0;
};

struct SimResult {
    LatencyReport report;
    std::vector<AgentOutcome> agents;
};

namespace detail {

struct SimEvent {
    double time;
    std::uint64_t seq;
    enum Kind { kEmit, kDeliver, kTeardown, kPeriod } kind;
    std::uint64_t tx = 0;
    NodeId from = 0;
    NodeId to = 0;
    std::uint64_t version = 0;
    std::uint32_t agent = 0;
    double lat = 0.0;  // path-sum latency carried alongside absolute time
};

struct SimEventLater {
    bool operator()(const SimEvent& a, const SimEvent& b) const {
        if (a.time != b.time) return a.time > b.time;
        return a.seq > b.seq;
    }
};

class FloodSim {
  public:
    FloodSim(const SimConfig& config, std::uint64_t seed)
        : cfg_(config),
          n_base_(config.topology.node_count()),
          n_total_(n_base_ + config.agents.size()),
          adj_(n_total_),
          traffic_rng_(make_rng(derive_seed(seed, 0))),
          churn_rng_(make_rng(derive_seed(seed, 1))),
          relay_rng_(make_rng(derive_seed(seed, 2))),
          source_dist_(config.source_weights.begin(), config.source_weights.end()) {
        cfg_.validate();
        for (const Edge& e : cfg_.topology.edges()) add_link(e.u, e.v, e.w, 0.0, true);
        for (std::size_t i = 0; i < cfg_.agents.size(); ++i) {
            agents_.push_back(AgentRt{});
            AgentRt& rt = agents_.back();
            rt.cfg = cfg_.agents[i];
            rt.node = static_cast<NodeId>(n_base_ + i);
            rt.rng = make_rng(derive_seed(seed, 16 + i));
            std::vector<NodeId> peers = rt.cfg.initial_peers;
            if (peers.empty() && rt.cfg.peer_count > 0)
                peers = sample_base_nodes(rt.cfg.peer_count, {}, rt.rng);
            rt.state.peers = peers;
            bool churnable = rt.cfg.strategy != AgentStrategy::kStaticSet;
            for (NodeId p : peers) add_link(rt.node, p, rt.cfg.link_weight, 0.0, churnable);
            if (rt.cfg.strategy == AgentStrategy::kPeri)
                push_event({rt.cfg.peri.period_length, next_seq(), SimEvent::kPeriod, 0, 0, 0, 0,
                            static_cast<std::uint32_t>(i)});
        }
    }

    SimResult run() {
        push_event({exp_draw(traffic_rng_, cfg_.tx_rate), next_seq(), SimEvent::kEmit});
        while (!heap_.empty()) {
            SimEvent ev = heap_.top();
            heap_.pop();
            // duration bounds emission and topology dynamics; deliveries
            // already in flight drain so every tx finishes propagating
            if (ev.time > cfg_.duration && ev.kind != SimEvent::kDeliver) continue;
            switch (ev.kind) {
                case SimEvent::kEmit: handle_emit(ev); break;
                case SimEvent::kDeliver: handle_deliver(ev); break;
                case SimEvent::kTeardown: handle_teardown(ev); break;
                case SimEvent::kPeriod: handle_period(ev); break;
            }
        }
        return finalize();
    }

  private:
    struct LinkInfo {
        double w;
        std::uint64_t version;
    };
    struct AgentRt {
        AgentConfig cfg;
        NodeId node = 0;
        PeriState state;
        Rng rng{0};
        std::unordered_map<std::uint64_t, TxObservation> period_obs;
        std::unordered_set<std::uint64_t> scored_txs;
        std::unordered_map<NodeId, double> joined_at;
        std::unordered_map<NodeId, double> uptime;
        std::unordered_map<NodeId, double> up_since;
        double victim_uptime = 0.0;
        std::size_t periods_run = 0;
    };

    SimConfig cfg_;
    std::size_t n_base_;
    std::size_t n_total_;
    std::vector<std::unordered_map<NodeId, LinkInfo>> adj_;
    std::priority_queue<SimEvent, std::vector<SimEvent>, SimEventLater> heap_;
    std::uint64_t seq_ = 0;
    std::uint64_t link_version_ = 0;
    Rng traffic_rng_;
    Rng churn_rng_;
    Rng relay_rng_;
    std::discrete_distribution<std::size_t> source_dist_;
    std::vector<AgentRt> agents_;
    std::vector<NodeId> tx_source_;
    std::vector<double> tx_emit_;
    std::vector<std::vector<double>> arrival_;  // [tx][node], absolute
    std::vector<std::vector<double>> latency_;  // [tx][node], exact path sums

    std::uint64_t next_seq() { return seq_++; }
    void push_event(SimEvent ev) { heap_.push(ev); }

    static double exp_draw(Rng& rng, double rate) {
        return std::exponential_distribution<double>(rate)(rng);
    }

    bool is_agent(NodeId v) const { return v >= n_base_; }
    AgentRt* agent_of(NodeId v) { return is_agent(v) ? &agents_[v - n_base_] : nullptr; }

    std::size_t base_degree(NodeId v) const {
        std::size_t deg = 0;
        for (const auto& [u, info] : adj_[v])
            if (u < n_base_) ++deg;
        return deg;
    }

    std::vector<NodeId> sample_base_nodes(std::size_t count,
                                          const std::unordered_set<NodeId>& exclude, Rng& rng) {
        std::vector<NodeId> pool;
        pool.reserve(n_base_);
        for (NodeId v = 0; v < n_base_; ++v)
            if (!exclude.count(v)) pool.push_back(v);
        std::shuffle(pool.begin(), pool.end(), rng);
        pool.resize(std::min(count, pool.size()));
        return pool;
    }

    void add_link(NodeId u, NodeId v, double w, double now, bool churnable) {
        std::uint64_t ver = ++link_version_;
        adj_[u][v] = {w, ver};
        adj_[v][u] = {w, ver};
        if (AgentRt* a = agent_of(u)) {
            a->up_since[v] = now;
            a->joined_at[v] = now;
        }
        if (AgentRt* a = agent_of(v)) {
            a->up_since[u] = now;
            a->joined_at[u] = now;
        }
        if (churnable && cfg_.churn) {
            Rng& rng = is_agent(u)   ? agent_of(u)->rng
                       : is_agent(v) ? agent_of(v)->rng
                                     : churn_rng_;
            push_event({now + exp_draw(rng, cfg_.churn->lambda), next_seq(), SimEvent::kTeardown,
                        0, u, v, ver, 0});
        }
    }

    void remove_link(NodeId u, NodeId v, double now) {
        adj_[u].erase(v);
        adj_[v].erase(u);
        if (AgentRt* a = agent_of(u)) settle_uptime(*a, v, now);
        if (AgentRt* a = agent_of(v)) settle_uptime(*a, u, now);
    }

    void settle_uptime(AgentRt& a, NodeId peer, double now) {
        auto it = a.up_since.find(peer);
        if (it == a.up_since.end()) return;
        double span = now - it->second;
        a.uptime[peer] += span;
        if (a.cfg.victim && *a.cfg.victim == peer) a.victim_uptime += span;
        a.up_since.erase(it);
    }

    void handle_emit(SimEvent ev) {
        std::uint64_t tx = tx_source_.size();
        NodeId source = static_cast<NodeId>(source_dist_(traffic_rng_));
        tx_source_.push_back(source);
        tx_emit_.push_back(ev.time);
        arrival_.emplace_back(n_total_, kInfDistance);
        latency_.emplace_back(n_total_, kInfDistance);
        arrival_[tx][source] = ev.time;
        latency_[tx][source] = 0.0;
        forward(tx, source, ev.time, 0.0);
        push_event({ev.time + exp_draw(traffic_rng_, cfg_.tx_rate), next_seq(), SimEvent::kEmit});
    }

    void forward(std::uint64_t tx, NodeId from, double now, double lat) {
        std::vector<std::pair<NodeId, double>> out;
        out.reserve(adj_[from].size());
        for (const auto& [v, info] : adj_[from]) out.emplace_back(v, info.w);
        std::sort(out.begin(), out.end());
        if (cfg_.forward_subset && out.size() > *cfg_.forward_subset) {
            std::shuffle(out.begin(), out.end(), relay_rng_);
            out.resize(*cfg_.forward_subset);
            std::sort(out.begin(), out.end());
        }
        for (const auto& [v, w] : out) {
            double cost = cfg_.hop_multiplier * w + cfg_.relay_delay;
            push_event({now + cost, next_seq(), SimEvent::kDeliver, tx, from, v, 0, 0,
                        lat + cost});
        }
    }

    void handle_deliver(SimEvent ev) {
        if (AgentRt* a = agent_of(ev.to)) {
            // late arrivals for an already-scored tx must not reopen it as an
            // orphan observation missing every fast peer
            if (!a->scored_txs.count(ev.tx)) {
                TxObservation& obs = a->period_obs[ev.tx];
                if (obs.arrivals.empty()) {
                    obs.tx_id = ev.tx;
                    obs.source = std::to_string(tx_source_[ev.tx]);
                }
                auto [it, fresh] = obs.arrivals.emplace(ev.from, ev.time);
                if (!fresh) it->second = std::min(it->second, ev.time);
            }
        }
        latency_[ev.tx][ev.to] = std::min(latency_[ev.tx][ev.to], ev.lat);
        if (arrival_[ev.tx][ev.to] <= ev.time && std::isfinite(arrival_[ev.tx][ev.to])) return;
        arrival_[ev.tx][ev.to] = ev.time;
        forward(ev.tx, ev.to, ev.time, ev.lat);
    }

    void handle_teardown(SimEvent ev) {
        auto it = adj_[ev.from].find(ev.to);
        if (it == adj_[ev.from].end() || it->second.version != ev.version) return;
        double torn_weight = it->second.w;
        remove_link(ev.from, ev.to, ev.time);

        // one endpoint immediately re-peers; agent endpoints own their slots
        NodeId endpoint;
        if (is_agent(ev.from)) endpoint = ev.from;
        else if (is_agent(ev.to)) endpoint = ev.to;
        else endpoint = (churn_rng_() & 1) ? ev.from : ev.to;

        AgentRt* arp = agent_of(endpoint);
        Rng& rng = arp ? arp->rng : churn_rng_;
        std::vector<NodeId> pool;
        pool.reserve(n_base_);
        for (NodeId v = 0; v < n_base_; ++v) {
            if (v == endpoint || adj_[endpoint].count(v)) continue;
            if (arp && arp->state.blocked.count(v)) continue;
            if (!arp && cfg_.churn->peer_cap > 0 && base_degree(v) >= cfg_.churn->peer_cap)
                continue;
            pool.push_back(v);
        }
        if (pool.empty()) {
            if (arp) std::erase(arp->state.peers, endpoint == ev.from ? ev.to : ev.from);
            return;
        }
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        NodeId fresh = pool[pick(rng)];
        double w = arp ? arp->cfg.link_weight : torn_weight;
        add_link(endpoint, fresh, w, ev.time, true);
        if (arp) {
            NodeId lost = endpoint == ev.from ? ev.to : ev.from;
            std::erase(arp->state.peers, lost);
            arp->state.peers.push_back(fresh);
        }
    }

    void handle_period(SimEvent ev) {
        AgentRt& a = agents_[ev.agent];
        const PeriConfig& pc = a.cfg.peri;

        // settle connection spans into the cumulative counters before the
        // per-period window is reset
        std::vector<NodeId> connected;
        for (const auto& [peer, since] : a.up_since) connected.push_back(peer);
        for (NodeId peer : connected) {
            settle_uptime(a, peer, ev.time);
            a.up_since[peer] = ev.time;
        }
        std::unordered_map<NodeId, double> connected_fraction;
        for (NodeId p : a.state.peers)
            connected_fraction[p] = (a.uptime.count(p) ? a.uptime[p] : 0.0) / pc.period_length;

        // score only observations old enough that every delta is final (any
        // peer still missing is already capped at delta_max); younger ones
        // carry over intact so boundary-straddling txs never orphan
        std::vector<TxObservation> observations;
        std::unordered_map<std::uint64_t, TxObservation> carry;
        for (auto& [tx, obs] : a.period_obs) {
            if (obs.first_arrival() > ev.time - pc.delta_max) {
                carry.emplace(tx, std::move(obs));
            } else {
                a.scored_txs.insert(tx);
                observations.push_back(std::move(obs));
            }
        }
        a.period_obs = std::move(carry);
        std::sort(observations.begin(), observations.end(),
                  [](const TxObservation& x, const TxObservation& y) { return x.tx_id < y.tx_id; });

        std::unordered_map<NodeId, double> score_from;
        for (NodeId p : a.state.peers)
            if (auto it = a.joined_at.find(p); it != a.joined_at.end()) score_from[p] = it->second;
        std::vector<NodeId> evicted =
            peri_step(a.state, observations, pc, connected_fraction, score_from);
        for (NodeId p : evicted)
            if (adj_[a.node].count(p)) remove_link(a.node, p, ev.time);

        std::unordered_set<NodeId> current(a.state.peers.begin(), a.state.peers.end());
        auto sampler = [&]() -> std::optional<NodeId> {
            std::vector<NodeId> pool;
            for (NodeId v = 0; v < n_base_; ++v)
                if (!a.state.blocked.count(v) && !current.count(v)) pool.push_back(v);
            if (pool.empty() && !a.state.blocklist.empty()) {
                // recycle the oldest half of the blocklist so long runs keep
                // discovering peers
                std::size_t unblock = std::max<std::size_t>(1, a.state.blocklist.size() / 2);
                for (std::size_t i = 0; i < unblock; ++i)
                    a.state.blocked.erase(a.state.blocklist[i]);
                a.state.blocklist.erase(a.state.blocklist.begin(),
                                        a.state.blocklist.begin() + static_cast<long>(unblock));
                for (NodeId v = 0; v < n_base_; ++v)
                    if (!a.state.blocked.count(v) && !current.count(v)) pool.push_back(v);
            }
            if (pool.empty()) return std::nullopt;
            std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
            NodeId v = pool[pick(a.rng)];
            current.insert(v);
            return v;
        };
        std::vector<NodeId> before(a.state.peers);
        refill_peers(a.state, sampler, pc);
        std::unordered_set<NodeId> old(before.begin(), before.end());
        for (NodeId p : a.state.peers)
            if (!old.count(p)) add_link(a.node, p, a.cfg.link_weight, ev.time, true);

        // fresh accounting window; up_since was already rebased and the
        // carried observations stay in period_obs
        a.uptime.clear();
        for (auto& [peer, since] : a.up_since) since = ev.time;
        ++a.periods_run;

        double next = ev.time + pc.period_length;
        if (next <= cfg_.duration)
            push_event({next, next_seq(), SimEvent::kPeriod, 0, 0, 0, 0, ev.agent});
    }

    SimResult finalize() {
        for (AgentRt& a : agents_) {
            std::vector<NodeId> connected;
            for (const auto& [peer, since] : a.up_since) connected.push_back(peer);
            for (NodeId peer : connected) settle_uptime(a, peer, cfg_.duration);
        }
        SimResult result;
        LatencyReport& rep = result.report;
        rep.tx_count = tx_source_.size();

        std::vector<NodeId> observers = cfg_.observers;
        for (const AgentRt& a : agents_) observers.push_back(a.node);
        std::sort(observers.begin(), observers.end());
        observers.erase(std::unique(observers.begin(), observers.end()), observers.end());

        for (NodeId obs : observers) {
            ObserverSummary summary;
            summary.observer = obs;
            std::vector<double> latencies;
            for (std::uint64_t tx = 0; tx < rep.tx_count; ++tx) {
                double t = arrival_[tx][obs];
                rep.samples.push_back({tx, tx_source_[tx], obs, t, tx_emit_[tx],
                                       latency_[tx][obs]});
                if (std::isfinite(t)) {
                    latencies.push_back(latency_[tx][obs]);
                    ++summary.delivered;
                } else {
                    ++summary.absent;
                    rep.any_absent = true;
                }
            }
            if (!latencies.empty()) {
                double sum = 0.0;
                for (double x : latencies) sum += x;
                summary.mean_latency = sum / static_cast<double>(latencies.size());
                std::sort(latencies.begin(), latencies.end());
                std::size_t m = latencies.size();
                summary.median_latency =
                    m % 2 ? latencies[m / 2] : 0.5 * (latencies[m / 2 - 1] + latencies[m / 2]);
            }
            rep.summaries.push_back(summary);
        }

        for (AgentRt& a : agents_) {
            for (NodeId p : std::vector<NodeId>(a.state.peers))
                settle_uptime(a, p, cfg_.duration);
            AgentOutcome out;
            out.node = a.node;
            out.final_peers = a.state.peers;
            std::sort(out.final_peers.begin(), out.final_peers.end());
            out.periods_run = a.periods_run;
            out.victim_uptime = a.victim_uptime;
            out.victim_peer_at_end =
                a.cfg.victim && std::find(out.final_peers.begin(), out.final_peers.end(),
                                          *a.cfg.victim) != out.final_peers.end();
            result.agents.push_back(std::move(out));
        }
        return result;
    }
};

}  // namespace detail

inline SimResult run_flood_sim_full(const SimConfig& config, std::uint64_t seed) {
    detail::FloodSim sim(config, seed);
    return sim.run();
}

inline LatencyReport run_flood_sim(const SimConfig& config, std::uint64_t seed) {
    return run_flood_sim_full(config, seed).report;
}

struct DirectLatencySummary {
    bool empty = true;
    double targeted = 0.0;        // mean latency of txs from the target source
    double overall = 0.0;         // mean latency over all delivered txs
    std::size_t targeted_count = 0;
    std::size_t overall_count = 0;
};

inline DirectLatencySummary direct_latencies(const LatencyReport& report, NodeId agent,
                                             std::optional<NodeId> target = std::nullopt) {
    DirectLatencySummary out;
    double t_sum = 0.0, o_sum = 0.0;
    bool seen_observer = false;
    for (const LatencySample& s : report.samples) {
        if (s.observer != agent) continue;
        seen_observer = true;
        if (!std::isfinite(s.arrival)) continue;
        double latency = s.latency;
        o_sum += latency;
        ++out.overall_count;
        if (target && s.source == *target) {
            t_sum += latency;
            ++out.targeted_count;
        }
    }
    if (!seen_observer) throw std::invalid_argument("agent is not an observer in this report");
    if (out.overall_count > 0) out.overall = o_sum / static_cast<double>(out.overall_count);
    if (target) {
        out.empty = out.targeted_count == 0;
        if (!out.empty) out.targeted = t_sum / static_cast<double>(out.targeted_count);
    } else {
        out.empty = out.overall_count == 0;
    }
    return out;
}

struct TriangularLatencyResult {
    double value = kInfDistance;      // L_s(a) + L_t(a)
    std::optional<bool> front_run;    // unknown without a companion run
    bool companion_disconnected = false;
};

/// Triangular targeted latency toward the pair (s, t), plus the front-run
/// predicate when a companion report measured without the agent is given.
/// If the companion never delivers s-sourced txs to t, removal disconnected
/// the pair; the predicate is reported true with the flag set.
inline TriangularLatencyResult triangular_targeted_latency(
    const LatencyReport& report, NodeId agent, NodeId s, NodeId t,
    const LatencyReport* companion = nullptr) {
    DirectLatencySummary from_s = direct_latencies(report, agent, s);
    DirectLatencySummary from_t = direct_latencies(report, agent, t);
    TriangularLatencyResult out;
    if (from_s.empty || from_t.empty) return out;
    out.value = from_s.targeted + from_t.targeted;
    if (companion != nullptr) {
        DirectLatencySummary baseline = direct_latencies(*companion, t, s);
        if (baseline.empty) {
            out.companion_disconnected = true;
            out.front_run = true;
        } else {
            out.front_run = baseline.targeted > out.value;
        }
    }
    return out;
}

struct StrategyComparison {
    SimResult sim;
    // deltas[i]: per-tx arrival difference of agent i vs agent 0; txs missing
    // at either observer are skipped and counted instead.
    std::vector<std::vector<double>> deltas;
    std::vector<double> mean_delta;
    std::vector<std::size_t> skipped;
};

/// One simulation, several observing agents, common random numbers. Agent 0
/// is the baseline; every other agent is compared against it tx by tx.
inline StrategyComparison run_strategy_comparison(const SimConfig& config, std::uint64_t seed) {
    if (config.agents.size() < 2)
        throw std::invalid_argument("comparison needs at least two agents");
    StrategyComparison out;
    out.sim = run_flood_sim_full(config, seed);
    const LatencyReport& rep = out.sim.report;

    std::size_t n_agents = config.agents.size();
    NodeId base_node = static_cast<NodeId>(config.topology.node_count());
    std::vector<std::unordered_map<std::uint64_t, double>> arrivals(n_agents);
    for (const LatencySample& s : rep.samples) {
        if (s.observer < base_node) continue;
        std::size_t idx = s.observer - base_node;
        if (std::isfinite(s.arrival)) arrivals[idx][s.tx_id] = s.arrival;
    }
    out.deltas.resize(n_agents);
    out.mean_delta.assign(n_agents, 0.0);
    out.skipped.assign(n_agents, 0);
    for (std::size_t i = 0; i < n_agents; ++i) {
        for (std::uint64_t tx = 0; tx < rep.tx_count; ++tx) {
            auto mine = arrivals[i].find(tx);
            auto base = arrivals[0].find(tx);
            if (mine == arrivals[i].end() || base == arrivals[0].end()) {
                ++out.skipped[i];
                continue;
            }
            out.deltas[i].push_back(mine->second - base->second);
        }
        if (!out.deltas[i].empty()) {
            double sum = 0.0;
            for (double d : out.deltas[i]) sum += d;
            out.mean_delta[i] = sum / static_cast<double>(out.deltas[i].size());
        }
    }
    return out;
}

}  // namespace latsim
