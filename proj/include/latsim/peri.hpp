#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "latsim/advantage.hpp"
#include "latsim/topology.hpp"

namespace latsim {

enum class Relevance { kAll, kHashSampled, kTargetSet };

struct PeriConfig {
    std::size_t keep_count = 0;   // K
    std::size_t max_peers = 0;    // N
    double period_length = 0.0;   // T
    double delta_max = 0.0;
    std::size_t replace_count = 1;  // r, triangular mode
    Relevance relevance = Relevance::kAll;
    std::unordered_set<std::string> target_sources;  // kTargetSet only

    void validate() const {
        if (keep_count == 0 || keep_count > max_peers)
            throw std::invalid_argument("need 0 < K <= N");
        if (!(delta_max > 0.0)) throw std::invalid_argument("delta_max must be > 0");
        if (replace_count < 1) throw std::invalid_argument("replace_count must be >= 1");
    }
};

/// Per-transaction arrival timestamps as seen by the agent, one entry per
/// peer that delivered (or announced) the transaction. Absent peers are
/// treated as infinitely late.
struct TxObservation {
    std::uint64_t tx_id = 0;
    std::string source;  // logical-id token of the emitter
    std::unordered_map<NodeId, double> arrivals;

    double first_arrival() const {
        double best = kInfDistance;
        for (const auto& [peer, t] : arrivals) best = std::min(best, t);
        return best;
    }
};

struct PeriState {
    std::vector<NodeId> peers;  // insertion order preserved (eviction tie-break)
    std::vector<NodeId> blocklist;  // insertion order preserved (recycling)
    std::unordered_set<NodeId> blocked;
    std::unordered_map<NodeId, double> scores;
    std::unordered_set<NodeId> pinned;
    std::size_t period_index = 0;

    bool is_peer(NodeId v) const {
        return std::find(peers.begin(), peers.end(), v) != peers.end();
    }
    void block(NodeId v) {
        if (blocked.insert(v).second) blocklist.push_back(v);
    }
};

inline bool relevant(const TxObservation& tx, const PeriConfig& config) {
    switch (config.relevance) {
        case Relevance::kAll:
            return true;
        case Relevance::kHashSampled:
            return tx.tx_id % 4 == 0;
        case Relevance::kTargetSet:
            return config.target_sources.count(tx.source) > 0;
    }
    return false;
}

/// Average capped slowdown of `peer` relative to the fastest delivery,
/// over the relevant transactions of one period. A transaction the peer
/// never signaled contributes the delta_max cap; a peer that signaled
/// nothing at all has no score (nullopt feeds the excusal predicate).
inline std::optional<double> score_peer(const std::vector<TxObservation>& observations,
                                        NodeId peer, const PeriConfig& config,
                                        double score_from = -std::numeric_limits<double>::infinity()) {
    double sum = 0.0;
    std::size_t count = 0;
    bool delivered_any = false;
    for (const TxObservation& tx : observations) {
        if (!relevant(tx, config)) continue;
        double first = tx.first_arrival();
        if (!std::isfinite(first)) continue;
        // a peer cannot relay what was broadcast before it connected
        if (first < score_from) continue;
        auto it = tx.arrivals.find(peer);
        double slowdown = config.delta_max;
        if (it != tx.arrivals.end()) {
            delivered_any = true;
            slowdown = std::min(it->second - first, config.delta_max);
        }
        sum += slowdown;
        ++count;
    }
    if (!delivered_any || count == 0) return std::nullopt;
    return sum / static_cast<double>(count);
}

inline bool is_excused(NodeId peer, double connected_fraction,
                       const std::vector<TxObservation>& observations,
                       const PeriConfig& config) {
    if (connected_fraction < 0.5) return true;
    return !score_peer(observations, peer, config).has_value();
}

/// One scoring/eviction step. Evicts the e = N - K - #excused worst-scored
/// non-excused peers (floored at 0), blocklists them, never touches pinned
/// peers, and bumps the period index. Returns the evicted nodes.
inline std::vector<NodeId> peri_step(PeriState& state,
                                     const std::vector<TxObservation>& observations,
                                     const PeriConfig& config,
                                     const std::unordered_map<NodeId, double>& connected_fraction = {},
                                     const std::unordered_map<NodeId, double>& score_from = {}) {
    config.validate();
    if (state.peers.size() > config.max_peers)
        throw std::invalid_argument("peer set exceeds max_peers");

    long long evict_budget =
        static_cast<long long>(config.max_peers) - static_cast<long long>(config.keep_count);
    state.scores.clear();

    // candidates: (score, recency) for non-excused, non-pinned peers
    struct Candidate {
        NodeId peer;
        double score;
        std::size_t recency;  // larger = added later
    };
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < state.peers.size(); ++i) {
        NodeId p = state.peers[i];
        double frac = 1.0;
        if (auto it = connected_fraction.find(p); it != connected_fraction.end()) frac = it->second;
        double from = -std::numeric_limits<double>::infinity();
        if (auto it = score_from.find(p); it != score_from.end()) from = it->second;
        auto score = score_peer(observations, p, config, from);
        if (!score.has_value() || frac < 0.5) {
            --evict_budget;  // excused
            continue;
        }
        state.scores[p] = *score;
        if (!state.pinned.count(p)) candidates.push_back({p, *score, i});
    }

    std::vector<NodeId> evicted;
    if (evict_budget > 0) {
        // worst score first; on ties evict the most recently added peer
        std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
            if (a.score != b.score) return a.score > b.score;
            return a.recency > b.recency;
        });
        // never shrink below the keep count even when refill has been starved
        std::size_t room = state.peers.size() > config.keep_count
                               ? state.peers.size() - config.keep_count
                               : 0;
        std::size_t e = std::min({static_cast<std::size_t>(evict_budget), candidates.size(), room});
        for (std::size_t i = 0; i < e; ++i) {
            evicted.push_back(candidates[i].peer);
            state.block(candidates[i].peer);
        }
        std::unordered_set<NodeId> gone(evicted.begin(), evicted.end());
        std::erase_if(state.peers, [&](NodeId p) { return gone.count(p) > 0; });
    }
    ++state.period_index;
    return evicted;
}

/// Grows the peer set toward N with sampled candidates. The sampler returns
/// nullopt when its pool is exhausted; a partial refill is not an error.
inline void refill_peers(PeriState& state, const std::function<std::optional<NodeId>()>& sampler,
                         const PeriConfig& config) {
    while (state.peers.size() < config.max_peers) {
        std::optional<NodeId> cand = sampler();
        if (!cand.has_value()) break;
        if (state.blocked.count(*cand) || state.is_peer(*cand))
            throw std::logic_error("sampler returned a blocked or current peer");
        state.peers.push_back(*cand);
    }
}

/// Closed-form score over graph distances: equal attention to approaching
/// sources and destinations.
inline double simplified_score(const DistanceMatrix& distances, NodeId v,
                               const SourceDestSpec& sd) {
    double s_sum = 0.0;
    for (NodeId s : sd.sources) {
        double d = distances.row(s)[v];
        if (!std::isfinite(d)) return kInfDistance;
        s_sum += d;
    }
    double t_sum = 0.0;
    for (NodeId t : sd.destinations) {
        double d = distances.row(t)[v];
        if (!std::isfinite(d)) return kInfDistance;
        t_sum += d;
    }
    return s_sum / static_cast<double>(sd.sources.size()) +
           t_sum / static_cast<double>(sd.destinations.size());
}

struct TriangularSimResult {
    AgentPlacement placement;            // kept peers after the final period
    std::vector<double> advantage_trajectory;  // advantage of kept set per period
    std::vector<double> kept_hub_fraction;
};

/// Message-free Peri run against a fixed topology: k+r peer slots, peers
/// scored by the closed-form score, the r worst evicted and blocklisted
/// each period, slots refilled uniformly from the unblocked pool. The
/// advantage of the k kept peers is recorded per period. When the pool
/// runs dry the oldest half of the blocklist is recycled.
inline TriangularSimResult peri_triangular_sim(const Topology& topo, const SourceDestSpec& sd,
                                               std::size_t k, std::size_t periods,
                                               std::uint64_t seed, double tau = 0.0) {
    if (k < 2) throw std::invalid_argument("triangular sim needs k >= 2");
    const std::size_t n = topo.node_count();
    const std::size_t r = (k + 2) / 3;  // ceil(k/3)
    const std::size_t slots = std::min(k + r, n);

    // static per-node score
    std::vector<NodeId> all(n);
    for (NodeId v = 0; v < n; ++v) all[v] = v;
    std::vector<NodeId> needed;
    {
        std::set<NodeId> uniq(sd.sources.begin(), sd.sources.end());
        uniq.insert(sd.destinations.begin(), sd.destinations.end());
        needed.assign(uniq.begin(), uniq.end());
    }
    DistanceMatrix dm = shortest_distances(topo, needed);
    std::vector<double> phi(n);
    for (NodeId v = 0; v < n; ++v) phi[v] = simplified_score(dm, v, sd);

    AdvantageEvaluator eval(topo, sd);
    Rng rng = make_rng(seed);

    PeriState state;
    {
        std::vector<NodeId> pool = all;
        std::shuffle(pool.begin(), pool.end(), rng);
        state.peers.assign(pool.begin(), pool.begin() + static_cast<long>(slots));
    }

    TriangularSimResult result;
    if (periods == 0) {
        result.placement = {state.peers, tau};
        std::sort(result.placement.peers.begin(), result.placement.peers.end());
        return result;
    }

    auto sample_candidate = [&]() -> std::optional<NodeId> {
        std::vector<NodeId> pool;
        pool.reserve(n);
        std::unordered_set<NodeId> current(state.peers.begin(), state.peers.end());
        for (NodeId v = 0; v < n; ++v)
            if (!state.blocked.count(v) && !current.count(v)) pool.push_back(v);
        if (pool.empty()) {
            // recycle the oldest half of the blocklist
            std::size_t unblock = state.blocklist.size() / 2;
            if (unblock == 0) return std::nullopt;
            for (std::size_t i = 0; i < unblock; ++i) state.blocked.erase(state.blocklist[i]);
            state.blocklist.erase(state.blocklist.begin(),
                                  state.blocklist.begin() + static_cast<long>(unblock));
            for (NodeId v = 0; v < n; ++v)
                if (!state.blocked.count(v) && !current.count(v)) pool.push_back(v);
            if (pool.empty()) return std::nullopt;
        }
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        return pool[pick(rng)];
    };

    for (std::size_t h = 0; h < periods; ++h) {
        // evict the r worst-scored peers (ties: most recently added)
        struct Scored {
            NodeId peer;
            double score;
            std::size_t recency;
        };
        std::vector<Scored> scored;
        for (std::size_t i = 0; i < state.peers.size(); ++i)
            scored.push_back({state.peers[i], phi[state.peers[i]], i});
        std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
            if (a.score != b.score) return a.score > b.score;
            return a.recency > b.recency;
        });
        std::size_t evict = std::min(r, scored.size() > k ? scored.size() - k : 0);
        std::unordered_set<NodeId> gone;
        for (std::size_t i = 0; i < evict; ++i) {
            gone.insert(scored[i].peer);
            state.block(scored[i].peer);
        }
        std::erase_if(state.peers, [&](NodeId p) { return gone.count(p) > 0; });

        // kept set = best-scored k peers (all remaining after eviction)
        long long doubled = eval.doubled_value(state.peers, tau);
        result.advantage_trajectory.push_back(static_cast<double>(doubled) / 2.0);
        std::size_t hubs = 0;
        for (NodeId p : state.peers)
            if (topo.is_hub(p)) ++hubs;
        result.kept_hub_fraction.push_back(state.peers.empty()
                                               ? 0.0
                                               : static_cast<double>(hubs) /
                                                     static_cast<double>(state.peers.size()));

        if (h + 1 < periods) {
            while (state.peers.size() < slots) {
                auto cand = sample_candidate();
                if (!cand.has_value()) break;
                state.peers.push_back(*cand);
            }
        }
        ++state.period_index;
    }

    result.placement = {state.peers, tau};
    std::sort(result.placement.peers.begin(), result.placement.peers.end());
    return result;
}

}  // namespace latsim
