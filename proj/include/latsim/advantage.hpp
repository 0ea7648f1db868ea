#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "latsim/topology.hpp"

namespace latsim {

struct AgentPlacement {
    std::vector<NodeId> peers;  // U
    double tau = 0.0;
};

/// Advantage of Def-style half-integral counting. `doubled` is the exact
/// integer 2*value; `value` is derived from it so no 0.5 accumulation error
/// can creep in.
struct AdvantageResult {
    long long doubled = 0;
    std::vector<std::pair<NodeId, NodeId>> shortcut_pairs;
    std::vector<std::pair<NodeId, NodeId>> tie_pairs;

    double value() const { return static_cast<double>(doubled) / 2.0; }
};

struct SetCoverInstance {
    std::size_t element_count = 0;               // p, elements are 1..p
    std::vector<std::vector<std::size_t>> subsets;  // each Gamma_j as element indices

    void validate() const {
        if (element_count == 0) throw std::invalid_argument("empty element set");
        std::vector<char> covered(element_count + 1, 0);
        for (const auto& g : subsets)
            for (std::size_t e : g) {
                if (e < 1 || e > element_count)
                    throw std::invalid_argument("subset element out of range");
                covered[e] = 1;
            }
        for (std::size_t e = 1; e <= element_count; ++e)
            if (!covered[e]) throw std::invalid_argument("element not covered by any subset");
    }
};

/// Precomputes the shortest-path rows needed to evaluate the adversarial
/// advantage of arbitrary peer sets on a fixed (topology, S, T) instance.
/// Pairs with s == t or infinite base distance contribute nothing.
class AdvantageEvaluator {
public:
    AdvantageEvaluator(const Topology& topo, SourceDestSpec sd)
        : n_(topo.node_count()), sd_(std::move(sd)) {
        if (sd_.sources.empty() || sd_.destinations.empty())
            throw std::invalid_argument("sources and destinations must be non-empty");
        for (NodeId s : sd_.sources)
            if (s >= n_) throw std::invalid_argument("source out of range");
        for (NodeId t : sd_.destinations)
            if (t >= n_) throw std::invalid_argument("destination out of range");
        source_rows_.reserve(sd_.sources.size());
        for (NodeId s : sd_.sources) source_rows_.push_back(dijkstra(topo, s));
        dest_rows_.reserve(sd_.destinations.size());
        for (NodeId t : sd_.destinations) dest_rows_.push_back(dijkstra(topo, t));
    }

    std::size_t node_count() const { return n_; }
    const SourceDestSpec& sd() const { return sd_; }
    const std::vector<double>& source_row(std::size_t i) const { return source_rows_[i]; }
    const std::vector<double>& dest_row(std::size_t j) const { return dest_rows_[j]; }

    AdvantageResult evaluate(const std::vector<NodeId>& peers, double tau) const {
        AdvantageResult res;
        if (peers.empty()) return res;
        std::vector<double> a = min_rows(source_rows_, peers);
        std::vector<double> b = min_rows(dest_rows_, peers);
        for (std::size_t i = 0; i < sd_.sources.size(); ++i) {
            for (std::size_t j = 0; j < sd_.destinations.size(); ++j) {
                NodeId s = sd_.sources[i], t = sd_.destinations[j];
                if (s == t) continue;
                double base = source_rows_[i][t];
                if (!std::isfinite(base)) continue;
                double agent = a[i] + b[j];
                if (agent + tau < base) {
                    res.doubled += 2;
                    res.shortcut_pairs.push_back({s, t});
                } else if (agent + tau == base) {
                    res.doubled += 1;
                    res.tie_pairs.push_back({s, t});
                }
            }
        }
        return res;
    }

    long long doubled_value(const std::vector<NodeId>& peers, double tau) const {
        if (peers.empty()) return 0;
        return doubled_from_mins(min_rows(source_rows_, peers), min_rows(dest_rows_, peers), tau);
    }

    // min over peers of d(s_i, peer), one entry per source (resp. dest).
    std::vector<double> source_mins(const std::vector<NodeId>& peers) const {
        return min_rows(source_rows_, peers);
    }
    std::vector<double> dest_mins(const std::vector<NodeId>& peers) const {
        return min_rows(dest_rows_, peers);
    }

    long long doubled_from_mins(const std::vector<double>& a, const std::vector<double>& b,
                                double tau) const {
        long long doubled = 0;
        for (std::size_t i = 0; i < sd_.sources.size(); ++i) {
            const double ai = a[i];
            const std::vector<double>& row = source_rows_[i];
            NodeId s = sd_.sources[i];
            for (std::size_t j = 0; j < sd_.destinations.size(); ++j) {
                NodeId t = sd_.destinations[j];
                if (s == t) continue;
                double base = row[t];
                if (!std::isfinite(base)) continue;
                double agent = ai + b[j];
                if (agent + tau < base)
                    doubled += 2;
                else if (agent + tau == base)
                    doubled += 1;
            }
        }
        return doubled;
    }

private:
    static std::vector<double> min_rows(const std::vector<std::vector<double>>& rows,
                                        const std::vector<NodeId>& peers) {
        std::vector<double> mins(rows.size(), kInfDistance);
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (NodeId u : peers) mins[i] = std::min(mins[i], rows[i][u]);
        return mins;
    }

    std::size_t n_;
    SourceDestSpec sd_;
    std::vector<std::vector<double>> source_rows_;
    std::vector<std::vector<double>> dest_rows_;
};

inline AdvantageResult adversarial_advantage(const Topology& topo, const SourceDestSpec& sd,
                                             const AgentPlacement& placement) {
    for (NodeId u : placement.peers)
        if (u >= topo.node_count()) throw std::invalid_argument("peer out of range");
    return AdvantageEvaluator(topo, sd).evaluate(placement.peers, placement.tau);
}

/// Greedy peer selection: exhaustive argmax over unordered pairs, then one
/// argmax node per step. Ties go to the lexicographically smallest choice.
inline AgentPlacement greedy_select(const AdvantageEvaluator& eval, std::size_t k, double tau) {
    const std::size_t n = eval.node_count();
    if (k < 2) throw std::invalid_argument("greedy selection needs k >= 2");
    if (k > n) throw std::invalid_argument("k exceeds node count");

    std::vector<NodeId> best_pair;
    long long best = -1;
    std::vector<NodeId> pair(2);
    for (NodeId x = 0; x < n; ++x) {
        for (NodeId y = x + 1; y < n; ++y) {
            pair[0] = x;
            pair[1] = y;
            long long v = eval.doubled_value(pair, tau);
            if (v > best) {
                best = v;
                best_pair = pair;
            }
        }
    }

    std::vector<NodeId> peers = best_pair;
    std::vector<double> a = eval.source_mins(peers);
    std::vector<double> b = eval.dest_mins(peers);
    std::vector<char> in_set(n, 0);
    for (NodeId u : peers) in_set[u] = 1;
    std::vector<double> ca(a.size()), cb(b.size());
    while (peers.size() < k) {
        long long step_best = -1;
        NodeId step_node = 0;
        for (NodeId z = 0; z < n; ++z) {
            if (in_set[z]) continue;
            for (std::size_t i = 0; i < a.size(); ++i) ca[i] = std::min(a[i], eval.source_row(i)[z]);
            for (std::size_t j = 0; j < b.size(); ++j) cb[j] = std::min(b[j], eval.dest_row(j)[z]);
            long long v = eval.doubled_from_mins(ca, cb, tau);
            if (v > step_best) {
                step_best = v;
                step_node = z;
            }
        }
        peers.push_back(step_node);
        in_set[step_node] = 1;
        for (std::size_t i = 0; i < a.size(); ++i)
            a[i] = std::min(a[i], eval.source_row(i)[step_node]);
        for (std::size_t j = 0; j < b.size(); ++j)
            b[j] = std::min(b[j], eval.dest_row(j)[step_node]);
    }
    std::sort(peers.begin(), peers.end());
    return {peers, tau};
}

inline AgentPlacement greedy_select(const Topology& topo, const SourceDestSpec& sd, std::size_t k,
                                    double tau) {
    return greedy_select(AdvantageEvaluator(topo, sd), k, tau);
}

inline constexpr std::uint64_t kDefaultEnumerationCap = 2'000'000;

inline std::uint64_t binomial_or_cap(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
    if (k > n) return 0;
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > cap) return cap + 1;
    }
    return r;
}

/// Exact optimum over all k-subsets; ties broken by lexicographically
/// smallest subset. Refuses instances above the enumeration cap.
inline AgentPlacement brute_force_select(const AdvantageEvaluator& eval, std::size_t k, double tau,
                                         std::uint64_t cap = kDefaultEnumerationCap) {
    const std::size_t n = eval.node_count();
    if (k < 1 || k > n) throw std::invalid_argument("invalid k for brute force");
    if (binomial_or_cap(n, k, cap) > cap)
        throw std::runtime_error("instance too large: C(n,k) exceeds enumeration cap " +
                                 std::to_string(cap));

    std::vector<NodeId> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = static_cast<NodeId>(i);
    std::vector<NodeId> best_set;
    long long best = -1;
    while (true) {
        long long v = eval.doubled_value(idx, tau);
        if (v > best) {
            best = v;
            best_set = idx;
        }
        // next combination in lexicographic order
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return {best_set, tau};
}

inline AgentPlacement brute_force_select(const Topology& topo, const SourceDestSpec& sd,
                                         std::size_t k, double tau,
                                         std::uint64_t cap = kDefaultEnumerationCap) {
    return brute_force_select(AdvantageEvaluator(topo, sd), k, tau, cap);
}

inline AgentPlacement random_select(const Topology& topo, std::size_t k, std::uint64_t seed,
                                    double tau = 0.0) {
    if (k > topo.node_count()) throw std::invalid_argument("k exceeds node count");
    std::vector<NodeId> pool(topo.node_count());
    for (NodeId v = 0; v < topo.node_count(); ++v) pool[v] = v;
    Rng rng = make_rng(seed);
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return {pool, tau};
}

/// Sum over pairs of min_u d(s,u) + min_u d(u,t), graph distances standing
/// in for latency.
inline double aggregate_triangular_latency(const Topology& topo,
                                           const std::vector<std::pair<NodeId, NodeId>>& pairs,
                                           const AgentPlacement& placement) {
    if (pairs.empty()) return 0.0;
    if (placement.peers.empty())
        throw std::invalid_argument("aggregate triangular latency needs a non-empty peer set");
    DistanceMatrix rows = shortest_distances(topo, placement.peers);
    double total = 0.0;
    for (auto [s, t] : pairs) {
        double ds = kInfDistance, dt = kInfDistance;
        for (const auto& row : rows.distances) {
            ds = std::min(ds, row[s]);
            dt = std::min(dt, row[t]);
        }
        total += ds + dt;
    }
    return total;
}

struct ReductionInstance {
    Topology topology;
    SourceDestSpec sd;
    double tau = 0.0;
    NodeId center = 0;                  // c
    std::vector<NodeId> element_nodes;  // sigma_i
    std::vector<NodeId> gamma_minus;    // gamma-_j
    std::vector<NodeId> gamma_plus;     // gamma+_j
};

/// Set-cover hardness reduction graph: c at the hub, one node per element,
/// a gamma-/gamma+ pair per subset, unit weights, tau = 1.99.
inline ReductionInstance build_setcover_reduction(const SetCoverInstance& inst) {
    inst.validate();
    const std::size_t p = inst.element_count, q = inst.subsets.size();
    ReductionInstance out;
    out.center = 0;
    for (std::size_t i = 0; i < p; ++i) out.element_nodes.push_back(static_cast<NodeId>(1 + i));
    for (std::size_t j = 0; j < q; ++j) {
        out.gamma_minus.push_back(static_cast<NodeId>(1 + p + 2 * j));
        out.gamma_plus.push_back(static_cast<NodeId>(1 + p + 2 * j + 1));
    }
    std::vector<Edge> edges;
    for (std::size_t j = 0; j < q; ++j) {
        for (std::size_t e : inst.subsets[j])
            edges.push_back({out.element_nodes[e - 1], out.gamma_minus[j], 1.0});
        edges.push_back({out.gamma_minus[j], out.gamma_plus[j], 1.0});
        edges.push_back({out.gamma_plus[j], out.center, 1.0});
    }
    out.topology = Topology(1 + p + 2 * q, std::move(edges));
    out.sd.sources = out.element_nodes;
    out.sd.destinations = {out.center};
    out.tau = 1.99;
    return out;
}

struct CounterexampleInstance {
    Topology topology;
    SourceDestSpec sd;
    double tau = 3.99;
    NodeId g = 0;                     // far source at depth 3
    std::vector<NodeId> hubs;         // h_i, 2l of them
    std::vector<NodeId> hub_leaves;   // 3 destination leaves per hub
    std::vector<NodeId> mixed_r;      // destination r_i
    std::vector<NodeId> mixed_s;      // source s_i
};

/// Tree family on which greedy peer selection is provably far from optimal:
/// greedy harvests g plus hubs for 3 pairs each (6l-3 total at 2l peers),
/// while the {s_i} u {r_i} placement shortcuts l(l-1) cross pairs. tau=3.99.
///
/// Layout: center z; source branch z-x1-x2-g; 2l hub branches z-h_i with 3
/// leaves each; l mixed branches z-m_i with children r_i (destination) and
/// s_i (source), both at depth 2.
inline CounterexampleInstance build_greedy_counterexample(std::size_t l) {
    if (l < 2) throw std::invalid_argument("counterexample needs l >= 2");
    CounterexampleInstance out;
    std::vector<Edge> edges;
    NodeId next = 0;
    NodeId z = next++;
    NodeId x1 = next++, x2 = next++;
    out.g = next++;
    edges.push_back({z, x1, 1.0});
    edges.push_back({x1, x2, 1.0});
    edges.push_back({x2, out.g, 1.0});
    for (std::size_t i = 0; i < 2 * l; ++i) {
        NodeId h = next++;
        out.hubs.push_back(h);
        edges.push_back({z, h, 1.0});
    }
    for (NodeId h : out.hubs)
        for (int j = 0; j < 3; ++j) {
            NodeId leaf = next++;
            out.hub_leaves.push_back(leaf);
            edges.push_back({h, leaf, 1.0});
        }
    for (std::size_t i = 0; i < l; ++i) {
        NodeId m = next++, r = next++, s = next++;
        out.mixed_r.push_back(r);
        out.mixed_s.push_back(s);
        edges.push_back({z, m, 1.0});
        edges.push_back({m, r, 1.0});
        edges.push_back({m, s, 1.0});
    }
    out.topology = Topology(next, std::move(edges));
    out.sd.sources.push_back(out.g);
    for (NodeId s : out.mixed_s) out.sd.sources.push_back(s);
    out.sd.destinations = out.hub_leaves;
    for (NodeId r : out.mixed_r) out.sd.destinations.push_back(r);
    return out;
}

}  // namespace latsim
