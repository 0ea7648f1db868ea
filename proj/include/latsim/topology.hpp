#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "latsim/rng.hpp"

namespace latsim {

using NodeId = std::uint32_t;

inline constexpr double kInfDistance = std::numeric_limits<double>::infinity();

struct Edge {
    NodeId u = 0;
    NodeId v = 0;
    double w = 1.0;
};

/// Weighted undirected P2P graph. Nodes are dense ids in [0, n). Immutable
/// after construction; no self-loops, no duplicate edges, weights > 0.
class Topology {
public:
    Topology() = default;

    Topology(std::size_t node_count, std::vector<Edge> edges)
        : n_(node_count) {
        adj_.resize(n_);
        edges_.reserve(edges.size());
        std::map<std::pair<NodeId, NodeId>, bool> seen;
        for (Edge e : edges) {
            if (e.u >= n_ || e.v >= n_)
                throw std::invalid_argument("edge endpoint out of range");
            if (e.u == e.v) throw std::invalid_argument("self-loop rejected");
            if (!(e.w > 0.0) || !std::isfinite(e.w))
                throw std::invalid_argument("edge weight must be positive and finite");
            auto key = std::minmax(e.u, e.v);
            if (seen.count(key)) throw std::invalid_argument("duplicate edge rejected");
            seen[key] = true;
            if (e.u > e.v) std::swap(e.u, e.v);
            edges_.push_back(e);
            adj_[e.u].push_back({e.v, e.w});
            adj_[e.v].push_back({e.u, e.w});
        }
        std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
            return std::tie(a.u, a.v) < std::tie(b.u, b.v);
        });
    }

    std::size_t node_count() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<std::pair<NodeId, double>>& neighbors(NodeId v) const {
        return adj_.at(v);
    }
    std::size_t degree(NodeId v) const { return adj_.at(v).size(); }

    bool connected() const {
        if (n_ == 0) return true;
        std::vector<char> vis(n_, 0);
        std::vector<NodeId> stack{0};
        vis[0] = 1;
        std::size_t count = 1;
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            for (auto [v, w] : adj_[u]) {
                (void)w;
                if (!vis[v]) {
                    vis[v] = 1;
                    ++count;
                    stack.push_back(v);
                }
            }
        }
        return count == n_;
    }

    double mean_degree() const {
        return n_ == 0 ? 0.0 : 2.0 * static_cast<double>(edges_.size()) / static_cast<double>(n_);
    }

    /// Reporting convention: a node is a hub iff deg(v) >= 0.1 * n.
    bool is_hub(NodeId v) const {
        return static_cast<double>(degree(v)) >= 0.1 * static_cast<double>(n_);
    }

private:
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::pair<NodeId, double>>> adj_;
};

enum class GraphModel { kErdosRenyi, kRandomRegular, kBarabasiAlbert, kWattsStrogatz, kImported };

struct GraphSpec {
    GraphModel model = GraphModel::kErdosRenyi;
    std::size_t node_count = 0;
    double target_avg_degree = 0.0;
    double rewire_prob = 0.1;  // Watts-Strogatz only
    std::uint64_t seed = 0;
};

struct SourceDestSpec {
    std::vector<NodeId> sources;
    std::vector<NodeId> destinations;
};

/// Row-per-source shortest-path distances.
struct DistanceMatrix {
    std::vector<NodeId> sources;
    std::vector<std::vector<double>> distances;

    const std::vector<double>& row(NodeId source) const {
        for (std::size_t i = 0; i < sources.size(); ++i)
            if (sources[i] == source) return distances[i];
        throw std::out_of_range("source not present in DistanceMatrix");
    }
};

inline std::vector<double> dijkstra(const Topology& topo, NodeId source) {
    if (source >= topo.node_count()) throw std::invalid_argument("invalid source node");
    std::vector<double> dist(topo.node_count(), kInfDistance);
    using Item = std::pair<double, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[source] = 0.0;
    heap.push({0.0, source});
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;
        for (auto [v, w] : topo.neighbors(u)) {
            double cand = d + w;
            if (cand < dist[v]) {
                dist[v] = cand;
                heap.push({cand, v});
            }
        }
    }
    return dist;
}

inline DistanceMatrix shortest_distances(const Topology& topo, const std::vector<NodeId>& sources) {
    DistanceMatrix m;
    m.sources = sources;
    m.distances.reserve(sources.size());
    for (NodeId s : sources) m.distances.push_back(dijkstra(topo, s));
    return m;
}

namespace detail {

inline Topology finalize_edges(std::size_t n, std::vector<std::pair<NodeId, NodeId>> pairs) {
    std::vector<Edge> edges;
    edges.reserve(pairs.size());
    for (auto [u, v] : pairs) edges.push_back({u, v, 1.0});
    return Topology(n, std::move(edges));
}

inline std::vector<std::pair<NodeId, NodeId>> gen_erdos_renyi(std::size_t n, double avg_deg, Rng& rng) {
    double p = avg_deg / static_cast<double>(n - 1);
    std::bernoulli_distribution coin(std::min(1.0, p));
    std::vector<std::pair<NodeId, NodeId>> pairs;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v)
            if (coin(rng)) pairs.push_back({u, v});
    return pairs;
}

// Pairing (configuration) model with rejection of self-loops and multi-edges.
inline bool gen_random_regular(std::size_t n, unsigned deg,
                               std::vector<std::pair<NodeId, NodeId>>& out, Rng& rng) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::vector<NodeId> stubs;
        stubs.reserve(n * deg);
        for (NodeId v = 0; v < n; ++v)
            for (unsigned i = 0; i < deg; ++i) stubs.push_back(v);
        std::shuffle(stubs.begin(), stubs.end(), rng);
        std::vector<std::pair<NodeId, NodeId>> pairs;
        std::map<std::pair<NodeId, NodeId>, bool> seen;
        bool ok = true;
        for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
            NodeId a = stubs[i], b = stubs[i + 1];
            if (a == b) { ok = false; break; }
            auto key = std::minmax(a, b);
            if (seen.count(key)) { ok = false; break; }
            seen[key] = true;
            pairs.push_back({a, b});
        }
        if (ok) {
            out = std::move(pairs);
            return true;
        }
    }
    return false;
}

inline std::vector<std::pair<NodeId, NodeId>> gen_barabasi_albert(std::size_t n, unsigned m, Rng& rng) {
    // Seed clique of m+1 nodes, then preferential attachment by sampling
    // edge endpoints.
    std::vector<std::pair<NodeId, NodeId>> pairs;
    std::vector<NodeId> endpoints;
    std::size_t m0 = std::min<std::size_t>(m + 1, n);
    for (NodeId u = 0; u < m0; ++u)
        for (NodeId v = u + 1; v < m0; ++v) {
            pairs.push_back({u, v});
            endpoints.push_back(u);
            endpoints.push_back(v);
        }
    for (NodeId v = static_cast<NodeId>(m0); v < n; ++v) {
        std::vector<NodeId> targets;
        int guard = 0;
        while (targets.size() < m && guard++ < 10000) {
            std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
            NodeId cand = endpoints[pick(rng)];
            if (std::find(targets.begin(), targets.end(), cand) == targets.end())
                targets.push_back(cand);
        }
        for (NodeId t : targets) {
            pairs.push_back({t, v});
            endpoints.push_back(t);
            endpoints.push_back(v);
        }
    }
    return pairs;
}

inline std::vector<std::pair<NodeId, NodeId>> gen_watts_strogatz(std::size_t n, unsigned ring_deg,
                                                                 double beta, Rng& rng) {
    std::map<std::pair<NodeId, NodeId>, bool> seen;
    std::vector<std::pair<NodeId, NodeId>> pairs;
    auto has = [&](NodeId a, NodeId b) { return seen.count(std::minmax(a, b)) > 0; };
    auto add = [&](NodeId a, NodeId b) {
        seen[std::minmax(a, b)] = true;
        pairs.push_back({a, b});
    };
    for (NodeId u = 0; u < n; ++u)
        for (unsigned j = 1; j <= ring_deg / 2; ++j)
            add(u, static_cast<NodeId>((u + j) % n));
    std::bernoulli_distribution coin(beta);
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (!coin(rng)) continue;
        auto [a, b] = pairs[i];
        for (int guard = 0; guard < 1000; ++guard) {
            NodeId c = pick(rng);
            if (c != a && c != b && !has(a, c)) {
                seen.erase(std::minmax(a, b));
                seen[std::minmax(a, c)] = true;
                pairs[i] = {a, c};
                break;
            }
        }
    }
    return pairs;
}

}  // namespace detail

/// Generates a connected random graph for the given model; deterministic in
/// spec.seed. Regenerates with a derived sub-seed on disconnection, up to
/// 100 attempts.
inline Topology generate_graph(const GraphSpec& spec) {
    if (spec.node_count < 2) throw std::invalid_argument("node_count must be >= 2");
    if (spec.target_avg_degree <= 0.0 ||
        spec.target_avg_degree >= static_cast<double>(spec.node_count))
        throw std::invalid_argument("target_avg_degree must be in (0, node_count)");
    if (spec.model == GraphModel::kImported)
        throw std::invalid_argument("imported topologies come from import_edge_list");

    unsigned deg = static_cast<unsigned>(std::llround(spec.target_avg_degree));
    if (spec.model == GraphModel::kRandomRegular) {
        if (deg == 0) throw std::invalid_argument("regular degree rounds to 0");
        if ((spec.node_count * deg) % 2 != 0)
            throw std::invalid_argument("regular graph needs even degree*count");
    }

    for (int attempt = 0; attempt < 100; ++attempt) {
        Rng rng = make_rng(derive_seed(spec.seed, static_cast<std::uint64_t>(attempt)));
        std::vector<std::pair<NodeId, NodeId>> pairs;
        switch (spec.model) {
            case GraphModel::kErdosRenyi:
                pairs = detail::gen_erdos_renyi(spec.node_count, spec.target_avg_degree, rng);
                break;
            case GraphModel::kRandomRegular:
                if (!detail::gen_random_regular(spec.node_count, deg, pairs, rng)) continue;
                break;
            case GraphModel::kBarabasiAlbert: {
                unsigned m = std::max(1u, static_cast<unsigned>(std::llround(spec.target_avg_degree / 2.0)));
                pairs = detail::gen_barabasi_albert(spec.node_count, m, rng);
                break;
            }
            case GraphModel::kWattsStrogatz: {
                unsigned ring = static_cast<unsigned>(std::llround(spec.target_avg_degree / 2.0)) * 2;
                if (ring == 0) ring = 2;
                pairs = detail::gen_watts_strogatz(spec.node_count, ring, spec.rewire_prob, rng);
                break;
            }
            case GraphModel::kImported:
                break;
        }
        Topology topo = detail::finalize_edges(spec.node_count, std::move(pairs));
        if (topo.connected()) return topo;
    }
    throw std::runtime_error("failed to generate a connected graph after 100 attempts");
}

/// Appends hub_count fresh nodes, each adjacent to hub_degree distinct
/// uniformly sampled original nodes. Original edges are untouched.
inline Topology enrich_with_hubs(const Topology& topo, std::size_t hub_count,
                                 std::size_t hub_degree, std::uint64_t seed) {
    if (hub_degree > topo.node_count())
        throw std::invalid_argument("hub_degree exceeds original node count");
    std::vector<Edge> edges = topo.edges();
    std::size_t n = topo.node_count();
    Rng rng = make_rng(seed);
    std::vector<NodeId> originals(n);
    for (NodeId v = 0; v < n; ++v) originals[v] = v;
    for (std::size_t h = 0; h < hub_count; ++h) {
        NodeId hub = static_cast<NodeId>(n + h);
        std::vector<NodeId> pool = originals;
        std::shuffle(pool.begin(), pool.end(), rng);
        for (std::size_t i = 0; i < hub_degree; ++i) edges.push_back({pool[i], hub, 1.0});
    }
    return Topology(n + hub_count, std::move(edges));
}

/// BFS-frontier snowball sample of exactly `size` nodes; the last frontier
/// layer is truncated uniformly at random. Node ids of the induced subgraph
/// are re-densified in ascending original-id order.
inline Topology snowball_sample(const Topology& topo, std::size_t size, std::uint64_t seed) {
    if (size < 1) throw std::invalid_argument("sample size must be >= 1");
    if (size > topo.node_count()) throw std::invalid_argument("sample larger than graph");
    if (!topo.connected()) throw std::invalid_argument("snowball sampling needs a connected graph");

    Rng rng = make_rng(seed);
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(topo.node_count() - 1));
    NodeId start = pick(rng);

    std::vector<char> in_sample(topo.node_count(), 0);
    std::vector<NodeId> chosen;
    in_sample[start] = 1;
    chosen.push_back(start);
    std::vector<NodeId> frontier{start};
    while (chosen.size() < size && !frontier.empty()) {
        std::vector<NodeId> next;
        std::vector<char> queued(topo.node_count(), 0);
        for (NodeId u : frontier)
            for (auto [v, w] : topo.neighbors(u)) {
                (void)w;
                if (!in_sample[v] && !queued[v]) {
                    queued[v] = 1;
                    next.push_back(v);
                }
            }
        std::sort(next.begin(), next.end());
        if (chosen.size() + next.size() > size) {
            std::shuffle(next.begin(), next.end(), rng);
            next.resize(size - chosen.size());
        }
        for (NodeId v : next) {
            in_sample[v] = 1;
            chosen.push_back(v);
        }
        frontier = std::move(next);
    }

    std::sort(chosen.begin(), chosen.end());
    std::unordered_map<NodeId, NodeId> remap;
    for (std::size_t i = 0; i < chosen.size(); ++i) remap[chosen[i]] = static_cast<NodeId>(i);
    std::vector<Edge> edges;
    for (const Edge& e : topo.edges())
        if (in_sample[e.u] && in_sample[e.v]) edges.push_back({remap[e.u], remap[e.v], e.w});
    return Topology(chosen.size(), std::move(edges));
}

/// Edge-list text import: one `u v [weight]` per line, `#` comments, labels
/// mapped to dense ids in first-appearance order. Keeps only the largest
/// connected component.
inline Topology import_edge_list(std::istream& in) {
    std::unordered_map<std::string, NodeId> ids;
    std::vector<Edge> edges;
    std::string line;
    auto id_of = [&](const std::string& tok) {
        auto it = ids.find(tok);
        if (it != ids.end()) return it->second;
        NodeId id = static_cast<NodeId>(ids.size());
        ids.emplace(tok, id);
        return id;
    };
    std::map<std::pair<NodeId, NodeId>, double> uniq;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string a, b;
        if (!(ls >> a)) continue;
        if (a[0] == '#') continue;
        if (!(ls >> b)) throw std::invalid_argument("edge line missing second endpoint: " + line);
        double w = 1.0;
        ls >> w;
        NodeId u = id_of(a), v = id_of(b);
        if (u == v) continue;
        uniq.emplace(std::minmax(u, v), w);
    }
    for (auto& [key, w] : uniq) edges.push_back({key.first, key.second, w});
    Topology full(ids.size(), std::move(edges));

    // Largest connected component, re-densified.
    std::vector<int> comp(full.node_count(), -1);
    int comps = 0;
    for (NodeId s = 0; s < full.node_count(); ++s) {
        if (comp[s] >= 0) continue;
        std::vector<NodeId> stack{s};
        comp[s] = comps;
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            for (auto [v, w] : full.neighbors(u)) {
                (void)w;
                if (comp[v] < 0) {
                    comp[v] = comps;
                    stack.push_back(v);
                }
            }
        }
        ++comps;
    }
    std::vector<std::size_t> sizes(comps, 0);
    for (NodeId v = 0; v < full.node_count(); ++v) ++sizes[comp[v]];
    int best = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    std::unordered_map<NodeId, NodeId> remap;
    for (NodeId v = 0; v < full.node_count(); ++v)
        if (comp[v] == best) remap[v] = static_cast<NodeId>(remap.size());
    std::vector<Edge> kept;
    for (const Edge& e : full.edges())
        if (comp[e.u] == best && comp[e.v] == best) kept.push_back({remap[e.u], remap[e.v], e.w});
    return Topology(remap.size(), std::move(kept));
}

/// Export in the import format, ascending (u, v) pairs.
inline void export_edge_list(const Topology& topo, std::ostream& out) {
    for (const Edge& e : topo.edges()) out << e.u << ' ' << e.v << ' ' << e.w << '\n';
}

}  // namespace latsim
