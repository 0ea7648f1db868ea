#include <catch2/catch_amalgamated.hpp>

#include "latsim/peri.hpp"

using namespace latsim;

namespace {

TxObservation obs(std::uint64_t id, std::initializer_list<std::pair<NodeId, double>> arrivals,
                  std::string source = "0") {
    TxObservation tx;
    tx.tx_id = id;
    tx.source = std::move(source);
    for (auto [peer, t] : arrivals) tx.arrivals[peer] = t;
    return tx;
}

PeriConfig config(std::size_t k, std::size_t n, double delta_max = 100.0) {
    PeriConfig c;
    c.keep_count = k;
    c.max_peers = n;
    c.period_length = 10.0;
    c.delta_max = delta_max;
    return c;
}

}  // namespace

TEST_CASE("relevance modes") {
    PeriConfig all = config(1, 2);
    PeriConfig hashed = config(1, 2);
    hashed.relevance = Relevance::kHashSampled;
    PeriConfig targeted = config(1, 2);
    targeted.relevance = Relevance::kTargetSet;
    targeted.target_sources = {"w"};

    REQUIRE(relevant(obs(7, {}), all));
    REQUIRE(relevant(obs(8, {}), hashed));
    REQUIRE_FALSE(relevant(obs(7, {}), hashed));
    REQUIRE(relevant(obs(1, {}, "w"), targeted));
    REQUIRE_FALSE(relevant(obs(1, {}, "w2"), targeted));
}

TEST_CASE("score is zero for the always-first peer") {
    std::vector<TxObservation> txs{obs(1, {{0, 5.0}, {1, 7.0}}), obs(2, {{0, 1.0}, {1, 4.0}})};
    auto phi = score_peer(txs, 0, config(1, 2));
    REQUIRE(phi.has_value());
    REQUIRE(*phi == 0.0);
}

TEST_CASE("score caps missing deliveries at delta_max") {
    // late by 5 on one tx, absent on the other, cap 100: (5 + 100) / 2
    std::vector<TxObservation> txs{obs(1, {{0, 2.0}, {1, 7.0}}), obs(2, {{0, 3.0}})};
    auto phi = score_peer(txs, 1, config(1, 2));
    REQUIRE(phi.has_value());
    REQUIRE(*phi == 52.5);
}

TEST_CASE("score is undefined for a silent peer") {
    std::vector<TxObservation> txs{obs(1, {{0, 2.0}}), obs(2, {{0, 3.0}})};
    REQUIRE_FALSE(score_peer(txs, 1, config(1, 2)).has_value());
    REQUIRE(is_excused(1, 1.0, txs, config(1, 2)));
    REQUIRE_FALSE(is_excused(0, 1.0, txs, config(1, 2)));
}

TEST_CASE("score is translation invariant and monotone in the cap") {
    std::vector<TxObservation> txs{obs(1, {{0, 2.0}, {1, 7.0}}), obs(2, {{0, 3.0}, {1, 3.5}})};
    std::vector<TxObservation> shifted = txs;
    for (TxObservation& tx : shifted)
        for (auto& [peer, t] : tx.arrivals) t += 1000.0;
    REQUIRE(*score_peer(txs, 1, config(1, 2)) == *score_peer(shifted, 1, config(1, 2)));
    std::vector<TxObservation> with_gap{obs(1, {{0, 2.0}, {1, 7.0}}), obs(2, {{0, 3.0}})};
    REQUIRE(*score_peer(with_gap, 1, config(1, 2, 10.0)) <=
            *score_peer(with_gap, 1, config(1, 2, 100.0)));
}

TEST_CASE("partially connected peers are excused") {
    std::vector<TxObservation> txs{obs(1, {{0, 2.0}, {1, 3.0}})};
    REQUIRE(is_excused(1, 0.1, txs, config(1, 2)));
    REQUIRE_FALSE(is_excused(1, 0.9, txs, config(1, 2)));
}

TEST_CASE("peri step evicts the worst scored peers") {
    PeriState state;
    state.peers = {10, 11, 12, 13, 14};
    // peer 10 first everywhere; later peers progressively worse
    std::vector<TxObservation> txs{
        obs(1, {{10, 0.0}, {11, 1.0}, {12, 2.0}, {13, 3.0}, {14, 4.0}})};
    std::vector<NodeId> evicted = peri_step(state, txs, config(3, 5));
    REQUIRE(evicted == std::vector<NodeId>{14, 13});
    REQUIRE(state.peers == std::vector<NodeId>{10, 11, 12});
    REQUIRE(state.blocked.count(14) == 1);
    REQUIRE(state.period_index == 1);
}

TEST_CASE("excused peers shrink the eviction budget and survive") {
    PeriState state;
    state.peers = {10, 11, 12, 13, 14};
    // peer 14 silent: excused, budget drops from 2 to 1
    std::vector<TxObservation> txs{obs(1, {{10, 0.0}, {11, 1.0}, {12, 2.0}, {13, 3.0}})};
    std::vector<NodeId> evicted = peri_step(state, txs, config(3, 5));
    REQUIRE(evicted == std::vector<NodeId>{13});
    REQUIRE(state.peers == std::vector<NodeId>{10, 11, 12, 14});
}

TEST_CASE("no eviction when keep equals max") {
    PeriState state;
    state.peers = {1, 2};
    std::vector<TxObservation> txs{obs(1, {{1, 0.0}, {2, 5.0}})};
    REQUIRE(peri_step(state, txs, config(2, 2)).empty());
    REQUIRE(state.peers.size() == 2);
}

TEST_CASE("pinned peers are never evicted") {
    PeriState state;
    state.peers = {1, 2, 3};
    state.pinned = {3};
    // 3 is the worst but pinned; the single eviction falls on 2
    std::vector<TxObservation> txs{obs(1, {{1, 0.0}, {2, 4.0}, {3, 9.0}})};
    std::vector<NodeId> evicted = peri_step(state, txs, config(2, 3));
    REQUIRE(evicted == std::vector<NodeId>{2});
    REQUIRE(state.peers == std::vector<NodeId>{1, 3});
}

TEST_CASE("score ties evict the most recently added peer") {
    PeriState state;
    state.peers = {5, 6, 7};
    std::vector<TxObservation> txs{obs(1, {{5, 0.0}, {6, 2.0}, {7, 2.0}})};
    std::vector<NodeId> evicted = peri_step(state, txs, config(2, 3));
    REQUIRE(evicted == std::vector<NodeId>{7});
}

TEST_CASE("refill grows toward max and respects the sampler") {
    PeriState state;
    state.peers = {1};
    state.block(2);
    std::vector<NodeId> pool{3, 4, 5};
    std::size_t next = 0;
    auto sampler = [&]() -> std::optional<NodeId> {
        if (next >= pool.size()) return std::nullopt;
        return pool[next++];
    };
    refill_peers(state, sampler, config(2, 5));
    REQUIRE(state.peers == std::vector<NodeId>{1, 3, 4, 5});  // pool exhausted below max

    auto bad_sampler = [&]() -> std::optional<NodeId> { return 2; };
    REQUIRE_THROWS_AS(refill_peers(state, bad_sampler, config(2, 6)), std::logic_error);
}

TEST_CASE("simplified score on the 5-node star") {
    std::vector<Edge> edges;
    for (NodeId v = 1; v <= 4; ++v) edges.push_back({0, v, 1.0});
    Topology star(5, edges);
    SourceDestSpec sd{{1, 2, 3, 4}, {1, 2, 3, 4}};
    DistanceMatrix dm = shortest_distances(star, {1, 2, 3, 4});
    REQUIRE(simplified_score(dm, 0, sd) == 2.0);
    REQUIRE(simplified_score(dm, 1, sd) == 3.0);
}

TEST_CASE("simplified score on the 5-node path") {
    Topology path(5, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 4, 1.0}});
    SourceDestSpec sd{{0, 1, 2, 3, 4}, {4}};
    DistanceMatrix dm = shortest_distances(path, {0, 1, 2, 3, 4});
    REQUIRE(simplified_score(dm, 2, sd) == 3.2);
}

TEST_CASE("triangular sim with zero periods is the initial sample") {
    GraphSpec spec{GraphModel::kBarabasiAlbert, 60, 4.0, 0.1, 3};
    Topology topo = generate_graph(spec);
    SourceDestSpec sd;
    for (NodeId v = 0; v < 60; ++v) sd.sources.push_back(v);
    sd.destinations = {0, 7, 11, 30, 42, 59};
    TriangularSimResult res = peri_triangular_sim(topo, sd, 6, 0, 9);
    REQUIRE(res.placement.peers.size() == 8);  // k + ceil(k/3)
    REQUIRE(res.advantage_trajectory.empty());
}

TEST_CASE("triangular sim trajectory is reproducible and sized by periods") {
    GraphSpec spec{GraphModel::kBarabasiAlbert, 60, 4.0, 0.1, 3};
    Topology topo = generate_graph(spec);
    SourceDestSpec sd;
    for (NodeId v = 0; v < 60; ++v) sd.sources.push_back(v);
    sd.destinations = {0, 7, 11, 30, 42, 59};
    TriangularSimResult a = peri_triangular_sim(topo, sd, 6, 50, 123);
    TriangularSimResult b = peri_triangular_sim(topo, sd, 6, 50, 123);
    REQUIRE(a.placement.peers == b.placement.peers);
    REQUIRE(a.advantage_trajectory == b.advantage_trajectory);
    REQUIRE(a.advantage_trajectory.size() == 50);
    REQUIRE(a.placement.peers.size() == 6);
}

TEST_CASE("triangular sim keeps long runs alive by recycling the blocklist") {
    GraphSpec spec{GraphModel::kErdosRenyi, 30, 4.0, 0.1, 5};
    Topology topo = generate_graph(spec);
    SourceDestSpec sd;
    for (NodeId v = 0; v < 30; ++v) sd.sources.push_back(v);
    sd.destinations = {0, 9, 21};
    // 30 nodes, 10 slots, 800 periods: the pool is exhausted many times over
    TriangularSimResult res = peri_triangular_sim(topo, sd, 8, 800, 17);
    REQUIRE(res.advantage_trajectory.size() == 800);
    REQUIRE(res.placement.peers.size() == 8);
}
