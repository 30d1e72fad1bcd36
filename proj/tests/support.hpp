#pragma once

// Shared generators for the test binaries.

#include "motif/circuit.hpp"
#include "motif/graph.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <vector>

namespace motif::testing {

inline ColoredGraph random_graph(std::mt19937_64 & rng, std::size_t n, double p, std::size_t colors,
                                 int max_weight = -1)
{
    std::bernoulli_distribution edge(p);
    std::vector<ColorId> col(n);
    for (auto & c : col)
        c = static_cast<ColorId>(rng() % colors);
    std::vector<Edge> edges;
    std::vector<Weight> weights;
    for (VertexId u = 0; u < n; ++u)
        for (VertexId v = u + 1; v < n; ++v)
            if (edge(rng)) {
                edges.push_back({u, v});
                if (max_weight >= 0)
                    weights.push_back(rng() % static_cast<std::uint64_t>(max_weight + 1));
            }
    std::optional<std::vector<Weight>> w;
    if (max_weight >= 0)
        w = std::move(weights);
    return ColoredGraph(n, std::move(col), std::move(edges), std::move(w));
}

inline ColoredGraph random_graph_m(std::mt19937_64 & rng, std::size_t n, std::size_t m, std::size_t colors,
                                   int max_weight = -1)
{
    std::vector<ColorId> col(n);
    for (auto & c : col)
        c = static_cast<ColorId>(rng() % colors);
    std::set<Edge> seen;
    while (seen.size() < m) {
        auto u = static_cast<VertexId>(rng() % n), v = static_cast<VertexId>(rng() % n);
        if (u != v)
            seen.insert({std::min(u, v), std::max(u, v)});
    }
    std::vector<Edge> edges(seen.begin(), seen.end());
    std::optional<std::vector<Weight>> w;
    if (max_weight >= 0) {
        w.emplace();
        for (std::size_t i = 0; i < edges.size(); ++i)
            w->push_back(rng() % static_cast<std::uint64_t>(max_weight + 1));
    }
    return ColoredGraph(n, std::move(col), std::move(edges), std::move(w));
}

inline ColoredGraph make_graph(std::size_t n, std::vector<ColorId> colors, std::vector<Edge> edges,
                               std::optional<std::vector<Weight>> weights = std::nullopt)
{
    return ColoredGraph(n, std::move(colors), std::move(edges), std::move(weights));
}

/// Random circuit over `vars` sieved variables with at most `nodes` nodes
/// and polynomial degree at most k. Children are drawn from existing
/// nodes, so sharing is common. Products may exceed binary arity.
inline Circuit random_circuit(std::mt19937_64 & rng, std::size_t vars, std::size_t nodes, int k,
                              bool binary = false)
{
    Circuit c;
    std::vector<NodeId> pool;
    std::vector<int> deg; // indexed by NodeId
    auto record = [&](NodeId id, int d) {
        if (deg.size() <= id)
            deg.resize(id + 1, -1);
        deg[id] = d;
        pool.push_back(id);
    };
    for (std::size_t v = 0; v < vars; ++v) {
        const auto id = c.var(c.add_variable(VarClass::Sieved, "x" + std::to_string(v)));
        record(id, 1);
    }
    if (rng() % 4 == 0)
        record(c.one(), 0);
    NodeId last = pool.back();
    while (c.num_nodes() < nodes) {
        const bool mul = rng() % 2 == 0;
        const std::size_t arity = binary ? 2 : 1 + rng() % 3;
        std::vector<NodeId> ch;
        int d = mul ? 0 : -1;
        for (std::size_t a = 0; a < arity; ++a) {
            // prefer recent nodes so the root can reach many of them
            const std::size_t span = std::min<std::size_t>(pool.size(), 12);
            const std::size_t pick = rng() % 3 == 0 ? rng() % pool.size() : pool.size() - 1 - rng() % span;
            const NodeId u = pool[pick];
            if (mul) {
                if (d + deg[u] > k)
                    continue;
                d += deg[u];
            }
            else
                d = std::max(d, deg[u]);
            ch.push_back(u);
        }
        if (ch.empty())
            continue;
        if (binary && ch.size() == 1)
            ch.push_back(ch[0]), d = mul ? 2 * deg[ch[0]] : deg[ch[0]];
        if (mul && d > k)
            continue;
        const NodeId id = mul ? c.mul_node(ch) : c.add_node(ch);
        record(id, d);
        last = id;
    }
    c.set_root(last);
    return c;
}

/// Non-isomorphic connected graphs on n vertices, as edge lists.
inline std::vector<std::vector<Edge>> connected_graphs(std::size_t n)
{
    std::vector<std::pair<VertexId, VertexId>> slots;
    for (VertexId u = 0; u < n; ++u)
        for (VertexId v = u + 1; v < n; ++v)
            slots.emplace_back(u, v);
    std::vector<std::vector<int>> perms;
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    do
        perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    std::vector<std::vector<std::size_t>> slot_of(n, std::vector<std::size_t>(n, 0));
    for (std::size_t s = 0; s < slots.size(); ++s) {
        slot_of[slots[s].first][slots[s].second] = s;
        slot_of[slots[s].second][slots[s].first] = s;
    }

    std::set<std::uint32_t> seen;
    std::vector<std::vector<Edge>> out;
    for (std::uint32_t mask = 0; mask < (1u << slots.size()); ++mask) {
        // connectivity
        std::vector<int> comp(n);
        std::iota(comp.begin(), comp.end(), 0);
        auto find = [&](int x) {
            while (comp[static_cast<std::size_t>(x)] != x)
                x = comp[static_cast<std::size_t>(x)];
            return x;
        };
        std::size_t parts = n;
        for (std::size_t s = 0; s < slots.size(); ++s)
            if (mask >> s & 1) {
                const int a = find(static_cast<int>(slots[s].first)), b = find(static_cast<int>(slots[s].second));
                if (a != b) {
                    comp[static_cast<std::size_t>(a)] = b;
                    --parts;
                }
            }
        if (parts != 1)
            continue;
        std::uint32_t canon = ~0u;
        for (const auto & q : perms) {
            std::uint32_t img = 0;
            for (std::size_t s = 0; s < slots.size(); ++s)
                if (mask >> s & 1)
                    img |= 1u << slot_of[static_cast<std::size_t>(q[slots[s].first])][static_cast<std::size_t>(q[slots[s].second])];
            canon = std::min(canon, img);
        }
        if (! seen.insert(canon).second)
            continue;
        std::vector<Edge> edges;
        for (std::size_t s = 0; s < slots.size(); ++s)
            if (canon >> s & 1)
                edges.push_back({slots[s].first, slots[s].second});
        out.push_back(std::move(edges));
    }
    return out;
}

/// Colorings of n vertices with at most `colors` colors, up to renaming
/// (restricted growth strings).
inline std::vector<std::vector<ColorId>> colorings(std::size_t n, std::size_t colors)
{
    std::vector<std::vector<ColorId>> out;
    std::vector<ColorId> cur(n, 0);
    auto rec = [&](auto & self, std::size_t i, ColorId used) -> void {
        if (i == n) {
            out.push_back(cur);
            return;
        }
        for (ColorId c = 0; c <= used && c < colors; ++c) {
            cur[i] = c;
            self(self, i + 1, std::max<ColorId>(used, c + 1));
        }
    };
    if (n == 0)
        return {{}};
    cur[0] = 0;
    rec(rec, 1, 1);
    return out;
}

} // namespace motif::testing
