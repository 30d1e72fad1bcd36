#pragma once

// Exponential brute-force reference solvers. Slow on purpose: every answer
// comes from listing subtrees and checking the variant's predicate.

#include "motif/graph.hpp"
#include "motif/rings.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace motif {

struct OracleLimits
{
    int max_size = 10;
    std::size_t max_n = 16;
};

struct SubtreeSolution
{
    /// Increasing vertex ids.
    std::vector<VertexId> vertices;
    /// Tree edges, u < v, sorted. For MINCC: the edges of the induced
    /// subgraph, which need not be connected.
    std::vector<Edge> edges;
    std::optional<VertexId> root;
};

/// Calls visit once for every subtree of g with exactly `size` vertices.
/// Throws CapacityError beyond the limits.
void enumerate_subtrees(const ColoredGraph & g, int size, const std::function<void(const SubtreeSolution &)> & visit,
                        const OracleLimits & limits = {});

std::vector<SubtreeSolution> enumerate_subtrees(const ColoredGraph & g, int size, const OracleLimits & limits = {});

struct BruteResult
{
    bool found = false;
    std::vector<SubtreeSolution> solutions;
};

/// Every solution of a validated query.
BruteResult solve_brute(const ColoredGraph & g, const MotifQuery & q, const OracleLimits & limits = {});

BigInt count_brute(const ColoredGraph & g, const MotifQuery & q, const OracleLimits & limits = {});
/// Sum over solutions of their vertex count.
BigInt count_rooted_brute(const ColoredGraph & g, const MotifQuery & q, const OracleLimits & limits = {});

/// Kirchhoff's matrix-tree count for the subgraph induced by `subset`
/// (all vertices when empty), by fraction-free elimination.
BigInt count_spanning_trees(const ColoredGraph & g, const std::vector<VertexId> & subset = {});

} // namespace motif
