#pragma once

// Query compilers: each motif variant becomes an arithmetic circuit whose
// multilinear monomials encode solutions.
//
// The literal recurrences (canonical = false) count ordered derivations, so
// one subtree may appear with an even coefficient and vanish over GF(2^64).
// The canonical builders (the default) make every solution a distinct
// monomial with coefficient 1:
//   * children of a tree vertex are attached in increasing vertex-id order,
//     via a neighbor-prefix index (state P[i][b][u][t] uses only the first
//     t neighbors of u);
//   * every attachment u-v carries an edge fingerprint zeta[u,v] and the
//     root carries rho[u];
//   * multiset variants give each (vertex, motif occurrence) choice an
//     extra fingerprint eta[u,j], so the same occurrences assigned to the
//     same vertices in a different way stay distinct.
// Fingerprints are don't-care variables; only x and y variables are sieved.

#include "motif/circuit.hpp"
#include "motif/graph.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace motif {

inline constexpr VarId kNoVar = std::numeric_limits<VarId>::max();

struct BuiltInstance
{
    Circuit circuit;
    /// Sieve degree (k for colorful variants, 2k for multiset ones).
    int K = 0;
    std::vector<VarId> sieved;
    std::vector<VarId> dontcare;
    std::string meaning;

    /// x_c per color id (colorful variants), kNoVar when absent.
    std::vector<VarId> color_var;
    /// x_u per vertex (multiset variants).
    std::vector<VarId> vertex_var;
    /// y_{c,j} per color id, j < n_M(c) (multiset variants).
    std::vector<std::vector<VarId>> occurrence_var;
};

BuiltInstance build_cgm(const ColoredGraph & g, int k, bool canonical = true);
BuiltInstance build_mgm(const ColoredGraph & g, const Motif & motif, int k, bool canonical = true);
BuiltInstance build_mgmg(const ColoredGraph & g, const Motif & motif, int k, int r, bool canonical = true);

struct WeightedQuery
{
    /// WCGM or WMGM.
    Variant variant = Variant::WCGM;
    int k = 0;
    int r = 0;
    std::optional<Motif> motif;
};

BuiltInstance build_weighted(const ColoredGraph & g, const WeightedQuery & q, bool canonical = true);

struct MinCCReduction
{
    /// Complete graph on the same vertices: weight 0 on edges of the
    /// input, 1 on non-edges.
    ColoredGraph graph;
    /// WMGM with k = |M| and weight budget r - 1.
    MotifQuery query;
};

MinCCReduction reduce_mincc(const ColoredGraph & g, const Motif & motif, int r);

/// Color-ordered counting circuit for XCGM: its multilinear degree-k
/// monomial count is the number of rooted solutions, k times the number
/// of solutions. Requires exactly k colors in use; they are renumbered
/// 1..k in increasing id order.
BuiltInstance build_xcgm_counting(const ColoredGraph & g, int k);

/// Detection circuit for a validated query (MINCC goes through its
/// reduction).
BuiltInstance build_instance(const ColoredGraph & g, const MotifQuery & q, bool canonical = true);

namespace detail {
    /// Literal colorful recurrence with its intermediate nodes exposed:
    /// P[i][u] for 1 <= i <= k (index 0 unused).
    struct CgmTable
    {
        Circuit circuit;
        std::vector<VarId> color_var;
        std::vector<std::vector<NodeId>> P;
    };

    CgmTable literal_cgm_table(const ColoredGraph & g, int k);
}

} // namespace motif
