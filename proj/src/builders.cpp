#include "motif/builders.hpp"

#include "motif/error.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace motif {

namespace {
    using BaseFn = std::function<NodeId(Circuit &, VertexId, int)>;

    void require(bool ok, const std::string & what)
    {
        if (! ok)
            throw ValidationError(what);
    }

    std::vector<VarId> color_variables(BuiltInstance & inst, const ColoredGraph & g)
    {
        std::vector<VarId> xs(g.num_colors(), kNoVar);
        std::vector<bool> used(g.num_colors(), false);
        for (auto c : g.colors())
            used[c] = true;
        for (ColorId c = 0; c < g.num_colors(); ++c)
            if (used[c]) {
                xs[c] = inst.circuit.add_variable(VarClass::Sieved, "x[" + g.color_name(c) + "]");
                inst.sieved.push_back(xs[c]);
            }
        inst.color_var = xs;
        return xs;
    }

    VarId dontcare(BuiltInstance & inst, std::string name)
    {
        const auto v = inst.circuit.add_variable(VarClass::DontCare, std::move(name));
        inst.dontcare.push_back(v);
        return v;
    }

    /// Registers x_u and y_{c,j}. Occurrence variables exist for every
    /// motif color, including colors no vertex carries.
    void multiset_variables(BuiltInstance & inst, const ColoredGraph & g, const Motif & motif)
    {
        for (VertexId u = 0; u < g.n(); ++u) {
            inst.vertex_var.push_back(inst.circuit.add_variable(VarClass::Sieved, "x[" + g.vertex_name(u) + "]"));
            inst.sieved.push_back(inst.vertex_var.back());
        }
        ColorId max_color = static_cast<ColorId>(g.num_colors());
        for (const auto & [c, mult] : motif.counts())
            max_color = std::max(max_color, c + 1);
        inst.occurrence_var.assign(max_color, {});
        for (const auto & [c, mult] : motif.counts())
            for (int j = 0; j < mult; ++j) {
                const std::string cname = c < g.num_colors() ? g.color_name(c) : "#" + std::to_string(c);
                inst.occurrence_var[c].push_back(
                    inst.circuit.add_variable(VarClass::Sieved, "y[" + cname + "," + std::to_string(j + 1) + "]"));
                inst.sieved.push_back(inst.occurrence_var[c].back());
            }
    }

    /// x_u * sum_j y_{c,j} * eta[u,j] (canonical) or x_u * Q_c (literal,
    /// Q_c shared across vertices of color c).
    class SelectionTerms
    {
    public:
        SelectionTerms(BuiltInstance & inst, const ColoredGraph & g, bool canonical) :
            inst_(inst),
            g_(g),
            canonical_(canonical)
        {
        }

        NodeId term(VertexId u)
        {
            auto & c = inst_.circuit;
            const ColorId col = g_.color(u);
            const auto & ys = col < inst_.occurrence_var.size() ? inst_.occurrence_var[col] : empty_;
            NodeId q;
            if (canonical_) {
                std::vector<NodeId> parts;
                for (std::size_t j = 0; j < ys.size(); ++j) {
                    const auto eta = dontcare(inst_, "eta[" + g_.vertex_name(u) + "," + std::to_string(j + 1) + "]");
                    parts.push_back(c.product({c.var(ys[j]), c.var(eta)}));
                }
                q = c.sum(parts);
            }
            else {
                auto it = shared_q_.find(col);
                if (it == shared_q_.end()) {
                    std::vector<NodeId> parts;
                    for (auto y : ys)
                        parts.push_back(c.var(y));
                    it = shared_q_.emplace(col, c.sum(parts)).first;
                }
                q = it->second;
            }
            return c.product({c.var(inst_.vertex_var[u]), q});
        }

    private:
        BuiltInstance & inst_;
        const ColoredGraph & g_;
        bool canonical_;
        std::map<ColorId, NodeId> shared_q_;
        const std::vector<VarId> empty_;
    };

    /// Canonical rooted-tree recurrence shared by every detection builder.
    ///
    /// Q(i,b,u,t): trees rooted at u with i vertices and budget exactly b
    /// whose root children are among the first t neighbors of u, attached
    /// in increasing id order. Attaching neighbor v = N(u)[t-1] through edge
    /// cost w splits (i, b) into the root part (i', b') and the child part
    /// (i - i', b - b' - w).
    NodeId canonical_trees(BuiltInstance & inst, const ColoredGraph & g, int max_size, int max_budget,
                           bool weighted, const BaseFn & base, const std::vector<std::pair<int, int>> & roots)
    {
        auto & c = inst.circuit;
        const std::size_t n = g.n();
        const auto B = static_cast<std::size_t>(max_budget) + 1;

        std::vector<VarId> rho(n);
        for (VertexId u = 0; u < n; ++u)
            rho[u] = dontcare(inst, "rho[" + g.vertex_name(u) + "]");
        std::vector<VarId> zeta(g.m());
        for (std::size_t e = 0; e < g.m(); ++e)
            zeta[e] = dontcare(inst, "zeta[" + g.vertex_name(g.edges()[e].u) + "," +
                                         g.vertex_name(g.edges()[e].v) + "]");

        std::vector<std::size_t> off(n + 1, 0);
        for (VertexId u = 0; u < n; ++u)
            off[u + 1] = off[u] + g.degree(u) + 1;
        const std::size_t positions = off[n];

        // edge index of every adjacency entry
        std::vector<std::size_t> edge_of(positions, 0);
        for (VertexId u = 0; u < n; ++u) {
            const auto nb = g.neighbors(u);
            for (std::size_t t = 0; t < nb.size(); ++t) {
                const Edge e{std::min(u, nb[t]), std::max(u, nb[t])};
                const auto it = std::lower_bound(g.edges().begin(), g.edges().end(), e);
                edge_of[off[u] + t] = static_cast<std::size_t>(it - g.edges().begin());
            }
        }

        const auto sizes = static_cast<std::size_t>(max_size) + 1;
        std::vector<NodeId> Q(sizes * B * positions, c.zero());
        auto at = [&](int i, int b, VertexId u, std::size_t t) -> NodeId & {
            return Q[(static_cast<std::size_t>(i) * B + static_cast<std::size_t>(b)) * positions + off[u] + t];
        };
        auto full = [&](int i, int b, VertexId v) { return at(i, b, v, g.degree(v)); };

        std::vector<NodeId> terms;
        for (int i = 1; i <= max_size; ++i) {
            for (VertexId u = 0; u < n; ++u) {
                const auto nb = g.neighbors(u);
                const auto nw = g.neighbor_weights(u);
                for (int b = 0; b <= max_budget; ++b) {
                    if (i == 1) {
                        const NodeId leaf = base(c, u, b);
                        for (std::size_t t = 0; t <= nb.size(); ++t)
                            at(1, b, u, t) = leaf;
                        continue;
                    }
                    at(i, b, u, 0) = c.zero();
                    for (std::size_t t = 1; t <= nb.size(); ++t) {
                        const VertexId v = nb[t - 1];
                        const Weight w = weighted ? nw[t - 1] : 0;
                        terms.clear();
                        if (w <= static_cast<Weight>(b)) {
                            const int rest = b - static_cast<int>(w);
                            for (int i1 = 1; i1 < i; ++i1)
                                for (int b1 = 0; b1 <= rest; ++b1)
                                    terms.push_back(c.product({at(i1, b1, u, t - 1), full(i - i1, rest - b1, v)}));
                        }
                        const NodeId attach = c.product({c.var(zeta[edge_of[off[u] + t - 1]]), c.sum(terms)});
                        at(i, b, u, t) = c.sum({at(i, b, u, t - 1), attach});
                    }
                }
            }
        }

        std::vector<NodeId> root_terms;
        for (VertexId u = 0; u < n; ++u) {
            terms.clear();
            for (auto [i, b] : roots)
                if (i >= 1 && i <= max_size && b >= 0 && b <= max_budget)
                    terms.push_back(full(i, b, u));
            root_terms.push_back(c.product({c.var(rho[u]), c.sum(terms)}));
        }
        return c.sum(root_terms);
    }

    void finish(BuiltInstance & inst, NodeId root)
    {
        inst.circuit.set_root(root);
        inst.circuit = inst.circuit.pruned();
    }

    /// Literal recurrence P_{i,u} = sum_{i'} sum_{v in N(u)} P_{i',u} P_{i-i',v}
    /// up to size max_size, with a caller-supplied base case.
    std::vector<std::vector<NodeId>> literal_trees(Circuit & c, const ColoredGraph & g, int max_size,
                                                   const std::function<NodeId(VertexId)> & base)
    {
        std::vector<std::vector<NodeId>> P(static_cast<std::size_t>(max_size) + 1,
                                           std::vector<NodeId>(g.n(), c.zero()));
        for (VertexId u = 0; u < g.n(); ++u)
            P[1][u] = base(u);
        std::vector<NodeId> terms;
        for (int i = 2; i <= max_size; ++i)
            for (VertexId u = 0; u < g.n(); ++u) {
                terms.clear();
                for (int i1 = 1; i1 < i; ++i1)
                    for (auto v : g.neighbors(u))
                        terms.push_back(c.product({P[static_cast<std::size_t>(i1)][u], P[static_cast<std::size_t>(i - i1)][v]}));
                P[static_cast<std::size_t>(i)][u] = c.sum(terms);
            }
        return P;
    }
}

namespace detail {
    CgmTable literal_cgm_table(const ColoredGraph & g, int k)
    {
        require(k >= 1 && k <= static_cast<int>(g.n()), "cgm requires 1 <= k <= n");
        BuiltInstance inst;
        const auto xs = color_variables(inst, g);
        auto P = literal_trees(inst.circuit, g, k, [&](VertexId u) { return inst.circuit.var(xs[g.color(u)]); });
        return CgmTable{std::move(inst.circuit), xs, std::move(P)};
    }
}

BuiltInstance build_cgm(const ColoredGraph & g, int k, bool canonical)
{
    require(k >= 1 && k <= static_cast<int>(g.n()), "cgm requires 1 <= k <= n");
    BuiltInstance inst;
    inst.K = k;
    inst.meaning = "colorful subtrees with " + std::to_string(k) + " vertices";
    const auto xs = color_variables(inst, g);
    NodeId root;
    if (canonical) {
        root = canonical_trees(
            inst, g, k, 0, false, [&](Circuit & c, VertexId u, int) { return c.var(xs[g.color(u)]); }, {{k, 0}});
    }
    else {
        auto & c = inst.circuit;
        const auto P = literal_trees(c, g, k, [&](VertexId u) { return c.var(xs[g.color(u)]); });
        root = c.sum(P[static_cast<std::size_t>(k)]);
    }
    finish(inst, root);
    return inst;
}

BuiltInstance build_mgm(const ColoredGraph & g, const Motif & motif, int k, bool canonical)
{
    require(k >= 1 && k <= static_cast<int>(g.n()), "mgm requires 1 <= k <= n");
    require(k <= motif.size(), "mgm requires k <= |M|");
    BuiltInstance inst;
    inst.K = 2 * k;
    inst.meaning = "subtrees with " + std::to_string(k) + " vertices whose colors fit in the motif";
    multiset_variables(inst, g, motif);
    SelectionTerms sel(inst, g, canonical);
    NodeId root;
    if (canonical) {
        root = canonical_trees(
            inst, g, k, 0, false, [&](Circuit &, VertexId u, int) { return sel.term(u); }, {{k, 0}});
    }
    else {
        auto & c = inst.circuit;
        const auto P = literal_trees(c, g, k, [&](VertexId u) { return sel.term(u); });
        root = c.sum(P[static_cast<std::size_t>(k)]);
    }
    finish(inst, root);
    return inst;
}

BuiltInstance build_mgmg(const ColoredGraph & g, const Motif & motif, int k, int r, bool canonical)
{
    require(k >= 1, "mgmg requires k >= 1");
    require(r >= k, "mgmg requires k <= r");
    require(r <= static_cast<int>(g.n()), "mgmg requires r <= n");
    require(k <= motif.size(), "mgmg requires k <= |M|");
    BuiltInstance inst;
    inst.K = 2 * k;
    inst.meaning = "subtrees with at most " + std::to_string(r) + " vertices containing " + std::to_string(k) +
                   " vertices whose colors fit in the motif";
    multiset_variables(inst, g, motif);
    SelectionTerms sel(inst, g, canonical);
    NodeId root;
    if (canonical) {
        // budget = number of selected vertices
        std::vector<std::pair<int, int>> roots;
        for (int i = 1; i <= r; ++i)
            roots.emplace_back(i, k);
        root = canonical_trees(
            inst, g, r, k, false,
            [&](Circuit & c, VertexId u, int b) {
                if (b == 0)
                    return c.one();
                if (b == 1)
                    return sel.term(u);
                return c.zero();
            },
            roots);
    }
    else {
        auto & c = inst.circuit;
        const auto P = literal_trees(c, g, r, [&](VertexId u) { return c.sum({c.one(), sel.term(u)}); });
        std::vector<NodeId> terms;
        for (int i = 1; i <= r; ++i)
            for (VertexId u = 0; u < g.n(); ++u)
                terms.push_back(P[static_cast<std::size_t>(i)][u]);
        root = c.sum(terms);
    }
    finish(inst, root);
    return inst;
}

BuiltInstance build_weighted(const ColoredGraph & g, const WeightedQuery & q, bool canonical)
{
    require(q.variant == Variant::WCGM || q.variant == Variant::WMGM, "build_weighted needs wcgm or wmgm");
    require(g.has_weights(), std::string(to_string(q.variant)) + " requires edge weights");
    require(q.r >= 0, "weight budget r must be nonnegative");
    require(q.k >= 1 && q.k <= static_cast<int>(g.n()), "weighted variants require 1 <= k <= n");
    const bool multiset = q.variant == Variant::WMGM;
    require(! multiset || q.motif.has_value(), "wmgm requires a motif");
    require(! multiset || q.k <= q.motif->size(), "wmgm requires k <= |M|");

    BuiltInstance inst;
    inst.K = multiset ? 2 * q.k : q.k;
    inst.meaning = std::string(multiset ? "motif-respecting" : "colorful") + " subtrees with " +
                   std::to_string(q.k) + " vertices and total weight <= " + std::to_string(q.r);
    auto & c = inst.circuit;
    std::vector<VarId> xs;
    std::optional<SelectionTerms> sel;
    if (multiset) {
        multiset_variables(inst, g, *q.motif);
        sel.emplace(inst, g, canonical);
    }
    else
        xs = color_variables(inst, g);
    auto leaf = [&](VertexId u) { return multiset ? sel->term(u) : c.var(xs[g.color(u)]); };

    NodeId root;
    if (canonical) {
        // budget = exact tree weight
        std::vector<std::pair<int, int>> roots;
        for (int b = 0; b <= q.r; ++b)
            roots.emplace_back(q.k, b);
        root = canonical_trees(
            inst, g, q.k, q.r, true,
            [&](Circuit & cc, VertexId u, int b) { return b == 0 ? leaf(u) : cc.zero(); }, roots);
    }
    else {
        // P_{i,j,u}: weight at most j
        const auto R = static_cast<std::size_t>(q.r) + 1;
        const auto n = g.n();
        std::vector<NodeId> P((static_cast<std::size_t>(q.k) + 1) * R * n, c.zero());
        auto at = [&](int i, int j, VertexId u) -> NodeId & {
            return P[(static_cast<std::size_t>(i) * R + static_cast<std::size_t>(j)) * n + u];
        };
        for (VertexId u = 0; u < n; ++u) {
            const NodeId x = leaf(u);
            for (int j = 0; j <= q.r; ++j)
                at(1, j, u) = x;
        }
        std::vector<NodeId> terms;
        for (int i = 2; i <= q.k; ++i)
            for (int j = 0; j <= q.r; ++j)
                for (VertexId u = 0; u < n; ++u) {
                    terms.clear();
                    const auto nb = g.neighbors(u);
                    const auto nw = g.neighbor_weights(u);
                    for (int i1 = 1; i1 < i; ++i1)
                        for (std::size_t t = 0; t < nb.size(); ++t) {
                            if (nw[t] > static_cast<Weight>(j))
                                continue;
                            const int rest = j - static_cast<int>(nw[t]);
                            for (int j1 = 0; j1 <= rest; ++j1)
                                terms.push_back(c.product({at(i1, j1, u), at(i - i1, rest - j1, nb[t])}));
                        }
                    at(i, j, u) = c.sum(terms);
                }
        terms.clear();
        for (VertexId u = 0; u < n; ++u)
            terms.push_back(at(q.k, q.r, u));
        root = c.sum(terms);
    }
    finish(inst, root);
    return inst;
}

MinCCReduction reduce_mincc(const ColoredGraph & g, const Motif & motif, int r)
{
    require(r >= 1, "mincc requires r >= 1");
    std::vector<Edge> edges;
    std::vector<Weight> weights;
    for (VertexId u = 0; u < g.n(); ++u)
        for (VertexId v = u + 1; v < g.n(); ++v) {
            edges.push_back({u, v});
            weights.push_back(g.has_edge(u, v) ? 0 : 1);
        }
    std::vector<std::string> vnames, cnames;
    for (VertexId u = 0; u < g.n(); ++u)
        vnames.push_back(g.vertex_name(u));
    for (ColorId c = 0; c < g.num_colors(); ++c)
        cnames.push_back(g.color_name(c));
    ColoredGraph complete(g.n(), std::vector<ColorId>(g.colors().begin(), g.colors().end()), std::move(edges),
                          std::move(weights), std::move(vnames), std::move(cnames));
    MotifQuery q;
    q.variant = Variant::WMGM;
    q.k = motif.size();
    q.r = r - 1;
    q.motif = motif;
    return MinCCReduction{std::move(complete), std::move(q)};
}

BuiltInstance build_xcgm_counting(const ColoredGraph & g, int k)
{
    require(k >= 1 && k <= static_cast<int>(g.n()), "xcgm requires 1 <= k <= n");
    std::vector<ColorId> used(g.colors().begin(), g.colors().end());
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    require(used.size() == static_cast<std::size_t>(k),
            "xcgm requires exactly k colors in the graph (found " + std::to_string(used.size()) + ")");

    BuiltInstance inst;
    inst.K = k;
    inst.meaning = "rooted colorful subtrees using all " + std::to_string(k) + " colors";
    auto & c = inst.circuit;
    inst.color_var.assign(g.num_colors(), kNoVar);
    std::vector<int> rank(g.num_colors(), 0);
    for (std::size_t j = 0; j < used.size(); ++j) {
        rank[used[j]] = static_cast<int>(j) + 1;
        inst.color_var[used[j]] = c.add_variable(VarClass::Sieved, "x" + std::to_string(j + 1));
        inst.sieved.push_back(inst.color_var[used[j]]);
    }

    const auto n = g.n();
    const auto J = static_cast<std::size_t>(k) + 2;
    // P(i, j, u) for 1 <= i <= k, 1 <= j <= k + 1
    std::vector<NodeId> P((static_cast<std::size_t>(k) + 1) * J * n, c.zero());
    auto at = [&](int i, int j, VertexId u) -> NodeId & {
        return P[(static_cast<std::size_t>(i) * J + static_cast<std::size_t>(j)) * n + u];
    };
    // neighbors of u of each color rank
    std::vector<std::vector<std::vector<VertexId>>> by_color(n, std::vector<std::vector<VertexId>>(J));
    for (VertexId u = 0; u < n; ++u)
        for (auto v : g.neighbors(u))
            by_color[u][static_cast<std::size_t>(rank[g.color(v)])].push_back(v);

    for (VertexId u = 0; u < n; ++u)
        for (int j = 1; j <= k + 1; ++j)
            at(1, j, u) = c.var(inst.color_var[g.color(u)]);

    std::vector<NodeId> terms;
    for (int i = 2; i <= k; ++i)
        for (VertexId u = 0; u < n; ++u) {
            at(i, k + 1, u) = c.zero();
            for (int j = k; j >= 1; --j) {
                terms.clear();
                terms.push_back(at(i, j + 1, u));
                for (int i1 = 1; i1 < i; ++i1)
                    for (auto v : by_color[u][static_cast<std::size_t>(j)])
                        terms.push_back(c.product({at(i1, j + 1, u), at(i - i1, 1, v)}));
                at(i, j, u) = c.sum(terms);
            }
        }

    terms.clear();
    for (VertexId u = 0; u < n; ++u)
        terms.push_back(at(k, 1, u));
    finish(inst, c.sum(terms));
    return inst;
}

BuiltInstance build_instance(const ColoredGraph & g, const MotifQuery & q, bool canonical)
{
    switch (q.variant) {
        case Variant::CGM:
        case Variant::XCGM: return build_cgm(g, q.k, canonical);
        case Variant::MGM: return build_mgm(g, q.motif.value(), q.k, canonical);
        case Variant::XMGM: return build_mgm(g, q.motif.value(), q.motif->size(), canonical);
        case Variant::MGMG: return build_mgmg(g, q.motif.value(), q.k, q.r.value(), canonical);
        case Variant::WCGM:
        case Variant::WMGM: return build_weighted(g, WeightedQuery{q.variant, q.k, q.r.value(), q.motif}, canonical);
        case Variant::MINCC: {
            const auto red = reduce_mincc(g, q.motif.value(), q.r.value());
            return build_weighted(red.graph, WeightedQuery{Variant::WMGM, red.query.k, *red.query.r, red.query.motif},
                                  canonical);
        }
    }
    throw Error("unknown variant");
}

} // namespace motif
