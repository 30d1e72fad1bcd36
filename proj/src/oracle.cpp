#include "motif/oracle.hpp"

#include "motif/error.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>

namespace motif {

namespace {
    using Mask = std::uint64_t;

    void check_limits(const ColoredGraph & g, int size, const OracleLimits & limits)
    {
        if (g.n() > limits.max_n || g.n() > 64)
            throw CapacityError("oracle limited to n <= " + std::to_string(std::min<std::size_t>(limits.max_n, 64)) +
                                " (got " + std::to_string(g.n()) + ")");
        if (size > limits.max_size)
            throw CapacityError("oracle limited to subtrees of size <= " + std::to_string(limits.max_size) +
                                " (got " + std::to_string(size) + ")");
    }

    std::vector<Mask> neighbor_masks(const ColoredGraph & g)
    {
        std::vector<Mask> nb(g.n(), 0);
        for (const auto & e : g.edges()) {
            nb[e.u] |= Mask{1} << e.v;
            nb[e.v] |= Mask{1} << e.u;
        }
        return nb;
    }

    /// Connected vertex sets of the given size, each once: the anchor is the
    /// smallest member and sets only grow through the extension frontier.
    void connected_sets(const std::vector<Mask> & nb, int size, const std::function<void(Mask)> & visit)
    {
        const auto n = static_cast<int>(nb.size());
        std::function<void(Mask, Mask, Mask, int)> grow = [&](Mask set, Mask ext, Mask forbidden, int count) {
            if (count == size) {
                visit(set);
                return;
            }
            while (ext) {
                const Mask w = ext & -ext;
                ext &= ~w;
                const int wi = std::countr_zero(w);
                grow(set | w, (ext | nb[static_cast<std::size_t>(wi)]) & ~set & ~w & ~forbidden, forbidden | w, count + 1);
                forbidden |= w;
            }
        };
        for (int v = 0; v < n; ++v) {
            const Mask below = (Mask{1} << v) | ((Mask{1} << v) - 1);
            grow(Mask{1} << v, nb[static_cast<std::size_t>(v)] & ~below, below, 1);
        }
    }

    bool spans(Mask set, const std::vector<Edge> & edges, std::size_t from, const std::vector<Edge> & chosen)
    {
        Mask reached = set & -set;
        bool grew = true;
        while (grew) {
            grew = false;
            auto relax = [&](const Edge & e) {
                const Mask a = Mask{1} << e.u, b = Mask{1} << e.v;
                if (((reached & a) != 0) != ((reached & b) != 0)) {
                    reached |= a | b;
                    grew = true;
                }
            };
            for (const auto & e : chosen)
                relax(e);
            for (std::size_t i = from; i < edges.size(); ++i)
                relax(edges[i]);
        }
        return reached == set;
    }

    /// All spanning trees of the subgraph induced by `set`: include or
    /// exclude each edge in turn, rejecting cycles and branches that can no
    /// longer connect the set.
    void spanning_trees(Mask set, const std::vector<Edge> & edges, const std::function<void(const std::vector<Edge> &)> & visit)
    {
        const auto need = static_cast<std::size_t>(std::popcount(set)) - 1;
        std::vector<Edge> chosen;
        std::vector<int> comp(64);
        std::iota(comp.begin(), comp.end(), 0);

        std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (chosen.size() == need) {
                visit(chosen);
                return;
            }
            if (chosen.size() + (edges.size() - i) < need)
                return;
            const Edge e = edges[i];
            const int cu = comp[e.u], cv = comp[e.v];
            if (cu != cv) {
                const auto saved = comp;
                for (auto & c : comp)
                    if (c == cv)
                        c = cu;
                chosen.push_back(e);
                rec(i + 1);
                chosen.pop_back();
                comp = saved;
            }
            if (spans(set, edges, i + 1, chosen))
                rec(i + 1);
        };
        rec(0);
    }

    std::vector<VertexId> members(Mask set)
    {
        std::vector<VertexId> out;
        while (set) {
            out.push_back(static_cast<VertexId>(std::countr_zero(set)));
            set &= set - 1;
        }
        return out;
    }

    std::vector<Edge> induced_edges(const ColoredGraph & g, Mask set)
    {
        std::vector<Edge> out;
        for (const auto & e : g.edges())
            if ((set >> e.u & 1) && (set >> e.v & 1))
                out.push_back(e);
        return out;
    }

    std::map<ColorId, int> color_counts(const ColoredGraph & g, const std::vector<VertexId> & vs)
    {
        std::map<ColorId, int> counts;
        for (auto v : vs)
            ++counts[g.color(v)];
        return counts;
    }

    bool fits(const std::map<ColorId, int> & counts, const Motif & m)
    {
        for (const auto & [c, t] : counts)
            if (t > m.count(c))
                return false;
        return true;
    }

    Weight tree_weight(const ColoredGraph & g, const std::vector<Edge> & edges)
    {
        Weight w = 0;
        for (const auto & e : edges)
            w += g.weight(e.u, e.v);
        return w;
    }

    int components(const std::vector<Mask> & nb, Mask set)
    {
        int count = 0;
        while (set) {
            Mask reached = set & -set, frontier = reached;
            while (frontier) {
                Mask next = 0;
                for (auto v : members(frontier))
                    next |= nb[v];
                next &= set & ~reached;
                reached |= next;
                frontier = next;
            }
            set &= ~reached;
            ++count;
        }
        return count;
    }

    BruteResult solve_mincc(const ColoredGraph & g, const MotifQuery & q, const OracleLimits & limits)
    {
        const Motif & m = *q.motif;
        check_limits(g, m.size(), limits);
        const auto nb = neighbor_masks(g);
        BruteResult res;
        const int n = static_cast<int>(g.n());
        const int k = m.size();
        std::function<void(int, Mask, int)> choose = [&](int from, Mask set, int count) {
            if (count == k) {
                auto vs = members(set);
                if (color_counts(g, vs) == m.counts() && components(nb, set) <= *q.r)
                    res.solutions.push_back({std::move(vs), induced_edges(g, set), std::nullopt});
                return;
            }
            for (int v = from; v <= n - (k - count); ++v)
                choose(v + 1, set | Mask{1} << v, count + 1);
        };
        choose(0, 0, 0);
        res.found = ! res.solutions.empty();
        return res;
    }
}

void enumerate_subtrees(const ColoredGraph & g, int size, const std::function<void(const SubtreeSolution &)> & visit,
                        const OracleLimits & limits)
{
    check_limits(g, size, limits);
    if (size < 1)
        return;
    const auto nb = neighbor_masks(g);
    connected_sets(nb, size, [&](Mask set) {
        SubtreeSolution sol;
        sol.vertices = members(set);
        spanning_trees(set, induced_edges(g, set), [&](const std::vector<Edge> & tree) {
            sol.edges = tree;
            visit(sol);
        });
    });
}

std::vector<SubtreeSolution> enumerate_subtrees(const ColoredGraph & g, int size, const OracleLimits & limits)
{
    std::vector<SubtreeSolution> out;
    enumerate_subtrees(g, size, [&](const SubtreeSolution & s) { out.push_back(s); }, limits);
    return out;
}

BruteResult solve_brute(const ColoredGraph & g, const MotifQuery & q, const OracleLimits & limits)
{
    if (q.variant == Variant::MINCC)
        return solve_mincc(g, q, limits);

    int lo = q.k, hi = q.k;
    switch (q.variant) {
        case Variant::XMGM: lo = hi = q.motif->size(); break;
        case Variant::MGMG: hi = *q.r; lo = q.k; break;
        default: break;
    }
    check_limits(g, hi, limits);

    BruteResult res;
    auto accept = [&](const SubtreeSolution & t) {
        const auto counts = color_counts(g, t.vertices);
        switch (q.variant) {
            case Variant::CGM:
            case Variant::XCGM: return counts.size() == t.vertices.size();
            case Variant::MGM: return fits(counts, *q.motif);
            case Variant::XMGM: return counts == q.motif->counts();
            case Variant::MGMG: {
                int selectable = 0;
                for (const auto & [c, cnt] : counts)
                    selectable += std::min(cnt, q.motif->count(c));
                return selectable >= q.k;
            }
            case Variant::WCGM:
                return counts.size() == t.vertices.size() && tree_weight(g, t.edges) <= static_cast<Weight>(*q.r);
            case Variant::WMGM: return fits(counts, *q.motif) && tree_weight(g, t.edges) <= static_cast<Weight>(*q.r);
            case Variant::MINCC: break;
        }
        return false;
    };
    for (int size = lo; size <= hi; ++size)
        enumerate_subtrees(
            g, size, [&](const SubtreeSolution & t) {
                if (accept(t))
                    res.solutions.push_back(t);
            },
            limits);
    res.found = ! res.solutions.empty();
    return res;
}

BigInt count_brute(const ColoredGraph & g, const MotifQuery & q, const OracleLimits & limits)
{
    return BigInt(solve_brute(g, q, limits).solutions.size());
}

BigInt count_rooted_brute(const ColoredGraph & g, const MotifQuery & q, const OracleLimits & limits)
{
    BigInt total = 0;
    for (const auto & s : solve_brute(g, q, limits).solutions)
        total += s.vertices.size();
    return total;
}

BigInt count_spanning_trees(const ColoredGraph & g, const std::vector<VertexId> & subset)
{
    std::vector<VertexId> vs = subset;
    if (vs.empty()) {
        vs.resize(g.n());
        std::iota(vs.begin(), vs.end(), VertexId{0});
    }
    const std::size_t s = vs.size();
    if (s <= 1)
        return 1;
    std::map<VertexId, std::size_t> index;
    for (std::size_t i = 0; i < s; ++i)
        index[vs[i]] = i;

    // Laplacian with the last row and column removed
    const std::size_t d = s - 1;
    std::vector<std::vector<BigInt>> a(d, std::vector<BigInt>(d, 0));
    for (const auto & e : g.edges()) {
        auto iu = index.find(e.u), iv = index.find(e.v);
        if (iu == index.end() || iv == index.end())
            continue;
        const std::size_t x = iu->second, y = iv->second;
        if (x < d)
            a[x][x] += 1;
        if (y < d)
            a[y][y] += 1;
        if (x < d && y < d) {
            a[x][y] -= 1;
            a[y][x] -= 1;
        }
    }

    // Bareiss
    BigInt prev = 1;
    int sign = 1;
    for (std::size_t p = 0; p < d; ++p) {
        if (a[p][p] == 0) {
            std::size_t r = p + 1;
            while (r < d && a[r][p] == 0)
                ++r;
            if (r == d)
                return 0;
            std::swap(a[p], a[r]);
            sign = -sign;
        }
        for (std::size_t i = p + 1; i < d; ++i) {
            for (std::size_t j = p + 1; j < d; ++j)
                a[i][j] = (a[i][j] * a[p][p] - a[i][p] * a[p][j]) / prev;
            a[i][p] = 0;
        }
        prev = a[p][p];
    }
    BigInt det = a[d - 1][d - 1];
    return sign < 0 ? BigInt(-det) : det;
}

} // namespace motif
