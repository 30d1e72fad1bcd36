#include "motif/graph.hpp"

#include "motif/error.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace motif {

ParseError::ParseError(std::string source, std::size_t line, const std::string & what) :
    Error(source + (line ? ":" + std::to_string(line) : std::string{}) + ": " + what),
    source_(std::move(source)),
    line_(line)
{
}

namespace {
    std::string join(const std::vector<std::string> & parts)
    {
        std::string out;
        for (const auto & p : parts) {
            if (! out.empty())
                out += "; ";
            out += p;
        }
        return out;
    }
}

ValidationError::ValidationError(std::vector<std::string> problems) :
    Error(join(problems)),
    problems_(std::move(problems))
{
}

ValidationError::ValidationError(const std::string & problem) :
    ValidationError(std::vector<std::string>{problem})
{
}

ColoredGraph::ColoredGraph(std::size_t n, std::vector<ColorId> colors, std::vector<Edge> edges,
                           std::optional<std::vector<Weight>> weights, std::vector<std::string> vertex_names,
                           std::vector<std::string> color_names) :
    colors_(std::move(colors)),
    weights_(std::move(weights)),
    vertex_names_(std::move(vertex_names)),
    color_names_(std::move(color_names))
{
    if (colors_.size() != n)
        throw ValidationError("expected " + std::to_string(n) + " vertex colors, got " + std::to_string(colors_.size()));
    if (weights_ && weights_->size() != edges.size())
        throw ValidationError("weight count does not match edge count");

    if (vertex_names_.empty())
        for (std::size_t v = 0; v < n; ++v)
            vertex_names_.push_back(std::to_string(v));
    if (vertex_names_.size() != n)
        throw ValidationError("vertex name table has the wrong size");

    ColorId max_color = 0;
    for (auto c : colors_)
        max_color = std::max(max_color, c);
    if (color_names_.empty())
        for (ColorId c = 0; n > 0 && c <= max_color; ++c)
            color_names_.push_back(std::to_string(c));
    if (n > 0 && max_color >= color_names_.size())
        throw ValidationError("color id " + std::to_string(max_color) + " has no name");

    // normalize, then sort edges together with their weights
    std::vector<std::pair<Edge, Weight>> tagged;
    tagged.reserve(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i) {
        auto [u, v] = edges[i];
        if (u >= n || v >= n)
            throw ValidationError("edge endpoint out of range: " + std::to_string(u) + " " + std::to_string(v));
        if (u == v)
            throw ValidationError("self-loop at vertex " + vertex_names_[u]);
        if (u > v)
            std::swap(u, v);
        tagged.push_back({Edge{u, v}, weights_ ? (*weights_)[i] : 0});
    }
    std::sort(tagged.begin(), tagged.end(), [](const auto & a, const auto & b) { return a.first < b.first; });
    for (std::size_t i = 1; i < tagged.size(); ++i)
        if (tagged[i].first == tagged[i - 1].first)
            throw ValidationError("duplicate edge " + vertex_names_[tagged[i].first.u] + " " +
                                  vertex_names_[tagged[i].first.v]);

    edges_.reserve(tagged.size());
    for (std::size_t i = 0; i < tagged.size(); ++i) {
        edges_.push_back(tagged[i].first);
        if (weights_)
            (*weights_)[i] = tagged[i].second;
    }

    std::vector<std::size_t> deg(n, 0);
    for (const auto & e : edges_) {
        ++deg[e.u];
        ++deg[e.v];
    }
    offsets_.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v)
        offsets_[v + 1] = offsets_[v] + deg[v];
    adj_.assign(offsets_[n], 0);
    adj_weight_.assign(offsets_[n], 0);
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    // edges_ is sorted by (u, v), so each adjacency list comes out sorted
    // if we place the "v side" entries (smaller neighbor) first
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const auto & e = edges_[i];
        const Weight w = weights_ ? (*weights_)[i] : 0;
        adj_[fill[e.u]] = e.v;
        adj_weight_[fill[e.u]++] = w;
        adj_[fill[e.v]] = e.u;
        adj_weight_[fill[e.v]++] = w;
    }
    for (std::size_t v = 0; v < n; ++v) {
        std::vector<std::pair<VertexId, Weight>> row;
        for (std::size_t i = offsets_[v]; i < offsets_[v + 1]; ++i)
            row.push_back({adj_[i], adj_weight_[i]});
        std::sort(row.begin(), row.end());
        for (std::size_t i = 0; i < row.size(); ++i) {
            adj_[offsets_[v] + i] = row[i].first;
            adj_weight_[offsets_[v] + i] = row[i].second;
        }
    }
}

std::size_t ColoredGraph::num_used_colors() const
{
    std::set<ColorId> used(colors_.begin(), colors_.end());
    return used.size();
}

std::size_t ColoredGraph::max_degree() const
{
    std::size_t d = 0;
    for (std::size_t v = 0; v < n(); ++v)
        d = std::max(d, degree(static_cast<VertexId>(v)));
    return d;
}

bool ColoredGraph::has_edge(VertexId u, VertexId v) const
{
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

Weight ColoredGraph::weight(VertexId u, VertexId v) const
{
    auto nb = neighbors(u);
    auto it = std::lower_bound(nb.begin(), nb.end(), v);
    if (it == nb.end() || *it != v)
        throw Error("no edge " + std::to_string(u) + " " + std::to_string(v));
    if (! weights_)
        throw Error("graph has no edge weights");
    return neighbor_weights(u)[static_cast<std::size_t>(it - nb.begin())];
}

std::optional<VertexId> ColoredGraph::vertex_id(std::string_view name) const
{
    for (std::size_t v = 0; v < vertex_names_.size(); ++v)
        if (vertex_names_[v] == name)
            return static_cast<VertexId>(v);
    return std::nullopt;
}

std::optional<ColorId> ColoredGraph::color_id(std::string_view name) const
{
    for (std::size_t c = 0; c < color_names_.size(); ++c)
        if (color_names_[c] == name)
            return static_cast<ColorId>(c);
    return std::nullopt;
}

Motif::Motif(std::map<ColorId, int> counts) :
    counts_(std::move(counts))
{
    for (const auto & [c, k] : counts_) {
        if (k < 1)
            throw ValidationError("motif multiplicity must be positive");
        size_ += k;
    }
}

int Motif::count(ColorId c) const
{
    auto it = counts_.find(c);
    return it == counts_.end() ? 0 : it->second;
}

std::string_view to_string(Variant v)
{
    switch (v) {
        case Variant::CGM: return "cgm";
        case Variant::XCGM: return "xcgm";
        case Variant::MGM: return "mgm";
        case Variant::XMGM: return "xmgm";
        case Variant::MGMG: return "mgmg";
        case Variant::WCGM: return "wcgm";
        case Variant::WMGM: return "wmgm";
        case Variant::MINCC: return "mincc";
    }
    return "?";
}

std::optional<Variant> parse_variant(std::string_view name)
{
    for (auto v : {Variant::CGM, Variant::XCGM, Variant::MGM, Variant::XMGM, Variant::MGMG, Variant::WCGM,
                   Variant::WMGM, Variant::MINCC})
        if (to_string(v) == name)
            return v;
    return std::nullopt;
}

bool is_multiset(Variant v)
{
    return v == Variant::MGM || v == Variant::XMGM || v == Variant::MGMG || v == Variant::WMGM ||
           v == Variant::MINCC;
}

CheckedQuery validate_query(const ColoredGraph & g, const MotifQuery & q)
{
    std::vector<std::string> problems;
    CheckedQuery out{q, {}};
    const auto name = std::string(to_string(q.variant));
    const bool needs_motif = is_multiset(q.variant);
    const bool needs_r = q.variant == Variant::MGMG || q.variant == Variant::WCGM || q.variant == Variant::WMGM ||
                         q.variant == Variant::MINCC;

    if (q.k < 1)
        problems.push_back("k must be at least 1");
    if (q.k > static_cast<int>(g.n()))
        problems.push_back("k = " + std::to_string(q.k) + " exceeds the vertex count " + std::to_string(g.n()));
    if (needs_motif && ! q.motif)
        problems.push_back(name + " requires a motif");
    if (! needs_motif && q.motif)
        out.warnings.push_back(name + " ignores the motif");
    if (needs_r && ! q.r)
        problems.push_back(name + " requires r");

    if (q.motif) {
        const int size = q.motif->size();
        if (size < 1)
            problems.push_back("motif must be nonempty");
        if ((q.variant == Variant::XMGM || q.variant == Variant::MINCC) && size != q.k)
            problems.push_back("exact variant requires |M| = k (|M| = " + std::to_string(size) +
                               ", k = " + std::to_string(q.k) + ")");
        if (q.variant == Variant::MGM && q.k > size)
            problems.push_back("mgm requires k <= |M|");
        if (q.variant == Variant::MGMG && q.k > size)
            problems.push_back("mgmg requires k <= |M|");
        std::set<ColorId> used(g.colors().begin(), g.colors().end());
        for (const auto & [c, mult] : q.motif->counts())
            if (! used.contains(c))
                out.warnings.push_back("motif color " +
                                       (c < g.num_colors() ? g.color_name(c)
                                        : c - g.num_colors() < q.motif->extra_color_names.size()
                                            ? q.motif->extra_color_names[c - g.num_colors()]
                                            : std::to_string(c)) +
                                       " does not occur in the graph");
    }

    if (q.r) {
        const int r = *q.r;
        switch (q.variant) {
            case Variant::MGMG:
                if (r < q.k)
                    problems.push_back("mgmg requires k <= r");
                if (r > static_cast<int>(g.n()))
                    problems.push_back("mgmg requires r <= n");
                break;
            case Variant::WCGM:
            case Variant::WMGM:
                if (r < 0)
                    problems.push_back("weight budget r must be nonnegative");
                break;
            case Variant::MINCC:
                if (r < 1)
                    problems.push_back("mincc requires at least one component (r >= 1)");
                break;
            default:
                out.warnings.push_back(name + " ignores r");
        }
    }

    if ((q.variant == Variant::WCGM || q.variant == Variant::WMGM) && ! g.has_weights())
        problems.push_back(name + " requires edge weights");
    if (q.variant == Variant::XCGM && g.num_used_colors() != static_cast<std::size_t>(q.k))
        problems.push_back("xcgm requires exactly k colors in the graph (found " +
                           std::to_string(g.num_used_colors()) + ")");

    if (! problems.empty())
        throw ValidationError(std::move(problems));
    return out;
}

namespace {
    struct Line
    {
        std::size_t number;
        std::vector<std::string> tokens;
    };

    std::vector<Line> read_lines(std::istream & in)
    {
        std::vector<Line> out;
        std::string text;
        std::size_t number = 0;
        while (std::getline(in, text)) {
            ++number;
            std::istringstream ss(text);
            std::vector<std::string> tokens;
            std::string tok;
            while (ss >> tok)
                tokens.push_back(tok);
            if (tokens.empty() || tokens.front().starts_with('#'))
                continue;
            out.push_back({number, std::move(tokens)});
        }
        return out;
    }

    template <class T>
    T parse_number(const std::string & tok, const std::string & source, std::size_t line, const char * what)
    {
        T value{};
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
        if (ec != std::errc{} || ptr != tok.data() + tok.size())
            throw ParseError(source, line, std::string("expected ") + what + ", got '" + tok + "'");
        return value;
    }
}

ColoredGraph load_graph(std::istream & graph_text, std::istream & colors_text, const SourceNames & names)
{
    auto glines = read_lines(graph_text);
    if (glines.empty())
        throw ParseError(names.graph, 0, "missing header line \"n m\"");
    const auto & header = glines.front();
    if (header.tokens.size() != 2)
        throw ParseError(names.graph, header.number, "header must be \"n m\"");
    const auto n = parse_number<std::size_t>(header.tokens[0], names.graph, header.number, "vertex count");
    const auto m = parse_number<std::size_t>(header.tokens[1], names.graph, header.number, "edge count");
    if (glines.size() - 1 != m)
        throw ParseError(names.graph, glines.back().number,
                         "header announces " + std::to_string(m) + " edges, found " +
                             std::to_string(glines.size() - 1));

    auto clines = read_lines(colors_text);
    std::vector<std::string> vertex_names;
    std::vector<std::string> color_names;
    std::unordered_map<std::string, VertexId> vertex_index;
    std::unordered_map<std::string, ColorId> color_index;
    std::vector<ColorId> colors;
    for (const auto & line : clines) {
        if (line.tokens.size() != 2)
            throw ParseError(names.colors, line.number, "expected \"vertex color\"");
        const auto & vname = line.tokens[0];
        const auto & cname = line.tokens[1];
        if (vertex_index.contains(vname))
            throw ValidationError(names.colors + ":" + std::to_string(line.number) + ": vertex " + vname +
                                  " colored twice");
        vertex_index.emplace(vname, static_cast<VertexId>(vertex_names.size()));
        vertex_names.push_back(vname);
        auto [it, fresh] = color_index.emplace(cname, static_cast<ColorId>(color_names.size()));
        if (fresh)
            color_names.push_back(cname);
        colors.push_back(it->second);
    }

    std::vector<Edge> edges;
    std::vector<Weight> weights;
    std::optional<bool> weighted;
    for (std::size_t i = 1; i < glines.size(); ++i) {
        const auto & line = glines[i];
        if (line.tokens.size() != 2 && line.tokens.size() != 3)
            throw ParseError(names.graph, line.number, "expected \"u v\" or \"u v w\"");
        const bool has_w = line.tokens.size() == 3;
        if (weighted && *weighted != has_w)
            throw ParseError(names.graph, line.number, "either every edge carries a weight or none does");
        weighted = has_w;
        VertexId ends[2];
        for (int s = 0; s < 2; ++s) {
            auto it = vertex_index.find(line.tokens[s]);
            if (it == vertex_index.end())
                throw ValidationError(names.graph + ":" + std::to_string(line.number) + ": vertex " +
                                      line.tokens[s] + " has no color");
            ends[s] = it->second;
        }
        if (ends[0] == ends[1])
            throw ValidationError(names.graph + ":" + std::to_string(line.number) + ": self-loop at vertex " +
                                  line.tokens[0]);
        edges.push_back({ends[0], ends[1]});
        if (has_w)
            weights.push_back(parse_number<Weight>(line.tokens[2], names.graph, line.number, "nonnegative weight"));
    }

    if (vertex_names.size() != n)
        throw ValidationError(names.colors + ": expected " + std::to_string(n) + " colored vertices, found " +
                              std::to_string(vertex_names.size()));

    std::optional<std::vector<Weight>> w;
    if (weighted.value_or(false))
        w = std::move(weights);
    return ColoredGraph(n, std::move(colors), std::move(edges), std::move(w), std::move(vertex_names),
                        std::move(color_names));
}

Motif load_motif(std::istream & motif_text, const ColoredGraph & g, std::vector<std::string> * warnings,
                 const std::string & source)
{
    std::map<ColorId, int> counts;
    std::vector<std::string> extra;
    for (const auto & line : read_lines(motif_text)) {
        if (line.tokens.size() != 2)
            throw ParseError(source, line.number, "expected \"color multiplicity\"");
        const auto mult = parse_number<int>(line.tokens[1], source, line.number, "multiplicity");
        if (mult < 1)
            throw ParseError(source, line.number, "multiplicity must be positive");
        ColorId c;
        if (auto id = g.color_id(line.tokens[0]))
            c = *id;
        else {
            auto it = std::find(extra.begin(), extra.end(), line.tokens[0]);
            if (it == extra.end()) {
                extra.push_back(line.tokens[0]);
                it = extra.end() - 1;
                if (warnings)
                    warnings->push_back("motif color " + line.tokens[0] + " does not occur in the graph");
            }
            c = static_cast<ColorId>(g.num_colors() + static_cast<std::size_t>(it - extra.begin()));
        }
        counts[c] += mult;
    }
    if (counts.empty())
        throw ParseError(source, 0, "motif is empty");
    Motif m(std::move(counts));
    m.extra_color_names = std::move(extra);
    return m;
}

void write_graph(const ColoredGraph & g, std::ostream & graph_out, std::ostream & colors_out)
{
    graph_out << g.n() << ' ' << g.m() << '\n';
    for (std::size_t i = 0; i < g.m(); ++i) {
        const auto & e = g.edges()[i];
        graph_out << g.vertex_name(e.u) << ' ' << g.vertex_name(e.v);
        if (g.has_weights())
            graph_out << ' ' << g.edge_weight(i);
        graph_out << '\n';
    }
    for (std::size_t v = 0; v < g.n(); ++v)
        colors_out << g.vertex_name(static_cast<VertexId>(v)) << ' '
                   << g.color_name(g.color(static_cast<VertexId>(v))) << '\n';
}

void write_motif(const Motif & m, const ColoredGraph & g, std::ostream & out)
{
    for (const auto & [c, mult] : m.counts()) {
        const auto & name = c < g.num_colors() ? g.color_name(c) : m.extra_color_names.at(c - g.num_colors());
        out << name << ' ' << mult << '\n';
    }
}

} // namespace motif
