#pragma once

// Vertex-colored graphs, motifs and motif queries, plus their text formats.
//
// Graph file:  "n m" then m lines "u v" or "u v w" (w a nonnegative integer).
// Colors file: n lines "vertex color".
// Motif file:  lines "color multiplicity".
// Tokens are whitespace separated; a line whose first non-blank character
// is '#' is a comment. Vertex and color names are arbitrary tokens, mapped to
// dense ids: vertices in colors-file order, colors in order of first use.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace motif {

using VertexId = std::uint32_t;
using ColorId = std::uint32_t;
using Weight = std::uint64_t;

struct Edge
{
    VertexId u;
    VertexId v;

    friend bool operator==(const Edge &, const Edge &) = default;
    friend auto operator<=>(const Edge &, const Edge &) = default;
};

/// Simple undirected graph with one color per vertex and optional edge
/// weights. Immutable once constructed.
class ColoredGraph
{
public:
    ColoredGraph() = default;

    /// Validates and normalizes (edges stored with u < v, sorted).
    /// Throws ValidationError on self-loops, duplicates, out-of-range
    /// endpoints or colors, or a weight vector of the wrong length.
    ColoredGraph(std::size_t n, std::vector<ColorId> colors, std::vector<Edge> edges,
                 std::optional<std::vector<Weight>> weights = std::nullopt,
                 std::vector<std::string> vertex_names = {}, std::vector<std::string> color_names = {});

    std::size_t n() const { return colors_.size(); }
    std::size_t m() const { return edges_.size(); }

    ColorId color(VertexId v) const { return colors_[v]; }
    std::span<const ColorId> colors() const { return colors_; }

    /// Size of the color id space (ids are 0..num_colors()-1).
    std::size_t num_colors() const { return color_names_.size(); }
    /// Number of distinct colors actually carried by some vertex.
    std::size_t num_used_colors() const;

    /// Neighbors of v in increasing id order.
    std::span<const VertexId> neighbors(VertexId v) const
    {
        return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
    }
    std::size_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }
    std::size_t max_degree() const;

    bool has_edge(VertexId u, VertexId v) const;

    std::span<const Edge> edges() const { return edges_; }
    bool has_weights() const { return weights_.has_value(); }
    /// Weight of edge index i (index into edges()).
    Weight edge_weight(std::size_t i) const { return (*weights_)[i]; }
    /// Weight of the edge {u,v}; the edge must exist and weights be present.
    Weight weight(VertexId u, VertexId v) const;
    /// Weights of neighbors(v), aligned entry by entry.
    std::span<const Weight> neighbor_weights(VertexId v) const
    {
        return {adj_weight_.data() + offsets_[v], adj_weight_.data() + offsets_[v + 1]};
    }

    const std::string & vertex_name(VertexId v) const { return vertex_names_[v]; }
    const std::string & color_name(ColorId c) const { return color_names_[c]; }
    std::optional<VertexId> vertex_id(std::string_view name) const;
    std::optional<ColorId> color_id(std::string_view name) const;

    friend bool operator==(const ColoredGraph & a, const ColoredGraph & b)
    {
        return a.colors_ == b.colors_ && a.edges_ == b.edges_ && a.weights_ == b.weights_ &&
               a.vertex_names_ == b.vertex_names_ && a.color_names_ == b.color_names_;
    }

private:
    std::vector<ColorId> colors_;
    std::vector<Edge> edges_;
    std::optional<std::vector<Weight>> weights_;
    std::vector<std::string> vertex_names_;
    std::vector<std::string> color_names_;

    std::vector<std::size_t> offsets_{0};
    std::vector<VertexId> adj_;
    std::vector<Weight> adj_weight_;
};

/// Multiset of colors with positive multiplicities.
class Motif
{
public:
    Motif() = default;
    explicit Motif(std::map<ColorId, int> counts);

    int count(ColorId c) const;
    int size() const { return size_; }
    const std::map<ColorId, int> & counts() const { return counts_; }

    /// Names of colors referenced by the motif file but carried by no
    /// vertex of the graph; their ids start at the graph's num_colors().
    std::vector<std::string> extra_color_names;

    friend bool operator==(const Motif & a, const Motif & b) { return a.counts_ == b.counts_; }

private:
    std::map<ColorId, int> counts_;
    int size_ = 0;
};

enum class Variant
{
    CGM,
    XCGM,
    MGM,
    XMGM,
    MGMG,
    WCGM,
    WMGM,
    MINCC,
};

std::string_view to_string(Variant v);
std::optional<Variant> parse_variant(std::string_view name);
bool is_multiset(Variant v);

struct MotifQuery
{
    Variant variant = Variant::CGM;
    int k = 0;
    /// Gap size (MGMG), weight budget (WCGM/WMGM) or component budget (MINCC).
    std::optional<int> r;
    std::optional<Motif> motif;
};

struct CheckedQuery
{
    MotifQuery query;
    std::vector<std::string> warnings;
};

/// Checks every query invariant against g; throws ValidationError listing
/// all violations.
CheckedQuery validate_query(const ColoredGraph & g, const MotifQuery & q);

struct SourceNames
{
    std::string graph = "graph";
    std::string colors = "colors";
};

ColoredGraph load_graph(std::istream & graph_text, std::istream & colors_text, const SourceNames & names = {});
Motif load_motif(std::istream & motif_text, const ColoredGraph & g, std::vector<std::string> * warnings = nullptr,
                 const std::string & source = "motif");

void write_graph(const ColoredGraph & g, std::ostream & graph_out, std::ostream & colors_out);
void write_motif(const Motif & m, const ColoredGraph & g, std::ostream & out);

} // namespace motif
