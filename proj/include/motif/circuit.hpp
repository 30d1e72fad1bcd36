#pragma once

// Arithmetic circuits: rooted DAGs of +, x and variable nodes.
//
// Nodes live in one arena and refer to their children by index. A node can
// only be created from nodes that already exist, so creation order is a
// topological order and the graph is acyclic by construction. An Add node
// with no children is the ring zero, a Mul node with no children the ring
// unit; there are no other constants.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace motif {

using NodeId = std::uint32_t;
using VarId = std::uint32_t;

enum class Op : std::uint8_t
{
    Add,
    Mul,
    Var,
};

/// Sieved variables take part in the multilinearity test; don't-care
/// variables (fingerprints) receive one fixed random value per trial.
enum class VarClass : std::uint8_t
{
    Sieved,
    DontCare,
};

struct Node
{
    Op op;
    /// Variable id for Var nodes, otherwise unused.
    VarId var;
    std::uint32_t first_child;
    std::uint32_t num_children;
};

struct VarInfo
{
    VarClass cls;
    std::string name;
};

class Circuit
{
public:
    Circuit() = default;

    VarId add_variable(VarClass cls, std::string name = {});
    std::size_t num_variables() const { return vars_.size(); }
    const VarInfo & variable(VarId v) const { return vars_.at(v); }
    std::span<const VarInfo> variables() const { return vars_; }

    /// The (unique) node labeled by variable v.
    NodeId var(VarId v);
    /// Literal nodes, exactly as given (no folding).
    NodeId add_node(std::span<const NodeId> children);
    NodeId mul_node(std::span<const NodeId> children);
    NodeId add_node(std::initializer_list<NodeId> children) { return add_node(std::span(children.begin(), children.size())); }
    NodeId mul_node(std::initializer_list<NodeId> children) { return mul_node(std::span(children.begin(), children.size())); }

    /// Shared constant nodes (empty sum / empty product).
    NodeId zero();
    NodeId one();
    bool is_zero(NodeId u) const { return op(u) == Op::Add && node(u).num_children == 0; }
    bool is_one(NodeId u) const { return op(u) == Op::Mul && node(u).num_children == 0; }

    /// Folding constructors used by the builders: zero terms are dropped
    /// from sums, a zero factor annihilates a product, unit factors are
    /// dropped, and a single remaining operand is returned as is.
    NodeId sum(std::span<const NodeId> terms);
    NodeId product(std::span<const NodeId> factors);
    NodeId sum(std::initializer_list<NodeId> t) { return sum(std::span(t.begin(), t.size())); }
    NodeId product(std::initializer_list<NodeId> f) { return product(std::span(f.begin(), f.size())); }

    void set_root(NodeId r);
    NodeId root() const { return root_; }
    bool has_root() const { return has_root_; }

    std::size_t num_nodes() const { return nodes_.size(); }
    const Node & node(NodeId u) const { return nodes_[u]; }
    Op op(NodeId u) const { return nodes_[u].op; }
    std::span<const NodeId> children(NodeId u) const
    {
        const auto & n = nodes_[u];
        return {children_.data() + n.first_child, n.num_children};
    }

    /// Nodes reachable from the root.
    std::vector<bool> reachable() const;
    /// Copy keeping only root-reachable nodes (same relative order).
    Circuit pruned() const;

private:
    NodeId push(Op op, VarId var, std::span<const NodeId> children);

    std::vector<Node> nodes_;
    std::vector<NodeId> children_;
    std::vector<VarInfo> vars_;
    std::vector<NodeId> var_node_;
    NodeId zero_ = kNone;
    NodeId one_ = kNone;
    NodeId root_ = 0;
    bool has_root_ = false;

    static constexpr NodeId kNone = ~NodeId{0};
};

/// T(C): number of arcs among root-reachable nodes.
std::size_t size_T(const Circuit & c);
/// S(C): number of root-reachable nodes with at least two incoming arcs.
std::size_t size_S(const Circuit & c);
/// Longest root-to-leaf path, in arcs.
std::size_t depth(const Circuit & c);
/// Maximum total degree of P_C, or -1 when P_C = 0. Exact, because every
/// coefficient of P_C is a nonnegative integer and nothing cancels.
int max_degree(const Circuit & c);
/// Indegree (number of incoming arcs) of every node, over reachable nodes.
std::vector<std::uint32_t> indegrees(const Circuit & c);

/// Rewrites every node with more than two children as a left-nested
/// chain of binary nodes. Polynomial unchanged.
Circuit normalize_binary(const Circuit & c);

/// Degree-k homogeneous part of a binary circuit: copies u_0..u_k of each
/// node u, where u_i computes the degree-i part of u; the root is r_k.
/// Throws Error when c has a node with more than two children.
Circuit bound_degree(const Circuit & c, int k);

/// Text export, one node per line: "<id> add|mul <children...>" or
/// "<id> var <var-id> <sieved|dontcare> <name>", followed by "root <id>".
void dump(const Circuit & c, std::ostream & out);

} // namespace motif
