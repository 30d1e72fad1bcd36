#include "motif/circuit.hpp"

#include "motif/error.hpp"

#include <algorithm>
#include <ostream>

namespace motif {

VarId Circuit::add_variable(VarClass cls, std::string name)
{
    const auto id = static_cast<VarId>(vars_.size());
    if (name.empty())
        name = "v" + std::to_string(id);
    vars_.push_back({cls, std::move(name)});
    var_node_.push_back(kNone);
    return id;
}

NodeId Circuit::push(Op op, VarId var, std::span<const NodeId> children)
{
    const auto id = static_cast<NodeId>(nodes_.size());
    for (auto c : children)
        if (c >= id)
            throw Error("circuit child " + std::to_string(c) + " does not exist yet");
    const NodeId * base = children_.data();
    if (! children.empty() && children.data() >= base && children.data() < base + children_.size()) {
        // the span points into children_, which insert may reallocate
        const std::vector<NodeId> copy(children.begin(), children.end());
        return push(op, var, copy);
    }
    nodes_.push_back({op, var, static_cast<std::uint32_t>(children_.size()),
                      static_cast<std::uint32_t>(children.size())});
    children_.insert(children_.end(), children.begin(), children.end());
    return id;
}

NodeId Circuit::var(VarId v)
{
    if (v >= vars_.size())
        throw Error("variable " + std::to_string(v) + " is not registered");
    if (var_node_[v] == kNone)
        var_node_[v] = push(Op::Var, v, {});
    return var_node_[v];
}

NodeId Circuit::add_node(std::span<const NodeId> children) { return push(Op::Add, 0, children); }

NodeId Circuit::mul_node(std::span<const NodeId> children) { return push(Op::Mul, 0, children); }

NodeId Circuit::zero()
{
    if (zero_ == kNone)
        zero_ = push(Op::Add, 0, {});
    return zero_;
}

NodeId Circuit::one()
{
    if (one_ == kNone)
        one_ = push(Op::Mul, 0, {});
    return one_;
}

NodeId Circuit::sum(std::span<const NodeId> terms)
{
    std::size_t zeros = 0;
    NodeId last = kNone;
    for (auto t : terms) {
        if (is_zero(t))
            ++zeros;
        else
            last = t;
    }
    const std::size_t left = terms.size() - zeros;
    if (left == 0)
        return zero();
    if (left == 1)
        return last;
    if (zeros == 0)
        return add_node(terms);
    std::vector<NodeId> kept;
    kept.reserve(left);
    for (auto t : terms)
        if (! is_zero(t))
            kept.push_back(t);
    return add_node(kept);
}

NodeId Circuit::product(std::span<const NodeId> factors)
{
    std::size_t ones = 0;
    NodeId last = kNone;
    for (auto f : factors) {
        if (is_zero(f))
            return zero();
        if (is_one(f))
            ++ones;
        else
            last = f;
    }
    const std::size_t left = factors.size() - ones;
    if (left == 0)
        return one();
    if (left == 1)
        return last;
    if (ones == 0)
        return mul_node(factors);
    std::vector<NodeId> kept;
    kept.reserve(left);
    for (auto f : factors)
        if (! is_one(f))
            kept.push_back(f);
    return mul_node(kept);
}

void Circuit::set_root(NodeId r)
{
    if (r >= nodes_.size())
        throw Error("root " + std::to_string(r) + " is not a node");
    root_ = r;
    has_root_ = true;
}

std::vector<bool> Circuit::reachable() const
{
    std::vector<bool> seen(nodes_.size(), false);
    if (! has_root_)
        return seen;
    seen[root_] = true;
    // children have smaller ids than parents, so one descending sweep suffices
    for (std::size_t u = nodes_.size(); u-- > 0;)
        if (seen[u])
            for (auto c : children(static_cast<NodeId>(u)))
                seen[c] = true;
    return seen;
}

Circuit Circuit::pruned() const
{
    Circuit out;
    out.vars_ = vars_;
    out.var_node_.assign(vars_.size(), kNone);
    if (! has_root_)
        return out;
    const auto keep = reachable();
    std::vector<NodeId> map(nodes_.size(), kNone);
    std::vector<NodeId> kids;
    for (std::size_t u = 0; u < nodes_.size(); ++u) {
        if (! keep[u])
            continue;
        const auto & n = nodes_[u];
        if (n.op == Op::Var) {
            map[u] = out.var(n.var);
            continue;
        }
        kids.clear();
        for (auto c : children(static_cast<NodeId>(u)))
            kids.push_back(map[c]);
        map[u] = out.push(n.op, 0, kids);
        if (u == zero_)
            out.zero_ = map[u];
        if (u == one_)
            out.one_ = map[u];
    }
    out.set_root(map[root_]);
    return out;
}

std::vector<std::uint32_t> indegrees(const Circuit & c)
{
    std::vector<std::uint32_t> in(c.num_nodes(), 0);
    const auto keep = c.reachable();
    for (std::size_t u = 0; u < c.num_nodes(); ++u)
        if (keep[u])
            for (auto ch : c.children(static_cast<NodeId>(u)))
                ++in[ch];
    return in;
}

std::size_t size_T(const Circuit & c)
{
    const auto keep = c.reachable();
    std::size_t arcs = 0;
    for (std::size_t u = 0; u < c.num_nodes(); ++u)
        if (keep[u])
            arcs += c.node(static_cast<NodeId>(u)).num_children;
    return arcs;
}

std::size_t size_S(const Circuit & c)
{
    const auto in = indegrees(c);
    return static_cast<std::size_t>(std::count_if(in.begin(), in.end(), [](auto d) { return d >= 2; }));
}

std::size_t depth(const Circuit & c)
{
    if (! c.has_root())
        return 0;
    std::vector<std::size_t> d(c.num_nodes(), 0);
    for (std::size_t u = 0; u <= c.root(); ++u)
        for (auto ch : c.children(static_cast<NodeId>(u)))
            d[u] = std::max(d[u], d[ch] + 1);
    return d[c.root()];
}

int max_degree(const Circuit & c)
{
    if (! c.has_root())
        return -1;
    std::vector<int> deg(c.root() + 1, -1);
    for (NodeId u = 0; u <= c.root(); ++u) {
        const auto & n = c.node(u);
        switch (n.op) {
            case Op::Var: deg[u] = 1; break;
            case Op::Add: {
                int d = -1;
                for (auto ch : c.children(u))
                    d = std::max(d, deg[ch]);
                deg[u] = d;
                break;
            }
            case Op::Mul: {
                int d = 0;
                for (auto ch : c.children(u)) {
                    if (deg[ch] < 0) {
                        d = -1;
                        break;
                    }
                    d += deg[ch];
                }
                deg[u] = d;
                break;
            }
        }
    }
    return deg[c.root()];
}

Circuit normalize_binary(const Circuit & c)
{
    Circuit out;
    for (const auto & v : c.variables())
        out.add_variable(v.cls, v.name);
    if (! c.has_root())
        return out;
    const auto keep = c.reachable();
    std::vector<NodeId> map(c.num_nodes(), 0);
    std::vector<NodeId> kids;
    for (NodeId u = 0; u < c.num_nodes(); ++u) {
        if (! keep[u])
            continue;
        const auto & n = c.node(u);
        if (n.op == Op::Var) {
            map[u] = out.var(n.var);
            continue;
        }
        kids.clear();
        for (auto ch : c.children(u))
            kids.push_back(map[ch]);
        auto make = [&](std::span<const NodeId> k) {
            return n.op == Op::Add ? out.add_node(k) : out.mul_node(k);
        };
        if (kids.size() <= 2) {
            map[u] = make(kids);
            continue;
        }
        NodeId acc = make(std::span(kids.data(), 2));
        for (std::size_t i = 2; i < kids.size(); ++i) {
            const NodeId pair[2] = {acc, kids[i]};
            acc = make(pair);
        }
        map[u] = acc;
    }
    out.set_root(map[c.root()]);
    return out;
}

Circuit bound_degree(const Circuit & c, int k)
{
    if (k < 0)
        throw Error("bound_degree: k must be nonnegative");
    Circuit out;
    for (const auto & v : c.variables())
        out.add_variable(v.cls, v.name);
    if (! c.has_root())
        return out;

    const auto keep = c.reachable();
    const auto width = static_cast<std::size_t>(k) + 1;
    std::vector<NodeId> copy(c.num_nodes() * width, 0);
    auto at = [&](NodeId u, int i) -> NodeId & { return copy[u * width + static_cast<std::size_t>(i)]; };

    std::vector<NodeId> terms;
    for (NodeId u = 0; u < c.num_nodes(); ++u) {
        if (! keep[u])
            continue;
        const auto & n = c.node(u);
        const auto kids = c.children(u);
        if (kids.size() > 2)
            throw Error("bound_degree needs a binary circuit (apply normalize_binary first)");
        switch (n.op) {
            case Op::Var:
                for (int i = 0; i <= k; ++i)
                    at(u, i) = i == 1 ? out.var(n.var) : out.zero();
                break;
            case Op::Add:
                for (int i = 0; i <= k; ++i) {
                    terms.clear();
                    for (auto ch : kids)
                        terms.push_back(at(ch, i));
                    at(u, i) = out.sum(terms);
                }
                break;
            case Op::Mul:
                if (kids.empty()) {
                    for (int i = 0; i <= k; ++i)
                        at(u, i) = i == 0 ? out.one() : out.zero();
                }
                else if (kids.size() == 1) {
                    for (int i = 0; i <= k; ++i)
                        at(u, i) = at(kids[0], i);
                }
                else {
                    for (int i = 0; i <= k; ++i) {
                        terms.clear();
                        for (int p = 0; p <= i; ++p)
                            terms.push_back(out.product({at(kids[0], p), at(kids[1], i - p)}));
                        at(u, i) = out.sum(terms);
                    }
                }
                break;
        }
    }
    out.set_root(at(c.root(), k));
    return out.pruned();
}

void dump(const Circuit & c, std::ostream & out)
{
    for (NodeId u = 0; u < c.num_nodes(); ++u) {
        const auto & n = c.node(u);
        out << u;
        switch (n.op) {
            case Op::Var: {
                const auto & info = c.variable(n.var);
                out << " var " << n.var << ' ' << (info.cls == VarClass::Sieved ? "sieved" : "dontcare") << ' '
                    << info.name;
                break;
            }
            case Op::Add: out << " add"; break;
            case Op::Mul: out << " mul"; break;
        }
        for (auto ch : c.children(u))
            out << ' ' << ch;
        out << '\n';
    }
    if (c.has_root())
        out << "root " << c.root() << '\n';
}

} // namespace motif
