#include "motif/program.hpp"

#include <limits>

namespace motif {

namespace {
    constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();

    class SlotAllocator
    {
    public:
        SlotAllocator(std::uint32_t base, bool reuse) : base_(base), reuse_(reuse) {}

        std::uint32_t take()
        {
            if (! free_.empty()) {
                auto s = free_.back();
                free_.pop_back();
                return s;
            }
            return base_ + used_++;
        }

        void release(std::uint32_t s)
        {
            if (reuse_)
                free_.push_back(s);
        }

        std::uint32_t peak() const { return used_; }

    private:
        std::uint32_t base_;
        bool reuse_;
        std::uint32_t used_ = 0;
        std::vector<std::uint32_t> free_;
    };

    enum class Pending : std::uint8_t
    {
        None,
        Direct,     // child was computed straight into dst
        FoldTemp,   // fold the temp slot, then release it
        FoldShared, // fold the shared node's slot, then consume one reference
        Ready,      // shared operand materialized; nothing to fold
    };

    struct Frame
    {
        NodeId u;
        std::uint32_t dst;
        std::uint8_t stage = 0;
        bool have_value = false;
        Pending pending = Pending::None;
        NodeId pend_node = 0;
        std::uint32_t pend_slot = 0;
        std::uint32_t next = 0;
        // children of an Add frame, split into plain operands and fused
        // products; both live in a pool shared by the whole stack
        std::uint32_t others_at = 0;
        std::uint32_t others_n = 0;
        std::uint32_t macs_at = 0;
        std::uint32_t macs_n = 0;

        Frame(NodeId node, std::uint32_t slot) : u(node), dst(slot) {}
    };
}

Program compile(const Circuit & c, bool reuse_slots)
{
    Program p;
    p.num_vars = static_cast<std::uint32_t>(c.num_variables());
    if (! c.has_root())
        throw Error("compile: circuit has no root");

    const auto refs = indegrees(c);
    std::vector<std::uint32_t> remaining(refs.begin(), refs.end());
    std::vector<std::uint32_t> value(c.num_nodes(), kUnset);
    SlotAllocator slots(p.num_vars, reuse_slots);

    auto is_var = [&](NodeId u) { return c.op(u) == Op::Var; };
    auto var_index = [&](NodeId u) { return c.node(u).var; };
    auto shared = [&](NodeId u) { return ! is_var(u) && refs[u] >= 2; };

    if (is_var(c.root())) {
        p.result = var_index(c.root());
        return p;
    }

    auto consume = [&](NodeId u) {
        if (is_var(u))
            return;
        if (--remaining[u] == 0)
            slots.release(value[u]);
    };

    auto fold = [&](Frame & f, std::uint32_t src) {
        if (! f.have_value) {
            p.code.push_back({OpCode::Copy, f.dst, src, 0});
            f.have_value = true;
        }
        else
            p.code.push_back({c.op(f.u) == Op::Add ? OpCode::Add : OpCode::Mul, f.dst, src, 0});
    };

    std::vector<Frame> stack;
    std::vector<NodeId> pool;
    p.code.reserve(c.num_nodes() * 2);
    const auto root_slot = slots.take();
    p.result = root_slot;
    stack.push_back(Frame(c.root(), root_slot));

    // Starts evaluation of child `ch` on behalf of frame index fi. Returns
    // true when a new frame was pushed.
    auto visit_child = [&](std::size_t fi, NodeId ch) -> bool {
        Frame & f = stack[fi];
        if (is_var(ch)) {
            fold(f, var_index(ch));
            return false;
        }
        if (value[ch] != kUnset) {
            fold(f, value[ch]);
            consume(ch);
            return false;
        }
        if (shared(ch)) {
            value[ch] = slots.take();
            f.pending = Pending::FoldShared;
            f.pend_node = ch;
            const auto dst = value[ch];
            stack.push_back(Frame(ch, dst));
            return true;
        }
        if (! f.have_value) {
            f.pending = Pending::Direct;
            const auto dst = f.dst;
            stack.push_back(Frame(ch, dst));
            return true;
        }
        f.pending = Pending::FoldTemp;
        f.pend_slot = slots.take();
        const auto dst = f.pend_slot;
        stack.push_back(Frame(ch, dst));
        return true;
    };

    while (! stack.empty()) {
        const std::size_t fi = stack.size() - 1;
        {
            Frame & f = stack[fi];
            switch (f.pending) {
                case Pending::None: break;
                case Pending::Direct: f.have_value = true; break;
                case Pending::FoldTemp:
                    fold(f, f.pend_slot);
                    slots.release(f.pend_slot);
                    break;
                case Pending::FoldShared:
                    fold(f, value[f.pend_node]);
                    consume(f.pend_node);
                    break;
                case Pending::Ready: break;
            }
            f.pending = Pending::None;
        }

        const NodeId u = stack[fi].u;
        const auto kids = c.children(u);

        if (c.op(u) == Op::Mul) {
            bool pushed = false;
            while (! pushed && stack[fi].next < kids.size())
                pushed = visit_child(fi, kids[stack[fi].next++]);
            if (pushed)
                continue;
            if (! stack[fi].have_value)
                p.code.push_back({OpCode::One, stack[fi].dst, 0, 0});
            stack.pop_back();
            continue;
        }

        // Add node
        if (stack[fi].stage == 0) {
            Frame & f = stack[fi];
            auto mac = [&](NodeId ch) {
                return ! is_var(ch) && c.op(ch) == Op::Mul && refs[ch] == 1 && c.children(ch).size() == 2 &&
                       (is_var(c.children(ch)[0]) || shared(c.children(ch)[0])) &&
                       (is_var(c.children(ch)[1]) || shared(c.children(ch)[1]));
            };
            f.others_at = static_cast<std::uint32_t>(pool.size());
            for (auto ch : kids)
                if (! mac(ch))
                    pool.push_back(ch);
            f.macs_at = static_cast<std::uint32_t>(pool.size());
            for (auto ch : kids)
                if (mac(ch))
                    pool.push_back(ch);
            f.others_n = f.macs_at - f.others_at;
            f.macs_n = static_cast<std::uint32_t>(pool.size()) - f.macs_at;
            f.stage = 1;
        }
        if (stack[fi].stage == 1) {
            bool pushed = false;
            while (! pushed && stack[fi].next < stack[fi].others_n)
                pushed = visit_child(fi, pool[stack[fi].others_at + stack[fi].next++]);
            if (pushed)
                continue;
            stack[fi].stage = 2;
            stack[fi].next = 0;
        }
        if (stack[fi].stage == 2) {
            bool pushed = false;
            while (! pushed && stack[fi].next < 2 * stack[fi].macs_n) {
                const auto idx = stack[fi].next++;
                const NodeId operand = c.children(pool[stack[fi].macs_at + idx / 2])[idx % 2];
                if (is_var(operand) || value[operand] != kUnset)
                    continue;
                value[operand] = slots.take();
                stack[fi].pending = Pending::Ready;
                const auto dst = value[operand];
                stack.push_back(Frame(operand, dst));
                pushed = true;
            }
            if (pushed)
                continue;
            stack[fi].stage = 3;
        }
        Frame & f = stack[fi];
        auto operand_value = [&](NodeId o) { return is_var(o) ? var_index(o) : value[o]; };
        const std::span<const NodeId> macs(pool.data() + f.macs_at, f.macs_n);
        if (! macs.empty()) {
            p.code.push_back({OpCode::AccClear, 0, 0, 0});
            for (auto m : macs) {
                const auto ops = c.children(m);
                p.code.push_back({OpCode::AccMac, 0, operand_value(ops[0]), operand_value(ops[1])});
            }
            p.code.push_back({f.have_value ? OpCode::AccAdd : OpCode::AccStore, f.dst, 0, 0});
            f.have_value = true;
            for (auto m : macs)
                for (auto o : c.children(m))
                    consume(o);
        }
        if (! f.have_value)
            p.code.push_back({OpCode::Zero, f.dst, 0, 0});
        pool.resize(f.others_at);
        stack.pop_back();
    }

    p.num_slots = slots.peak();
    return p;
}

} // namespace motif
