#pragma once

// Flat evaluation schedule for a circuit.
//
// `compile` walks the circuit depth-first from the root with an explicit
// stack and emits straight-line code over one value array: entries
// [0, num_vars) hold the variable assignment, the rest are reusable slots.
// Nodes with one parent are folded into their parent's accumulator as soon
// as they are finished; nodes with two or more parents are kept in a slot
// until their last parent has consumed them. Peak slot usage is therefore at
// most S(C) + depth(C) + 1.
//
// Sums of binary products whose operands are variables or shared nodes are
// emitted as multiply-accumulate chains, letting rings defer reduction
// (GF(2^64) accumulates unreduced 128-bit products).

#include "motif/circuit.hpp"
#include "motif/error.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace motif {

enum class OpCode : std::uint8_t
{
    Zero,      // v[dst] = 0
    One,       // v[dst] = 1
    Copy,      // v[dst] = v[a]
    Add,       // v[dst] += v[a]
    Mul,       // v[dst] *= v[a]
    AccClear,  // acc = 0
    AccMac,    // acc += v[a] * v[b]
    AccStore,  // v[dst] = acc
    AccAdd,    // v[dst] += acc
};

struct Instr
{
    OpCode op;
    std::uint32_t dst;
    std::uint32_t a;
    std::uint32_t b;
};

struct Program
{
    std::uint32_t num_vars = 0;
    std::uint32_t num_slots = 0;
    /// Value index holding val(root) after execution.
    std::uint32_t result = 0;
    std::vector<Instr> code;

    std::size_t value_count() const { return std::size_t{num_vars} + num_slots; }
    /// Peak number of simultaneously live intermediate values.
    std::size_t peak_live() const { return num_slots; }
};

/// With reuse_slots = false every computed node keeps its own slot for
/// the whole run (no release when dead).
Program compile(const Circuit & c, bool reuse_slots = true);

/// Runs `p` over `values` (size value_count(), variables already filled).
template <class Ring>
void execute(const Program & p, std::span<typename Ring::value_type> values, const Ring & ring = {})
{
    typename Ring::acc_type acc{};
    auto * v = values.data();
    for (const auto & in : p.code) {
        switch (in.op) {
            case OpCode::Zero: v[in.dst] = ring.zero(); break;
            case OpCode::One: v[in.dst] = ring.one(); break;
            case OpCode::Copy: v[in.dst] = v[in.a]; break;
            case OpCode::Add: ring.add(v[in.dst], v[in.a]); break;
            case OpCode::Mul: ring.mul(v[in.dst], v[in.a]); break;
            case OpCode::AccClear: ring.acc_clear(acc); break;
            case OpCode::AccMac: ring.mac(acc, v[in.a], v[in.b]); break;
            case OpCode::AccStore: v[in.dst] = ring.acc_value(acc); break;
            case OpCode::AccAdd: ring.add(v[in.dst], ring.acc_value(acc)); break;
        }
    }
}

struct EvalStats
{
    std::size_t peak_live = 0;
    std::size_t instructions = 0;
};

/// val(root) of c over `ring` with variable v assigned assign[v].
template <class Ring>
typename Ring::value_type evaluate(const Circuit & c, std::span<const typename Ring::value_type> assign,
                                   const Ring & ring = {}, bool free_when_dead = true, EvalStats * stats = nullptr)
{
    if (assign.size() < c.num_variables())
        throw Error("evaluate: assignment covers " + std::to_string(assign.size()) + " of " +
                    std::to_string(c.num_variables()) + " variables");
    const auto p = compile(c, free_when_dead);
    std::vector<typename Ring::value_type> values(p.value_count(), ring.zero());
    std::copy(assign.begin(), assign.begin() + static_cast<std::ptrdiff_t>(c.num_variables()), values.begin());
    execute(p, std::span(values), ring);
    if (stats) {
        stats->peak_live = p.peak_live();
        stats->instructions = p.code.size();
    }
    return values[p.result];
}

/// Same, with a partial map; every variable reachable from the root must
/// be assigned.
template <class Ring>
typename Ring::value_type evaluate(const Circuit & c, const std::map<VarId, typename Ring::value_type> & assign,
                                   const Ring & ring = {}, bool free_when_dead = true, EvalStats * stats = nullptr)
{
    std::vector<typename Ring::value_type> dense(c.num_variables(), ring.zero());
    const auto keep = c.reachable();
    for (NodeId u = 0; u < c.num_nodes(); ++u) {
        if (! keep[u] || c.op(u) != Op::Var)
            continue;
        const auto v = c.node(u).var;
        auto it = assign.find(v);
        if (it == assign.end())
            throw Error("evaluate: variable " + c.variable(v).name + " is unassigned");
        dense[v] = it->second;
    }
    return evaluate<Ring>(c, std::span<const typename Ring::value_type>(dense), ring, free_when_dead, stats);
}

} // namespace motif

namespace motif {

/// Plain node-by-node evaluation in creation order with one value per
/// node. No slot reuse, no fusion; the reference the compiled schedule is
/// tested against.
template <class Ring>
typename Ring::value_type evaluate_naive(const Circuit & c, std::span<const typename Ring::value_type> assign,
                                         const Ring & ring = {})
{
    if (! c.has_root())
        throw Error("evaluate: circuit has no root");
    std::vector<typename Ring::value_type> val(c.root() + 1, ring.zero());
    for (NodeId u = 0; u <= c.root(); ++u) {
        const auto & n = c.node(u);
        if (n.op == Op::Var) {
            if (n.var >= assign.size())
                throw Error("evaluate: variable " + c.variable(n.var).name + " is unassigned");
            val[u] = assign[n.var];
            continue;
        }
        auto acc = n.op == Op::Add ? ring.zero() : ring.one();
        for (auto ch : c.children(u)) {
            if (n.op == Op::Add)
                ring.add(acc, val[ch]);
            else
                ring.mul(acc, val[ch]);
        }
        val[u] = acc;
    }
    return val[c.root()];
}

} // namespace motif
