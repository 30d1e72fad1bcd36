#include "motif/polynomial.hpp"

#include "motif/error.hpp"

#include <algorithm>
#include <optional>

namespace motif {

bool is_multilinear(const Monomial & m) { return std::adjacent_find(m.begin(), m.end()) == m.end(); }

Polynomial Polynomial::variable(VarId v)
{
    Polynomial p;
    p.terms_.emplace(Monomial{v}, 1);
    return p;
}

Polynomial Polynomial::constant(const BigInt & c)
{
    Polynomial p;
    if (! c.is_zero())
        p.terms_.emplace(Monomial{}, c);
    return p;
}

BigInt Polynomial::coefficient(const Monomial & m) const
{
    auto it = terms_.find(m);
    return it == terms_.end() ? BigInt{0} : it->second;
}

void Polynomial::add_term(const Monomial & m, const BigInt & coef)
{
    if (coef.is_zero())
        return;
    auto [it, fresh] = terms_.try_emplace(m, coef);
    if (! fresh) {
        it->second += coef;
        if (it->second.is_zero())
            terms_.erase(it);
    }
}

Polynomial & Polynomial::operator+=(const Polynomial & o)
{
    for (const auto & [m, c] : o.terms_)
        add_term(m, c);
    return *this;
}

Polynomial Polynomial::multiply(const Polynomial & a, const Polynomial & b, std::size_t degree_cap,
                                std::size_t term_cap)
{
    Polynomial out;
    Monomial m;
    for (const auto & [ma, ca] : a.terms_) {
        if (ma.size() > degree_cap)
            continue;
        for (const auto & [mb, cb] : b.terms_) {
            if (ma.size() + mb.size() > degree_cap)
                continue;
            m.resize(ma.size() + mb.size());
            std::merge(ma.begin(), ma.end(), mb.begin(), mb.end(), m.begin());
            out.add_term(m, ca * cb);
            if (out.size() > term_cap)
                throw CapacityError("symbolic expansion exceeds " + std::to_string(term_cap) + " terms");
        }
    }
    return out;
}

Polynomial Polynomial::homogeneous_part(std::size_t degree) const
{
    Polynomial out;
    for (const auto & [m, c] : terms_)
        if (m.size() == degree)
            out.terms_.emplace(m, c);
    return out;
}

BigInt Polynomial::evaluate(std::span<const BigInt> assign) const
{
    BigInt total = 0;
    for (const auto & [m, c] : terms_) {
        BigInt t = c;
        for (auto v : m)
            t *= assign[v];
        total += t;
    }
    return total;
}

Polynomial expand_symbolic(const Circuit & c, std::size_t degree_cap, std::size_t term_cap)
{
    if (! c.has_root())
        return {};
    const auto keep = c.reachable();
    auto remaining = indegrees(c);
    std::vector<std::optional<Polynomial>> val(c.num_nodes());

    auto release = [&](NodeId ch) {
        if (--remaining[ch] == 0)
            val[ch].reset();
    };

    for (NodeId u = 0; u <= c.root(); ++u) {
        if (! keep[u])
            continue;
        const auto & n = c.node(u);
        Polynomial p;
        switch (n.op) {
            case Op::Var:
                if (degree_cap >= 1)
                    p = Polynomial::variable(n.var);
                break;
            case Op::Add:
                for (auto ch : c.children(u)) {
                    p += *val[ch];
                    if (p.size() > term_cap)
                        throw CapacityError("symbolic expansion exceeds " + std::to_string(term_cap) + " terms");
                }
                break;
            case Op::Mul: {
                p = Polynomial::constant(1);
                for (auto ch : c.children(u))
                    p = Polynomial::multiply(p, *val[ch], degree_cap, term_cap);
                break;
            }
        }
        for (auto ch : c.children(u))
            release(ch);
        val[u] = std::move(p);
    }
    return std::move(*val[c.root()]);
}

} // namespace motif
