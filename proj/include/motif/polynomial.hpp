#pragma once

// Sparse polynomials over Z and exact symbolic expansion of circuits.
// Exponential in general; meant as an oracle on small circuits.

#include "motif/circuit.hpp"
#include "motif/rings.hpp"

#include <cstddef>
#include <map>
#include <span>
#include <vector>

namespace motif {

/// Multiset of variables, kept sorted.
using Monomial = std::vector<VarId>;

bool is_multilinear(const Monomial & m);

class Polynomial
{
public:
    using Terms = std::map<Monomial, BigInt>;

    Polynomial() = default;

    static Polynomial variable(VarId v);
    static Polynomial constant(const BigInt & c);

    const Terms & terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    BigInt coefficient(const Monomial & m) const;

    void add_term(const Monomial & m, const BigInt & coef);
    Polynomial & operator+=(const Polynomial & o);

    /// Product truncated to monomials of degree <= degree_cap; throws
    /// CapacityError once the result exceeds term_cap terms.
    static Polynomial multiply(const Polynomial & a, const Polynomial & b, std::size_t degree_cap,
                               std::size_t term_cap);

    /// Terms of exactly the given degree.
    Polynomial homogeneous_part(std::size_t degree) const;
    /// Value under an integer assignment indexed by variable id.
    BigInt evaluate(std::span<const BigInt> assign) const;

    friend bool operator==(const Polynomial &, const Polynomial &) = default;

private:
    Terms terms_;
};

/// P_C truncated to degree <= degree_cap. Throws CapacityError when an
/// intermediate polynomial exceeds term_cap terms.
Polynomial expand_symbolic(const Circuit & c, std::size_t degree_cap = 64, std::size_t term_cap = 100000);

} // namespace motif
