#pragma once

// Coefficient rings accepted by `execute` / `evaluate`.

#include "motif/gf2e.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>

namespace motif {

using BigInt = boost::multiprecision::cpp_int;

/// Integers modulo 2^64 (wrapping). Only for tests and small values.
struct Int64Ring
{
    using value_type = std::int64_t;
    using acc_type = std::uint64_t;

    value_type zero() const { return 0; }
    value_type one() const { return 1; }
    void add(value_type & d, value_type a) const { d = static_cast<value_type>(static_cast<std::uint64_t>(d) + static_cast<std::uint64_t>(a)); }
    void mul(value_type & d, value_type a) const { d = static_cast<value_type>(static_cast<std::uint64_t>(d) * static_cast<std::uint64_t>(a)); }
    void acc_clear(acc_type & acc) const { acc = 0; }
    void mac(acc_type & acc, value_type a, value_type b) const { acc += static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b); }
    value_type acc_value(const acc_type & acc) const { return static_cast<value_type>(acc); }
};

/// Arbitrary-precision integers.
struct BigIntRing
{
    using value_type = BigInt;
    using acc_type = BigInt;

    value_type zero() const { return 0; }
    value_type one() const { return 1; }
    void add(value_type & d, const value_type & a) const { d += a; }
    void mul(value_type & d, const value_type & a) const { d *= a; }
    void acc_clear(acc_type & acc) const { acc = 0; }
    void mac(acc_type & acc, const value_type & a, const value_type & b) const
    {
        if (! a.is_zero() && ! b.is_zero())
            acc += a * b;
    }
    value_type acc_value(const acc_type & acc) const { return acc; }
};

/// GF(2^64); products inside a multiply-accumulate chain stay unreduced.
struct GF2Ring
{
    using value_type = gf2e::FieldElement;
    using acc_type = gf2e::Wide;

    value_type zero() const { return value_type::zero(); }
    value_type one() const { return value_type::one(); }
    void add(value_type & d, value_type a) const { d = gf2e::add(d, a); }
    void mul(value_type & d, value_type a) const { d = gf2e::mul(d, a); }
    void acc_clear(acc_type & acc) const { acc = {}; }
    void mac(acc_type & acc, value_type a, value_type b) const { acc ^= gf2e::clmul(a.bits(), b.bits()); }
    value_type acc_value(const acc_type & acc) const { return value_type{gf2e::reduce(acc)}; }
};

} // namespace motif
