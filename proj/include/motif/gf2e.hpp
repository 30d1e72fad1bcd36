#pragma once

// GF(2^64) arithmetic for the multilinear sieve.
//
// Elements are polynomials over GF(2) of degree < 64 stored in one word,
// reduced modulo x^64 + x^4 + x^3 + x + 1. Addition is XOR. Multiplication
// uses PCLMULQDQ when the library is compiled with it and a windowed
// shift-and-XOR routine otherwise; both are checked against a bit-serial
// reference.

#include <cstdint>
#include <string>

#if defined(__PCLMUL__)
#include <wmmintrin.h>
#include <emmintrin.h>
#include <smmintrin.h>
#endif

namespace motif::gf2e {

/// Low word of the modulus: x^4 + x^3 + x + 1.
inline constexpr std::uint64_t kModulusLow = 0x1B;

class FieldElement
{
public:
    constexpr FieldElement() = default;
    constexpr explicit FieldElement(std::uint64_t bits) : bits_(bits) {}

    static constexpr FieldElement zero() { return FieldElement{0}; }
    static constexpr FieldElement one() { return FieldElement{1}; }

    constexpr std::uint64_t bits() const { return bits_; }
    constexpr bool is_zero() const { return bits_ == 0; }

    friend constexpr bool operator==(FieldElement, FieldElement) = default;

    std::string hex() const;

private:
    std::uint64_t bits_ = 0;
};

/// 128-bit unreduced carryless product.
struct Wide
{
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;

    Wide & operator^=(const Wide & o)
    {
        lo ^= o.lo;
        hi ^= o.hi;
        return *this;
    }
};

/// Fold the high word back using x^64 = x^4 + x^3 + x + 1.
inline std::uint64_t reduce(Wide w)
{
    const std::uint64_t t = w.hi;
    const std::uint64_t over = (t >> 63) ^ (t >> 61) ^ (t >> 60);
    return w.lo ^ t ^ (t << 1) ^ (t << 3) ^ (t << 4) ^ over ^ (over << 1) ^ (over << 3) ^ (over << 4);
}

/// Carryless 64x64 -> 128 product, 4-bit windowed, no special instructions.
Wide clmul_portable(std::uint64_t a, std::uint64_t b);

#if defined(__PCLMUL__)
inline Wide clmul(std::uint64_t a, std::uint64_t b)
{
    const __m128i va = _mm_cvtsi64_si128(static_cast<long long>(a));
    const __m128i vb = _mm_cvtsi64_si128(static_cast<long long>(b));
    const __m128i p = _mm_clmulepi64_si128(va, vb, 0x00);
    return Wide{static_cast<std::uint64_t>(_mm_cvtsi128_si64(p)),
                static_cast<std::uint64_t>(_mm_extract_epi64(p, 1))};
}
inline constexpr bool kHardwareClmul = true;
#else
inline Wide clmul(std::uint64_t a, std::uint64_t b) { return clmul_portable(a, b); }
inline constexpr bool kHardwareClmul = false;
#endif

inline FieldElement add(FieldElement a, FieldElement b) { return FieldElement{a.bits() ^ b.bits()}; }

inline FieldElement mul(FieldElement a, FieldElement b) { return FieldElement{reduce(clmul(a.bits(), b.bits()))}; }

/// Product through the portable path regardless of build flags.
inline FieldElement mul_portable(FieldElement a, FieldElement b)
{
    return FieldElement{reduce(clmul_portable(a.bits(), b.bits()))};
}

/// Bit-serial shift-and-reduce multiply. Slow; the oracle for `mul`.
FieldElement mul_reference(FieldElement a, FieldElement b);

inline FieldElement operator+(FieldElement a, FieldElement b) { return add(a, b); }
inline FieldElement operator*(FieldElement a, FieldElement b) { return mul(a, b); }
inline FieldElement & operator+=(FieldElement & a, FieldElement b) { return a = add(a, b); }
inline FieldElement & operator*=(FieldElement & a, FieldElement b) { return a = mul(a, b); }

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Counter-based generator: the i-th output is a pure function of
/// (key, i), so any worker can jump to any position of a stream.
class CounterRng
{
public:
    constexpr explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix64(seed ^ mix64(stream + 0x632BE59BD9B4E019ULL)))
    {
    }

    constexpr std::uint64_t at(std::uint64_t index) const
    {
        return mix64(key_ + (index + 1) * 0x9E3779B97F4A7C15ULL);
    }

    constexpr std::uint64_t next() { return at(counter_++); }
    constexpr std::uint64_t position() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Uniform draw from GF(2^64).
inline FieldElement sample(CounterRng & rng) { return FieldElement{rng.next()}; }

} // namespace motif::gf2e
