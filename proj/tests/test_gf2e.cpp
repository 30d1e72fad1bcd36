#include "motif/gf2e.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace motif::gf2e;

namespace {

FieldElement rand_elem(std::mt19937_64 & rng)
{
    return FieldElement{rng()};
}

FieldElement power(FieldElement a, unsigned e)
{
    FieldElement r = FieldElement::one();
    while (e) {
        if (e & 1)
            r = mul_reference(r, a);
        a = mul_reference(a, a);
        e >>= 1;
    }
    return r;
}

}

TEST(Field, TopBitTimesXWrapsToModulus)
{
    EXPECT_EQ(mul(FieldElement{0x8000000000000000ULL}, FieldElement{2}).bits(), 0x1BULL);
    EXPECT_EQ(mul_reference(FieldElement{0x8000000000000000ULL}, FieldElement{2}).bits(), 0x1BULL);
    EXPECT_EQ(mul_portable(FieldElement{0x8000000000000000ULL}, FieldElement{2}).bits(), 0x1BULL);
}

TEST(Field, SmallProductsAreCarryless)
{
    EXPECT_EQ(mul(FieldElement{3}, FieldElement{3}).bits(), 5u);
    EXPECT_EQ(mul(FieldElement{0xFF}, FieldElement{0xFF}).bits(), 0x5555u);
    EXPECT_EQ(add(FieldElement{0b1100}, FieldElement{0b1010}).bits(), 0b0110u);
}

TEST(Field, FastPathsMatchReference)
{
    std::mt19937_64 rng(7);
    for (int i = 0; i < 100000; ++i) {
        const auto a = rand_elem(rng), b = rand_elem(rng);
        const auto want = mul_reference(a, b);
        ASSERT_EQ(mul(a, b), want) << a.hex() << " * " << b.hex();
        ASSERT_EQ(mul_portable(a, b), want) << a.hex() << " * " << b.hex();
    }
}

TEST(Field, PortableClmulMatchesHardware)
{
    std::mt19937_64 rng(8);
    for (int i = 0; i < 20000; ++i) {
        const auto a = rng(), b = rng();
        const auto p = clmul_portable(a, b), q = clmul(a, b);
        ASSERT_EQ(p.lo, q.lo);
        ASSERT_EQ(p.hi, q.hi);
    }
}

TEST(Field, ReduceAgreesWithReferenceOnWideValues)
{
    std::mt19937_64 rng(9);
    for (int i = 0; i < 2000; ++i) {
        const Wide w{rng(), rng()};
        // w = hi * x^64 + lo
        const auto x64 = mul_reference(FieldElement{1ULL << 63}, FieldElement{2});
        const auto want = add(mul_reference(FieldElement{w.hi}, x64), FieldElement{w.lo});
        ASSERT_EQ(reduce(w), want.bits());
    }
}

TEST(Field, Axioms)
{
    std::mt19937_64 rng(10);
    const auto zero = FieldElement::zero(), one = FieldElement::one();
    for (int i = 0; i < 5000; ++i) {
        const auto a = rand_elem(rng), b = rand_elem(rng), c = rand_elem(rng);
        ASSERT_EQ(a + b, b + a);
        ASSERT_EQ(a * b, b * a);
        ASSERT_EQ((a + b) + c, a + (b + c));
        ASSERT_EQ((a * b) * c, a * (b * c));
        ASSERT_EQ(a * (b + c), a * b + a * c);
        ASSERT_EQ(a + zero, a);
        ASSERT_EQ(a * one, a);
        ASSERT_EQ(a * zero, zero);
        ASSERT_EQ(a + a, zero);
    }
}

TEST(Field, FrobeniusIsAdditive)
{
    std::mt19937_64 rng(11);
    for (int i = 0; i < 2000; ++i) {
        const auto a = rand_elem(rng), b = rand_elem(rng);
        ASSERT_EQ((a + b) * (a + b), a * a + b * b);
    }
}

TEST(Field, NonzeroElementsHaveInverses)
{
    // a^(2^64 - 2) is the inverse; computed by squaring a^(2^63 - 1).
    std::mt19937_64 rng(12);
    for (int i = 0; i < 50; ++i) {
        auto a = rand_elem(rng);
        if (a.is_zero())
            continue;
        FieldElement inv = FieldElement::one(), sq = a;
        for (int bit = 1; bit < 64; ++bit) {
            sq = mul_reference(sq, sq);
            inv = mul_reference(inv, sq);
        }
        ASSERT_EQ(mul(a, inv), FieldElement::one()) << a.hex();
    }
}

TEST(Field, MultiplicativeGroupOrderDividesTwoTo64MinusOne)
{
    // a^(2^64) = a for every element
    std::mt19937_64 rng(13);
    for (int i = 0; i < 50; ++i) {
        const auto a = rand_elem(rng);
        auto x = a;
        for (int s = 0; s < 64; ++s)
            x = mul(x, x);
        ASSERT_EQ(x, a);
    }
    EXPECT_EQ(power(FieldElement{2}, 64), mul(FieldElement{1ULL << 63}, FieldElement{2}));
}

TEST(Field, CounterRngIsPositional)
{
    CounterRng a(42, 3), b(42, 3), c(42, 4);
    std::vector<std::uint64_t> seq;
    for (int i = 0; i < 10; ++i)
        seq.push_back(a.next());
    for (int i = 9; i >= 0; --i)
        EXPECT_EQ(b.at(static_cast<std::uint64_t>(i)), seq[static_cast<std::size_t>(i)]);
    EXPECT_NE(c.at(0), seq[0]);
    EXPECT_EQ(a.position(), 10u);
}

TEST(Field, HexIsFixedWidth)
{
    EXPECT_EQ(FieldElement{0x1B}.hex(), "0x000000000000001b");
}

TEST(Field, SamplingIsReproducible)
{
    CounterRng a(5), b(5), c(6);
    EXPECT_EQ(sample(a), sample(b));
    EXPECT_NE(sample(a), sample(c));
    CounterRng big(77);
    std::uint64_t x = 0;
    for (int i = 0; i < 1000000; ++i)
        x ^= sample(big).bits();
    EXPECT_NE(x, 0u);
}
