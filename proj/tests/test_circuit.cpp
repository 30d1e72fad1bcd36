#include "motif/circuit.hpp"
#include "motif/polynomial.hpp"
#include "motif/program.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace motif;
using motif::testing::random_circuit;

namespace {

std::vector<std::int64_t> small_assignment(std::mt19937_64 & rng, std::size_t n)
{
    std::vector<std::int64_t> a(n);
    for (auto & x : a)
        x = static_cast<std::int64_t>(rng() % 7) - 3;
    return a;
}

std::vector<BigInt> to_big(const std::vector<std::int64_t> & a)
{
    return {a.begin(), a.end()};
}

}

TEST(Circuit, ConstantsAndFolding)
{
    Circuit c;
    const auto x = c.var(c.add_variable(VarClass::Sieved, "x"));
    EXPECT_EQ(c.var(0), x);
    const auto z = c.zero(), o = c.one();
    EXPECT_TRUE(c.is_zero(z));
    EXPECT_TRUE(c.is_one(o));
    EXPECT_EQ(c.zero(), z);
    EXPECT_EQ(c.sum({z, x, z}), x);
    EXPECT_EQ(c.sum({}), z);
    EXPECT_EQ(c.product({o, x}), x);
    EXPECT_EQ(c.product({x, z}), z);
    EXPECT_EQ(c.product({}), o);
    const auto lit = c.add_node({z, x});
    EXPECT_EQ(c.children(lit).size(), 2u);
}

TEST(Circuit, ChildrenOfExistingNodeCanBeReused)
{
    Circuit c;
    const auto x = c.var(c.add_variable(VarClass::Sieved));
    const auto y = c.var(c.add_variable(VarClass::Sieved));
    NodeId u = c.product({x, y});
    for (int i = 0; i < 200; ++i) {
        const auto before = std::vector<NodeId>(c.children(u).begin(), c.children(u).end());
        u = i % 2 ? c.product(c.children(u)) : c.sum(c.children(u));
        ASSERT_EQ(std::vector<NodeId>(c.children(u).begin(), c.children(u).end()), before);
    }
}

TEST(Circuit, SizesCountReachableArcsAndSharing)
{
    Circuit c;
    const auto x = c.var(c.add_variable(VarClass::Sieved));
    const auto y = c.var(c.add_variable(VarClass::Sieved));
    const auto s = c.add_node({x, y});
    const auto p = c.mul_node({s, s, x});
    c.add_node({p, y, x}); // unreachable
    const auto root = c.add_node({p, s});
    c.set_root(root);
    EXPECT_EQ(size_T(c), 2u + 3u + 2u);
    // s has three incoming arcs, x two (from s and p)
    EXPECT_EQ(size_S(c), 2u);
    EXPECT_EQ(depth(c), 3u);
    EXPECT_EQ(max_degree(c), 3);
    const auto pr = c.pruned();
    EXPECT_EQ(pr.num_nodes(), 5u);
    EXPECT_EQ(size_T(pr), size_T(c));
    EXPECT_EQ(expand_symbolic(pr), expand_symbolic(c));
}

TEST(Circuit, MaxDegreeOfZeroPolynomial)
{
    Circuit c;
    const auto x = c.var(c.add_variable(VarClass::Sieved));
    c.set_root(c.mul_node({x, c.zero()}));
    EXPECT_EQ(max_degree(c), -1);
    EXPECT_TRUE(expand_symbolic(c).is_zero());
}

TEST(Circuit, DumpFormat)
{
    Circuit c;
    const auto x = c.var(c.add_variable(VarClass::Sieved, "x[a]"));
    const auto z = c.var(c.add_variable(VarClass::DontCare, "rho[0]"));
    c.set_root(c.mul_node({x, z}));
    std::ostringstream out;
    dump(c, out);
    EXPECT_EQ(out.str(), "0 var 0 sieved x[a]\n1 var 1 dontcare rho[0]\n2 mul 0 1\nroot 2\n");
}

TEST(Polynomial, ExpansionOfSmallCircuit)
{
    Circuit c;
    const auto x = c.var(c.add_variable(VarClass::Sieved));
    const auto y = c.var(c.add_variable(VarClass::Sieved));
    const auto s = c.add_node({x, y});
    c.set_root(c.mul_node({s, s, c.add_node({c.one(), x})}));
    // (x + y)^2 (1 + x)
    const auto p = expand_symbolic(c);
    EXPECT_EQ(p.coefficient({0, 0}), 1);
    EXPECT_EQ(p.coefficient({0, 1}), 2);
    EXPECT_EQ(p.coefficient({0, 0, 0}), 1);
    EXPECT_EQ(p.coefficient({0, 0, 1}), 2);
    EXPECT_EQ(p.coefficient({0, 1, 1}), 1);
    EXPECT_EQ(p.size(), 6u);
    EXPECT_EQ(p.homogeneous_part(2).size(), 3u);
    EXPECT_TRUE(is_multilinear({0, 1, 4}));
    EXPECT_FALSE(is_multilinear({0, 1, 1}));
    EXPECT_EQ(expand_symbolic(c, 2).size(), 3u);
    EXPECT_THROW(expand_symbolic(c, 64, 2), CapacityError);
}

TEST(Program, CompiledMatchesNaiveOnRandomCircuits)
{
    std::mt19937_64 rng(21);
    for (int rep = 0; rep < 300; ++rep) {
        const auto c = random_circuit(rng, 2 + rng() % 6, 5 + rng() % 80, 6);
        const auto a = small_assignment(rng, c.num_variables());
        const auto want = evaluate_naive<Int64Ring>(c, std::span<const std::int64_t>(a));
        EXPECT_EQ(evaluate<Int64Ring>(c, std::span<const std::int64_t>(a)), want);
        EXPECT_EQ(evaluate<Int64Ring>(c, std::span<const std::int64_t>(a), {}, false), want);

        const auto big = to_big(a);
        const auto bwant = evaluate_naive<BigIntRing>(c, std::span<const BigInt>(big));
        ASSERT_EQ(evaluate<BigIntRing>(c, std::span<const BigInt>(big)), bwant);
        ASSERT_EQ(expand_symbolic(c).evaluate(big), bwant);

        std::vector<gf2e::FieldElement> fa(c.num_variables());
        for (auto & f : fa)
            f = gf2e::FieldElement{rng()};
        ASSERT_EQ(evaluate<GF2Ring>(c, std::span<const gf2e::FieldElement>(fa)),
                  evaluate_naive<GF2Ring>(c, std::span<const gf2e::FieldElement>(fa)));
    }
}

TEST(Program, PeakLiveWithinSharedPlusDepth)
{
    std::mt19937_64 rng(22);
    for (int rep = 0; rep < 300; ++rep) {
        const auto c = random_circuit(rng, 2 + rng() % 6, 5 + rng() % 200, 8);
        const auto p = compile(c);
        EXPECT_LE(p.peak_live(), size_S(c) + depth(c) + 1);
        EXPECT_LE(p.peak_live(), compile(c, false).peak_live());
    }
}

TEST(Program, MapAssignmentRequiresEveryReachableVariable)
{
    Circuit c;
    const auto x = c.add_variable(VarClass::Sieved, "x");
    const auto y = c.add_variable(VarClass::Sieved, "y");
    c.add_variable(VarClass::Sieved, "unused");
    c.set_root(c.mul_node({c.var(x), c.var(y)}));
    std::map<VarId, std::int64_t> a{{x, 3}, {y, 5}};
    EXPECT_EQ(evaluate<Int64Ring>(c, a), 15);
    a.erase(y);
    EXPECT_THROW(evaluate<Int64Ring>(c, a), Error);
}

TEST(Program, RootIsVariable)
{
    Circuit c;
    c.set_root(c.var(c.add_variable(VarClass::Sieved)));
    const std::vector<std::int64_t> a{9};
    EXPECT_EQ(evaluate<Int64Ring>(c, std::span<const std::int64_t>(a)), 9);
}

TEST(Transform, NormalizeBinaryPreservesPolynomial)
{
    std::mt19937_64 rng(23);
    for (int rep = 0; rep < 200; ++rep) {
        const auto c = random_circuit(rng, 2 + rng() % 4, 5 + rng() % 40, 5);
        const auto b = normalize_binary(c);
        for (NodeId u = 0; u < b.num_nodes(); ++u)
            ASSERT_LE(b.children(u).size(), 2u);
        ASSERT_EQ(expand_symbolic(b), expand_symbolic(c));
    }
}

TEST(Transform, BoundDegreeKeepsExactlyDegreeK)
{
    std::mt19937_64 rng(24);
    for (int rep = 0; rep < 200; ++rep) {
        const int k = 1 + static_cast<int>(rng() % 5);
        const auto c = normalize_binary(random_circuit(rng, 2 + rng() % 4, 5 + rng() % 40, 9, true));
        const auto b = bound_degree(c, k);
        ASSERT_EQ(expand_symbolic(b), expand_symbolic(c).homogeneous_part(static_cast<std::size_t>(k)));
        ASSERT_LE(b.num_nodes(), static_cast<std::size_t>((k + 1) * (k + 1)) * c.num_nodes());
        ASSERT_LE(max_degree(b), k);
    }
}

TEST(Transform, BoundDegreeRejectsWideNodes)
{
    Circuit c;
    const auto x = c.var(c.add_variable(VarClass::Sieved));
    c.set_root(c.add_node({x, x, x}));
    EXPECT_THROW(bound_degree(c, 1), Error);
}
