#include "motif/builders.hpp"
#include "motif/circuit.hpp"
#include "motif/error.hpp"
#include "motif/gf2e.hpp"
#include "motif/oracle.hpp"
#include "motif/polynomial.hpp"
#include "motif/program.hpp"
#include "motif/sieve.hpp"

#include "support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace motif;
using namespace motif::testing;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome
{
    bool pass = true;
    std::string detail;
};

std::string fixed(double x, int digits = 2)
{
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << x;
    return s.str();
}

// detection sweep

constexpr int kSweepMaxN = 6;
constexpr int kSweepColors = 3;
constexpr int kSweepMaxK = 4;
constexpr int kSweepMaxR = 6;
constexpr int kSweepTrials = 3;
constexpr double kSweepBudgetSeconds = 600;
const std::vector<std::uint64_t> kSweepSeeds = {1, 2, 3, 4, 5};
const std::vector<int> kWeightBudgets = {0, 1, 2, 3, 4, 6};
const std::vector<int> kComponentBudgets = {1, 2, 3};

// ab, aa, aab, abc, aabc, abbc over the first three color ids
const std::vector<std::map<ColorId, int>> kSweepMotifs = {
    {{0, 1}, {1, 1}}, {{0, 2}}, {{0, 2}, {1, 1}}, {{0, 1}, {1, 1}, {2, 1}}, {{0, 2}, {1, 1}, {2, 1}}, {{0, 1}, {1, 2}, {2, 1}},
};

Weight sweep_weight(Edge e) { return static_cast<Weight>((e.u + 2 * e.v) % 3); }

std::vector<MotifQuery> sweep_queries(const ColoredGraph & g)
{
    const int n = static_cast<int>(g.n());
    const int kmax = std::min(kSweepMaxK, n);
    std::vector<MotifQuery> out;
    auto add = [&](Variant v, int k, std::optional<int> r, std::optional<Motif> m) {
        MotifQuery q;
        q.variant = v;
        q.k = k;
        q.r = r;
        q.motif = std::move(m);
        out.push_back(std::move(q));
    };
    for (int k = 1; k <= kmax; ++k) {
        add(Variant::CGM, k, std::nullopt, std::nullopt);
        for (int r : kWeightBudgets)
            add(Variant::WCGM, k, r, std::nullopt);
    }
    if (static_cast<int>(g.num_used_colors()) <= kmax)
        add(Variant::XCGM, static_cast<int>(g.num_used_colors()), std::nullopt, std::nullopt);
    for (const auto & counts : kSweepMotifs) {
        const Motif m(counts);
        const int size = m.size();
        for (int k = 1; k <= std::min(kmax, size); ++k) {
            add(Variant::MGM, k, std::nullopt, m);
            for (int r = k; r <= std::min(kSweepMaxR, n); ++r)
                add(Variant::MGMG, k, r, m);
            for (int r : kWeightBudgets)
                add(Variant::WMGM, k, r, m);
        }
        if (size <= kmax) {
            add(Variant::XMGM, size, std::nullopt, m);
            for (int r : kComponentBudgets)
                add(Variant::MINCC, size, r, m);
        }
    }
    return out;
}

Outcome detection_sweep()
{
    const auto t0 = Clock::now();
    std::size_t graphs = 0, instances = 0, runs = 0, positives = 0, fp = 0, fn = 0;
    std::string first_bad;
    for (int n = 1; n <= kSweepMaxN; ++n) {
        const auto shapes = connected_graphs(static_cast<std::size_t>(n));
        const auto cols = colorings(static_cast<std::size_t>(n), kSweepColors);
        for (const auto & edges : shapes)
            for (const auto & col : cols) {
                std::vector<Weight> w;
                for (auto e : edges)
                    w.push_back(sweep_weight(e));
                const ColoredGraph g(static_cast<std::size_t>(n), col, edges, w);
                ++graphs;
                for (const auto & q : sweep_queries(g)) {
                    validate_query(g, q);
                    const bool truth = solve_brute(g, q).found;
                    const auto inst = build_instance(g, q);
                    const Detector detector(inst.circuit, inst.K);
                    ++instances;
                    positives += truth;
                    for (auto seed : kSweepSeeds) {
                        DetectOptions opt;
                        opt.seed = seed;
                        opt.trials = kSweepTrials;
                        opt.stop_when_found = true;
                        const bool got = detector.run(opt).found;
                        ++runs;
                        if (got != truth) {
                            (got ? fp : fn) += 1;
                            if (first_bad.empty())
                                first_bad = std::string(to_string(q.variant)) + " n=" + std::to_string(n) +
                                            " k=" + std::to_string(q.k) + " seed=" + std::to_string(seed);
                        }
                    }
                }
            }
    }
    const double secs = since(t0);
    Outcome o;
    o.pass = fp == 0 && fn == 0 && secs < kSweepBudgetSeconds;
    o.detail = std::to_string(graphs) + " colored graphs, " + std::to_string(instances) + " queries (" +
               std::to_string(positives) + " yes), " + std::to_string(runs) + " runs; false positives " +
               std::to_string(fp) + ", false negatives " + std::to_string(fn) + "; " + fixed(secs, 1) + " s (limit " +
               fixed(kSweepBudgetSeconds, 0) + ")";
    if (! first_bad.empty())
        o.detail += "; first mismatch " + first_bad;
    return o;
}

// exact counting

constexpr int kCountInstances = 500;
constexpr int kCountMaxN = 12;
constexpr int kCountMaxK = 6;
constexpr double kCountBudgetSeconds = 300;

ColoredGraph load_fixture(const std::string & graph, const std::string & colors)
{
    std::ifstream gi(std::string(MOTIF_FIXTURES) + "/" + graph);
    std::ifstream ci(std::string(MOTIF_FIXTURES) + "/" + colors);
    return load_graph(gi, ci);
}

Outcome exact_counting()
{
    const auto t0 = Clock::now();
    std::mt19937_64 rng(500);
    int bad_count = 0, bad_rooted = 0, nonzero = 0;
    BigInt largest = 0;
    for (int rep = 0; rep < kCountInstances; ++rep) {
        const int k = 1 + static_cast<int>(rng() % kCountMaxK);
        const int n = k + static_cast<int>(rng() % static_cast<std::uint64_t>(kCountMaxN - k + 1));
        std::vector<ColorId> col(static_cast<std::size_t>(n));
        for (int u = 0; u < n; ++u)
            col[static_cast<std::size_t>(u)] = static_cast<ColorId>(u < k ? u : static_cast<int>(rng() % static_cast<std::uint64_t>(k)));
        std::shuffle(col.begin(), col.end(), rng);
        const double p = 0.15 + 0.5 * std::uniform_real_distribution<double>(0, 1)(rng);
        std::vector<Edge> edges;
        for (VertexId u = 0; u < static_cast<VertexId>(n); ++u)
            for (VertexId v = u + 1; v < static_cast<VertexId>(n); ++v)
                if (std::bernoulli_distribution(p)(rng))
                    edges.push_back({u, v});
        const ColoredGraph g(static_cast<std::size_t>(n), col, edges);
        MotifQuery q;
        q.variant = Variant::XCGM;
        q.k = k;
        const auto inst = build_xcgm_counting(g, k);
        const BigInt rooted = count_exact_multilinear(inst.circuit, inst.sieved);
        const BigInt brute = count_brute(g, q);
        bad_count += rooted != brute * k;
        bad_rooted += rooted != count_rooted_brute(g, q);
        nonzero += brute != 0;
        largest = std::max(largest, brute);
    }
    MotifQuery tq;
    tq.variant = Variant::XCGM;
    tq.k = 3;
    const auto tri = load_fixture("triangle.graph", "triangle.colors");
    const auto tinst = build_xcgm_counting(tri, 3);
    const BigInt troot = count_exact_multilinear(tinst.circuit, tinst.sieved);
    const bool triangle_ok = troot == 9 && troot / 3 == 3 && count_brute(tri, tq) == 3;
    const double secs = since(t0);
    Outcome o;
    o.pass = bad_count == 0 && bad_rooted == 0 && triangle_ok && secs < kCountBudgetSeconds;
    o.detail = std::to_string(kCountInstances) + " instances (" + std::to_string(nonzero) + " nonzero, max " +
               largest.str() + "); N_r != k*N_u on " + std::to_string(bad_count) + ", N_r != brute rooted on " +
               std::to_string(bad_rooted) + "; triangle count " + BigInt(troot / 3).str() + "; " + fixed(secs, 1) +
               " s (limit " + fixed(kCountBudgetSeconds, 0) + ")";
    return o;
}

// parity pitfall

constexpr int kParitySeeds = 100;

Outcome parity_pitfall()
{
    const auto g = load_fixture("edge.graph", "edge.colors");
    const auto literal = build_cgm(g, 2, false);
    const auto canonical = build_cgm(g, 2, true);
    int literal_nonzero = 0, canonical_found = 0;
    for (int seed = 1; seed <= kParitySeeds; ++seed) {
        DetectOptions opt;
        opt.seed = static_cast<std::uint64_t>(seed);
        const auto a = detect_multilinear(literal.circuit, literal.K, opt);
        for (auto v : a.per_trial_outputs)
            literal_nonzero += ! v.is_zero();
        canonical_found += detect_multilinear(canonical.circuit, canonical.K, opt).found;
    }
    const auto poly = expand_symbolic(literal.circuit);
    Monomial xy{literal.color_var[0], literal.color_var[1]};
    std::sort(xy.begin(), xy.end());
    Outcome o;
    o.pass = literal_nonzero == 0 && canonical_found == kParitySeeds;
    o.detail = "literal circuit: coefficient of x_a x_b " + poly.coefficient(xy).str() + ", nonzero accumulators " +
               std::to_string(literal_nonzero) + "/" + std::to_string(kParitySeeds * DetectOptions{}.trials) +
               "; canonical found " + std::to_string(canonical_found) + "/" + std::to_string(kParitySeeds);
    return o;
}

// zeta and Moebius

constexpr int kZetaCircuits = 200;
constexpr int kZetaMaxK = 5;
constexpr int kZetaMaxNodes = 50;

Outcome zeta_identities()
{
    std::mt19937_64 rng(200);
    int zeta_bad = 0, inverse_bad = 0, checked_subsets = 0;
    for (int rep = 0; rep < kZetaCircuits; ++rep) {
        const int k = 1 + static_cast<int>(rng() % kZetaMaxK);
        const auto nodes = 1 + rng() % kZetaMaxNodes;
        const auto c = random_circuit(rng, static_cast<std::size_t>(k), nodes, k);
        std::vector<VarId> X(static_cast<std::size_t>(k));
        for (int t = 0; t < k; ++t)
            X[static_cast<std::size_t>(t)] = static_cast<VarId>(t);
        const auto poly = expand_symbolic(c);
        // N_T: coefficient mass of monomials whose support is exactly T
        std::vector<BigInt> exact(std::size_t{1} << k, 0);
        BigInt multilinear = 0;
        for (const auto & [m, coef] : poly.terms()) {
            std::uint64_t support = 0;
            for (auto v : m)
                support |= std::uint64_t{1} << v;
            exact[support] += coef;
            if (is_multilinear(m) && m.size() == static_cast<std::size_t>(k))
                multilinear += coef;
        }
        for (std::uint64_t S = 0; S < exact.size(); ++S) {
            BigInt sum = 0;
            for (std::uint64_t T = S;; T = (T - 1) & S) {
                sum += exact[T];
                if (T == 0)
                    break;
            }
            zeta_bad += subset_evaluation(c, X, S) != sum;
            ++checked_subsets;
        }
        inverse_bad += count_exact_multilinear(c, X) != multilinear;
        inverse_bad += count_exact_multilinear_serial(c, X) != multilinear;
    }
    Outcome o;
    o.pass = zeta_bad == 0 && inverse_bad == 0;
    o.detail = std::to_string(kZetaCircuits) + " circuits, " + std::to_string(checked_subsets) +
               " subsets; zeta mismatches " + std::to_string(zeta_bad) + ", inversion mismatches " +
               std::to_string(inverse_bad);
    return o;
}

// degree bounding

constexpr int kBoundCircuits = 200;

Outcome degree_bounding()
{
    std::mt19937_64 rng(201);
    int poly_bad = 0, size_bad = 0;
    double worst = 0;
    for (int rep = 0; rep < kBoundCircuits; ++rep) {
        const int k = 1 + static_cast<int>(rng() % 5);
        const auto raw = random_circuit(rng, 2 + rng() % 4, 5 + rng() % 40, 9, true);
        const auto b = bound_degree(normalize_binary(raw), k);
        poly_bad += expand_symbolic(b) != expand_symbolic(raw).homogeneous_part(static_cast<std::size_t>(k));
        const double ratio = static_cast<double>(b.num_nodes()) / static_cast<double>(raw.num_nodes());
        worst = std::max(worst, ratio / ((k + 1) * (k + 1)));
        size_bad += b.num_nodes() > static_cast<std::size_t>((k + 1) * (k + 1)) * raw.num_nodes();
    }
    Outcome o;
    o.pass = poly_bad == 0 && size_bad == 0;
    o.detail = std::to_string(kBoundCircuits) + " circuits; degree-k part mismatches " + std::to_string(poly_bad) +
               ", size bound violations " + std::to_string(size_bad) + " (largest nodes/((k+1)^2 |C|) = " +
               fixed(worst, 3) + ")";
    return o;
}

// scaling and space

constexpr std::size_t kScaleN = 200;
constexpr std::size_t kScaleM = 800;
constexpr std::size_t kScaleColors = 18;
constexpr std::uint64_t kScaleGraphSeed = 2024;
constexpr int kScaleKLo = 10;
constexpr int kScaleKHi = 18;
constexpr double kRatioLo = 1.7;
constexpr double kRatioHi = 2.6;
// min over rounds, same count at every k
constexpr int kScaleRounds = 5;
constexpr int kWeightedK = 10;
const std::vector<int> kWeightedBudgets = {8, 16, 32};
constexpr std::uint64_t kWeightSeed = 99;
constexpr double kExponentLo = 1.5;
constexpr double kExponentHi = 2.5;
constexpr double kScaleBudgetSeconds = 900;
constexpr double kSpaceTolerance = 0.10;

ColoredGraph scaling_graph()
{
    std::mt19937_64 rng(kScaleGraphSeed);
    return random_graph_m(rng, kScaleN, kScaleM, kScaleColors);
}

// same topology and colors; weights uniform in [0, 2r/(k-1)], so a
// k-vertex tree has expected weight about r
ColoredGraph weighted_scaling_graph(const ColoredGraph & g, int r)
{
    std::mt19937_64 rng(kWeightSeed);
    const auto top = static_cast<std::uint64_t>(2 * r / (kWeightedK - 1));
    std::vector<Weight> w;
    for (std::size_t e = 0; e < g.m(); ++e)
        w.push_back(static_cast<Weight>(rng() % (top + 1)));
    return ColoredGraph(g.n(), std::vector<ColorId>(g.colors().begin(), g.colors().end()),
                        std::vector<Edge>(g.edges().begin(), g.edges().end()), w);
}

double detect_seconds(const BuiltInstance & inst)
{
    DetectOptions opt;
    opt.trials = 1;
    const auto t0 = Clock::now();
    const auto r = detect_multilinear(inst.circuit, inst.K, opt);
    const double s = since(t0);
    if (! r.found)
        throw Error("scaling instance unexpectedly has no solution");
    return s;
}

struct ScalingData
{
    std::map<int, BuiltInstance> cgm;
};

Outcome complexity_scaling(ScalingData & data)
{
    const auto t0 = Clock::now();
    const auto g = scaling_graph();
    for (int k = kScaleKLo; k <= kScaleKHi; ++k)
        data.cgm.emplace(k, build_cgm(g, k));
    std::map<int, double> best;
    for (int round = 0; round < kScaleRounds; ++round)
        for (int k = kScaleKLo; k <= kScaleKHi; ++k) {
            const double s = detect_seconds(data.cgm.at(k));
            best[k] = best.contains(k) ? std::min(best[k], s) : s;
        }
    bool ratios_ok = true;
    std::string ratios;
    for (int k = kScaleKLo; k < kScaleKHi; ++k) {
        const double q = best[k + 1] / best[k];
        ratios_ok &= q >= kRatioLo && q <= kRatioHi;
        ratios += (ratios.empty() ? "" : " ") + fixed(q);
    }

    std::vector<double> lx, ly;
    std::string wtimes;
    for (int r : kWeightedBudgets) {
        const auto wg = weighted_scaling_graph(g, r);
        double bestw = 0;
        for (int round = 0; round < kScaleRounds; ++round) {
            const auto s0 = Clock::now();
            WeightedQuery q;
            q.k = kWeightedK;
            q.r = r;
            const auto inst = build_weighted(wg, q);
            detect_seconds(inst);
            const double s = since(s0);
            bestw = round == 0 ? s : std::min(bestw, s);
        }
        lx.push_back(std::log(static_cast<double>(r)));
        ly.push_back(std::log(bestw));
        wtimes += (wtimes.empty() ? "" : " ") + fixed(bestw);
    }
    const double mx = (lx[0] + lx[1] + lx[2]) / 3, my = (ly[0] + ly[1] + ly[2]) / 3;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    const double exponent = sxy / sxx;
    const bool exponent_ok = exponent >= kExponentLo && exponent <= kExponentHi;
    const double secs = since(t0);

    Outcome o;
    o.pass = ratios_ok && exponent_ok && secs < kScaleBudgetSeconds;
    o.detail = "cgm k=" + std::to_string(kScaleKLo) + ".." + std::to_string(kScaleKHi) + " times " +
               fixed(best[kScaleKLo], 3) + ".." + fixed(best[kScaleKHi], 1) + " s, ratios [" + ratios + "] in [" +
               fixed(kRatioLo, 1) + ", " + fixed(kRatioHi, 1) + "]; wcgm k=" + std::to_string(kWeightedK) +
               " r=8,16,32 build+run " + wtimes + " s, exponent " + fixed(exponent) + " in [" + fixed(kExponentLo, 1) +
               ", " + fixed(kExponentHi, 1) + "]; " + fixed(secs, 0) + " s (limit " + fixed(kScaleBudgetSeconds, 0) + ")";
    return o;
}

Outcome space_contract(ScalingData & data)
{
    const auto g = scaling_graph();
    for (int k : {10, 16})
        if (! data.cgm.contains(k))
            data.cgm.emplace(k, build_cgm(g, k));
    DetectOptions opt;
    opt.trials = 1;
    const auto & c10 = data.cgm.at(10);
    const auto & c16 = data.cgm.at(16);
    const auto r10 = detect_multilinear(c10.circuit, c10.K, opt);
    const auto r16 = detect_multilinear(c16.circuit, c16.K, opt);
    const double s10 = static_cast<double>(size_S(c10.circuit));
    const double s16 = static_cast<double>(size_S(c16.circuit));
    const double n10 = static_cast<double>(r10.peak_live_field_elements) / s10;
    const double n16 = static_cast<double>(r16.peak_live_field_elements) / s16;
    const double drift = std::abs(n16 / n10 - 1);
    // the k=10 circuit swept with 2^16 subsets instead of 2^10
    const auto wide = detect_multilinear(c10.circuit, 16, opt);
    const bool fixed_circuit = wide.peak_live_field_elements == r10.peak_live_field_elements &&
                               wide.worker_field_elements - r10.worker_field_elements ==
                                   (16 - 10) * c10.sieved.size();
    Outcome o;
    o.pass = drift < kSpaceTolerance && fixed_circuit;
    o.detail = "peak live " + std::to_string(r10.peak_live_field_elements) + " (k=10, S=" + fixed(s10, 0) + ") vs " +
               std::to_string(r16.peak_live_field_elements) + " (k=16, S=" + fixed(s16, 0) + "); peak/S " +
               fixed(n10, 3) + " vs " + fixed(n16, 3) + ", drift " + fixed(100 * drift, 1) + "% < " +
               fixed(100 * kSpaceTolerance, 0) + "%; k=10 circuit under 2^10 and 2^16 subsets: peak " +
               std::to_string(r10.peak_live_field_elements) + " and " + std::to_string(wide.peak_live_field_elements);
    return o;
}

// field

constexpr int kFieldPairs = 100000;
constexpr int kAxiomTriples = 5000;

Outcome field_layer()
{
    std::mt19937_64 rng(64);
    auto elem = [&] { return gf2e::FieldElement{rng()}; };
    int fast_bad = 0, portable_bad = 0, axioms_bad = 0;
    for (int i = 0; i < kFieldPairs; ++i) {
        const auto a = elem(), b = elem();
        const auto want = gf2e::mul_reference(a, b);
        fast_bad += gf2e::mul(a, b) != want;
        portable_bad += gf2e::mul_portable(a, b) != want;
    }
    const auto zero = gf2e::FieldElement::zero(), one = gf2e::FieldElement::one();
    for (int i = 0; i < kAxiomTriples; ++i) {
        const auto a = elem(), b = elem(), c = elem();
        axioms_bad += a + b != b + a;
        axioms_bad += (a + b) + c != a + (b + c);
        axioms_bad += a * b != b * a;
        axioms_bad += (a * b) * c != a * (b * c);
        axioms_bad += a * (b + c) != a * b + a * c;
        axioms_bad += a + zero != a || a * one != a || a * zero != zero || a + a != zero;
    }
    // a^(2^64 - 2) inverts a
    for (int i = 0; i < 100; ++i) {
        const auto a = elem();
        if (a.is_zero())
            continue;
        auto inv = one, sq = a;
        for (int bit = 1; bit < 64; ++bit) {
            sq = sq * sq;
            inv = inv * sq;
        }
        axioms_bad += a * inv != one;
    }
    axioms_bad += gf2e::mul(gf2e::FieldElement{1ULL << 63}, gf2e::FieldElement{2}) != gf2e::FieldElement{0x1B};
    Outcome o;
    o.pass = fast_bad == 0 && portable_bad == 0 && axioms_bad == 0;
    o.detail = std::to_string(kFieldPairs) + " pairs: fast mismatches " + std::to_string(fast_bad) + " (" +
               (gf2e::kHardwareClmul ? "pclmul" : "portable") + "), portable mismatches " +
               std::to_string(portable_bad) + "; axiom failures " + std::to_string(axioms_bad) + " over " +
               std::to_string(kAxiomTriples) + " triples";
    return o;
}

}

int main(int argc, char ** argv)
{
    std::set<std::string> only(argv + 1, argv + argc);
    auto wanted = [&](const std::string & n) { return only.empty() || only.contains(n); };
    ScalingData data;
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"field", field_layer},
        {"zeta", zeta_identities},
        {"bound", degree_bounding},
        {"parity", parity_pitfall},
        {"counting", exact_counting},
        {"detection", detection_sweep},
        {"scaling", [&] { return complexity_scaling(data); }},
        {"space", [&] { return space_contract(data); }},
    };
    int failed = 0;
    for (const auto & [name, run] : criteria) {
        if (! wanted(name))
            continue;
        Outcome o;
        try {
            o = run();
        } catch (const std::exception & e) {
            o.pass = false;
            o.detail = std::string("threw: ") + e.what();
        }
        failed += ! o.pass;
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
