#include "motif/sieve.hpp"

#include "motif/error.hpp"
#include "motif/program.hpp"

#include <omp.h>

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#include <immintrin.h>
#define MOTIF_WIDE_KERNEL 1
#endif

#include <algorithm>
#include <bit>
#include <limits>
#include <memory>

namespace motif {

namespace {
    constexpr int kLanes = 4;

    void check_degree(int K)
    {
        if (K < 0)
            throw Error("sieve degree must be nonnegative");
        if (K > kMaxSieveDegree)
            throw CapacityError("sieve degree " + std::to_string(K) + " exceeds " + std::to_string(kMaxSieveDegree) +
                                " (subsets are enumerated in one machine word)");
    }

    std::vector<bool> used_variables(const Circuit & c)
    {
        std::vector<bool> used(c.num_variables(), false);
        const auto keep = c.reachable();
        for (NodeId u = 0; u < c.num_nodes(); ++u)
            if (keep[u] && c.op(u) == Op::Var)
                used[c.node(u).var] = true;
        return used;
    }

    int worker_count(int requested)
    {
        return requested > 0 ? requested : omp_get_max_threads();
    }

    /// One batch of kLanes evaluations over GF(2^64). Values are laid out
    /// lane-minor: v[index * kLanes + lane].
    void run_lanes(const Program & p, std::uint64_t * v)
    {
        using gf2e::clmul;
        using gf2e::reduce;
        gf2e::Wide acc[kLanes];
        for (const auto & in : p.code) {
            std::uint64_t * d = v + std::size_t{in.dst} * kLanes;
            const std::uint64_t * a = v + std::size_t{in.a} * kLanes;
            switch (in.op) {
                case OpCode::Zero:
                    for (int l = 0; l < kLanes; ++l)
                        d[l] = 0;
                    break;
                case OpCode::One:
                    for (int l = 0; l < kLanes; ++l)
                        d[l] = 1;
                    break;
                case OpCode::Copy:
                    for (int l = 0; l < kLanes; ++l)
                        d[l] = a[l];
                    break;
                case OpCode::Add:
                    for (int l = 0; l < kLanes; ++l)
                        d[l] ^= a[l];
                    break;
                case OpCode::Mul:
                    for (int l = 0; l < kLanes; ++l)
                        d[l] = reduce(clmul(d[l], a[l]));
                    break;
                case OpCode::AccClear:
                    for (int l = 0; l < kLanes; ++l)
                        acc[l] = {};
                    break;
                case OpCode::AccMac: {
                    const std::uint64_t * b = v + std::size_t{in.b} * kLanes;
                    for (int l = 0; l < kLanes; ++l)
                        acc[l] ^= clmul(a[l], b[l]);
                    break;
                }
                case OpCode::AccStore:
                    for (int l = 0; l < kLanes; ++l)
                        d[l] = reduce(acc[l]);
                    break;
                case OpCode::AccAdd:
                    for (int l = 0; l < kLanes; ++l)
                        d[l] ^= reduce(acc[l]);
                    break;
            }
        }
    }

#ifdef MOTIF_WIDE_KERNEL
    // eight lanes in one zmm register; even and odd lanes go through
    // separate carryless products and are interleaved again before folding
    __attribute__((target("avx512f,vpclmulqdq"), always_inline)) inline __m512i fold8(__m512i e, __m512i o)
    {
        const __m512i lo = _mm512_unpacklo_epi64(e, o);
        const __m512i hi = _mm512_unpackhi_epi64(e, o);
        const __m512i over = _mm512_ternarylogic_epi64(_mm512_srli_epi64(hi, 63), _mm512_srli_epi64(hi, 61),
                                                       _mm512_srli_epi64(hi, 60), 0x96);
        const __m512i t = _mm512_xor_si512(hi, over);
        const __m512i r = _mm512_ternarylogic_epi64(lo, t, _mm512_slli_epi64(t, 1), 0x96);
        return _mm512_ternarylogic_epi64(r, _mm512_slli_epi64(t, 3), _mm512_slli_epi64(t, 4), 0x96);
    }

    // Z registers per value: one dispatch serves 8 * Z lanes
    template <int Z>
    __attribute__((target("avx512f,vpclmulqdq"))) void run_lanes_wide(const Program & p, std::uint64_t * v)
    {
        constexpr std::size_t L = 8 * Z;
        __m512i acc_e[Z], acc_o[Z];
        for (int z = 0; z < Z; ++z)
            acc_e[z] = acc_o[z] = _mm512_setzero_si512();
        const Instr * code = p.code.data();
        const std::size_t n = p.code.size();
        for (std::size_t k = 0; k < n; ++k) {
            const Instr in = code[k];
            std::uint64_t * d = v + std::size_t{in.dst} * L;
            const std::uint64_t * a = v + std::size_t{in.a} * L;
            switch (in.op) {
                case OpCode::Zero:
                    for (int z = 0; z < Z; ++z)
                        _mm512_storeu_si512(d + 8 * z, _mm512_setzero_si512());
                    break;
                case OpCode::One:
                    for (int z = 0; z < Z; ++z)
                        _mm512_storeu_si512(d + 8 * z, _mm512_set1_epi64(1));
                    break;
                case OpCode::Copy:
                    for (int z = 0; z < Z; ++z)
                        _mm512_storeu_si512(d + 8 * z, _mm512_loadu_si512(a + 8 * z));
                    break;
                case OpCode::Add:
                    for (int z = 0; z < Z; ++z)
                        _mm512_storeu_si512(d + 8 * z, _mm512_xor_si512(_mm512_loadu_si512(d + 8 * z), _mm512_loadu_si512(a + 8 * z)));
                    break;
                case OpCode::Mul:
                    for (int z = 0; z < Z; ++z) {
                        const __m512i x = _mm512_loadu_si512(d + 8 * z);
                        const __m512i y = _mm512_loadu_si512(a + 8 * z);
                        _mm512_storeu_si512(d + 8 * z, fold8(_mm512_clmulepi64_epi128(x, y, 0x00), _mm512_clmulepi64_epi128(x, y, 0x11)));
                    }
                    break;
                case OpCode::AccClear:
                    for (int z = 0; z < Z; ++z)
                        acc_e[z] = acc_o[z] = _mm512_setzero_si512();
                    break;
                case OpCode::AccMac: {
                    const std::uint64_t * b = v + std::size_t{in.b} * L;
                    for (int z = 0; z < Z; ++z) {
                        const __m512i x = _mm512_loadu_si512(a + 8 * z);
                        const __m512i y = _mm512_loadu_si512(b + 8 * z);
                        acc_e[z] = _mm512_xor_si512(acc_e[z], _mm512_clmulepi64_epi128(x, y, 0x00));
                        acc_o[z] = _mm512_xor_si512(acc_o[z], _mm512_clmulepi64_epi128(x, y, 0x11));
                    }
                    break;
                }
                case OpCode::AccStore:
                    for (int z = 0; z < Z; ++z)
                        _mm512_storeu_si512(d + 8 * z, fold8(acc_e[z], acc_o[z]));
                    break;
                case OpCode::AccAdd:
                    for (int z = 0; z < Z; ++z)
                        _mm512_storeu_si512(d + 8 * z, _mm512_xor_si512(_mm512_loadu_si512(d + 8 * z), fold8(acc_e[z], acc_o[z])));
                    break;
            }
        }
    }

    // never more lanes than subsets; 32 lanes only while one batch stays small
    int wide_lanes(const Program & p, int K)
    {
        if (K < 4)
            return 8;
        if (K < 5 || p.value_count() > 4096)
            return 16;
        return 32;
    }

    bool wide_kernel_supported()
    {
        static const bool ok = __builtin_cpu_supports("avx512f") && __builtin_cpu_supports("vpclmulqdq");
        return ok;
    }
#else
    int wide_lanes(const Program &, int) { return kLanes; }
    bool wide_kernel_supported() { return false; }
#endif

    /// Nonnegative integers with overflow detection; the counting fast path.
    struct CheckedRing
    {
        using value_type = std::uint64_t;
        using acc_type = std::uint64_t;
        mutable bool overflow = false;

        value_type zero() const { return 0; }
        value_type one() const { return 1; }
        void add(value_type & d, value_type a) const { overflow |= __builtin_add_overflow(d, a, &d); }
        void mul(value_type & d, value_type a) const { overflow |= __builtin_mul_overflow(d, a, &d); }
        void acc_clear(acc_type & acc) const { acc = 0; }
        void mac(acc_type & acc, value_type a, value_type b) const
        {
            value_type t;
            overflow |= __builtin_mul_overflow(a, b, &t);
            overflow |= __builtin_add_overflow(acc, t, &acc);
        }
        value_type acc_value(const acc_type & acc) const { return acc; }
    };

    void check_counting_input(const Circuit & c, std::span<const VarId> X)
    {
        const int K = static_cast<int>(X.size());
        check_degree(K);
        std::vector<bool> in_x(c.num_variables(), false);
        for (auto v : X) {
            if (v >= c.num_variables())
                throw Error("counting set names unregistered variable " + std::to_string(v));
            if (in_x[v])
                throw Error("counting set lists variable " + c.variable(v).name + " twice");
            in_x[v] = true;
        }
        const auto used = used_variables(c);
        for (VarId v = 0; v < c.num_variables(); ++v)
            if (used[v] && ! in_x[v])
                throw Error("variable " + c.variable(v).name + " is outside the counting set");
        if (max_degree(c) > K)
            throw Error("circuit is not " + std::to_string(K) + "-bounded (degree " + std::to_string(max_degree(c)) +
                        "); apply bound_degree first");
    }

    bool odd_complement(int K, std::uint64_t mask) { return (K - std::popcount(mask)) & 1; }
}

SieveAssignment draw_assignment(const Circuit & c, int K, std::uint64_t seed, int trial)
{
    check_degree(K);
    SieveAssignment s;
    s.K = K;
    for (VarId v = 0; v < c.num_variables(); ++v)
        (c.variable(v).cls == VarClass::Sieved ? s.sieved : s.dontcare).push_back(v);
    gf2e::CounterRng rng(seed, static_cast<std::uint64_t>(trial));
    const std::size_t ns = s.sieved.size();
    s.W.resize(ns * static_cast<std::size_t>(K));
    for (std::size_t i = 0; i < s.W.size(); ++i)
        s.W[i] = gf2e::FieldElement{rng.at(i)};
    s.zvals.resize(s.dontcare.size());
    for (std::size_t z = 0; z < s.zvals.size(); ++z)
        s.zvals[z] = gf2e::FieldElement{rng.at(s.W.size() + z)};
    return s;
}

namespace {
    template <int L, void (*Run)(const Program &, std::uint64_t *)>
    gf2e::FieldElement sweep_parallel(const Program & p, const SieveAssignment & s, int threads)
    {
        const int K = s.K;
        const std::size_t ns = s.sieved.size();
        const std::uint64_t total = std::uint64_t{1} << K;
        // up to 256 groups of L blocks, each block at least 16 subsets long when K allows
        const std::uint64_t wanted_groups = std::clamp<std::uint64_t>(total / (std::uint64_t{L} * 16), 1, 256);
        const std::uint64_t blocks = std::min(total, std::bit_floor(wanted_groups) * L);
        const std::uint64_t block_len = total / blocks;
        const std::uint64_t groups = (blocks + L - 1) / L;

        // column-major copy of W so one label flip walks memory linearly
        std::vector<std::uint64_t> column(ns * static_cast<std::size_t>(K));
        for (std::size_t i = 0; i < ns; ++i)
            for (int j = 0; j < K; ++j)
                column[static_cast<std::size_t>(j) * ns + i] = s.W[i * static_cast<std::size_t>(K) + static_cast<std::size_t>(j)].bits();

        std::uint64_t result = 0;
#pragma omp parallel num_threads(threads) reduction(^ : result) if (groups > 1)
        {
            const std::size_t words = p.value_count() * L;
            std::vector<std::uint64_t> storage(words + 8, 0);
            void * raw = storage.data();
            std::size_t room = storage.size() * sizeof(std::uint64_t);
            auto * values = static_cast<std::uint64_t *>(std::align(64, words * sizeof(std::uint64_t), raw, room));
            for (std::size_t z = 0; z < s.dontcare.size(); ++z)
                for (int l = 0; l < L; ++l)
                    values[std::size_t{s.dontcare[z]} * L + static_cast<std::size_t>(l)] = s.zvals[z].bits();

#pragma omp for schedule(dynamic, 1)
            for (std::uint64_t g = 0; g < groups; ++g) {
                int valid = 0;
                for (int l = 0; l < L; ++l) {
                    const std::uint64_t block = g * L + static_cast<std::uint64_t>(l);
                    if (block >= blocks) {
                        for (std::size_t i = 0; i < ns; ++i)
                            values[std::size_t{s.sieved[i]} * L + static_cast<std::size_t>(l)] = 0;
                        continue;
                    }
                    ++valid;
                    const std::uint64_t start = block * block_len;
                    const std::uint64_t gray = start ^ (start >> 1);
                    for (std::size_t i = 0; i < ns; ++i) {
                        std::uint64_t x = 0;
                        for (std::uint64_t bits = gray; bits; bits &= bits - 1)
                            x ^= column[static_cast<std::size_t>(std::countr_zero(bits)) * ns + i];
                        values[std::size_t{s.sieved[i]} * L + static_cast<std::size_t>(l)] = x;
                    }
                }
                for (std::uint64_t step = 0; step < block_len; ++step) {
                    if (step) {
                        // start is a multiple of block_len, so the flipped label is ctz(step) in every lane
                        const std::uint64_t * col = column.data() + static_cast<std::size_t>(std::countr_zero(step)) * ns;
                        for (std::size_t i = 0; i < ns; ++i) {
                            std::uint64_t * x = values + std::size_t{s.sieved[i]} * L;
                            for (int l = 0; l < L; ++l)
                                x[l] ^= col[i];
                        }
                    }
                    Run(p, values);
                    const std::uint64_t * out = values + std::size_t{p.result} * L;
                    for (int l = 0; l < valid; ++l)
                        result ^= out[l];
                }
            }
        }
        return gf2e::FieldElement{result};
    }
}

Detector::Detector(const Circuit & c, int K) : circuit_(&c), K_(K)
{
    check_degree(K);
    program_ = compile(c);
}

DetectionReport Detector::run(const DetectOptions & opt) const
{
    if (opt.trials < 1)
        throw Error("at least one trial is required");
    const auto & p = program_;
    DetectionReport r;
    r.seed = opt.seed;
    r.K = K_;
    r.peak_live_field_elements = p.peak_live();
    const int threads = worker_count(opt.threads);
    const bool wide = opt.wide_kernel && wide_kernel_supported();
    r.wide_kernel = wide;
    const int lanes = wide ? wide_lanes(p, K_) : kLanes;
    for (int t = 0; t < opt.trials; ++t) {
        const auto s = draw_assignment(*circuit_, K_, opt.seed, t);
        if (t == 0)
            r.worker_field_elements = p.value_count() * static_cast<std::size_t>(lanes) + s.W.size() + s.zvals.size();
#ifdef MOTIF_WIDE_KERNEL
        gf2e::FieldElement out;
        switch (lanes) {
            case 32: out = sweep_parallel<32, run_lanes_wide<4>>(p, s, threads); break;
            case 16: out = sweep_parallel<16, run_lanes_wide<2>>(p, s, threads); break;
            case 8: out = sweep_parallel<8, run_lanes_wide<1>>(p, s, threads); break;
            default: out = sweep_parallel<kLanes, run_lanes>(p, s, threads); break;
        }
#else
        const auto out = sweep_parallel<kLanes, run_lanes>(p, s, threads);
#endif
        r.per_trial_outputs.push_back(out);
        ++r.trials_run;
        if (! out.is_zero()) {
            r.found = true;
            if (opt.stop_when_found)
                break;
        }
    }
    return r;
}

DetectionReport detect_multilinear(const Circuit & c, int K, const DetectOptions & opt)
{
    return Detector(c, K).run(opt);
}

DetectionReport detect_multilinear_serial(const Circuit & c, int K, const DetectOptions & opt)
{
    check_degree(K);
    if (opt.trials < 1)
        throw Error("at least one trial is required");
    DetectionReport r;
    r.seed = opt.seed;
    r.K = K;
    r.peak_live_field_elements = c.num_nodes();
    std::vector<gf2e::FieldElement> assign(c.num_variables());
    for (int t = 0; t < opt.trials; ++t) {
        const auto s = draw_assignment(c, K, opt.seed, t);
        for (std::size_t z = 0; z < s.dontcare.size(); ++z)
            assign[s.dontcare[z]] = s.zvals[z];
        gf2e::FieldElement total;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << K); ++mask) {
            for (std::size_t i = 0; i < s.sieved.size(); ++i) {
                gf2e::FieldElement x;
                for (int j = 0; j < K; ++j)
                    if (mask >> j & 1)
                        x += s.W[i * static_cast<std::size_t>(K) + static_cast<std::size_t>(j)];
                assign[s.sieved[i]] = x;
            }
            total += evaluate_naive<GF2Ring>(c, assign);
        }
        r.per_trial_outputs.push_back(total);
        ++r.trials_run;
        if (! total.is_zero()) {
            r.found = true;
            if (opt.stop_when_found)
                break;
        }
    }
    return r;
}

BigInt subset_evaluation(const Circuit & c, std::span<const VarId> X, std::uint64_t mask)
{
    std::vector<BigInt> assign(c.num_variables(), 0);
    for (std::size_t t = 0; t < X.size(); ++t)
        if (mask >> t & 1)
            assign[X[t]] = 1;
    return evaluate_naive<BigIntRing>(c, assign);
}

BigInt count_exact_multilinear(const Circuit & c, std::span<const VarId> X, int threads)
{
    check_counting_input(c, X);
    const int K = static_cast<int>(X.size());
    const auto p = compile(c);
    const std::uint64_t total = std::uint64_t{1} << K;
    const int workers = worker_count(threads);
    std::vector<BigInt> partial(static_cast<std::size_t>(workers), 0);

#pragma omp parallel num_threads(workers)
    {
        const auto me = static_cast<std::size_t>(omp_get_thread_num());
        std::vector<std::uint64_t> fast(p.value_count(), 0);
        std::vector<BigInt> slow;
        BigInt sum = 0;
        std::int64_t small_sum = 0;
#pragma omp for schedule(dynamic, 16)
        for (std::uint64_t mask = 0; mask < total; ++mask) {
            std::fill(fast.begin(), fast.begin() + static_cast<std::ptrdiff_t>(p.num_vars), 0);
            for (int t = 0; t < K; ++t)
                if (mask >> t & 1)
                    fast[X[static_cast<std::size_t>(t)]] = 1;
            CheckedRing ring;
            execute(p, std::span(fast), ring);
            BigInt value;
            if (! ring.overflow && fast[p.result] <= static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max() / 2)) {
                // small values accumulate in a machine word until it might overflow
                const auto v = static_cast<std::int64_t>(fast[p.result]);
                const std::int64_t signed_v = odd_complement(K, mask) ? -v : v;
                std::int64_t next;
                if (__builtin_add_overflow(small_sum, signed_v, &next)) {
                    sum += small_sum;
                    small_sum = signed_v;
                }
                else
                    small_sum = next;
                continue;
            }
            slow.assign(p.value_count(), 0);
            for (int t = 0; t < K; ++t)
                if (mask >> t & 1)
                    slow[X[static_cast<std::size_t>(t)]] = 1;
            execute(p, std::span(slow), BigIntRing{});
            value = slow[p.result];
            if (odd_complement(K, mask))
                sum -= value;
            else
                sum += value;
        }
        sum += small_sum;
        partial[me] = sum;
    }

    BigInt n = 0;
    for (const auto & s : partial)
        n += s;
    return n;
}

BigInt count_exact_multilinear_serial(const Circuit & c, std::span<const VarId> X)
{
    check_counting_input(c, X);
    const int K = static_cast<int>(X.size());
    BigInt n = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << K); ++mask) {
        const auto v = subset_evaluation(c, X, mask);
        if (odd_complement(K, mask))
            n -= v;
        else
            n += v;
    }
    return n;
}

} // namespace motif
