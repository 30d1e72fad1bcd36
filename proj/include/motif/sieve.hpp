#pragma once

// Multilinear detection over GF(2^64) and exact multilinear counting by
// inclusion-exclusion over the integers.
//
// Detection, one trial: draw W[i][j] for every sieved variable i and label
// j < K, and one value per don't-care variable. For every label subset A,
// evaluate the circuit with x_i = sum_{j in A} W[i][j] and XOR the results.
// In characteristic 2 this sum equals, per monomial with sieved degree K,
// the permanent (= determinant) of the K x K submatrix of W picked by its
// sieved variables, which vanishes identically when a variable repeats.
// Monomials of sieved degree below K are hit an even number of times and
// cancel. The subset loop runs in Gray-code order, split into aligned blocks
// so all lanes of a batch flip the same label at each step.

#include "motif/circuit.hpp"
#include "motif/gf2e.hpp"
#include "motif/program.hpp"
#include "motif/rings.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace motif {

inline constexpr std::uint64_t kDefaultSeed = 0x6d6f746966ULL;
inline constexpr int kMaxSieveDegree = 62;

struct DetectOptions
{
    int trials = 3;
    std::uint64_t seed = kDefaultSeed;
    /// Worker cap; 0 means the OpenMP default.
    int threads = 0;
    /// Skip the remaining trials once one is nonzero.
    bool stop_when_found = false;
    /// Use the 8-lane AVX-512 kernel when the processor has it.
    bool wide_kernel = true;
};

struct DetectionReport
{
    bool found = false;
    int trials_run = 0;
    std::uint64_t seed = 0;
    int K = 0;
    std::vector<gf2e::FieldElement> per_trial_outputs;
    /// Peak intermediate field elements alive during one circuit evaluation.
    std::size_t peak_live_field_elements = 0;
    /// Everything one worker holds: slots and variable values for all
    /// lanes, plus the random matrix and fingerprint values.
    std::size_t worker_field_elements = 0;
    bool wide_kernel = false;
};

/// Random values of one trial. W is row-major: W[i * K + j] for sieved
/// index i (position in `sieved`) and label j.
struct SieveAssignment
{
    int K = 0;
    std::vector<VarId> sieved;
    std::vector<VarId> dontcare;
    std::vector<gf2e::FieldElement> W;
    std::vector<gf2e::FieldElement> zvals;
};

SieveAssignment draw_assignment(const Circuit & c, int K, std::uint64_t seed, int trial);

/// A circuit compiled once for repeated detection runs. Keeps a pointer to
/// the circuit, which must outlive it.
class Detector
{
public:
    Detector(const Circuit & c, int K);

    DetectionReport run(const DetectOptions & opt = {}) const;
    const Program & program() const { return program_; }

private:
    const Circuit * circuit_;
    int K_;
    Program program_;
};

/// OpenMP kernel: blocked Gray-code sweep, batched lanes, XOR reduction.
/// Output is independent of the worker count.
DetectionReport detect_multilinear(const Circuit & c, int K, const DetectOptions & opt = {});

/// Serial reference: subsets in binary order, fresh assignment and a
/// node-by-node evaluation for each one. Same randomness, same outputs.
DetectionReport detect_multilinear_serial(const Circuit & c, int K, const DetectOptions & opt = {});

/// Sum of coefficients of the multilinear degree-|X| monomials of P_C,
/// for a |X|-bounded circuit over variables X. Zeta values N'_S are circuit
/// evaluations at the 0/1 indicator of S, inverted by the alternating sum.
BigInt count_exact_multilinear(const Circuit & c, std::span<const VarId> X, int threads = 0);

/// Serial reference of the same count, big integers throughout.
BigInt count_exact_multilinear_serial(const Circuit & c, std::span<const VarId> X);

/// N'_S: the circuit over Z at the indicator of the subset `mask` of X
/// (bit t of mask selects X[t]).
BigInt subset_evaluation(const Circuit & c, std::span<const VarId> X, std::uint64_t mask);

} // namespace motif
