#pragma once

// Density experiment for the quadratic family phi_{(gamma,c)}(x) = (x-gamma)^2 + c
// with gamma, c in Z[t] of degree <= d: membership tests for the degenerate
// locus M_d (degree-d coefficient relation) and the discriminant locus V_d
// (some critical-orbit iterate phi^n(gamma) fails to be square-free), an
// exhaustive scan of coefficient boxes counting the complement O_d, a mod-2
// derivative certificate for the witness pair (t^d, 2t^d + t), and the two
// height-bound inequalities that cap the levels worth testing.
//
// The scan is an OpenMP kernel over the flattened coefficient box; a plain
// serial implementation of the same enumeration is kept alongside it as a
// reference for testing and benchmarking.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dynprim/dynpoly.hpp"
#include "dynprim/errors.hpp"
#include "dynprim/poly.hpp"
#include "dynprim/rat.hpp"
#include "dynprim/ratfunc.hpp"

namespace dynprim {

// Levels of the critical-orbit square-freeness test.  The default window
// keeps every iterate small enough for fully exact arithmetic; the hard
// limit is the largest level the height bounds make relevant (see
// stability_bounds), and past kVdExactDegreeLimit the test certifies
// square-freeness through reductions mod word primes only.
constexpr int kDefaultVdWindow = 6;
constexpr int kVdWindowLimit = 16;
constexpr int kVdExactDegreeLimit = 2048;

// Pairs visited by one exhaustive scan are capped to keep runs desk-scale.
constexpr std::uint64_t kDefaultEnumerationCap = 5'000'000;

// A quadratic pair (gamma, c) of integer polynomials of degree <= d and the
// map phi(x) = (x - gamma)^2 + c it induces.
struct QuadPair {
    long d;
    Poly<Rat> gamma;
    Poly<Rat> c;

    // Throws InputError unless d >= 1, both polynomials have integer
    // coefficients, and both degrees are at most d.
    QuadPair(long d_, Poly<Rat> gamma_, Poly<Rat> c_);

    // phi as a dynamical polynomial over Q(t): x^2 - 2*gamma*x + (gamma^2 + c).
    DynPoly<Rat> as_dynpoly() const;
};

// Degree-d coefficient relation a_d * b_d * (a_d - b_d) = 0.  Pairs in M_d
// degenerate (the height of phi drops below d) and are excluded before the
// orbit test.
bool in_M_d(const QuadPair& pair);

// Verdict of the critical-orbit square-freeness test over a level window.
struct VdResult {
    int n_max = 0;                // window actually tested; a "no" is relative to it
    std::optional<int> witness;   // engaged with the first n <= n_max where
                                  // phi^n(gamma) is not square-free
    bool exact = true;            // false when some verdict rests on modular
                                  // reductions alone (huge-degree levels only)

    bool member() const { return witness.has_value(); }
};

// Tests whether some phi^n(gamma), 1 <= n <= n_max, fails to be square-free.
// The zero polynomial counts as not square-free (so degenerate pairs like
// (0,0) land in V_d instead of crashing); nonzero constants are square-free.
// While iterate degrees stay within kVdExactDegreeLimit the verdict is exact
// (modular ladder with exact gcd fallback); beyond that, square-freeness is
// certified mod word primes and a level no prime certifies is reported as a
// witness with exact=false.  For pairs outside M_d the iterate degrees are
// cross-checked against d*2^(n-1).  Throws InputError unless
// 1 <= n_max <= kVdWindowLimit, DegreeCapExceeded when an iterate would
// overrun the cap.
VdResult in_V_d(const QuadPair& pair, int n_max = kDefaultVdWindow,
                std::uint64_t cap = kDefaultDegreeCap);

// Outcome of the mod-2 derivative check: d/dt(phi^n(gamma)) = 1 in F_2[t]
// for every n <= n_max certifies that every phi^n(gamma) is square-free.
struct Mod2Certificate {
    long d = 0;
    int n_max = 0;
    bool pass = false;
    int failed_n = 0;     // first offending level when pass is false
    std::string detail;   // the offending derivative, when failing
};

// Runs the check for an arbitrary pair (coefficients reduced mod 2).
Mod2Certificate mod2_derivative_certificate(const QuadPair& pair, int n_max,
                                            std::uint64_t cap = kDefaultDegreeCap);

// Runs the check for the witness pair (t^d, 2t^d + t).
Mod2Certificate mod2_derivative_certificate(long d, int n_max,
                                            std::uint64_t cap = kDefaultDegreeCap);

// Classification of one pair by the scan.
enum class PairClass : std::uint8_t {
    M,  // in M_d (degenerate coefficients); orbit test skipped
    V,  // outside M_d, some iterate not square-free
    O,  // outside both: the surjectivity locus
};

struct PairVerdict {
    std::uint64_t index = 0;  // position in the flattened coefficient box
    PairClass cls = PairClass::M;
    int witness = 0;          // level for class V, 0 otherwise
    bool operator==(const PairVerdict&) const = default;
};

// Aggregate counts of one exhaustive scan.
struct DensityStats {
    long d = 0;
    long B = 0;
    int n_max = 0;
    int workers = 1;
    std::uint64_t total = 0;    // (2B+1)^(2d+2)
    std::uint64_t count_m = 0;  // pairs in M_d
    std::uint64_t count_v = 0;  // pairs outside M_d with a square-freeness witness
    std::uint64_t count_o = 0;  // total - count_m - count_v
    std::vector<std::uint64_t> v_witness_by_n;  // [n] = class-V pairs with witness n
    bool exact = true;          // every verdict exact (see VdResult)
    double elapsed_seconds = 0.0;
};

// The pair at `index` in the box {-B..B}^(2d+2): base-(2B+1) digits, low
// digit first, gamma coefficients t^0..t^d then c coefficients t^0..t^d,
// each digit shifted into [-B, B].
QuadPair decode_pair(long d, long B, std::uint64_t index);
std::uint64_t box_size(long d, long B, std::uint64_t enumeration_cap = kDefaultEnumerationCap);

// Exhaustively classifies every pair in the coefficient box: in_M_d first,
// then in_V_d only for pairs outside M_d.  OpenMP-parallel over the box with
// `workers` threads; counts are exact integer sums, so the statistics do not
// depend on the worker count.  When `per_pair` is non-null it is resized to
// the box and filled with one verdict per index.  Throws InputError on bad
// parameters and EnumerationCapExceeded when the box exceeds the cap.
DensityStats density_scan(long d, long B, int n_max, int workers,
                          std::vector<PairVerdict>* per_pair = nullptr,
                          std::uint64_t enumeration_cap = kDefaultEnumerationCap,
                          std::uint64_t degree_cap = kDefaultDegreeCap);

// Plain single-loop implementation of the same scan (no OpenMP), kept as the
// reference the parallel kernel is tested and benchmarked against.
DensityStats density_scan_reference(long d, long B, int n_max,
                                    std::vector<PairVerdict>* per_pair = nullptr,
                                    std::uint64_t enumeration_cap = kDefaultEnumerationCap,
                                    std::uint64_t degree_cap = kDefaultDegreeCap);

// Largest levels n satisfying the two height-bound inequalities: stability
// (2^(n-2) * d <= 110*d + 4, the integral-point bound on E_phi) and primitive
// divisors (2^(n-2) / (2^(floor(n/2)+1) + 2^(floor(n/2)) + 1) <= 36, the bound
// on the quadratic twists).  For every d >= 1 the first gives n_stab = 8 and
// the second n_zsig = 16, which is why the orbit test stops at 16.
struct StabilityBounds {
    int n_stab = 0;
    int n_zsig = 0;
};
StabilityBounds stability_bounds(long d);

}  // namespace dynprim
