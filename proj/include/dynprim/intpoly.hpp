#pragma once

// Q[t] utilities that exploit the integers under the hood: content/primitive
// splitting, reduction mod word primes, square-freeness tests (modular
// shortcut + exact fallback), and bounded rational root enumeration.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dynprim/fp.hpp"
#include "dynprim/poly.hpp"
#include "dynprim/rat.hpp"

namespace dynprim {

// f = content * primitive, where primitive has coprime integer coefficients
// and positive leading coefficient; content carries the sign.  f must be
// nonzero.
struct PrimitiveSplit {
    Rat content;
    Poly<Rat> primitive;  // integer coefficients, lc > 0, content 1
};
PrimitiveSplit primitive_split(const Poly<Rat>& f);

// Reduce an integer-coefficient view of f mod ell.  Fails (nullopt) when some
// coefficient's denominator is divisible by ell.
std::optional<Poly<Fp>> reduce_mod(const Poly<Rat>& f, const PrimeField& field);

// Reduce an integer mod ell (value must have denominator coprime to ell).
std::optional<Fp> reduce_mod(const Rat& a, const PrimeField& field);

// One-sided square-freeness test by reduction mod ell.
struct SquarefreeModResult {
    bool squarefree;      // true: certified square-free over Q
    std::string reason;   // when not certified: bad-prime / degree-drop / repeated-factor
};
SquarefreeModResult is_squarefree_mod(const Poly<Rat>& f, std::uint64_t ell);

// Square-freeness over F_p (exact: gcd(f, f') is constant).
bool is_squarefree(const Poly<Fp>& f);

// Exact square-freeness over Q: tries the documented prime ladder first and
// falls back to an exact gcd(f, f') when every reduction is inconclusive.
extern const std::vector<std::uint64_t> kSquarefreeLadder;
bool is_squarefree_exact(const Poly<Rat>& f);

// All rational roots of f (with multiplicities) found by the rational root
// theorem on the primitive part.  `complete` is false when the constant or
// leading coefficient could not be fully factored within the trial-division
// budget, in which case only the roots discovered are listed.
struct RationalRoots {
    std::vector<std::pair<Rat, int>> roots;
    bool complete;
};
RationalRoots rational_roots(const Poly<Rat>& f);

// Trial-division factorization of |n| (n != 0) with a bounded small-prime
// sweep; `complete` is false if a composite cofactor survives.
struct MpzFactorization {
    std::vector<std::pair<mpz_class, unsigned>> factors;
    bool complete;
};
MpzFactorization factor_mpz(const mpz_class& n);

}  // namespace dynprim
