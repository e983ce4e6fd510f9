#pragma once

// Full factorization over F_p[t]: square-free split, then distinct-degree,
// then Cantor-Zassenhaus equal-degree splitting.  The randomized stage seeds
// its generator from (seed, hash of input), so repeated and concurrent calls
// with the same arguments produce identical output.

#include <cstdint>
#include <vector>

#include "dynprim/fp.hpp"
#include "dynprim/poly.hpp"

namespace dynprim {

struct FpFactor {
    Poly<Fp> factor;  // monic irreducible
    int multiplicity;
};

struct FpFactorization {
    Fp unit;
    std::vector<FpFactor> factors;  // sorted by (degree, coefficient order)

    Poly<Fp> reconstruct() const {
        Poly<Fp> acc = Poly<Fp>::constant(unit);
        for (const auto& f : factors) acc = acc * f.factor.pow(static_cast<std::uint64_t>(f.multiplicity));
        return acc;
    }
};

FpFactorization factor_fp(const Poly<Fp>& f, std::uint64_t seed = 0);

// Rabin's irreducibility test (deterministic).
bool is_irreducible_fp(const Poly<Fp>& f);

// t^q mod f and friends need modular exponentiation of polynomials.
Poly<Fp> poly_powmod(const Poly<Fp>& base, std::uint64_t e, const Poly<Fp>& mod);

}  // namespace dynprim
