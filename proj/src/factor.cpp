#include "dynprim/factor.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cassert>
#include <random>

namespace dynprim {

namespace {

std::uint64_t fnv1a(std::uint64_t h, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        h ^= (v >> (8 * i)) & 0xff;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t hash_poly(const Poly<Fp>& f) {
    std::uint64_t h = 14695981039346656037ull;
    if (f.is_zero()) return h;
    h = fnv1a(h, f.lc().modulus());
    for (const Fp& c : f.coeffs()) h = fnv1a(h, c.value());
    return h;
}

Poly<Fp> poly_mulmod(const Poly<Fp>& a, const Poly<Fp>& b, const Poly<Fp>& mod) {
    return (a * b) % mod;
}

// base^e mod `mod` for an arbitrary-precision exponent.
Poly<Fp> poly_powmod_mpz(const Poly<Fp>& base, const mpz_class& e, const Poly<Fp>& mod) {
    const PrimeField field(mod.lc().modulus());
    Poly<Fp> acc = Poly<Fp>::constant(Fp(1, field));
    Poly<Fp> b = base % mod;
    mp_bitcnt_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    if (e == 0) return acc;
    for (mp_bitcnt_t i = 0; i < bits; ++i) {
        if (mpz_tstbit(e.get_mpz_t(), i)) acc = poly_mulmod(acc, b, mod);
        if (i + 1 < bits) b = poly_mulmod(b, b, mod);
    }
    return acc;
}

Poly<Fp> poly_x(const PrimeField& field) {
    return Poly<Fp>::monomial(Fp(1, field), 1);
}

// Random monic-ish polynomial of degree < n (nonconstant preferred).
Poly<Fp> random_poly(std::mt19937_64& rng, int n, const PrimeField& field) {
    std::uniform_int_distribution<std::uint64_t> dist(0, field.modulus() - 1);
    std::vector<Fp> c;
    c.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) c.emplace_back(dist(rng), field);
    return Poly<Fp>(std::move(c));
}

// Cantor-Zassenhaus equal-degree splitting: f is a monic square-free product
// of r >= 1 irreducibles, all of degree d.
void equal_degree(const Poly<Fp>& f, int d, std::mt19937_64& rng, std::vector<Poly<Fp>>& out) {
    if (f.degree() == d) {
        out.push_back(f);
        return;
    }
    const PrimeField field(f.lc().modulus());
    const std::uint64_t p = field.modulus();
    const Poly<Fp> one = Poly<Fp>::constant(Fp(1, field));
    while (true) {
        Poly<Fp> a = random_poly(rng, f.degree(), field);
        if (a.degree() < 1) continue;
        Poly<Fp> g = poly_gcd(f, a);
        if (g.degree() > 0 && g.degree() < f.degree()) {
            equal_degree(g, d, rng, out);
            equal_degree(f.exact_div(g), d, rng, out);
            return;
        }
        Poly<Fp> b;
        if (p == 2) {
            // Trace map over F_{2^d}: b = a + a^2 + a^4 + ... + a^{2^{d-1}}.
            Poly<Fp> acc = a % f;
            Poly<Fp> term = acc;
            for (int i = 1; i < d; ++i) {
                term = poly_mulmod(term, term, f);
                acc = (acc + term) % f;
            }
            b = acc;
        } else {
            // b = a^{(p^d - 1)/2} mod f; b - 1 kills about half the factors.
            mpz_class e;
            mpz_ui_pow_ui(e.get_mpz_t(), p, static_cast<unsigned long>(d));
            e = (e - 1) / 2;
            b = poly_powmod_mpz(a, e, f) - one;
        }
        Poly<Fp> h = poly_gcd(f, b);
        if (h.degree() > 0 && h.degree() < f.degree()) {
            equal_degree(h, d, rng, out);
            equal_degree(f.exact_div(h), d, rng, out);
            return;
        }
    }
}

// Distinct-degree decomposition of a monic square-free f: list of
// (product-of-degree-d-factors, d).
std::vector<std::pair<Poly<Fp>, int>> distinct_degree(const Poly<Fp>& f) {
    const PrimeField field(f.lc().modulus());
    std::vector<std::pair<Poly<Fp>, int>> out;
    Poly<Fp> rem = f;
    Poly<Fp> h = poly_x(field);  // t^{p^i} mod rem, maintained incrementally
    int i = 0;
    while (rem.degree() > 0) {
        ++i;
        if (2 * i > rem.degree()) {
            // Whatever is left is a single irreducible factor.
            out.emplace_back(rem, rem.degree());
            break;
        }
        h = poly_powmod(h, field.modulus(), rem);
        Poly<Fp> g = poly_gcd(rem, h - poly_x(field));
        if (g.degree() > 0) {
            out.emplace_back(g, i);
            rem = rem.exact_div(g);
            h = h % rem;
        }
    }
    return out;
}

}  // namespace

Poly<Fp> poly_powmod(const Poly<Fp>& base, std::uint64_t e, const Poly<Fp>& mod) {
    const PrimeField field(mod.lc().modulus());
    Poly<Fp> acc = Poly<Fp>::constant(Fp(1, field));
    Poly<Fp> b = base % mod;
    while (e > 0) {
        if (e & 1) acc = poly_mulmod(acc, b, mod);
        e >>= 1;
        if (e > 0) b = poly_mulmod(b, b, mod);
    }
    return acc;
}

FpFactorization factor_fp(const Poly<Fp>& f, std::uint64_t seed) {
    if (f.is_zero()) throw ZeroInput("factorization of the zero polynomial");
    FpFactorization out{f.lc(), {}};
    if (f.degree() == 0) return out;

    std::mt19937_64 rng(seed ^ hash_poly(f));
    SquarefreeDecomposition<Fp> sf = squarefree_decomposition(f);
    assert(sf.complete() && "F_p is perfect");
    for (const auto& part : sf.parts) {
        for (const auto& [block, d] : distinct_degree(part.factor)) {
            std::vector<Poly<Fp>> irreducibles;
            equal_degree(block, d, rng, irreducibles);
            for (Poly<Fp>& g : irreducibles) {
                out.factors.push_back({std::move(g), part.multiplicity});
            }
        }
    }
    std::sort(out.factors.begin(), out.factors.end(), [](const FpFactor& a, const FpFactor& b) {
        return a.factor < b.factor;
    });
    return out;
}

bool is_irreducible_fp(const Poly<Fp>& f) {
    if (f.degree() < 1) return false;
    if (f.degree() == 1) return true;
    const PrimeField field(f.lc().modulus());
    const std::uint64_t p = field.modulus();
    const int n = f.degree();
    const Poly<Fp> x = poly_x(field);

    // Rabin: t^{p^n} == t mod f, and gcd(t^{p^{n/q}} - t, f) = 1 for every
    // prime q dividing n.
    std::vector<int> prime_divs;
    int m = n;
    for (int q = 2; q * q <= m; ++q) {
        if (m % q == 0) {
            prime_divs.push_back(q);
            while (m % q == 0) m /= q;
        }
    }
    if (m > 1) prime_divs.push_back(m);

    // t^{p^i} mod f by repeated Frobenius steps; cache the ladder at the
    // exponents we need.
    std::vector<Poly<Fp>> ladder(static_cast<std::size_t>(n) + 1);
    ladder[0] = x % f;
    for (int i = 1; i <= n; ++i) ladder[i] = poly_powmod(ladder[i - 1], p, f);
    if (!(ladder[static_cast<std::size_t>(n)] == x % f)) return false;
    for (int q : prime_divs) {
        Poly<Fp> g = poly_gcd(f, ladder[static_cast<std::size_t>(n / q)] - x);
        if (g.degree() != 0) return false;
    }
    return true;
}

}  // namespace dynprim
