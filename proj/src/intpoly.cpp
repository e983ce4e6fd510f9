#include "dynprim/intpoly.hpp"

#include <algorithm>
#include <cassert>

namespace dynprim {

namespace {

// Dense integer polynomial, low -> high, trailing zeros trimmed.
using ZVec = std::vector<mpz_class>;

void ztrim(ZVec& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
}

int zdeg(const ZVec& v) { return static_cast<int>(v.size()) - 1; }

ZVec to_zvec(const Poly<Rat>& f, mpz_class& denom_out) {
    // Common denominator, then integer coefficients.
    mpz_class denom = 1;
    for (const Rat& c : f.coeffs()) denom = lcm(denom, c.den());
    ZVec v;
    v.reserve(f.coeffs().size());
    for (const Rat& c : f.coeffs()) v.push_back(c.num() * (denom / c.den()));
    denom_out = denom;
    return v;
}

mpz_class zcontent(const ZVec& v) {
    mpz_class g = 0;
    for (const mpz_class& c : v) {
        g = gcd(g, c);
        if (g == 1) break;
    }
    return g;  // non-negative
}

void zdiv_exact(ZVec& v, const mpz_class& d) {
    for (mpz_class& c : v) {
        mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), d.get_mpz_t());
    }
}

// Primitive part in place; returns the (signed) removed content.
mpz_class zmake_primitive(ZVec& v) {
    ztrim(v);
    if (v.empty()) return 0;
    mpz_class g = zcontent(v);
    if (sgn(v.back()) < 0) g = -g;
    zdiv_exact(v, g);
    return g;
}

Poly<Rat> from_zvec(const ZVec& v) {
    std::vector<Rat> c;
    c.reserve(v.size());
    for (const mpz_class& a : v) c.emplace_back(a);
    return Poly<Rat>(std::move(c));
}

// Pseudo-remainder of a by b (deg a >= deg b >= 0, b nonzero): repeatedly
// scale by lc(b) and subtract; the result differs from the true remainder by
// a power of lc(b), which the caller strips via primitive parts.
ZVec zprem(ZVec a, const ZVec& b) {
    const mpz_class& bl = b.back();
    while (zdeg(a) >= zdeg(b) && !a.empty()) {
        mpz_class al = a.back();
        std::size_t shift = a.size() - b.size();
        for (mpz_class& c : a) c *= bl;
        for (std::size_t j = 0; j < b.size(); ++j) {
            a[shift + j] -= al * b[j];
        }
        ztrim(a);
    }
    return a;
}

// Reduce integer vector mod p; nullopt when the leading coefficient dies
// (callers that care about degree preservation check separately).
Poly<Fp> zvec_mod(const ZVec& v, const PrimeField& field) {
    std::vector<Fp> c;
    c.reserve(v.size());
    for (const mpz_class& a : v) {
        mpz_class r = a % static_cast<unsigned long>(field.modulus());
        if (r < 0) r += static_cast<unsigned long>(field.modulus());
        c.emplace_back(r.get_ui(), field);
    }
    return Poly<Fp>(std::move(c));
}

// Word primes used for the gcd coprimality shortcut.
constexpr std::uint64_t kGcdPrimes[] = {9223372036854775783ull, 9223372036854775643ull};

}  // namespace

PrimitiveSplit primitive_split(const Poly<Rat>& f) {
    if (f.is_zero()) throw ZeroInput("primitive part of the zero polynomial");
    mpz_class denom;
    ZVec v = to_zvec(f, denom);
    mpz_class cont = zmake_primitive(v);
    return {Rat(cont, denom), from_zvec(v)};
}

std::optional<Poly<Fp>> reduce_mod(const Poly<Rat>& f, const PrimeField& field) {
    std::vector<Fp> c;
    c.reserve(f.coeffs().size());
    for (const Rat& a : f.coeffs()) {
        auto r = reduce_mod(a, field);
        if (!r) return std::nullopt;
        c.push_back(*r);
    }
    return Poly<Fp>(std::move(c));
}

std::optional<Fp> reduce_mod(const Rat& a, const PrimeField& field) {
    unsigned long p = field.modulus();
    if (mpz_divisible_ui_p(a.den().get_mpz_t(), p)) return std::nullopt;
    mpz_class num = a.num() % p;
    if (num < 0) num += p;
    mpz_class den = a.den() % p;
    Fp n(num.get_ui(), field);
    Fp d(den.get_ui(), field);
    return n / d;
}

namespace detail {

Poly<Rat> poly_gcd_rat(const Poly<Rat>& a, const Poly<Rat>& b) {
    if (a.is_zero()) return b.is_zero() ? b : b.monic();
    if (b.is_zero()) return a.monic();
    mpz_class denom;
    ZVec A = to_zvec(a, denom);
    ZVec B = to_zvec(b, denom);
    zmake_primitive(A);
    zmake_primitive(B);
    if (zdeg(A) == 0 || zdeg(B) == 0) return Poly<Rat>::constant(Rat(1));

    // Modular shortcut: a reduction mod p with preserved degrees can prove
    // coprimality outright (deg gcd mod p >= deg gcd over Q).
    for (std::uint64_t p : kGcdPrimes) {
        if (mpz_divisible_ui_p(A.back().get_mpz_t(), p)) continue;
        if (mpz_divisible_ui_p(B.back().get_mpz_t(), p)) continue;
        PrimeField field(p);
        Poly<Fp> g = poly_gcd(zvec_mod(A, field), zvec_mod(B, field));
        if (g.degree() == 0) return Poly<Rat>::constant(Rat(1));
        break;  // one good prime is enough evidence either way
    }

    // Primitive pseudo-remainder sequence.
    if (zdeg(A) < zdeg(B)) std::swap(A, B);
    while (!B.empty()) {
        ZVec R = zprem(A, B);
        zmake_primitive(R);
        A = std::move(B);
        B = std::move(R);
    }
    return from_zvec(A).monic();
}

}  // namespace detail

SquarefreeModResult is_squarefree_mod(const Poly<Rat>& f, std::uint64_t ell) {
    if (f.is_zero()) throw ZeroInput("square-freeness of the zero polynomial");
    if (!PrimeField::is_prime(ell)) throw InputError("modulus " + std::to_string(ell) + " is not prime");
    PrimeField field(ell);
    auto fbar = reduce_mod(f, field);
    if (!fbar) return {false, "a denominator is divisible by " + std::to_string(ell)};
    if (fbar->degree() != f.degree()) {
        return {false, "degree drops mod " + std::to_string(ell) + " (leading coefficient vanishes)"};
    }
    if (f.degree() <= 0) return {true, ""};
    if (is_squarefree(*fbar)) return {true, ""};
    return {false, "repeated factor mod " + std::to_string(ell)};
}

bool is_squarefree(const Poly<Fp>& f) {
    if (f.is_zero()) throw ZeroInput("square-freeness of the zero polynomial");
    if (f.degree() <= 0) return true;
    return poly_gcd(f, f.derivative()).degree() == 0;
}

const std::vector<std::uint64_t> kSquarefreeLadder = {
    1000003, 1000033, 1000037, 1000039, 1000081, 1000099, 1000117, 1000121,
};

bool is_squarefree_exact(const Poly<Rat>& f) {
    if (f.is_zero()) throw ZeroInput("square-freeness of the zero polynomial");
    if (f.degree() <= 0) return true;
    for (std::uint64_t ell : kSquarefreeLadder) {
        if (is_squarefree_mod(f, ell).squarefree) return true;
    }
    // Every rung was inconclusive; settle it exactly.
    return poly_gcd(f, f.derivative()).degree() == 0;
}

MpzFactorization factor_mpz(const mpz_class& n) {
    assert(n != 0);
    MpzFactorization out{{}, true};
    mpz_class m = abs(n);
    auto push = [&](const mpz_class& p) {
        unsigned e = 0;
        while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
            mpz_divexact(m.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
            ++e;
        }
        if (e > 0) out.factors.emplace_back(p, e);
    };
    push(2);
    for (mpz_class p = 3; p * p <= m && p < 100000; p += 2) push(p);
    if (m > 1) {
        if (mpz_probab_prime_p(m.get_mpz_t(), 32) != 0) {
            out.factors.emplace_back(m, 1);
        } else {
            out.complete = false;  // composite cofactor beyond the budget
        }
    }
    return out;
}

namespace {

// Positive divisors of n assembled from a factorization, capped in count.
std::vector<mpz_class> divisors_from(const MpzFactorization& fz, std::size_t cap) {
    std::vector<mpz_class> divs{1};
    for (const auto& [p, e] : fz.factors) {
        std::size_t base = divs.size();
        if (base * (e + 1) > cap) return divs;  // keep the partial list
        mpz_class pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
        }
    }
    return divs;
}

}  // namespace

RationalRoots rational_roots(const Poly<Rat>& f) {
    if (f.is_zero()) throw ZeroInput("roots of the zero polynomial");
    RationalRoots out{{}, true};
    Poly<Rat> g = primitive_split(f).primitive;
    // Peel roots at 0 first so the constant term is nonzero.
    int at_zero = 0;
    while (!g.is_zero() && g.degree() >= 1 && g[0].is_zero()) {
        std::vector<Rat> shifted(g.coeffs().begin() + 1, g.coeffs().end());
        g = Poly<Rat>(std::move(shifted));
        ++at_zero;
    }
    if (at_zero > 0) out.roots.emplace_back(Rat(0), at_zero);
    if (g.degree() < 1) return out;

    mpz_class a0 = g[0].num();
    mpz_class ad = g.lc().num();
    MpzFactorization f0 = factor_mpz(a0);
    MpzFactorization fd = factor_mpz(ad);
    out.complete = f0.complete && fd.complete;
    constexpr std::size_t kDivisorCap = 4096;
    std::vector<mpz_class> nums = divisors_from(f0, kDivisorCap);
    std::vector<mpz_class> dens = divisors_from(fd, kDivisorCap);
    if (nums.size() >= kDivisorCap || dens.size() >= kDivisorCap) out.complete = false;
    constexpr std::size_t kPairCap = 200000;
    if (nums.size() * dens.size() > kPairCap) {
        nums.resize(std::max<std::size_t>(1, kPairCap / dens.size()));
        out.complete = false;
    }

    std::vector<Rat> found;
    for (const mpz_class& u : nums) {
        for (const mpz_class& w : dens) {
            for (int s : {1, -1}) {
                Rat cand(s * u, w);
                if (std::find(found.begin(), found.end(), cand) != found.end()) continue;
                if (!g(cand).is_zero()) continue;
                found.push_back(cand);
            }
        }
    }
    std::sort(found.begin(), found.end());
    Poly<Rat> rem = g;
    for (const Rat& r : found) {
        Poly<Rat> lin(std::vector<Rat>{-r, Rat(1)});
        int mult = 0;
        while (lin.divides(rem)) {
            rem = rem.exact_div(lin);
            ++mult;
        }
        out.roots.emplace_back(r, mult);
    }
    return out;
}

}  // namespace dynprim
