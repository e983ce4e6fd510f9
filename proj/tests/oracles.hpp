#pragma once

// Independent reference implementations and input builders for the tests.
// The oracles are deliberately naive (textbook definitions, no shortcuts) so
// they cannot share a bug with the library code they check.

#include <cassert>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

#include "dynprim/dynpoly.hpp"
#include "dynprim/fp.hpp"
#include "dynprim/poly.hpp"
#include "dynprim/rat.hpp"
#include "dynprim/ratfunc.hpp"

namespace oracles {

using dynprim::DynPoly;
using dynprim::Fp;
using dynprim::Poly;
using dynprim::PrimeField;
using dynprim::Rat;
using dynprim::RatFunc;

// -- input builders ----------------------------------------------------------

// Coefficients listed from degree 0 upward.
inline Poly<Rat> qpoly(std::initializer_list<long> cs) {
    std::vector<Rat> v;
    for (long c : cs) v.emplace_back(c);
    return Poly<Rat>(std::move(v));
}

inline Poly<Fp> fppoly(const PrimeField& field, std::initializer_list<long> cs) {
    std::vector<Fp> v;
    for (long c : cs) v.push_back(Fp::from_int(c, field));
    return Poly<Fp>(std::move(v));
}

// Random polynomial of exact degree `deg` over F_p.
inline Poly<Fp> random_fppoly(std::mt19937_64& rng, const PrimeField& field, int deg) {
    std::uniform_int_distribution<std::uint64_t> dist(0, field.modulus() - 1);
    std::vector<Fp> v;
    for (int i = 0; i < deg; ++i) v.emplace_back(dist(rng), field);
    std::uniform_int_distribution<std::uint64_t> lead(1, field.modulus() - 1);
    v.emplace_back(lead(rng), field);
    return Poly<Fp>(std::move(v));
}

// Random polynomial of exact degree `deg` with integer coefficients in
// [lo, hi].
inline Poly<Rat> random_qpoly(std::mt19937_64& rng, int deg, long lo = -9, long hi = 9) {
    std::uniform_int_distribution<long> dist(lo, hi);
    std::vector<Rat> v;
    for (int i = 0; i < deg; ++i) v.emplace_back(dist(rng));
    Rat lead(0);
    while (lead.is_zero()) lead = Rat(dist(rng));
    v.push_back(lead);
    return Poly<Rat>(std::move(v));
}

// The generator t of Q(t) and of F_p(t).
inline RatFunc<Rat> qt() { return RatFunc<Rat>(qpoly({0, 1})); }
inline RatFunc<Fp> fpt(const PrimeField& field) { return RatFunc<Fp>(fppoly(field, {0, 1})); }

// phi as a polynomial in x from coefficients listed low degree -> high.
template <class F>
DynPoly<F> dynpoly(std::vector<RatFunc<F>> coeffs) {
    return DynPoly<F>(Poly<RatFunc<F>>(std::move(coeffs)));
}

// The paper's family phi_{p,t} = x^p + A x^{p-1} + t over Q(t) with
// A = (-p t^p - p t) / (p t^{p-1} + p - 1).
inline DynPoly<Rat> family_over_q(long p) {
    std::vector<Rat> num(static_cast<std::size_t>(p) + 1, Rat(0));
    num[1] = Rat(-p);
    num[static_cast<std::size_t>(p)] = Rat(-p);
    std::vector<Rat> den(static_cast<std::size_t>(p), Rat(0));
    den[0] = Rat(p - 1);
    den[static_cast<std::size_t>(p - 1)] = Rat(p);
    RatFunc<Rat> a(Poly<Rat>(std::move(num)), Poly<Rat>(std::move(den)));
    RatFunc<Rat> one = a.one();
    std::vector<RatFunc<Rat>> cx(static_cast<std::size_t>(p) + 1, a.zero());
    cx[0] = qt();
    cx[static_cast<std::size_t>(p - 1)] = a;
    cx[static_cast<std::size_t>(p)] = one;
    return dynpoly<Rat>(std::move(cx));
}

// Random rational function num/den with polynomial degrees <= 2.
inline RatFunc<Rat> random_qfunc(std::mt19937_64& rng, int max_deg = 2, long lo = -4, long hi = 4) {
    std::uniform_int_distribution<int> deg(0, max_deg);
    Poly<Rat> num = random_qpoly(rng, deg(rng), lo, hi);
    Poly<Rat> den = random_qpoly(rng, deg(rng), lo, hi);
    return RatFunc<Rat>(num, den);
}

inline RatFunc<Fp> random_fpfunc(std::mt19937_64& rng, const PrimeField& field, int max_deg = 2) {
    std::uniform_int_distribution<int> deg(0, max_deg);
    Poly<Fp> num = random_fppoly(rng, field, deg(rng));
    Poly<Fp> den = random_fppoly(rng, field, deg(rng));
    return RatFunc<Fp>(num, den);
}

// -- reference resultant ------------------------------------------------------

// Determinant by Gaussian elimination over a field.
template <class F>
F field_det(std::vector<std::vector<F>> m, const F& one) {
    const std::size_t n = m.size();
    F det = one;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m[pivot][col].is_zero()) ++pivot;
        if (pivot == n) return one.zero();
        if (pivot != col) {
            std::swap(m[pivot], m[col]);
            det = -det;
        }
        det = det * m[col][col];
        F inv = m[col][col].inv();
        for (std::size_t row = col + 1; row < n; ++row) {
            if (m[row][col].is_zero()) continue;
            F factor = m[row][col] * inv;
            for (std::size_t k = col; k < n; ++k) {
                m[row][k] = m[row][k] - factor * m[col][k];
            }
        }
    }
    return det;
}

// Sylvester-matrix resultant, f-rows first: n = deg g rows of f's
// coefficients (leading first), then m = deg f rows of g's.
template <class F>
F sylvester_resultant(const Poly<F>& f, const Poly<F>& g) {
    assert(!f.is_zero() && !g.is_zero());
    const int m = f.degree(), n = g.degree();
    const F zero = f.lc().zero();
    const F one = f.lc().one();
    if (m + n == 0) return one;
    const std::size_t N = static_cast<std::size_t>(m + n);
    std::vector<std::vector<F>> s(N, std::vector<F>(N, zero));
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k <= m; ++k) {
            s[static_cast<std::size_t>(i)][static_cast<std::size_t>(i + k)] =
                f[static_cast<std::size_t>(m - k)];
        }
    }
    for (int i = 0; i < m; ++i) {
        for (int k = 0; k <= n; ++k) {
            s[static_cast<std::size_t>(n + i)][static_cast<std::size_t>(i + k)] =
                g[static_cast<std::size_t>(n - k)];
        }
    }
    return field_det(std::move(s), one);
}

}  // namespace oracles
