#pragma once

// One-sided irreducibility certificates for iterate polynomials phi^n(x) - a
// over K = k(t).  Two routes:
//
//   * Eisenstein at a finite place pi of k[t]: all coefficients pi-integral,
//     the leading one a pi-unit, every other coefficient divisible by pi and
//     the constant term exactly once.  The middle coefficients are checked by
//     composing phi mod pi (never expanding phi^n over K), and the constant
//     term's valuation by value iteration mod pi^2.
//
//   * Specialization (char p only): substitute t -> c in F_p preserving the
//     x-degree; if the specialized iterate is irreducible over F_p, so was
//     the original over F_p(t) (Gauss + degree preservation).
//
// Both certify or say "unknown"; neither ever claims reducibility.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dynprim/dynpoly.hpp"
#include "dynprim/factor.hpp"
#include "dynprim/intpoly.hpp"
#include "dynprim/poly.hpp"
#include "dynprim/ratfunc.hpp"

namespace dynprim {

enum class CertStatus { certified, unknown };

struct IrreducibilityCertificate {
    CertStatus status = CertStatus::unknown;
    std::string method;   // "eisenstein" or "specialization" when certified
    std::string witness;  // the place pi or the substitution point
};

namespace detail {

// x mod m, with m nonconstant; inputs need not be reduced.
template <CoeffField F>
Poly<F> mod_poly(const Poly<F>& x, const Poly<F>& m) {
    return x % m;
}

// Image of a pi-integral rational function in k[t]/(m), where m is a power of
// pi.  Requires gcd(den, m) = 1; returns nullopt otherwise.
template <CoeffField F>
std::optional<Poly<F>> residue_of(const RatFunc<F>& v, const Poly<F>& m) {
    if (v.is_zero()) return Poly<F>();
    Poly<F> den = v.den() % m;
    if (den.is_zero()) return std::nullopt;
    auto x = poly_xgcd(den, m);
    if (!x.g.is_one()) return std::nullopt;  // den shares a factor with pi
    return (v.num() % m) * x.u % m;
}

// Coefficients (in x) of phi reduced mod m; nullopt if any coefficient is not
// integral at pi.
template <CoeffField F>
std::optional<std::vector<Poly<F>>> phi_mod(const DynPoly<F>& phi, const Poly<F>& m) {
    std::vector<Poly<F>> out;
    const Poly<RatFunc<F>>& px = phi.in_x();
    for (std::size_t i = 0; i <= static_cast<std::size_t>(px.degree()); ++i) {
        auto r = residue_of(px.get(i), m);
        if (!r) return std::nullopt;
        out.push_back(std::move(*r));
    }
    return out;
}

// Horner composition f(g) for polynomials in x whose coefficients live in
// k[t]/(m): every coefficient multiplication is reduced mod m.
template <CoeffField F>
std::vector<Poly<F>> compose_mod(const std::vector<Poly<F>>& f, const std::vector<Poly<F>>& g,
                                 const Poly<F>& m) {
    std::vector<Poly<F>> acc{f.back()};
    for (std::size_t i = f.size() - 1; i-- > 0;) {
        // acc = acc * g
        std::vector<Poly<F>> next(acc.size() + g.size() - 1, Poly<F>());
        for (std::size_t j = 0; j < acc.size(); ++j) {
            if (acc[j].is_zero()) continue;
            for (std::size_t k = 0; k < g.size(); ++k) {
                if (g[k].is_zero()) continue;
                next[j + k] = (next[j + k] + acc[j] * g[k]) % m;
            }
        }
        acc = std::move(next);
        acc[0] = (acc[0] + f[i]) % m;
    }
    return acc;
}

// phi^n(0) - a evaluated by value iteration in k[t]/(m); nullopt if some
// participant is not integral at pi.
template <CoeffField F>
std::optional<Poly<F>> shifted_value_mod(const DynPoly<F>& phi, const RatFunc<F>& a, int n,
                                         const Poly<F>& m) {
    auto coeffs = phi_mod(phi, m);
    if (!coeffs) return std::nullopt;
    auto abar = residue_of(a, m);
    if (!abar) return std::nullopt;
    Poly<F> x;  // 0
    for (int k = 0; k < n; ++k) {
        Poly<F> acc = coeffs->back();
        for (std::size_t i = coeffs->size() - 1; i-- > 0;) {
            acc = (acc * x + (*coeffs)[i]) % m;
        }
        x = std::move(acc);
    }
    return (x - *abar) % m;
}

}  // namespace detail

// Eisenstein test for phi^n(x) - a at the monic irreducible place pi of k[t]:
// certifies irreducibility over k(t) when it passes.
template <CoeffField F>
bool eisenstein_at(const DynPoly<F>& phi, const RatFunc<F>& a, int n, const Poly<F>& pi) {
    if (n < 1 || pi.degree() < 1 || !pi.is_monic()) throw InputError("eisenstein_at needs n >= 1 and a monic nonconstant place");
    // Leading coefficient must be a pi-unit.
    auto lead = detail::residue_of(phi.A(0), pi);
    if (!lead || lead->is_zero()) return false;

    // Middle coefficients of phi^n - a all vanish mod pi.
    auto coeffs = detail::phi_mod(phi, pi);
    if (!coeffs) return false;
    auto abar = detail::residue_of(a, pi);
    if (!abar) return false;
    std::vector<Poly<F>> acc = *coeffs;
    for (int k = 1; k < n; ++k) acc = detail::compose_mod(*coeffs, acc, pi);
    acc[0] = (acc[0] - *abar) % pi;
    for (std::size_t i = 0; i + 1 < acc.size(); ++i) {
        if (!acc[i].is_zero()) return false;
    }
    if (acc.back().is_zero()) return false;

    // Constant term phi^n(0) - a has pi-valuation exactly 1.
    Poly<F> pi2 = pi * pi;
    auto w2 = detail::shifted_value_mod(phi, a, n, pi2);
    if (!w2) return false;
    return !w2->is_zero() && (*w2 % pi).is_zero();
}

namespace detail {

// Candidate places: monic irreducible simple factors of the numerator of
// phi^n(0) - a (the constant-term valuation must be 1, so only simple factors
// can work).  Over Q only degree-one places t - r are enumerated.
template <CoeffField F>
std::vector<Poly<F>> eisenstein_candidates(const DynPoly<F>& phi, const RatFunc<F>& a, int n,
                                           std::uint64_t cap) {
    std::vector<Poly<F>> out;
    RatFunc<F> w = orbit_values(phi, phi.A(0).zero(), n, cap).back() - a;
    if (w.is_zero() || w.num().degree() < 1) return out;
    if constexpr (std::is_same_v<F, Fp>) {
        for (const auto& [g, mult] : factor_fp(w.num()).factors) {
            if (mult == 1 && g.degree() >= 1) out.push_back(g);
        }
    } else if constexpr (std::is_same_v<F, Rat>) {
        for (const auto& [r, mult] : rational_roots(w.num()).roots) {
            if (mult == 1) out.push_back(Poly<Rat>(std::vector<Rat>{-r, Rat(1)}));
        }
    }
    constexpr std::size_t kPlaceCap = 16;
    if (out.size() > kPlaceCap) out.resize(kPlaceCap);
    return out;
}

}  // namespace detail

// Try to certify that phi^n(x) - a is irreducible over k(t).
template <CoeffField F>
IrreducibilityCertificate certify_iterate_irreducible(const DynPoly<F>& phi, const RatFunc<F>& a,
                                                      int n, std::uint64_t cap = kDefaultDegreeCap) {
    if (n < 1) throw InputError("certify_iterate_irreducible needs n >= 1");
    IrreducibilityCertificate cert;
    for (const Poly<F>& pi : detail::eisenstein_candidates(phi, a, n, cap)) {
        if (eisenstein_at(phi, a, n, pi)) {
            cert.status = CertStatus::certified;
            cert.method = "eisenstein";
            cert.witness = pi.to_string();
            return cert;
        }
    }
    if constexpr (std::is_same_v<F, Fp>) {
        const std::uint64_t p = phi.A(0).characteristic();
        const std::uint64_t sweep = p < 50 ? p : 50;
        PrimeField field(p);
        for (std::uint64_t cval = 0; cval < sweep; ++cval) {
            Fp c(cval, field);
            // Substitution t -> c must keep every coefficient finite and the
            // x-degree intact.
            bool ok = true;
            std::vector<Fp> spec;
            const Poly<RatFunc<F>>& px = phi.in_x();
            for (std::size_t i = 0; i <= static_cast<std::size_t>(px.degree()); ++i) {
                RatFunc<F> coeff = px.get(i);
                if (coeff.is_zero()) {
                    spec.push_back(Fp(0, field));
                    continue;
                }
                Fp den = coeff.den()(c);
                if (den.is_zero()) {
                    ok = false;
                    break;
                }
                spec.push_back(coeff.num()(c) / den);
            }
            if (!ok || spec.back().is_zero()) continue;
            if (a.is_zero()) {
                // fine: shift by 0
            } else if (a.den()(c).is_zero()) {
                continue;
            }
            Fp ac = a.is_zero() ? Fp(0, field) : a.num()(c) / a.den()(c);
            Poly<Fp> phic(std::move(spec));
            Poly<Fp> acc = phic;
            for (int k = 1; k < n; ++k) acc = phic.compose(acc);
            acc = acc - Poly<Fp>::constant(ac);
            if (is_irreducible_fp(acc)) {
                cert.status = CertStatus::certified;
                cert.method = "specialization";
                cert.witness = "t=" + c.to_string();
                return cert;
            }
        }
    }
    return cert;
}

}  // namespace dynprim
