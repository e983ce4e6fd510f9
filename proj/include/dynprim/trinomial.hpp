#pragma once
// Trinomials f(x) = x^d + A x^s + B over a rational function field K = k(t):
// the closed discriminant formula, and checklist evaluators for the
// ramification-transposition criteria and the maximality (wreath-layer)
// conditions at caller-supplied places of K.
//
// The checkers verify hypotheses only; every emitted conclusion is worded as
// contingent on the group- or ramification-theoretic statement it feeds.

#include <numeric>
#include <string>
#include <vector>

#include "dynpoly.hpp"
#include "errors.hpp"
#include "irreducibility.hpp"
#include "places.hpp"
#include "poly.hpp"
#include "ratfunc.hpp"

namespace dynprim {

// ---------------------------------------------------------------------------
// The trinomial itself
// ---------------------------------------------------------------------------

template <CoeffField F>
struct Trinomial {
    using K = RatFunc<F>;

    long d;
    long s;
    K A;
    K B;
    long gcd_ds;

    Trinomial(long d_, long s_, K A_, K B_)
        : d(d_), s(s_), A(std::move(A_)), B(std::move(B_)), gcd_ds(std::gcd(d_, s_)) {
        if (!(d > s && s >= 1)) throw InputError("trinomial needs exponents d > s >= 1");
        if (A.is_zero() && B.is_zero()) {
            throw InputError("trinomial needs A or B nonzero to fix the coefficient field");
        }
        if (one().times_int(d * s * (d - s)).is_zero()) {
            throw BadCharacteristic("d*s*(d-s) = " + std::to_string(d * s * (d - s)) +
                                    " vanishes in the coefficient field");
        }
    }

    // A unit of K taken from whichever of A, B carries field context.
    K one() const { return A.is_zero() ? B.one() : A.one(); }

    // f as a polynomial in x.
    Poly<K> in_x() const {
        std::vector<K> c(static_cast<std::size_t>(d) + 1, one().zero());
        c[0] = B;
        c[static_cast<std::size_t>(s)] = A;
        c[static_cast<std::size_t>(d)] = one();
        return Poly<K>(std::move(c));
    }

    // f as a dynamical polynomial (degree d >= 2 always holds).
    DynPoly<F> as_dynpoly() const { return DynPoly<F>(in_x()); }
};

// Recognize x^d + A x^s + B from a generic polynomial in x.  The input must
// be monic of degree >= 2 with exactly one nonzero coefficient strictly
// between the leading term and the constant term.
template <CoeffField F>
Trinomial<F> trinomial_from_poly(const Poly<RatFunc<F>>& f) {
    const int d = f.degree();
    if (d < 2) throw InputError("a trinomial has degree >= 2 in x");
    if (!f[static_cast<std::size_t>(d)].is_one())
        throw InputError("a trinomial is monic in x; leading coefficient is " +
                         f[static_cast<std::size_t>(d)].to_string());
    long s = -1;
    for (int i = 1; i < d; ++i) {
        if (f[static_cast<std::size_t>(i)].is_zero()) continue;
        if (s != -1)
            throw InputError("not a trinomial: nonzero coefficients at both x^" + std::to_string(s) +
                             " and x^" + std::to_string(i));
        s = i;
    }
    if (s == -1) throw InputError("not a trinomial: no middle term A*x^s with 1 <= s < d");
    return Trinomial<F>(d, s, f[static_cast<std::size_t>(s)], f[0]);
}

// Closed discriminant formula for x^d + A x^s + B:
//   (-1)^{d(d-1)/2} B^{s-1} (d^d B^{d-s} + (-1)^{d-1} (d-s)^{d-s} s^s A^d).
template <CoeffField F>
RatFunc<F> trinomial_disc(const Trinomial<F>& T) {
    using K = RatFunc<F>;
    const K one = T.one();
    auto int_pow = [&](long base, long e) {
        return field_pow(one.times_int(base), static_cast<std::uint64_t>(e));
    };
    K lead = int_pow(T.d, T.d) * field_pow(T.B, static_cast<std::uint64_t>(T.d - T.s));
    K tail = int_pow(T.d - T.s, T.d - T.s) * int_pow(T.s, T.s) *
             field_pow(T.A, static_cast<std::uint64_t>(T.d));
    if ((T.d - 1) % 2 != 0) tail = -tail;
    K disc = field_pow(T.B, static_cast<std::uint64_t>(T.s - 1)) * (lead + tail);
    if ((T.d * (T.d - 1) / 2) % 2 != 0) disc = -disc;
    return disc;
}

// ---------------------------------------------------------------------------
// Shared helpers: simple-root verification and the conjugate-critical product
// ---------------------------------------------------------------------------

namespace detail {

// Order of vanishing of g at beta, by repeated synthetic division.
template <CoeffField F>
int root_multiplicity(const Poly<RatFunc<F>>& g, const RatFunc<F>& beta) {
    using K = RatFunc<F>;
    Poly<K> lin(std::vector<K>{-beta, beta.is_zero() ? g.lc().one() : beta.one()});
    Poly<K> rem = g;
    int m = 0;
    while (!rem.is_zero() && lin.divides(rem)) {
        rem = rem.exact_div(lin);
        ++m;
    }
    return m;
}

// The monic cofactor q1 with phi'(x) = lc * (x - gamma) * q1(x).  Requires
// gamma to be a simple root of phi' (InputError otherwise): q1 then carries
// exactly the critical points other than gamma, with multiplicity.
template <CoeffField F>
Poly<RatFunc<F>> other_critical_cofactor(const DynPoly<F>& phi, const RatFunc<F>& gamma) {
    using K = RatFunc<F>;
    Poly<K> dphi = phi.dx();
    if (dphi.is_zero()) throw InseparableDerivative("phi' vanishes identically");
    if (root_multiplicity(dphi, gamma) != 1) {
        throw InputError("gamma must be a critical point of multiplicity one");
    }
    const K one = dphi.lc().one();
    Poly<K> monic = dphi.scaled(dphi.lc().inv());
    return monic.exact_div(Poly<K>(std::vector<K>{-gamma, one}));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Ramification-transposition checklist for the trinomial itself
// ---------------------------------------------------------------------------

struct TranspositionChecklist {
    bool coprime_exponents = false;   // gcd(d, s) = 1
    bool degrees_unit = false;        // d*s*(d-s) invertible (holds by construction)
    bool ab_unit = false;             // v(A) = v(B) = 0 at the place
    long ab_valuation = 0;            // v(A) + v(B) when both are nonzero
    bool disc_nonzero = false;
    long disc_valuation = 0;          // v(disc) when disc != 0
    bool disc_divides = false;        // v(disc) > 0
    bool disc_odd = false;            // odd v(disc) forces ramification
    IrreducibilityCertificate irreducibility;
    bool all_pass = false;
    std::string conclusion;
};

// Evaluates, at one finite place of k(t), the hypotheses under which inertia
// above the place acts on the roots of the trinomial by a transposition.
template <CoeffField F>
TranspositionChecklist transposition_hypotheses(const Trinomial<F>& T, const PrimeDivisor<F>& place,
                                                std::uint64_t cap = kDefaultDegreeCap) {
    TranspositionChecklist out;
    out.coprime_exponents = T.gcd_ds == 1;
    out.degrees_unit = true;  // checked at construction

    if (!T.A.is_zero() && !T.B.is_zero()) {
        long va = valuation(T.A, place);
        long vb = valuation(T.B, place);
        out.ab_valuation = va + vb;
        out.ab_unit = va == 0 && vb == 0;
    }

    RatFunc<F> disc = trinomial_disc(T);
    out.disc_nonzero = !disc.is_zero();
    if (out.disc_nonzero) {
        out.disc_valuation = valuation(disc, place);
        out.disc_divides = out.disc_valuation > 0;
        out.disc_odd = out.disc_divides && out.disc_valuation % 2 != 0;
    }

    out.irreducibility = certify_iterate_irreducible(T.as_dynpoly(), T.one().zero(), 1, cap);

    out.all_pass = out.coprime_exponents && out.ab_unit && out.disc_nonzero && out.disc_divides;
    if (!out.all_pass) {
        std::string failed;
        auto add = [&](bool ok, const char* name) {
            if (ok) return;
            if (!failed.empty()) failed += ", ";
            failed += name;
        };
        add(out.coprime_exponents, "coprime exponents");
        add(out.ab_unit, "v(A) = v(B) = 0");
        add(out.disc_nonzero, "nonzero discriminant");
        add(out.disc_divides, "place divides discriminant");
        out.conclusion = "hypotheses not satisfied (" + failed + "); no inertia conclusion";
    } else {
        out.conclusion = "inertia above " + place.to_string() +
                         " acts by a transposition on the roots";
        if (out.disc_odd) {
            out.conclusion += " (ramification certified by the odd discriminant valuation)";
        } else {
            out.conclusion += ", contingent on the place ramifying in the splitting field";
        }
        if (out.irreducibility.status != CertStatus::certified) {
            out.conclusion += "; contingent on irreducibility of the trinomial";
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Transposition criterion along the critical orbit of an iterate
// ---------------------------------------------------------------------------

struct DynTranspositionReport {
    int n = 0;
    std::string place;
    bool integral_model = false;     // v >= 0 for A, B and gamma at the place
    long gamma_valuation = 0;        // v(phi^n(gamma))
    bool odd_valuation = false;      // condition (a)
    long a_valuation = 0;            // v(A)
    long zero_orbit_valuation = 0;   // v(phi^n(0))
    long others_valuation = 0;       // v of the product of phi^n over the other
                                     // critical points (conjugates included)
    bool unit_product = false;       // condition (b)
    IrreducibilityCertificate irreducibility;  // for phi^n
    bool pass = false;
    std::string conclusion;
};

// For a trinomial iterate phi^n (n >= 2) and a simple critical point gamma in
// K, checks at the supplied place:
//   (a) v(phi^n(gamma)) is odd;
//   (b) v(d * A * phi^n(delta) * phi^n(0)) = 0 for every other critical delta.
// Conjugate critical points are handled through the resultant of phi^n with
// the cofactor of phi' carrying them: once the model is integral at the place,
// the product of their phi^n-values is a unit exactly when each factor is.
// Throws MissingIrreducibility when no irreducibility certificate for phi^n
// is available, since the conclusion is empty without one.
template <CoeffField F>
DynTranspositionReport dyn_transposition_check(const Trinomial<F>& T, const RatFunc<F>& gamma,
                                               int n, const PrimeDivisor<F>& place,
                                               std::uint64_t cap = kDefaultDegreeCap) {
    using K = RatFunc<F>;
    if (n < 2) throw InputError("dyn_transposition_check needs n >= 2");
    DynPoly<F> phi = T.as_dynpoly();
    Poly<K> cofactor = detail::other_critical_cofactor(phi, gamma);  // also verifies e(gamma)=1

    DynTranspositionReport out;
    out.n = n;
    out.place = place.to_string();

    out.irreducibility = certify_iterate_irreducible(phi, T.one().zero(), n, cap);
    if (out.irreducibility.status != CertStatus::certified) {
        throw MissingIrreducibility("no irreducibility certificate for the iterate phi^" +
                                    std::to_string(n));
    }

    auto nonneg = [&](const K& v) { return v.is_zero() || valuation(v, place) >= 0; };
    out.integral_model = nonneg(T.A) && nonneg(T.B) && nonneg(gamma);

    const K zero = T.one().zero();
    out.gamma_valuation = valuation(orbit_values(phi, gamma, n, cap).back(), place);
    out.odd_valuation = out.gamma_valuation % 2 != 0;

    bool a_unit = false;
    if (!T.A.is_zero()) {
        out.a_valuation = valuation(T.A, place);
        a_unit = out.a_valuation == 0;
    }
    out.zero_orbit_valuation = valuation(orbit_values(phi, zero, n, cap).back(), place);
    if (cofactor.degree() >= 1) {
        Poly<K> iterate_poly = phi.iterate(n, cap).in_x();
        out.others_valuation = valuation(resultant(cofactor, iterate_poly), place);
    }
    out.unit_product =
        a_unit && out.zero_orbit_valuation == 0 && out.others_valuation == 0 && out.integral_model;

    out.pass = out.odd_valuation && out.unit_product;
    if (out.pass) {
        out.conclusion = "for every root alpha of phi^" + std::to_string(n - 1) +
                         ", the Galois group of phi(x) - alpha over K(alpha) contains a "
                         "transposition";
    } else if (!out.odd_valuation) {
        out.conclusion = "condition (a) fails: v(phi^n(gamma)) = " +
                         std::to_string(out.gamma_valuation) + " is even";
    } else if (!out.integral_model) {
        out.conclusion = "condition (b) fails: the model is not integral at the place";
    } else {
        out.conclusion = "condition (b) fails: the critical product is not a unit at the place";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Maximality (wreath-layer) conditions along the critical orbits
// ---------------------------------------------------------------------------

struct MaximalityReport {
    int n = 0;
    std::string place;
    bool integral_model = false;
    std::vector<long> gamma_valuations;  // v(phi^m(gamma)) for m = 1..n
    bool primitive = false;              // condition (1): fresh divisor at level n
    bool others_unit = false;            // condition (2): other critical orbits are units
    bool pass = false;
    std::string conclusion;
};

// Conditions under which the place (a primitive prime divisor of the gamma
// orbit at level n, staying away from the other critical orbits up to level n)
// promotes one transposition layer to the full wreath layer:
//   (1) v(phi^m(gamma)) = 0 for 1 <= m < n and v(phi^n(gamma)) > 0;
//   (2) v(phi^m(delta)) = 0 for every other critical delta and 1 <= m <= n.
template <CoeffField F>
MaximalityReport maximality_conditions(const Trinomial<F>& T, const RatFunc<F>& gamma, int n,
                                       const PrimeDivisor<F>& place,
                                       std::uint64_t cap = kDefaultDegreeCap) {
    using K = RatFunc<F>;
    if (n < 1) throw InputError("maximality_conditions needs n >= 1");
    DynPoly<F> phi = T.as_dynpoly();
    Poly<K> cofactor = detail::other_critical_cofactor(phi, gamma);

    MaximalityReport out;
    out.n = n;
    out.place = place.to_string();

    auto nonneg = [&](const K& v) { return v.is_zero() || valuation(v, place) >= 0; };
    out.integral_model = nonneg(T.A) && nonneg(T.B) && nonneg(gamma);

    out.primitive = true;
    for (const K& value : orbit_values(phi, gamma, n, cap)) {
        out.gamma_valuations.push_back(valuation(value, place));
    }
    for (std::size_t m = 0; m + 1 < out.gamma_valuations.size(); ++m) {
        if (out.gamma_valuations[m] != 0) out.primitive = false;
    }
    if (out.gamma_valuations.back() <= 0) out.primitive = false;

    out.others_unit = out.integral_model;
    if (cofactor.degree() >= 1) {
        Poly<K> acc = phi.in_x();
        for (int m = 1; m <= n; ++m) {
            if (valuation(resultant(cofactor, acc), place) != 0) {
                out.others_unit = false;
                break;
            }
            if (m < n) acc = phi.in_x().compose(acc);
        }
    }

    out.pass = out.primitive && out.others_unit;
    if (out.pass) {
        out.conclusion =
            "the layer group Gal(K_n / K_{n-1}) is the full power (S_d)^(d^(n-1)), contingent "
            "on the one-level group over K(alpha) being S_d (prime degree, transitivity, and a "
            "transposition suffice)";
    } else if (!out.primitive) {
        out.conclusion = "the place is not a primitive prime divisor of the gamma orbit at level " +
                         std::to_string(n);
    } else {
        out.conclusion = "a critical orbit other than gamma's meets the place by level " +
                         std::to_string(n);
    }
    return out;
}

}  // namespace dynprim
