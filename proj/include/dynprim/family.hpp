#pragma once
// The one-parameter family phi_{p,B}(x) = x^p + A x^{p-1} + B with
//   A = (-p B^p - p B) / (p B^{p-1} + p - 1),
// chosen so that the simple critical point gamma = -(p-1)A/p satisfies
// phi^2(0) = gamma: both critical orbits collapse onto the orbit of 0.
//
// This header builds family members over any coefficient field where p(p-1)
// is invertible, certifies Eisenstein stability of the iterates at the place
// t (for B = t), tracks the integer numerators a_n of phi^n(gamma) over Q
// with the paper-trail checks attached to them, and assembles the
// surjectivity and finite-index certificate pipelines on top.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dynpoly.hpp"
#include "errors.hpp"
#include "fp.hpp"
#include "intpoly.hpp"
#include "irreducibility.hpp"
#include "poly.hpp"
#include "rat.hpp"
#include "ratfunc.hpp"
#include "riccati.hpp"

namespace dynprim {

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

template <CoeffField F>
struct FamilyPhi {
    long p;
    RatFunc<F> B;
    RatFunc<F> A;
    RatFunc<F> gamma;
    DynPoly<F> phi;
};

template <CoeffField F>
FamilyPhi<F> family_phi(long p, const RatFunc<F>& B) {
    using K = RatFunc<F>;
    if (p < 3 || !PrimeField::is_prime(static_cast<std::uint64_t>(p))) {
        throw InputError("family parameter p must be a prime >= 3");
    }
    if (static_cast<std::uint64_t>(p) >= kDefaultDegreeCap) {
        throw InputError("family prime exceeds the degree cap");
    }
    if (B.is_zero() || B.is_constant()) {
        throw ConstantB("family parameter B must be a nonconstant rational function");
    }
    const K one = B.one();
    if (one.times_int(p * (p - 1)).is_zero()) {
        throw BadCharacteristic("p(p-1) = " + std::to_string(p * (p - 1)) +
                                " must be invertible in the coefficient field");
    }

    K b_pm1 = field_pow(B, static_cast<std::uint64_t>(p - 1));
    K A = -(b_pm1 * B + B).times_int(p) / (b_pm1.times_int(p) + one.times_int(p - 1));
    // phi' = x^{p-2} (p x + (p-1) A); gamma is the simple root of the second
    // factor.  A != 0 here: A = 0 would force B^{p-1} = -1 with B nonconstant.
    K gamma = -A.times_int(p - 1) / one.times_int(p);

    std::vector<K> cx(static_cast<std::size_t>(p) + 1, one.zero());
    cx[0] = B;
    cx[static_cast<std::size_t>(p - 1)] = A;
    cx[static_cast<std::size_t>(p)] = one;
    DynPoly<F> phi{Poly<K>(std::move(cx))};

    if (gamma.is_zero() || !phi.dx()(gamma).is_zero()) {
        throw std::logic_error("family construction lost the simple critical point");
    }
    if (!(phi.evaluate(phi.evaluate(one.zero())) == gamma)) {
        throw std::logic_error("family invariant phi^2(0) = gamma failed");
    }
    return {p, B, A, gamma, std::move(phi)};
}

// ---------------------------------------------------------------------------
// Eisenstein stability of the iterates at the place t
// ---------------------------------------------------------------------------

struct StabilityLevel {
    int n;
    long constant_valuation;  // v_t(phi^n(0)); 1 on every certified level
};

struct StabilityCertificate {
    std::string place;  // always "t"
    std::vector<StabilityLevel> levels;
};

// Verifies, for each n <= n_max, the valuation pattern that makes phi^n
// Eisenstein at t: every non-leading coefficient has v_t >= 1 and the
// constant term has v_t exactly 1.  Once the level-1 coefficients all reduce
// to 0 mod t (phi is monic), reduction mod t is a ring map sending phi to
// x^p, so the non-constant pattern persists to every level; what remains to
// verify per level is the constant term, computed by value iteration mod t^2.
template <CoeffField F>
StabilityCertificate eisenstein_stability(const FamilyPhi<F>& fam, int n_max,
                                          std::uint64_t cap = kDefaultDegreeCap) {
    using K = RatFunc<F>;
    if (n_max < 1) throw InputError("eisenstein_stability needs n_max >= 1");
    std::uint64_t target = 1;
    for (int i = 0; i < n_max; ++i) {
        if (target > cap / static_cast<std::uint64_t>(fam.p)) {
            throw DegreeCapExceeded(UINT64_MAX, cap);
        }
        target *= static_cast<std::uint64_t>(fam.p);
    }

    const F fone = fam.B.is_zero() ? fam.B.den().lc().one() : fam.B.num().lc().one();
    Poly<F> pi(std::vector<F>{fone.times_int(0), fone});  // t

    // Level-1 coefficients: leading must be a t-unit, middles need v_t >= 1.
    const Poly<K>& px = fam.phi.in_x();
    PrimeDivisor<F> at_t = PrimeDivisor<F>::at(pi);
    if (valuation(px.lc(), at_t) != 0) {
        throw PatternBroken(1, fam.phi.degree(), "leading coefficient is not a t-unit");
    }
    for (int i = 1; i < fam.phi.degree(); ++i) {
        const K& c = px.get(static_cast<std::size_t>(i));
        if (c.is_zero()) continue;
        if (valuation(c, at_t) < 1) {
            throw PatternBroken(1, i, "coefficient is a t-unit");
        }
    }

    // Constant terms phi^n(0) by value iteration mod t^2.
    Poly<F> msq = pi * pi;
    auto coeffs = detail::phi_mod(fam.phi, msq);
    if (!coeffs) throw PatternBroken(1, 0, "a coefficient is not integral at t");

    StabilityCertificate cert{"t", {}};
    Poly<F> value;  // 0
    for (int n = 1; n <= n_max; ++n) {
        Poly<F> w = coeffs->back();
        for (std::size_t i = coeffs->size() - 1; i-- > 0;) {
            w = detail::mod_poly(w * value + (*coeffs)[i], msq);
        }
        value = w;
        bool unit = !w.is_zero() && !w[0].is_zero();
        if (unit) throw PatternBroken(n, 0, "constant term is a t-unit");
        if (w.is_zero()) throw PatternBroken(n, 0, "constant-term valuation exceeds 1");
        cert.levels.push_back({n, 1});
    }
    return cert;
}

// ---------------------------------------------------------------------------
// Exact orbits over Q(t): lowest-terms fractions without generic gcds
// ---------------------------------------------------------------------------

// A value of Q(t) in joint lowest terms: num and den have integer
// coefficients, share no polynomial factor and no integer content, and den
// has a positive leading coefficient.
struct OrbitFraction {
    Poly<Rat> num;
    Poly<Rat> den;
};

namespace detail {

// rho = p t^{p-1} + (p-1), the denominator of A for B = t.
inline Poly<Rat> family_rho(long p) {
    std::vector<Rat> c(static_cast<std::size_t>(p), Rat(0));
    c[0] = Rat(p - 1);
    c[static_cast<std::size_t>(p - 1)] = Rat(p);
    return Poly<Rat>(std::move(c));
}

// alpha = -p(t^p + t), the numerator of A for B = t (so A = alpha / rho).
inline Poly<Rat> family_alpha(long p) {
    std::vector<Rat> c(static_cast<std::size_t>(p) + 1, Rat(0));
    c[1] = Rat(-p);
    c[static_cast<std::size_t>(p)] = Rat(-p);
    return Poly<Rat>(std::move(c));
}

// Joint lowest-terms normalization of a fraction of integer-coefficient
// polynomials that already share no polynomial factor.
inline OrbitFraction normalize_contents(const Poly<Rat>& num, const Poly<Rat>& den) {
    if (num.is_zero()) {
        return {Poly<Rat>(), Poly<Rat>::constant(Rat(1))};
    }
    PrimitiveSplit sn = primitive_split(num);
    PrimitiveSplit sd = primitive_split(den);
    Rat scale = sn.content / sd.content;  // den keeps a positive leading coefficient
    return {sn.primitive.scaled(Rat(scale.num())), sd.primitive.scaled(Rat(scale.den()))};
}

}  // namespace detail

// Successive values phi^1(seed), ..., phi^steps(seed) for phi = phi_{p,t}
// over Q, each in joint lowest terms.  Clearing denominators against
//   x^p + (alpha/rho) x^{p-1} + t
// shows the only cancellation a step can introduce divides rho: the new
// numerator is rho u^p + alpha u^{p-1} v + t rho v^p, which no factor of v
// prime to rho can divide once gcd(u, v) = 1 and gcd(alpha, rho) = 1.  Each
// reduction is therefore a bounded sequence of small gcds against rho.
inline std::vector<OrbitFraction> family_orbit(const FamilyPhi<Rat>& fam, const OrbitFraction& seed,
                                               int steps, std::uint64_t cap = kDefaultDegreeCap) {
    const RatFunc<Rat> t_rf{Poly<Rat>(std::vector<Rat>{Rat(0), Rat(1)})};
    if (!(fam.B == t_rf)) throw InputError("exact family orbits need B = t");
    if (steps < 1) throw InputError("family_orbit needs steps >= 1");
    const long p = fam.p;
    const Poly<Rat> rho = detail::family_rho(p);
    const Poly<Rat> alpha = detail::family_alpha(p);
    const Poly<Rat> tpoly(std::vector<Rat>{Rat(0), Rat(1)});

    std::vector<OrbitFraction> out;
    out.reserve(static_cast<std::size_t>(steps));
    Poly<Rat> u = seed.num;
    Poly<Rat> v = seed.den;
    for (int k = 1; k <= steps; ++k) {
        std::uint64_t h = static_cast<std::uint64_t>(std::max(std::max(u.degree(), v.degree()), 0));
        if ((h + 1) * static_cast<std::uint64_t>(p) + static_cast<std::uint64_t>(p) > cap) {
            throw DegreeCapExceeded((h + 1) * static_cast<std::uint64_t>(p), cap);
        }
        Poly<Rat> u_pm1 = u.pow(static_cast<std::size_t>(p - 1));
        Poly<Rat> v_pm1 = v.pow(static_cast<std::size_t>(p - 1));
        Poly<Rat> num = rho * (u_pm1 * u) + alpha * u_pm1 * v + tpoly * rho * (v_pm1 * v);
        Poly<Rat> den = rho * (v_pm1 * v);
        while (!num.is_zero()) {
            Poly<Rat> g = poly_gcd(num, rho);
            if (g.degree() < 1 || !g.divides(den)) break;
            num = num.exact_div(g);
            den = den.exact_div(g);
        }
        OrbitFraction x = detail::normalize_contents(num, den);
        u = x.num;
        v = x.den;
        out.push_back(std::move(x));
    }
    return out;
}

// ---------------------------------------------------------------------------
// The numerators a_n of phi^n(gamma) over Q(t), with their paper-trail checks
// ---------------------------------------------------------------------------

struct OrbitNumeratorTerm {
    int n;
    Poly<Rat> a;    // joint lowest-terms integer numerator of phi^n(gamma)
    Poly<Rat> den;  // the matching denominator: a positive constant times rho^k
    int rho_power;  // k
    long degree;    // deg a = p^{n+1}
    int mod_p_sign; // a mod p = sign * w, w the (n+2)-fold iterate of x^p + t at 0
};

struct OrbitNumeratorSequence {
    long p;
    Poly<Rat> rho;  // p t^{p-1} + (p-1)
    std::vector<OrbitNumeratorTerm> terms;  // n = 0 (the seed gamma) .. n_max
};

// Tracks a_n for n <= n_max and attaches the four bookkeeping checks:
//   (i)   the denominator is a rational constant times a power of rho;
//   (ii)  a_n mod p is (up to sign) the (n+2)-fold iterate of x^p + t at 0;
//   (iii) d/dt(a_n mod p) is a nonzero constant (so a_n mod p is square-free);
//   (iv)  deg(a_n) = p^{n+1}.
// Any failure raises CheckFailed naming the check and the level.
inline OrbitNumeratorSequence a_n_sequence(const FamilyPhi<Rat>& fam, int n_max,
                                           std::uint64_t cap = kDefaultDegreeCap) {
    if (n_max < 0) throw InputError("a_n_sequence needs n_max >= 0");
    const long p = fam.p;
    OrbitNumeratorSequence seq{p, detail::family_rho(p), {}};

    // Seed gamma = (p-1)(t^p + t) / rho, already in joint lowest terms.
    std::vector<Rat> gn(static_cast<std::size_t>(p) + 1, Rat(0));
    gn[1] = Rat(p - 1);
    gn[static_cast<std::size_t>(p)] = Rat(p - 1);
    OrbitFraction seed{Poly<Rat>(std::move(gn)), seq.rho};
    {
        RatFunc<Rat> seed_rf(seed.num, seed.den);
        if (!(seed_rf == fam.gamma)) throw InputError("a_n bookkeeping needs B = t");
    }

    std::vector<OrbitFraction> values{seed};
    if (n_max >= 1) {
        std::vector<OrbitFraction> orbit = family_orbit(fam, seed, n_max, cap);
        values.insert(values.end(), orbit.begin(), orbit.end());
    }

    const PrimeField mod_p(static_cast<std::uint64_t>(p));
    Poly<Fp> w;  // iterates of x^p + t at 0 over F_p
    Poly<Fp> tbar(std::vector<Fp>{Fp::from_int(0, mod_p), Fp::from_int(1, mod_p)});
    for (int j = 0; j < 2; ++j) w = w.pow(static_cast<std::size_t>(p)) + tbar;

    for (int n = 0; n <= n_max; ++n) {
        const OrbitFraction& x = values[static_cast<std::size_t>(n)];
        OrbitNumeratorTerm term;
        term.n = n;
        term.a = x.num;
        term.den = x.den;

        // (i) denominator shape.
        PrimitiveSplit ds = primitive_split(x.den);
        long k_deg = ds.primitive.degree();
        if (k_deg % (p - 1) != 0) throw CheckFailed("denominator", n);
        term.rho_power = static_cast<int>(k_deg / (p - 1));
        if (!(ds.primitive == seq.rho.pow(static_cast<std::size_t>(term.rho_power)))) {
            throw CheckFailed("denominator", n);
        }

        // (ii) mod-p identity, sign recorded.
        std::optional<Poly<Fp>> abar = reduce_mod(x.num, mod_p);
        if (!abar) throw CheckFailed("mod-p identity", n);
        if (*abar == w) {
            term.mod_p_sign = 1;
        } else if (*abar == -w) {
            term.mod_p_sign = -1;
        } else {
            throw CheckFailed("mod-p identity", n);
        }

        // (iii) derivative of the reduction is a nonzero constant.
        Poly<Fp> dbar = abar->derivative();
        if (dbar.is_zero() || dbar.degree() != 0) throw CheckFailed("derivative", n);

        // (iv) degree law; (ii) already forces deg(a_n mod p) = deg(a_n), so
        // the leading coefficient of a_n is coprime to p.
        term.degree = x.num.degree();
        long expected = 1;
        for (int j = 0; j <= n; ++j) {
            if (static_cast<std::uint64_t>(expected) > cap / static_cast<std::uint64_t>(p)) {
                throw DegreeCapExceeded(UINT64_MAX, cap);
            }
            expected *= p;
        }
        if (term.degree != expected || abar->degree() != expected) {
            throw CheckFailed("degree", n);
        }

        seq.terms.push_back(std::move(term));
        w = w.pow(static_cast<std::size_t>(p)) + tbar;
    }
    return seq;
}

// ---------------------------------------------------------------------------
// Surjectivity certificate pipeline (B = t over Q)
// ---------------------------------------------------------------------------

struct SurjectivityLevel {
    int n;
    bool stability_cert;
    bool a_n_squarefree;
    bool degree_identity;
    bool degree_inequality;
    bool maximal_certified;
    std::string failure;  // empty when certified
};

struct SurjectivityReport {
    long p;
    int n_max;
    OrbitNumeratorSequence sequence;  // terms 0..n_max
    std::vector<SurjectivityLevel> levels;  // n = 2..n_max
};

// Runs the desk-scale certificate chain for phi_{p,t} over Q(t): Eisenstein
// stability of the iterates, square-freeness of a_n mod p (degree preserved,
// unit gcd with the derivative), the degree identity deg(a_n) = p^{n+1}, and
// the strict degree inequality
//   deg(a_n) > sum_{m<n} deg(a_m) + deg(t) + deg(gamma numerator),
// which leaves a fresh prime divisor of a_n over for the wreath-layer step.
// A level is maximal_certified when its four flags and all lower levels hold.
inline SurjectivityReport surjectivity_certificate(long p, int n_max,
                                                   std::uint64_t cap = kDefaultDegreeCap) {
    if (n_max < 2) throw InputError("surjectivity_certificate needs n_max >= 2");
    const RatFunc<Rat> t_rf{Poly<Rat>(std::vector<Rat>{Rat(0), Rat(1)})};
    FamilyPhi<Rat> fam = family_phi(p, t_rf);

    SurjectivityReport rep{p, n_max, a_n_sequence(fam, n_max, cap), {}};

    int stable_levels = 0;
    try {
        eisenstein_stability(fam, n_max, cap);
        stable_levels = n_max;
    } catch (const PatternBroken& broken) {
        stable_levels = broken.level - 1;
    }

    const PrimeField mod_p(static_cast<std::uint64_t>(p));
    bool lower_ok = true;
    for (int n = 2; n <= n_max; ++n) {
        const OrbitNumeratorTerm& term = rep.sequence.terms[static_cast<std::size_t>(n)];
        SurjectivityLevel lvl;
        lvl.n = n;
        lvl.stability_cert = n <= stable_levels;

        std::optional<Poly<Fp>> abar = reduce_mod(term.a, mod_p);
        lvl.a_n_squarefree = abar.has_value() && abar->degree() == term.a.degree() &&
                             poly_gcd(*abar, abar->derivative()).is_one();

        long expected = 1;
        for (int j = 0; j <= n; ++j) expected *= p;
        lvl.degree_identity = term.degree == expected;

        long bound = 1 + rep.sequence.terms[0].degree;  // deg(t) + deg(gamma numerator)
        for (int m = 0; m < n; ++m) bound += rep.sequence.terms[static_cast<std::size_t>(m)].degree;
        lvl.degree_inequality = term.degree > bound;

        bool here = lvl.stability_cert && lvl.a_n_squarefree && lvl.degree_identity &&
                    lvl.degree_inequality;
        lvl.maximal_certified = here && lower_ok;
        if (!lvl.maximal_certified) {
            if (!lvl.stability_cert) lvl.failure = "eisenstein stability";
            else if (!lvl.a_n_squarefree) lvl.failure = "a_n square-free mod p";
            else if (!lvl.degree_identity) lvl.failure = "degree identity";
            else if (!lvl.degree_inequality) lvl.failure = "degree inequality";
            else lvl.failure = "a lower level is not certified";
        }
        lower_ok = lower_ok && here;
        rep.levels.push_back(std::move(lvl));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Finite-index checklist for general nonconstant B
// ---------------------------------------------------------------------------

struct FiniteIndexChecklist {
    long p = 0;
    bool p_invertible = false;     // p(p-1) invertible in the coefficient field
    bool b_nonconstant = false;
    bool delta_nonzero = false;    // non-isotriviality invariant
    bool epsilon_nonzero = false;
    WanderingReport zero_orbit;
    WanderingReport gamma_orbit;
    bool zero_wandering = false;
    bool gamma_wandering = false;
    bool gamma_simple = false;     // e(gamma, phi) = 1
    bool all_pass = false;
    std::string conclusion;
};

template <CoeffField F>
FiniteIndexChecklist finite_index_report(long p, const RatFunc<F>& B,
                                         std::uint64_t cap = kDefaultDegreeCap) {
    if (p < 3 || !PrimeField::is_prime(static_cast<std::uint64_t>(p))) {
        throw InputError("family parameter p must be a prime >= 3");
    }
    if (B.num().is_zero() && B.den().is_zero()) {
        throw InputError("B must carry field context (construct it from a nonzero polynomial)");
    }
    FiniteIndexChecklist out;
    out.p = p;
    const RatFunc<F> one =
        B.is_zero() ? RatFunc<F>(Poly<F>::constant(B.den().lc().one())) : B.one();
    out.p_invertible = !one.times_int(p * (p - 1)).is_zero();
    out.b_nonconstant = !B.is_constant();

    if (out.p_invertible && out.b_nonconstant) {
        FamilyPhi<F> fam = family_phi(p, B);
        out.delta_nonzero = !delta_phi(fam.phi).is_zero();
        out.epsilon_nonzero = !epsilon_phi(fam.phi).is_zero();
        out.zero_orbit = wandering_certificate(fam.phi, one.zero(), 6, cap);
        out.gamma_orbit = wandering_certificate(fam.phi, fam.gamma, 6, cap);
        out.zero_wandering = out.zero_orbit.verdict == WanderingVerdict::wandering;
        out.gamma_wandering = out.gamma_orbit.verdict == WanderingVerdict::wandering;
        Poly<RatFunc<F>> dphi = fam.phi.dx();
        Poly<RatFunc<F>> lin(std::vector<RatFunc<F>>{-fam.gamma, one});
        out.gamma_simple = lin.divides(dphi) && !lin.divides(dphi.exact_div(lin));
    }

    out.all_pass = out.p_invertible && out.b_nonconstant && out.delta_nonzero &&
                   out.epsilon_nonzero && out.zero_wandering && out.gamma_wandering &&
                   out.gamma_simple;
    if (out.all_pass) {
        out.conclusion =
            "all hypotheses verified: the arboreal image over K has finite index, contingent on "
            "the primitive-prime-divisor theorem for wandering orbits of non-isotrivial maps";
    } else {
        auto name = [&]() -> const char* {
            if (!out.p_invertible) return "p(p-1) invertible";
            if (!out.b_nonconstant) return "B nonconstant";
            if (!out.delta_nonzero) return "delta nonzero";
            if (!out.epsilon_nonzero) return "epsilon nonzero";
            if (!out.zero_wandering) return "orbit of 0 wandering";
            if (!out.gamma_wandering) return "orbit of gamma wandering";
            return "gamma a simple critical point";
        };
        out.conclusion = std::string("hypothesis failed: ") + name() + "; no index conclusion";
    }
    return out;
}

}  // namespace dynprim
