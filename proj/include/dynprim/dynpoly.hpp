#pragma once

// Dynamical polynomials phi in K[x] over K = k(t): iteration (exact
// composition under a degree cap), evaluation, orbits, critical points, and
// the height toolbox (Weil height, canonical-height estimates, wandering
// certificates, minimal-iterate bounds).

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <vector>

#include "dynprim/errors.hpp"
#include "dynprim/factor.hpp"
#include "dynprim/intpoly.hpp"
#include "dynprim/places.hpp"
#include "dynprim/poly.hpp"
#include "dynprim/ratfunc.hpp"

namespace dynprim {

// Default cap on coefficients per polynomial (see CLI for the env override).
constexpr std::uint64_t kDefaultDegreeCap = 200000;

template <CoeffField F>
class DynPoly {
public:
    using K = RatFunc<F>;

    explicit DynPoly(Poly<K> in_x) : px_(std::move(in_x)) {
        if (px_.degree() < 2) throw InputError("dynamical polynomial needs degree >= 2 in x");
    }

    int degree() const { return px_.degree(); }
    const Poly<K>& in_x() const { return px_; }

    // Paper-style coefficient: A(i) multiplies x^{d-i}, A(0) leading.
    K A(int i) const {
        assert(i >= 0 && i <= degree());
        return px_.get(static_cast<std::size_t>(degree() - i));
    }

    K evaluate(const K& beta) const { return px_(beta); }

    // phi^n by exact composition; throws DegreeCapExceeded before any
    // oversized expansion is attempted.
    DynPoly iterate(int n, std::uint64_t cap = kDefaultDegreeCap) const {
        if (n < 1) throw InputError("iterate needs n >= 1");
        const std::uint64_t d = static_cast<std::uint64_t>(degree());
        std::uint64_t target = 1;
        for (int i = 0; i < n; ++i) {
            if (target > cap / d) throw DegreeCapExceeded(sat_pow(d, n), cap);
            target *= d;
        }
        if (target + 1 > cap) throw DegreeCapExceeded(target, cap);
        Poly<K> acc = px_;
        for (int i = 1; i < n; ++i) acc = px_.compose(acc);
        return DynPoly(std::move(acc));
    }

    // x-derivative phi'.
    Poly<K> dx() const { return px_.derivative(); }

    bool operator==(const DynPoly& o) const { return px_ == o.px_; }

private:
    static std::uint64_t sat_pow(std::uint64_t d, int n) {
        std::uint64_t v = 1;
        for (int i = 0; i < n; ++i) {
            if (v > UINT64_MAX / d) return UINT64_MAX;
            v *= d;
        }
        return v;
    }

    Poly<K> px_;
};

// ---------------------------------------------------------------------------
// Orbits
// ---------------------------------------------------------------------------

template <CoeffField F>
struct OrbitTable {
    RatFunc<F> base;                   // b
    RatFunc<F> shift;                  // a
    std::vector<RatFunc<F>> shifted;   // shifted[k] = phi^{k+1}(b) - a
    std::vector<long> heights;         // heights[k] = h(phi^{k+1}(b))
};

// Successive values phi(b), phi^2(b), ..., phi^n(b) (no compositions).
template <CoeffField F>
std::vector<RatFunc<F>> orbit_values(const DynPoly<F>& phi, const RatFunc<F>& b, int n,
                                     std::uint64_t cap = kDefaultDegreeCap) {
    std::vector<RatFunc<F>> out;
    out.reserve(static_cast<std::size_t>(n));
    RatFunc<F> x = b;
    for (int k = 1; k <= n; ++k) {
        x = phi.evaluate(x);
        std::uint64_t h = static_cast<std::uint64_t>(weil_height(x));
        if (h + 1 > cap) throw DegreeCapExceeded(h + 1, cap);
        out.push_back(x);
    }
    return out;
}

template <CoeffField F>
OrbitTable<F> make_orbit(const DynPoly<F>& phi, const RatFunc<F>& b, const RatFunc<F>& a, int n,
                         std::uint64_t cap = kDefaultDegreeCap) {
    OrbitTable<F> table{b, a, {}, {}};
    for (RatFunc<F>& v : orbit_values(phi, b, n, cap)) {
        table.heights.push_back(weil_height(v));
        table.shifted.push_back(v - a);
    }
    return table;
}

// ---------------------------------------------------------------------------
// Critical points
// ---------------------------------------------------------------------------

template <CoeffField F>
struct CriticalPoint {
    RatFunc<F> point;
    int multiplicity;  // order of vanishing of phi' at the point
};

template <CoeffField F>
struct CriticalPointsResult {
    std::vector<CriticalPoint<F>> points;
    // Set when deg phi' exceeds the weighted count of K-rational roots found:
    // the remaining critical points live in a proper extension of K (or past
    // the enumeration budget).
    bool non_rational_remainder;
};

namespace detail {

// Monic divisors of f assembled from its irreducible factorization, capped.
inline std::vector<Poly<Fp>> monic_divisors(const Poly<Fp>& f, std::size_t cap) {
    FpFactorization fz = factor_fp(f);
    std::vector<Poly<Fp>> divs{Poly<Fp>::constant(f.lc().one())};
    for (const auto& [g, mult] : fz.factors) {
        std::size_t base = divs.size();
        if (base * static_cast<std::size_t>(mult + 1) > cap) return divs;
        Poly<Fp> gk = Poly<Fp>::constant(f.lc().one());
        for (int k = 1; k <= mult; ++k) {
            gk = gk * g;
            for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * gk);
        }
    }
    return divs;
}

// K-rational root candidates of a nonconstant g in K[x] whose constant term
// is nonzero, by the rational-root bound over k[t].  Returns candidates only;
// the caller verifies.  `complete` reports whether the candidate list
// provably covers every K-rational root.
template <CoeffField F>
std::pair<std::vector<RatFunc<F>>, bool> root_candidates(const Poly<RatFunc<F>>& g) {
    using K = RatFunc<F>;
    // Clear coefficient denominators: G = l * g has coefficients in k[t].
    Poly<F> l = Poly<F>::constant(g.lc().den().lc().one());
    for (std::size_t i = 0; i <= static_cast<std::size_t>(g.degree()); ++i) {
        K c = g.get(i);
        if (c.is_zero()) continue;
        Poly<F> den = c.den();
        Poly<F> common = poly_gcd(l, den);
        l = l * den.exact_div(common);
    }
    std::vector<Poly<F>> coef;
    for (std::size_t i = 0; i <= static_cast<std::size_t>(g.degree()); ++i) {
        K c = g.get(i) * K(l);
        assert(c.is_polynomial());
        coef.push_back(c.num());
    }
    const Poly<F>& c0 = coef.front();
    const Poly<F>& cd = coef.back();
    assert(!c0.is_zero() && !cd.is_zero());

    std::vector<K> cands;
    bool complete = true;
    if constexpr (std::is_same_v<F, Fp>) {
        constexpr std::size_t kDivCap = 512;
        constexpr std::size_t kCandCap = 50000;
        std::vector<Poly<Fp>> nums = monic_divisors(c0, kDivCap);
        std::vector<Poly<Fp>> dens = monic_divisors(cd, kDivCap);
        if (nums.size() >= kDivCap || dens.size() >= kDivCap) complete = false;
        const std::uint64_t p = c0.lc().modulus();
        PrimeField field(p);
        if (nums.size() * dens.size() * (p - 1) > kCandCap) {
            complete = false;
            std::size_t keep = std::max<std::size_t>(1, kCandCap / (dens.size() * (p - 1)));
            if (nums.size() > keep) nums.resize(keep);
        }
        for (const Poly<Fp>& u : nums) {
            for (const Poly<Fp>& w : dens) {
                for (std::uint64_t s = 1; s < p; ++s) {
                    cands.emplace_back(u.scaled(Fp(s, field)), w);
                }
            }
        }
    } else if constexpr (std::is_same_v<F, Rat>) {
        // Only constant roots are reachable over Q(t): a constant beta is a
        // root of g iff it is a common root of the t-coefficient polynomials.
        int tdeg = 0;
        for (const Poly<F>& c : coef) tdeg = std::max(tdeg, c.degree());
        Poly<Rat> common;
        for (int j = 0; j <= tdeg; ++j) {
            std::vector<Rat> xs;
            for (const Poly<F>& c : coef) xs.push_back(j <= c.degree() ? c[static_cast<std::size_t>(j)] : Rat(0));
            Poly<Rat> hj(std::move(xs));
            common = common.is_zero() ? hj : poly_gcd(common, hj);
            if (!common.is_zero() && common.degree() == 0) break;
        }
        if (!common.is_zero() && common.degree() >= 1) {
            RationalRoots rr = rational_roots(common);
            for (const auto& [r, mult] : rr.roots) {
                cands.push_back(K::from_scalar(r));
            }
        }
        // Non-constant roots over Q(t) are out of reach for this search.
        complete = g.degree() == 0;
        (void)cd;
    } else {
        complete = false;
    }
    return {cands, complete};
}

}  // namespace detail

template <CoeffField F>
CriticalPointsResult<F> critical_points(const DynPoly<F>& phi) {
    using K = RatFunc<F>;
    Poly<K> dphi = phi.dx();
    if (dphi.is_zero()) throw InseparableDerivative("phi' vanishes identically");

    const K kzero = phi.A(0).zero();
    const K kone = phi.A(0).one();
    std::map<K, int> mults;
    auto record = [&](const K& beta) {
        if (mults.count(beta)) return;
        // Multiplicity by synthetic division on phi' itself.
        Poly<K> lin(std::vector<K>{-beta, kone});
        Poly<K> rem = dphi;
        int m = 0;
        while (!rem.is_zero() && lin.divides(rem)) {
            rem = rem.exact_div(lin);
            ++m;
        }
        if (m > 0) mults[beta] = m;
    };

    // Root at 0: order = index of the first nonzero coefficient.
    if (dphi[0].is_zero()) record(kzero);

    // Strip x^k and decompose what is left.
    Poly<K> core = dphi;
    std::size_t shift = 0;
    while (core[0].is_zero()) {
        std::vector<K> c(core.coeffs().begin() + 1, core.coeffs().end());
        core = Poly<K>(std::move(c));
        ++shift;
    }

    if (core.degree() >= 1) {
        SquarefreeDecomposition<K> sf = squarefree_decomposition(core);
        std::vector<SquarefreePart<K>> blocks = sf.parts;
        for (const auto& u : sf.unresolved) blocks.push_back(u);
        for (const auto& part : blocks) {
            if (part.factor.degree() == 1) {
                // Monic linear factor x + c: root -c.
                record(-part.factor[0]);
                continue;
            }
            auto [cands, complete] = detail::root_candidates(part.factor);
            (void)complete;  // the remainder marker below is multiplicity-based
            for (const K& beta : cands) {
                if (part.factor(beta).is_zero()) record(beta);
            }
        }
    }

    CriticalPointsResult<F> out{{}, false};
    long total = 0;
    for (const auto& [beta, m] : mults) {
        out.points.push_back({beta, m});
        total += m;
    }
    out.non_rational_remainder = total < dphi.degree();
    return out;
}

// ---------------------------------------------------------------------------
// Heights
// ---------------------------------------------------------------------------

// One-step height defect bound C_phi = (d+1) * max_i h(A_i) + d, used by the
// wandering certificate and asserted empirically by the property tests.
template <CoeffField F>
long height_defect_bound(const DynPoly<F>& phi) {
    long hmax = 0;
    for (int i = 0; i <= phi.degree(); ++i) hmax = std::max(hmax, weil_height(phi.A(i)));
    return (phi.degree() + 1) * hmax + phi.degree();
}

struct HeightEstimate {
    Rat estimate;  // h(phi^n(beta)) / d^n
    Rat error;     // C / d^n, C = max one-step defect seen on the segment
};

template <CoeffField F>
HeightEstimate canonical_height_estimate(const DynPoly<F>& phi, const RatFunc<F>& beta, int n,
                                         std::uint64_t cap = kDefaultDegreeCap) {
    if (n < 1) throw InputError("canonical_height_estimate needs n >= 1");
    const long d = phi.degree();
    long defect = 0;
    long h_prev = weil_height(beta);
    RatFunc<F> x = beta;
    long h_last = h_prev;
    for (int k = 1; k <= n; ++k) {
        x = phi.evaluate(x);
        h_last = weil_height(x);
        if (static_cast<std::uint64_t>(h_last) + 1 > cap) {
            throw DegreeCapExceeded(static_cast<std::uint64_t>(h_last) + 1, cap);
        }
        defect = std::max(defect, std::abs(h_last - d * h_prev));
        h_prev = h_last;
    }
    Rat dn = Rat(1);
    for (int k = 0; k < n; ++k) dn = dn.times_int(d);
    return {Rat(h_last) / dn, Rat(defect) / dn};
}

enum class WanderingVerdict { wandering, preperiodic, unknown };

struct WanderingReport {
    WanderingVerdict verdict = WanderingVerdict::unknown;
    // preperiodic: phi^{preperiod + period}(b) = phi^{preperiod}(b).
    int preperiod = -1;
    int period = -1;
    // wandering: first k with h(x_k) - h(x_{k-1}) > defect_bound; growth is
    // then permanent, since h(x_k) > C >= C/(d-1) forces h to keep climbing.
    int witness_index = -1;
    long defect_bound = 0;
};

template <CoeffField F>
WanderingReport wandering_certificate(const DynPoly<F>& phi, const RatFunc<F>& b, int window,
                                      std::uint64_t cap = kDefaultDegreeCap) {
    if (window < 2) throw InputError("wandering_certificate needs window >= 2");
    WanderingReport rep;
    rep.defect_bound = height_defect_bound(phi);
    std::vector<RatFunc<F>> seen{b};
    std::vector<long> h{weil_height(b)};
    for (int k = 1; k <= window; ++k) {
        RatFunc<F> x = phi.evaluate(seen.back());
        if (static_cast<std::uint64_t>(weil_height(x)) + 1 > cap) {
            throw DegreeCapExceeded(static_cast<std::uint64_t>(weil_height(x)) + 1, cap);
        }
        for (std::size_t j = 0; j < seen.size(); ++j) {
            if (seen[j] == x) {
                rep.verdict = WanderingVerdict::preperiodic;
                rep.preperiod = static_cast<int>(j);
                rep.period = k - static_cast<int>(j);
                return rep;
            }
        }
        seen.push_back(x);
        h.push_back(weil_height(x));
        if (h[static_cast<std::size_t>(k)] - h[static_cast<std::size_t>(k - 1)] > rep.defect_bound) {
            rep.verdict = WanderingVerdict::wandering;
            rep.witness_index = k;
            return rep;
        }
    }
    rep.verdict = WanderingVerdict::unknown;
    return rep;
}

// Smallest integer m with log_d(hhat_upper / hmin_lower) + 3 <= m, where
// hhat_upper is the upper end of the canonical-height bracket for a.
template <CoeffField F>
int min_iterate_bound(const DynPoly<F>& phi, const RatFunc<F>& a, const Rat& hmin_lower,
                      std::uint64_t cap = kDefaultDegreeCap) {
    if (!(Rat(0) < hmin_lower)) throw NonpositiveHeight("hmin_lower must be positive");
    constexpr int kSteps = 6;
    HeightEstimate est = canonical_height_estimate(phi, a, kSteps, cap);
    if (!(Rat(0) < est.estimate - est.error)) {
        throw NonpositiveHeight("canonical height bracket for a contains 0");
    }
    Rat ratio = (est.estimate + est.error) / hmin_lower;
    // Smallest e with d^e >= ratio, then m = e + 3.
    const long d = phi.degree();
    int e = 0;
    Rat power(1);
    if (power < ratio) {
        while (power < ratio) {
            power = power.times_int(d);
            ++e;
        }
    } else {
        while (!(power < ratio) && e > -64) {
            power = power / Rat(d);
            --e;
        }
        ++e;  // back to the smallest satisfying exponent
    }
    return e + 3;
}

}  // namespace dynprim
