#pragma once

// Primitive-prime-divisor bookkeeping for orbits over F_p(t).  Under the
// integral model (phi, a, b all with coefficients in F_p[t]) every
// c_n = phi^n(b) - a is a polynomial, so its support consists of finite
// places only; the scan factors each c_n, tracks the first level at which
// every place appears, and reports the levels whose primitive-prime list is
// empty (the Zsigmondy set restricted to the window), plus the refinement to
// primes appearing to odd valuation.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dynprim/dynpoly.hpp"
#include "dynprim/errors.hpp"
#include "dynprim/factor.hpp"
#include "dynprim/places.hpp"
#include "dynprim/poly.hpp"

namespace dynprim {

// c = u * d * y^2 with d square-free monic and y monic; unique with these
// normalizations.
struct SquarefreeSplit {
    Fp unit;
    Poly<Fp> sqfree;
    Poly<Fp> square;
};

inline SquarefreeSplit squarefree_part(const Poly<Fp>& c) {
    if (c.is_zero()) throw ZeroInput("squarefree part of the zero polynomial");
    SquarefreeDecomposition<Fp> sf = squarefree_decomposition(c);
    assert(sf.unresolved.empty() && "F_p is perfect");
    Poly<Fp> d = Poly<Fp>::constant(c.lc().one());
    Poly<Fp> y = d;
    for (const auto& part : sf.parts) {
        if (part.multiplicity % 2 == 1) d = d * part.factor;
        y = y * part.factor.pow(static_cast<std::uint64_t>(part.multiplicity / 2));
    }
    return {sf.unit, std::move(d), std::move(y)};
}

// Least level at which each place divides the orbit, plus the recorded
// per-level supports.
struct SupportTable {
    std::map<PrimeDivisor<Fp>, int> first_seen;
    std::vector<std::vector<std::pair<PrimeDivisor<Fp>, long>>> levels;  // levels[n-1]
};

struct ZsigmondyLevel {
    int n = 0;
    Poly<Fp> value;      // c_n = phi^n(b) - a
    long inf_valuation;  // v_infinity(c_n) = -deg(c_n); never positive
    std::vector<std::pair<PrimeDivisor<Fp>, long>> support;
    std::vector<PrimeDivisor<Fp>> primitive;
    std::vector<PrimeDivisor<Fp>> primitive_odd;
};

struct ZsigmondyReport {
    int range = 0;  // N
    std::vector<ZsigmondyLevel> levels;
    SupportTable support;
    std::vector<int> zsigmondy_set;      // n <= N with no primitive prime
    std::vector<int> zsigmondy_set_odd;  // n <= N with no odd-valuation primitive prime
};

inline ZsigmondyReport zsigmondy_scan(const DynPoly<Fp>& phi, const Poly<Fp>& a, const Poly<Fp>& b,
                                      int N, std::uint64_t seed = 0,
                                      std::uint64_t cap = kDefaultDegreeCap,
                                      bool assume_wandering = false) {
    if (N < 1) throw InputError("zsigmondy_scan needs N >= 1");
    const Poly<RatFunc<Fp>>& px = phi.in_x();
    for (std::size_t i = 0; i <= static_cast<std::size_t>(px.degree()); ++i) {
        if (!px.get(i).is_polynomial())
            throw InputError("integral model: phi must have coefficients in F_p[t]");
    }

    const RatFunc<Fp> base{b};
    if (!assume_wandering) {
        const int window = std::max(2, std::min(N, 6));
        WanderingReport w = wandering_certificate(phi, base, window, cap);
        if (w.verdict == WanderingVerdict::preperiodic) {
            throw PreperiodicBase("base point is preperiodic (preperiod " +
                                  std::to_string(w.preperiod) + ", period " +
                                  std::to_string(w.period) + ")");
        }
    }

    ZsigmondyReport rep;
    rep.range = N;
    const RatFunc<Fp> shift{a};
    RatFunc<Fp> x = base;
    for (int n = 1; n <= N; ++n) {
        x = phi.evaluate(x);
        const std::uint64_t h = static_cast<std::uint64_t>(weil_height(x));
        if (h + 1 > cap) throw DegreeCapExceeded(h + 1, cap);

        RatFunc<Fp> cval = x - shift;
        if (cval.is_zero()) {
            throw ZeroInput("phi^" + std::to_string(n) + "(b) equals a: the orbit hits the target");
        }
        assert(cval.is_polynomial());

        ZsigmondyLevel lvl;
        lvl.n = n;
        lvl.value = cval.num();
        lvl.inf_valuation = -lvl.value.degree();
        for (const auto& f : factor_fp(lvl.value, seed).factors) {
            PrimeDivisor<Fp> place = PrimeDivisor<Fp>::at(f.factor);
            lvl.support.emplace_back(place, static_cast<long>(f.multiplicity));
            if (rep.support.first_seen.emplace(place, n).second) {
                lvl.primitive.push_back(place);
                if (f.multiplicity % 2 == 1) lvl.primitive_odd.push_back(place);
            }
        }
        rep.support.levels.push_back(lvl.support);
        if (lvl.primitive.empty()) rep.zsigmondy_set.push_back(n);
        if (lvl.primitive_odd.empty()) rep.zsigmondy_set_odd.push_back(n);
        rep.levels.push_back(std::move(lvl));
    }
    return rep;
}

// The odd-valuation refinement alone: per-level primitive primes whose
// exponent in c_n is odd.
inline std::vector<std::vector<PrimeDivisor<Fp>>> odd_primitive_scan(
    const DynPoly<Fp>& phi, const Poly<Fp>& a, const Poly<Fp>& b, int N, std::uint64_t seed = 0,
    std::uint64_t cap = kDefaultDegreeCap, bool assume_wandering = false) {
    ZsigmondyReport rep = zsigmondy_scan(phi, a, b, N, seed, cap, assume_wandering);
    std::vector<std::vector<PrimeDivisor<Fp>>> out;
    out.reserve(rep.levels.size());
    for (auto& lvl : rep.levels) out.push_back(std::move(lvl.primitive_odd));
    return out;
}

}  // namespace dynprim
