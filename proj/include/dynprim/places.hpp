#pragma once

// Places of k(t) and their valuations: a finite place is a monic irreducible
// pi in k[t] with v_pi the order of vanishing; the infinite place has
// v_inf(f) = deg(den) - deg(num).  Every valuation is normalized so that the
// product formula  sum_v deg(v) * v(x) = 0  holds (deg(inf) = 1).

#include <optional>
#include <string>
#include <utility>

#include "dynprim/errors.hpp"
#include "dynprim/poly.hpp"
#include "dynprim/ratfunc.hpp"

namespace dynprim {

template <CoeffField F>
struct PrimeDivisor {
    // Monic irreducible polynomial for a finite place; nullopt = infinity.
    std::optional<Poly<F>> finite;

    static PrimeDivisor at_infinity() { return {std::nullopt}; }
    static PrimeDivisor at(Poly<F> pi) {
        assert(!pi.is_zero() && pi.degree() >= 1);
        if (!pi.is_monic()) pi = pi.monic();
        return {std::move(pi)};
    }

    bool is_infinite() const { return !finite.has_value(); }
    int degree() const { return finite ? finite->degree() : 1; }

    bool operator==(const PrimeDivisor& o) const {
        if (is_infinite() || o.is_infinite()) return is_infinite() == o.is_infinite();
        return *finite == *o.finite;
    }
    bool operator<(const PrimeDivisor& o) const {
        // Infinity sorts last.
        if (is_infinite()) return false;
        if (o.is_infinite()) return true;
        return *finite < *o.finite;
    }

    std::string to_string(const std::string& var = "t") const {
        return finite ? finite->to_string(var) : "infinity";
    }
};

// Order of pi in a nonzero polynomial.
template <CoeffField F>
long valuation(const Poly<F>& f, const Poly<F>& pi) {
    if (f.is_zero()) throw ZeroInput("valuation of the zero polynomial");
    assert(pi.degree() >= 1);
    long v = 0;
    Poly<F> rem = f;
    while (rem.degree() >= pi.degree()) {
        Poly<F> q, r;
        Poly<F>::divmod(rem, pi, q, r);
        if (!r.is_zero()) break;
        rem = std::move(q);
        ++v;
    }
    return v;
}

template <CoeffField F>
long valuation(const RatFunc<F>& x, const PrimeDivisor<F>& place) {
    if (x.is_zero()) throw ZeroInput("valuation of zero");
    if (place.is_infinite()) return x.den().degree() - x.num().degree();
    // num and den are coprime, so only one side carries pi.
    long vn = valuation(x.num(), *place.finite);
    if (vn > 0) return vn;
    return -valuation(x.den(), *place.finite);
}

}  // namespace dynprim
