#pragma once

// The rational function field K = k(t) over an exact coefficient field k.
// Values are kept reduced (gcd(num, den) = 1) with monic denominator, so
// equality is plain coefficient comparison.  RatFunc itself satisfies the
// CoeffField concept, which is what lets Poly<RatFunc<k>> model K[x].

#include <cassert>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "dynprim/errors.hpp"
#include "dynprim/intpoly.hpp"
#include "dynprim/poly.hpp"

namespace dynprim {

template <CoeffField F>
class RatFunc {
public:
    // Default: the zero function with no field context.  Only containers
    // should create these; arithmetic starts from the constructors below.
    RatFunc() = default;

    explicit RatFunc(Poly<F> num) : num_(std::move(num)) {
        if (!num_.is_zero()) den_ = Poly<F>::constant(num_.lc().one());
    }
    RatFunc(Poly<F> num, Poly<F> den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw ZeroInput("rational function with zero denominator");
        reduce();
    }
    static RatFunc from_scalar(const F& a) { return RatFunc(Poly<F>::constant(a)); }

    const Poly<F>& num() const { return num_; }
    // Denominator; for a default-constructed zero this is the zero
    // polynomial standing in for 1 (no context to build a real constant).
    const Poly<F>& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    bool is_polynomial() const { return num_.is_zero() || den_.is_one(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }

    // Constant value of a degree-0 function (num and den constant).
    F constant_value() const {
        assert(is_constant() && !is_zero());
        return num_[0] / den_[0];
    }

    RatFunc zero() const {
        if (num_.is_zero() && den_.is_zero()) return *this;  // context-free zero
        return RatFunc(Poly<F>(), den_or_one());
    }
    RatFunc one() const {
        Poly<F> o = den_or_one();
        assert(!o.is_zero() && "one() on a context-free zero");
        o = Poly<F>::constant(o.lc().one());
        return RatFunc(o, o);
    }

    unsigned long characteristic() const {
        assert(!den_.is_zero() || !num_.is_zero());
        return den_.is_zero() ? num_.lc().characteristic() : den_.lc().characteristic();
    }

    RatFunc operator+(const RatFunc& o) const {
        if (is_zero()) return o;
        if (o.is_zero()) return *this;
        const Poly<F>&b = den_, &d = o.den_;
        Poly<F> g = poly_gcd(b, d);
        if (g.degree() == 0) {
            // Coprime denominators: the sum is already reduced.
            return raw(num_ * d + o.num_ * b, b * d);
        }
        Poly<F> b1 = b.exact_div(g), d1 = d.exact_div(g);
        Poly<F> n = num_ * d1 + o.num_ * b1;
        if (n.is_zero()) return zero();
        Poly<F> h = poly_gcd(n, g);
        if (h.degree() > 0) {
            n = n.exact_div(h);
            g = g.exact_div(h);
        }
        return normalize(std::move(n), b1 * d1 * g);
    }
    RatFunc operator-(const RatFunc& o) const { return *this + (-o); }
    RatFunc operator-() const {
        RatFunc r = *this;
        r.num_ = -r.num_;
        return r;
    }
    RatFunc operator*(const RatFunc& o) const {
        if (is_zero()) return o.is_zero() ? o : raw(Poly<F>(), Poly<F>::constant(o.den_.lc().one()));
        if (o.is_zero()) return raw(Poly<F>(), Poly<F>::constant(den_.lc().one()));
        // Cross-cancel so the result needs no further gcd.
        Poly<F> g1 = poly_gcd(num_, o.den_);
        Poly<F> g2 = poly_gcd(o.num_, den_);
        Poly<F> n = num_.exact_div(g1) * o.num_.exact_div(g2);
        Poly<F> d = den_.exact_div(g2) * o.den_.exact_div(g1);
        return normalize(std::move(n), std::move(d));
    }
    RatFunc operator/(const RatFunc& o) const {
        if (o.is_zero()) throw ZeroInput("division by the zero rational function");
        return *this * o.reciprocal();
    }
    RatFunc reciprocal() const {
        if (is_zero()) throw ZeroInput("reciprocal of the zero rational function");
        return normalize(den_, num_);
    }

    RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
    RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
    RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }

    RatFunc inv() const { return reciprocal(); }

    RatFunc times_int(std::int64_t n) const {
        if (is_zero()) return *this;
        Poly<F> nn = num_.times_int(n);
        if (nn.is_zero()) return zero();  // characteristic divides n
        return raw(std::move(nn), den_);
    }

    // Powers preserve reducedness: coprime num/den stay coprime.
    RatFunc pow(std::uint64_t e) const {
        if (is_zero()) {
            assert(e > 0 && "0^0 is undefined");
            return *this;
        }
        return raw(num_.pow(e), den_.pow(e));
    }

    // d/dt by the quotient rule.  In characteristic p this lands in the
    // kernel exactly when num and den are polynomials in t^p.
    RatFunc d_dt() const {
        if (is_zero() || is_constant()) return is_zero() ? *this : zero();
        Poly<F> n = num_.derivative() * den_ - num_ * den_.derivative();
        return RatFunc(std::move(n), den_ * den_);
    }

    std::optional<RatFunc> try_pth_root() const {
        if (is_zero()) return *this;
        auto n = poly_pth_root(num_);
        if (!n) return std::nullopt;
        auto d = poly_pth_root(den_);
        if (!d) return std::nullopt;
        return raw(std::move(*n), std::move(*d));
    }

    bool operator==(const RatFunc& o) const {
        if (is_zero() || o.is_zero()) return is_zero() && o.is_zero();
        return num_ == o.num_ && den_ == o.den_;
    }
    bool operator!=(const RatFunc& o) const { return !(*this == o); }
    std::strong_ordering operator<=>(const RatFunc& o) const {
        if (auto c = num_.order(o.num_); c != 0) return c;
        return den_.order(o.den_);
    }

    std::string to_string(const std::string& var = "t") const;

private:
    // Invariant-preserving constructor for already-reduced pairs.
    static RatFunc raw(Poly<F> n, Poly<F> d) {
        RatFunc r;
        r.num_ = std::move(n);
        r.den_ = std::move(d);
        return r;
    }
    // Coprime pair, but denominator maybe not monic (or zero numerator).
    static RatFunc normalize(Poly<F> n, Poly<F> d) {
        if (n.is_zero()) return raw(std::move(n), Poly<F>::constant(d.lc().one()));
        if (!d.is_monic()) {
            F u = d.lc().inv();
            n = n.scaled(u);
            d = d.scaled(u);
        }
        return raw(std::move(n), std::move(d));
    }
    Poly<F> den_or_one() const {
        if (!den_.is_zero()) return den_;
        if (!num_.is_zero()) return Poly<F>::constant(num_.lc().one());
        return Poly<F>();
    }
    void reduce() {
        if (num_.is_zero()) {
            den_ = Poly<F>::constant(den_.lc().one());
            return;
        }
        Poly<F> g = poly_gcd(num_, den_);
        if (g.degree() > 0) {
            num_ = num_.exact_div(g);
            den_ = den_.exact_div(g);
        }
        if (!den_.is_monic()) {
            F u = den_.lc().inv();
            num_ = num_.scaled(u);
            den_ = den_.scaled(u);
        }
    }

    Poly<F> num_;
    Poly<F> den_;
};

namespace detail {

// Display form of num/den.  Over Q we rescale to coprime integer
// coefficients with a positive-leading-coefficient denominator, which round-
// trips through the parser and matches how humans write these down.
inline std::pair<Poly<Rat>, Poly<Rat>> display_pair(const Poly<Rat>& num, const Poly<Rat>& den) {
    PrimitiveSplit n = primitive_split(num);
    PrimitiveSplit d = primitive_split(den);
    Rat ratio = n.content / d.content;  // num/den = ratio * (n.prim / d.prim)
    mpz_class rn = ratio.num(), rd = ratio.den();
    return {n.primitive.scaled(Rat(rn)), d.primitive.scaled(Rat(rd))};
}
template <CoeffField F>
std::pair<Poly<F>, Poly<F>> display_pair(const Poly<F>& num, const Poly<F>& den) {
    return {num, den};
}

}  // namespace detail

template <CoeffField F>
std::string RatFunc<F>::to_string(const std::string& var) const {
    if (is_zero()) return "0";
    if (den_.is_one()) return num_.to_string(var);
    auto [n, d] = detail::display_pair(num_, den_);
    if (d.is_one()) return n.to_string(var);
    std::string ns = n.to_string(var);
    std::string ds = d.to_string(var);
    auto atomic = [](const Poly<F>& p, const std::string& s) {
        // Only bare nonnegative constants go without parentheses.
        return p.degree() == 0 && s.find('/') == std::string::npos && s.find('-') == std::string::npos;
    };
    std::string out = atomic(n, ns) ? ns : "(" + ns + ")";
    out += "/";
    out += atomic(d, ds) ? ds : "(" + ds + ")";
    return out;
}

// Weil height on P^1(k(t)): max of numerator/denominator degrees; h(0) = 0.
template <CoeffField F>
long weil_height(const RatFunc<F>& x) {
    if (x.is_zero()) return 0;
    return std::max(x.num().degree(), x.den().degree());
}

}  // namespace dynprim
