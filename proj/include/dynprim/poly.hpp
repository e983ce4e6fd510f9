#pragma once

// Dense univariate polynomials over an exact field.  The coefficient type F
// carries its own field context (see Fp, Rat, RatFunc), which lets one
// template serve F_p[t], Q[t] and K[x] for K = k(t).
//
// Conventions:
//   * coefficients are stored low degree -> high degree, trailing zeros trimmed;
//   * the zero polynomial has an empty coefficient vector and degree() == -1;
//   * gcds are monic; units are reported separately where they matter.

#include <algorithm>
#include <cassert>
#include <compare>
#include <concepts>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dynprim/errors.hpp"
#include "dynprim/rat.hpp"

namespace dynprim {

template <class F>
concept CoeffField = requires(const F a, const F b) {
    { a + b } -> std::same_as<F>;
    { a - b } -> std::same_as<F>;
    { a * b } -> std::same_as<F>;
    { a / b } -> std::same_as<F>;
    { -a } -> std::same_as<F>;
    { a == b } -> std::convertible_to<bool>;
    { a.is_zero() } -> std::convertible_to<bool>;
    { a.is_one() } -> std::convertible_to<bool>;
    { a.zero() } -> std::same_as<F>;
    { a.one() } -> std::same_as<F>;
    { a.inv() } -> std::same_as<F>;
    { a.times_int(std::int64_t{}) } -> std::same_as<F>;
    { a.characteristic() } -> std::convertible_to<unsigned long>;
    { a.to_string() } -> std::same_as<std::string>;
};

template <CoeffField F>
F field_pow(F base, std::uint64_t e) {
    F acc = base.one();
    while (e > 0) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

template <CoeffField F>
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<F> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Poly constant(const F& a) {
        if (a.is_zero()) return Poly();
        return Poly(std::vector<F>{a});
    }
    // c * t^k
    static Poly monomial(const F& c, std::size_t k) {
        if (c.is_zero()) return Poly();
        std::vector<F> v(k + 1, c.zero());
        v[k] = c;
        return Poly(std::move(v));
    }

    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    bool is_one() const { return c_.size() == 1 && c_[0].is_one(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }

    const std::vector<F>& coeffs() const { return c_; }
    const F& operator[](std::size_t i) const {
        assert(i < c_.size());
        return c_[i];
    }
    // Leading coefficient; polynomial must be nonzero.
    const F& lc() const {
        assert(!c_.empty());
        return c_.back();
    }
    // Coefficient of t^i, or zero for i > degree; polynomial must be nonzero
    // so the zero can inherit the right field.
    F get(std::size_t i) const {
        assert(!c_.empty());
        return i < c_.size() ? c_[i] : c_.back().zero();
    }

    bool operator==(const Poly& o) const {
        if (c_.size() != o.c_.size()) return false;
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (!(c_[i] == o.c_[i])) return false;
        return true;
    }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    Poly operator+(const Poly& o) const {
        if (is_zero()) return o;
        if (o.is_zero()) return *this;
        std::vector<F> r(std::max(c_.size(), o.c_.size()), c_[0].zero());
        for (std::size_t i = 0; i < c_.size(); ++i) r[i] = c_[i];
        for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] = r[i] + o.c_[i];
        return Poly(std::move(r));
    }
    Poly operator-(const Poly& o) const { return *this + (-o); }
    Poly operator-() const {
        std::vector<F> r;
        r.reserve(c_.size());
        for (const F& a : c_) r.push_back(-a);
        return Poly(std::move(r));
    }
    Poly operator*(const Poly& o) const {
        if (is_zero() || o.is_zero()) return Poly();
        std::vector<F> r(c_.size() + o.c_.size() - 1, c_[0].zero());
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i].is_zero()) continue;
            for (std::size_t j = 0; j < o.c_.size(); ++j) {
                if (o.c_[j].is_zero()) continue;
                r[i + j] = r[i + j] + c_[i] * o.c_[j];
            }
        }
        return Poly(std::move(r));
    }

    Poly scaled(const F& a) const {
        if (a.is_zero()) return Poly();
        std::vector<F> r;
        r.reserve(c_.size());
        for (const F& c : c_) r.push_back(c * a);
        return Poly(std::move(r));
    }
    Poly times_int(std::int64_t n) const {
        std::vector<F> r;
        r.reserve(c_.size());
        for (const F& c : c_) r.push_back(c.times_int(n));
        return Poly(std::move(r));
    }
    // *this * t^k
    Poly shifted(std::size_t k) const {
        if (is_zero() || k == 0) return *this;
        std::vector<F> r(c_.size() + k, c_[0].zero());
        for (std::size_t i = 0; i < c_.size(); ++i) r[i + k] = c_[i];
        return Poly(std::move(r));
    }

    // Euclidean division by a nonzero divisor: a = q*b + r, deg r < deg b.
    static void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r) {
        if (b.is_zero()) throw ZeroInput("polynomial division by zero");
        if (a.degree() < b.degree()) {
            q = Poly();
            r = a;
            return;
        }
        F binv = b.lc().inv();
        std::vector<F> rem = a.c_;
        std::vector<F> quot(a.c_.size() - b.c_.size() + 1, b.lc().zero());
        for (int i = static_cast<int>(rem.size()) - 1; i >= b.degree(); --i) {
            if (rem[i].is_zero()) continue;
            F coef = rem[i] * binv;
            quot[i - b.degree()] = coef;
            for (std::size_t j = 0; j < b.c_.size(); ++j) {
                rem[i - b.degree() + j] = rem[i - b.degree() + j] - coef * b.c_[j];
            }
        }
        rem.resize(b.c_.size() - 1);
        q = Poly(std::move(quot));
        r = Poly(std::move(rem));
    }
    Poly operator/(const Poly& o) const {
        Poly q, r;
        divmod(*this, o, q, r);
        return q;
    }
    Poly operator%(const Poly& o) const {
        Poly q, r;
        divmod(*this, o, q, r);
        return r;
    }
    // Division known to be exact; asserts the remainder vanishes.
    Poly exact_div(const Poly& o) const {
        Poly q, r;
        divmod(*this, o, q, r);
        assert(r.is_zero() && "exact_div with nonzero remainder");
        return q;
    }

    bool divides(const Poly& other) const {
        if (is_zero()) return other.is_zero();
        return (other % *this).is_zero();
    }

    Poly pow(std::uint64_t e) const {
        if (is_zero()) {
            assert(e > 0 && "0^0 is undefined");
            return Poly();
        }
        Poly acc = constant(lc().one());
        Poly base = *this;
        while (e > 0) {
            if (e & 1) acc = acc * base;
            e >>= 1;
            if (e > 0) base = base * base;
        }
        return acc;
    }

    // Horner evaluation at a point of the coefficient field.
    F operator()(const F& x) const {
        if (is_zero()) return x.zero();
        F acc = c_.back();
        for (int i = static_cast<int>(c_.size()) - 2; i >= 0; --i) {
            acc = acc * x + c_[i];
        }
        return acc;
    }

    // Horner composition (*this)(g).
    Poly compose(const Poly& g) const {
        if (is_zero()) return Poly();
        Poly acc = constant(c_.back());
        for (int i = static_cast<int>(c_.size()) - 2; i >= 0; --i) {
            acc = acc * g + constant(c_[i]);
        }
        return acc;
    }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly();
        std::vector<F> r;
        r.reserve(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) r.push_back(c_[i].times_int(static_cast<std::int64_t>(i)));
        return Poly(std::move(r));
    }

    bool is_monic() const { return !c_.empty() && c_.back().is_one(); }
    Poly monic() const {
        assert(!is_zero());
        if (is_monic()) return *this;
        return scaled(lc().inv());
    }
    // Returns (unit, monic part); zero input is the caller's bug.
    std::pair<F, Poly> unit_monic() const {
        assert(!is_zero());
        return {lc(), monic()};
    }

    // Total order for container keys: by degree, then coefficients from the top.
    std::strong_ordering order(const Poly& o) const {
        if (auto c = c_.size() <=> o.c_.size(); c != 0) return c;
        for (std::size_t i = c_.size(); i-- > 0;) {
            if (auto c = c_[i] <=> o.c_[i]; c != 0) return c;
        }
        return std::strong_ordering::equal;
    }
    bool operator<(const Poly& o) const { return order(o) == std::strong_ordering::less; }

    std::string to_string(const std::string& var = "t") const;

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    std::vector<F> c_;
};

namespace detail {
// Sign-aware display: Rat renders "a - b*t"; everything else joins with '+'.
template <class F>
bool display_negative(const F&) { return false; }
inline bool display_negative(const Rat& a) { return a.sign() < 0; }
template <class F>
F display_abs(const F& a) { return a; }
inline Rat display_abs(const Rat& a) { return a.abs(); }
}  // namespace detail

template <CoeffField F>
std::string Poly<F>::to_string(const std::string& var) const {
    if (is_zero()) return "0";
    std::string out;
    for (int i = degree(); i >= 0; --i) {
        const F& c = c_[static_cast<std::size_t>(i)];
        if (c.is_zero()) continue;
        bool neg = detail::display_negative(c);
        F a = detail::display_abs(c);
        if (out.empty()) {
            if (neg) out += "-";
        } else {
            out += neg ? " - " : " + ";
        }
        if (i == 0) {
            out += a.to_string();
        } else {
            if (!a.is_one()) out += a.to_string() + "*";
            out += var;
            if (i > 1) out += "^" + std::to_string(i);
        }
    }
    return out;
}

namespace detail {
Poly<Rat> poly_gcd_rat(const Poly<Rat>& a, const Poly<Rat>& b);
}

// Monic gcd.  Generic fields use the Euclidean algorithm with per-step monic
// normalization; Q[t] dispatches to an integer primitive-remainder-sequence
// routine with a modular coprimality shortcut (see intpoly.cpp), since plain
// Euclid over Q suffers severe coefficient growth.
template <CoeffField F>
Poly<F> poly_gcd(const Poly<F>& a, const Poly<F>& b) {
    if constexpr (std::is_same_v<F, Rat>) {
        return detail::poly_gcd_rat(a, b);
    } else {
        Poly<F> f = a, g = b;
        if (f.is_zero()) return g.is_zero() ? g : g.monic();
        while (!g.is_zero()) {
            Poly<F> r = f % g;
            f = g;
            g = r.is_zero() ? r : r.monic();
        }
        return f.monic();
    }
}

// Extended gcd over a field: returns monic g = u*a + v*b.
template <CoeffField F>
struct XgcdResult {
    Poly<F> g, u, v;
};

template <CoeffField F>
XgcdResult<F> poly_xgcd(const Poly<F>& a, const Poly<F>& b) {
    assert(!(a.is_zero() && b.is_zero()));
    const F one = a.is_zero() ? b.lc().one() : a.lc().one();
    Poly<F> r0 = a, r1 = b;
    Poly<F> s0 = Poly<F>::constant(one), s1;
    Poly<F> t0, t1 = Poly<F>::constant(one);
    while (!r1.is_zero()) {
        Poly<F> q, r2;
        Poly<F>::divmod(r0, r1, q, r2);
        Poly<F> s2 = s0 - q * s1;
        Poly<F> t2 = t0 - q * t1;
        r0 = std::move(r1); r1 = std::move(r2);
        s0 = std::move(s1); s1 = std::move(s2);
        t0 = std::move(t1); t1 = std::move(t2);
    }
    F u = r0.lc().inv();
    return {r0.scaled(u), s0.scaled(u), t0.scaled(u)};
}

// p-th root of a polynomial whose exponents are all multiples of p = char F.
// Returns nullopt when some coefficient has no p-th root in F (possible only
// over imperfect fields such as F_p(t)).
template <CoeffField F>
std::optional<Poly<F>> poly_pth_root(const Poly<F>& f) {
    if (f.is_zero()) return f;
    unsigned long p = f.lc().characteristic();
    assert(p > 0 && "pth root requested in characteristic 0");
    std::vector<F> r;
    r.reserve(static_cast<std::size_t>(f.degree()) / p + 1);
    for (std::size_t i = 0; i <= static_cast<std::size_t>(f.degree()); ++i) {
        F c = f.get(i);
        if (i % p != 0) {
            if (!c.is_zero()) return std::nullopt;
            continue;
        }
        auto root = c.try_pth_root();
        if (!root) return std::nullopt;
        r.push_back(*root);
    }
    return Poly<F>(std::move(r));
}

template <CoeffField F>
struct SquarefreePart {
    Poly<F> factor;  // monic
    int multiplicity;
};

template <CoeffField F>
struct SquarefreeDecomposition {
    F unit;
    std::vector<SquarefreePart<F>> parts;
    // Blocks f_i^{m_i} (all exponents divisible by char F) whose p-th root
    // does not exist in F[t]; empty over perfect coefficient fields.
    std::vector<SquarefreePart<F>> unresolved;

    bool complete() const { return unresolved.empty(); }

    Poly<F> reconstruct() const {
        Poly<F> acc = Poly<F>::constant(unit);
        for (const auto& part : parts) acc = acc * part.factor.pow(static_cast<std::uint64_t>(part.multiplicity));
        for (const auto& part : unresolved) acc = acc * part.factor.pow(static_cast<std::uint64_t>(part.multiplicity));
        return acc;
    }
};

namespace detail {

// Musser's square-free decomposition on a monic input, with the
// characteristic-p descent on the residual p-th-power block.
template <CoeffField F>
void squarefree_monic(const Poly<F>& f, int outer, SquarefreeDecomposition<F>& out) {
    if (f.degree() <= 0) return;
    unsigned long p = f.lc().characteristic();
    Poly<F> df = f.derivative();
    Poly<F> c, w;
    if (df.is_zero()) {
        c = f;  // pure p-th power
        w = Poly<F>::constant(f.lc().one());
    } else {
        c = poly_gcd(f, df);
        w = f.exact_div(c);
    }
    int i = 1;
    while (w.degree() > 0) {
        Poly<F> y = poly_gcd(w, c);
        Poly<F> z = w.exact_div(y);
        if (z.degree() > 0) out.parts.push_back({z, i * outer});
        c = c.exact_div(y);
        w = std::move(y);
        ++i;
    }
    if (c.degree() > 0) {
        assert(p > 0 && "nontrivial residual block in characteristic 0");
        auto root = poly_pth_root(c);
        if (root) {
            squarefree_monic(*root, outer * static_cast<int>(p), out);
        } else {
            out.unresolved.push_back({c, outer});
        }
    }
}

}  // namespace detail

template <CoeffField F>
SquarefreeDecomposition<F> squarefree_decomposition(const Poly<F>& f) {
    if (f.is_zero()) throw ZeroInput("square-free decomposition of the zero polynomial");
    auto [unit, monic] = f.unit_monic();
    SquarefreeDecomposition<F> out{unit, {}, {}};
    detail::squarefree_monic(monic, 1, out);
    std::sort(out.parts.begin(), out.parts.end(), [](const auto& a, const auto& b) {
        if (a.multiplicity != b.multiplicity) return a.multiplicity < b.multiplicity;
        return a.factor < b.factor;
    });
    return out;
}

// Resultant with the convention Res(f,g) = lc(f)^{deg g} * prod_{f(a)=0} g(a),
// computed by the Euclidean remainder sequence with multiplier tracking (the
// value agrees with the Sylvester determinant; the unit tests pin that down).
template <CoeffField F>
F resultant(const Poly<F>& f, const Poly<F>& g) {
    if (f.is_zero() || g.is_zero()) throw ZeroInput("resultant of the zero polynomial");
    const int m = f.degree(), n = g.degree();
    if (m == 0) return field_pow(f.lc(), static_cast<std::uint64_t>(n));
    if (n == 0) return field_pow(g.lc(), static_cast<std::uint64_t>(m));
    if (m < n) {
        F r = resultant(g, f);
        return (static_cast<std::int64_t>(m) * n) % 2 != 0 ? -r : r;
    }
    Poly<F> r = f % g;
    if (r.is_zero()) return f.lc().zero();
    F tail = resultant(g, r);
    F scale = field_pow(g.lc(), static_cast<std::uint64_t>(m - r.degree()));
    F res = scale * tail;
    return (static_cast<std::int64_t>(m) * n) % 2 != 0 ? -res : res;
}

template <CoeffField F>
struct DiscriminantResult {
    F value;
    // Set when f' == 0 (inseparable input); value is then reported as 0.
    bool inseparable;
};

// disc(f) = (-1)^{d(d-1)/2} Res(f, f') / lc(f), for deg f >= 1.
template <CoeffField F>
DiscriminantResult<F> discriminant(const Poly<F>& f) {
    if (f.degree() < 1) throw ZeroInput("discriminant needs degree >= 1");
    Poly<F> df = f.derivative();
    if (df.is_zero()) return {f.lc().zero(), true};
    F res = resultant(f, df);
    F disc = res / f.lc();
    std::int64_t d = f.degree();
    if ((d * (d - 1) / 2) % 2 != 0) disc = -disc;
    return {disc, false};
}

}  // namespace dynprim
