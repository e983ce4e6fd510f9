#pragma once

// Arbitrary-precision rationals: a thin field-element veneer over GMP's
// mpq_class so the generic polynomial code can treat Q like F_p.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "dynprim/errors.hpp"

namespace dynprim {

class Rat {
public:
    Rat() : v_(0) {}
    Rat(long n) : v_(n) {}  // NOLINT: implicit by design, mirrors integer literals
    Rat(long n, long d) : v_(n, d) {
        if (d == 0) throw ZeroInput("rational with zero denominator");
        v_.canonicalize();
    }
    explicit Rat(const mpz_class& n) : v_(n) {}
    Rat(const mpz_class& n, const mpz_class& d) : v_(n, d) {
        if (d == 0) throw ZeroInput("rational with zero denominator");
        v_.canonicalize();
    }
    explicit Rat(const mpq_class& q) : v_(q) { v_.canonicalize(); }

    const mpq_class& value() const { return v_; }
    mpz_class num() const { return v_.get_num(); }
    mpz_class den() const { return v_.get_den(); }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }
    bool is_integer() const { return v_.get_den() == 1; }

    Rat zero() const { return Rat(); }
    Rat one() const { return Rat(1); }

    unsigned long characteristic() const { return 0; }

    Rat operator+(const Rat& o) const { return wrap(v_ + o.v_); }
    Rat operator-(const Rat& o) const { return wrap(v_ - o.v_); }
    Rat operator-() const { return wrap(-v_); }
    Rat operator*(const Rat& o) const { return wrap(v_ * o.v_); }
    Rat operator/(const Rat& o) const {
        if (o.is_zero()) throw ZeroInput("division by zero rational");
        return wrap(v_ / o.v_);
    }

    Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
    Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
    Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }

    Rat inv() const {
        if (is_zero()) throw ZeroInput("inverse of zero rational");
        return wrap(1 / v_);
    }

    Rat times_int(std::int64_t n) const { return wrap(v_ * mpz_class(static_cast<long>(n))); }

    // p-th roots are only meaningful in characteristic p; Q has none to offer.
    std::optional<Rat> try_pth_root() const { return std::nullopt; }

    int sign() const { return sgn(v_); }
    Rat abs() const { return wrap(::abs(v_)); }

    bool operator==(const Rat& o) const { return v_ == o.v_; }
    bool operator!=(const Rat& o) const { return v_ != o.v_; }
    std::strong_ordering operator<=>(const Rat& o) const {
        int c = cmp(v_, o.v_);
        if (c < 0) return std::strong_ordering::less;
        if (c > 0) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    std::string to_string() const {
        if (v_.get_den() == 1) return v_.get_num().get_str();
        return v_.get_num().get_str() + "/" + v_.get_den().get_str();
    }

private:
    static Rat wrap(mpq_class q) {
        Rat r;
        r.v_ = std::move(q);  // arithmetic on canonical mpq values stays canonical
        return r;
    }

    mpq_class v_;
};

}  // namespace dynprim
