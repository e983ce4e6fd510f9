#pragma once

// Prime fields F_p for word-sized p.  A PrimeField validates p and provides
// the modular arithmetic; an Fp element carries its modulus with it so that
// generic polynomial code can recover the field from any element.

#include <cassert>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>

#include "dynprim/errors.hpp"

namespace dynprim {

namespace detail {
std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m);
}  // namespace detail

class PrimeField {
public:
    // Throws InputError if p is not prime (deterministic Miller-Rabin).
    explicit PrimeField(std::uint64_t p);

    std::uint64_t modulus() const { return p_; }

    std::uint64_t reduce(std::int64_t v) const {
        std::int64_t r = v % static_cast<std::int64_t>(p_);
        if (r < 0) r += static_cast<std::int64_t>(p_);
        return static_cast<std::uint64_t>(r);
    }

    static bool is_prime(std::uint64_t n);

private:
    std::uint64_t p_;
};

// One residue mod p.  Default-constructed elements are "unbound" placeholders
// (modulus 0) that only exist so containers can be resized; arithmetic on
// them is a bug and asserts in debug builds.
class Fp {
public:
    Fp() = default;
    Fp(std::uint64_t value, const PrimeField& field)
        : v_(value % field.modulus()), p_(field.modulus()) {}

    static Fp from_int(std::int64_t value, const PrimeField& field) {
        return Fp(field.reduce(value), field);
    }

    std::uint64_t value() const { return v_; }
    std::uint64_t modulus() const { return p_; }

    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }

    Fp zero() const { return raw(0, p_); }
    Fp one() const { return raw(p_ > 1 ? 1 : 0, p_); }

    unsigned long characteristic() const { return p_; }

    Fp operator+(const Fp& o) const {
        check(o);
        std::uint64_t s = v_ + o.v_;
        if (s >= p_) s -= p_;
        return raw(s, p_);
    }
    Fp operator-(const Fp& o) const {
        check(o);
        return raw(v_ >= o.v_ ? v_ - o.v_ : v_ + p_ - o.v_, p_);
    }
    Fp operator-() const { return raw(v_ == 0 ? 0 : p_ - v_, p_); }
    Fp operator*(const Fp& o) const {
        check(o);
        return raw(detail::mulmod_u64(v_, o.v_, p_), p_);
    }
    Fp operator/(const Fp& o) const { return *this * o.inv(); }

    Fp& operator+=(const Fp& o) { return *this = *this + o; }
    Fp& operator-=(const Fp& o) { return *this = *this - o; }
    Fp& operator*=(const Fp& o) { return *this = *this * o; }

    Fp inv() const {
        if (v_ == 0) throw ZeroInput("division by zero in F_" + std::to_string(p_));
        return raw(detail::powmod_u64(v_, p_ - 2, p_), p_);
    }

    Fp pow(std::uint64_t e) const { return raw(detail::powmod_u64(v_, e, p_), p_); }

    // In F_p the Frobenius x -> x^p is the identity, so every element is its
    // own p-th root.
    std::optional<Fp> try_pth_root() const { return *this; }

    // Multiply by a plain integer (reduced mod p); used for derivative and
    // formula constants.
    Fp times_int(std::int64_t n) const {
        std::int64_t r = n % static_cast<std::int64_t>(p_);
        if (r < 0) r += static_cast<std::int64_t>(p_);
        return raw(detail::mulmod_u64(v_, static_cast<std::uint64_t>(r), p_), p_);
    }

    bool operator==(const Fp& o) const { return v_ == o.v_ && p_ == o.p_; }
    bool operator!=(const Fp& o) const { return !(*this == o); }
    // Total order for use as container keys (elements of the same field).
    std::strong_ordering operator<=>(const Fp& o) const {
        if (auto c = p_ <=> o.p_; c != 0) return c;
        return v_ <=> o.v_;
    }

    std::string to_string() const { return std::to_string(v_); }

private:
    static Fp raw(std::uint64_t v, std::uint64_t p) {
        Fp r;
        r.v_ = v;
        r.p_ = p;
        return r;
    }
    void check(const Fp& o) const {
        assert(p_ != 0 && p_ == o.p_ && "elements of mismatched prime fields");
        (void)o;
    }

    std::uint64_t v_ = 0;
    std::uint64_t p_ = 0;
};

}  // namespace dynprim
