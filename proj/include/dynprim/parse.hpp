#pragma once

// Text form for polynomial and rational-function expressions in the variables
// t (the function-field generator) and x (the dynamical variable).
//
// Grammar (ASCII only; whitespace insignificant between tokens):
//
//   expr   := ('-')? term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := base ('^' nat)?
//   base   := nat | 't' | 'x' | '(' expr ')'
//
// A rational literal a/b is the division of two integer literals, so it needs
// no dedicated token.  Division requires an x-free divisor: coefficients live
// in F(t), so x may never appear inside a denominator (MixedVariableError).
// Dividing by an expression that collapses to zero raises ZeroInput, except
// when the divisor is a plain integer literal that vanishes only because of
// the coefficient characteristic (e.g. 1/2 over F_2): that is a
// CharacteristicError, because the written expression is meaningful over Q
// and the field choice alone broke it.
//
// Values are polynomials in x with coefficients in F(t).  Helpers view a
// parsed value as a bare coefficient (x-free) or as a dynamical polynomial
// (x-degree >= 2).

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "dynprim/dynpoly.hpp"
#include "dynprim/errors.hpp"
#include "dynprim/fp.hpp"
#include "dynprim/poly.hpp"
#include "dynprim/rat.hpp"
#include "dynprim/ratfunc.hpp"

namespace dynprim {

// Integer literal mapped into the coefficient field.
inline Rat field_literal(const mpz_class& n, const Rat& /*one*/) { return Rat(n); }

inline Fp field_literal(const mpz_class& n, const Fp& one) {
    const PrimeField field(one.modulus());
    mpz_class r = n % mpz_class(static_cast<unsigned long>(field.modulus()));
    if (r < 0) r += mpz_class(static_cast<unsigned long>(field.modulus()));
    return Fp(r.get_ui(), field);
}

namespace detail {

enum class TokKind : std::uint8_t { Int, VarT, VarX, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    TokKind kind = TokKind::End;
    mpz_class value;        // for Int
    std::size_t position = 0;  // byte offset of the first character
};

inline std::vector<Token> lex_expr(const std::string& src) {
    std::vector<Token> out;
    std::size_t i = 0;
    const std::size_t n = src.size();
    while (i < n) {
        const unsigned char ch = static_cast<unsigned char>(src[i]);
        if (std::isspace(ch)) {
            ++i;
            continue;
        }
        Token tok;
        tok.position = i;
        if (std::isdigit(ch)) {
            std::size_t j = i;
            while (j < n && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            tok.kind = TokKind::Int;
            tok.value = mpz_class(src.substr(i, j - i), 10);
            i = j;
            out.push_back(tok);
            continue;
        }
        switch (ch) {
            case 't': tok.kind = TokKind::VarT; break;
            case 'x': tok.kind = TokKind::VarX; break;
            case '+': tok.kind = TokKind::Plus; break;
            case '-': tok.kind = TokKind::Minus; break;
            case '*': tok.kind = TokKind::Star; break;
            case '/': tok.kind = TokKind::Slash; break;
            case '^': tok.kind = TokKind::Caret; break;
            case '(': tok.kind = TokKind::LParen; break;
            case ')': tok.kind = TokKind::RParen; break;
            default:
                throw SyntaxError("unexpected character '" + std::string(1, src[i]) + "'", i);
        }
        ++i;
        out.push_back(tok);
    }
    Token end;
    end.kind = TokKind::End;
    end.position = n;
    out.push_back(end);
    return out;
}

// Parsed value plus enough provenance to classify a vanishing divisor.
template <CoeffField F>
struct ExprValue {
    Poly<RatFunc<F>> value;
    // True when the (sub)expression is a bare integer literal, possibly
    // parenthesized, whose integer value is nonzero.  Such a value can only
    // be zero in the field because the characteristic divides it.
    bool nonzero_int_literal = false;
};

template <CoeffField F>
class ExprParser {
public:
    ExprParser(const std::string& src, const F& one, std::uint64_t degree_cap)
        : src_(src), one_(one), cap_(degree_cap), tokens_(lex_expr(src)) {}

    Poly<RatFunc<F>> parse() {
        ExprValue<F> v = parse_expr();
        if (peek().kind != TokKind::End)
            throw SyntaxError("unexpected trailing input", peek().position);
        return v.value;
    }

private:
    using K = RatFunc<F>;
    using XPoly = Poly<K>;

    const Token& peek() const { return tokens_[pos_]; }
    const Token& advance() { return tokens_[pos_++]; }
    bool accept(TokKind kind) {
        if (peek().kind != kind) return false;
        ++pos_;
        return true;
    }

    K coeff_one() const { return K(Poly<F>::constant(one_)); }
    K coeff_t() const { return K(Poly<F>({F(one_) - one_, one_})); }

    ExprValue<F> parse_expr() {
        bool negate = accept(TokKind::Minus);
        ExprValue<F> acc = parse_term();
        if (negate) {
            acc.value = XPoly() - acc.value;
            acc.nonzero_int_literal = false;
        }
        while (peek().kind == TokKind::Plus || peek().kind == TokKind::Minus) {
            const bool subtract = advance().kind == TokKind::Minus;
            ExprValue<F> rhs = parse_term();
            acc.value = subtract ? acc.value - rhs.value : acc.value + rhs.value;
            acc.nonzero_int_literal = false;
        }
        return acc;
    }

    ExprValue<F> parse_term() {
        ExprValue<F> acc = parse_factor();
        while (peek().kind == TokKind::Star || peek().kind == TokKind::Slash) {
            const Token& op = advance();
            ExprValue<F> rhs = parse_factor();
            if (op.kind == TokKind::Star) {
                acc.value = acc.value * rhs.value;
                acc.nonzero_int_literal = false;
            } else {
                acc.value = divide(acc.value, rhs, op.position);
                acc.nonzero_int_literal = false;
            }
            check_degrees(acc.value, op.position);
        }
        return acc;
    }

    ExprValue<F> parse_factor() {
        ExprValue<F> base = parse_base();
        if (accept(TokKind::Caret)) {
            const Token& exp = peek();
            if (exp.kind != TokKind::Int)
                throw SyntaxError("expected a nonnegative integer exponent after '^'", exp.position);
            advance();
            base.value = power(base.value, exp.value, exp.position);
            base.nonzero_int_literal = false;
        }
        return base;
    }

    ExprValue<F> parse_base() {
        const Token& tok = peek();
        ExprValue<F> out;
        switch (tok.kind) {
            case TokKind::Int:
                advance();
                out.value = XPoly::constant(K(Poly<F>::constant(field_literal(tok.value, one_))));
                out.nonzero_int_literal = tok.value != 0;
                return out;
            case TokKind::VarT:
                advance();
                out.value = XPoly::constant(coeff_t());
                return out;
            case TokKind::VarX:
                advance();
                out.value = XPoly({K(), coeff_one()});
                return out;
            case TokKind::LParen: {
                advance();
                out = parse_expr();
                if (!accept(TokKind::RParen))
                    throw SyntaxError("expected ')'", peek().position);
                return out;
            }
            default:
                throw SyntaxError("expected an integer, 't', 'x', or '('", tok.position);
        }
    }

    XPoly divide(const XPoly& lhs, const ExprValue<F>& rhs, std::size_t op_pos) {
        if (rhs.value.degree() > 0)
            throw MixedVariableError("x may not appear in a divisor: coefficients live in the rational function field in t", op_pos);
        const K divisor = rhs.value.is_zero() ? K() : rhs.value[0];
        if (divisor.is_zero()) {
            if (rhs.nonzero_int_literal)
                throw CharacteristicError(
                    "division by an integer literal that vanishes in characteristic " + std::to_string(characteristic()),
                    op_pos);
            throw ZeroInput("division by zero in expression");
        }
        XPoly out = lhs;
        std::vector<K> coeffs;
        coeffs.reserve(static_cast<std::size_t>(out.degree() + 1));
        for (int i = 0; i <= out.degree(); ++i) coeffs.push_back(out[i] / divisor);
        return XPoly(coeffs);
    }

    XPoly power(const XPoly& base, const mpz_class& exponent, std::size_t pos) {
        if (exponent < 0)
            throw SyntaxError("exponents must be nonnegative", pos);
        if (!exponent.fits_ulong_p())
            throw DegreeCapExceeded(static_cast<std::uint64_t>(-1), cap_, "exponent in expression");
        std::uint64_t e = exponent.get_ui();
        // Degree pre-check so huge exponents fail fast instead of looping.
        const std::uint64_t base_deg = expr_total_degree(base);
        if (base_deg > 0 && e > cap_ / base_deg) {
            const std::uint64_t attempted =
                e > (std::numeric_limits<std::uint64_t>::max() - 1) / base_deg
                    ? std::numeric_limits<std::uint64_t>::max()
                    : base_deg * e + 1;
            throw DegreeCapExceeded(attempted, cap_, "power in expression");
        }
        XPoly acc = XPoly::constant(coeff_one());
        XPoly sq = base;
        while (e > 0) {
            if (e & 1) {
                acc = acc * sq;
                check_degrees(acc, pos);
            }
            e >>= 1;
            if (e > 0) {
                sq = sq * sq;
                check_degrees(sq, pos);
            }
        }
        return acc;
    }

    std::uint64_t characteristic() const {
        if constexpr (std::is_same_v<F, Fp>) {
            return one_.modulus();
        } else {
            return 0;
        }
    }

    // Largest degree appearing anywhere in the value: x-degree and the t-degrees
    // of every coefficient numerator and denominator.
    static std::uint64_t expr_total_degree(const XPoly& v) {
        std::int64_t best = v.degree() < 0 ? 0 : v.degree();
        for (int i = 0; i <= v.degree(); ++i) {
            best = std::max<std::int64_t>(best, v[i].num().degree());
            best = std::max<std::int64_t>(best, v[i].den().degree());
        }
        return static_cast<std::uint64_t>(best);
    }

    void check_degrees(const XPoly& v, std::size_t /*pos*/) const {
        const std::uint64_t deg = expr_total_degree(v);
        if (deg + 1 > cap_) throw DegreeCapExceeded(deg + 1, cap_, "parsed expression");
    }

    std::string src_;
    F one_;
    std::uint64_t cap_;
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

}  // namespace detail

// Parse an expression in t and x over the field containing `one`.
template <CoeffField F>
Poly<RatFunc<F>> parse_expr(const std::string& src, const F& one, std::uint64_t degree_cap = kDefaultDegreeCap) {
    detail::ExprParser<F> parser(src, one, degree_cap);
    return parser.parse();
}

inline Poly<RatFunc<Rat>> parse_expr_q(const std::string& src, std::uint64_t degree_cap = kDefaultDegreeCap) {
    return parse_expr<Rat>(src, Rat(1), degree_cap);
}

inline Poly<RatFunc<Fp>> parse_expr_fp(const std::string& src, const PrimeField& field,
                                       std::uint64_t degree_cap = kDefaultDegreeCap) {
    return parse_expr<Fp>(src, Fp(1, field), degree_cap);
}

// View an x-free parsed value as a coefficient in F(t).
template <CoeffField F>
RatFunc<F> as_coefficient(const Poly<RatFunc<F>>& value) {
    if (value.degree() > 0)
        throw InputError("expected an x-free expression, got one of degree " + std::to_string(value.degree()) + " in x");
    return value.is_zero() ? RatFunc<F>() : value[0];
}

// View a parsed value as a dynamical polynomial (degree >= 2 in x).
template <CoeffField F>
DynPoly<F> as_dynpoly(const Poly<RatFunc<F>>& value) {
    return DynPoly<F>(value);
}

// Render a parsed value so that parse_expr(expr_to_string(v)) == v.  Every
// nonzero coefficient is parenthesized, which keeps the printer independent
// of how RatFunc and Poly format sums and quotients internally.
template <CoeffField F>
std::string expr_to_string(const Poly<RatFunc<F>>& value) {
    if (value.is_zero()) return "0";
    std::string out;
    for (int i = value.degree(); i >= 0; --i) {
        const RatFunc<F>& c = value[i];
        if (c.is_zero()) continue;
        if (!out.empty()) out += " + ";
        out += "(" + c.to_string("t") + ")";
        if (i >= 1) out += "*x";
        if (i >= 2) out += "^" + std::to_string(i);
    }
    return out;
}

}  // namespace dynprim
