#pragma once

// The delta/epsilon invariants of a degree-d map, the unique Riccati
// coefficient solution (a, b, c, e, f, g), the vanishing identities for the
// top coefficients of P_{phi,beta}, and the isotriviality precondition report.
//
// Sign convention, pinned by regression tests: with
//
//         | d*A0        -A0    0      |
//     M = | (d-1)*A1    -A1    d*A0   |        r = (A0', A1', A2')
//         | (d-2)*A2    -A2    (d-1)*A1 |
//
// the solved (b, f, c) satisfies M*(b,f,c) + r = 0 -- equivalently the x^d,
// x^{d-1}, x^{d-2} coefficients of P_{phi,beta} all vanish -- and
// det(M) = A0 * delta_phi.  Both facts follow from expanding the vanishing
// conditions; the identity epsilon_phi = (b - f) * delta_phi holds exactly.

#include <array>
#include <cstdint>

#include "dynprim/dynpoly.hpp"
#include "dynprim/errors.hpp"
#include "dynprim/irreducibility.hpp"
#include "dynprim/ratfunc.hpp"

namespace dynprim {

// delta = 2d*A0*A2 - (d-1)*A1^2.
template <CoeffField F>
RatFunc<F> delta_phi(const DynPoly<F>& phi) {
    if (phi.degree() < 3) throw InputError("delta_phi needs degree >= 3");
    const long d = phi.degree();
    return (phi.A(0) * phi.A(2)).times_int(2 * d) - (phi.A(1) * phi.A(1)).times_int(d - 1);
}

// epsilon = (d-1)^2*A0*A1*A1' + d(d-3)*A0*A2*A0'
//         - (d-1)(d-2)*A1^2*A0' - d(d-1)*A0^2*A2'.
template <CoeffField F>
RatFunc<F> epsilon_phi(const DynPoly<F>& phi) {
    if (phi.degree() < 3) throw InputError("epsilon_phi needs degree >= 3");
    const long d = phi.degree();
    const RatFunc<F> A0 = phi.A(0), A1 = phi.A(1), A2 = phi.A(2);
    const RatFunc<F> A0p = A0.d_dt(), A1p = A1.d_dt(), A2p = A2.d_dt();
    return (A0 * A1 * A1p).times_int((d - 1) * (d - 1)) + (A0 * A2 * A0p).times_int(d * (d - 3)) -
           (A1 * A1 * A0p).times_int((d - 1) * (d - 2)) - (A0 * A0 * A2p).times_int(d * (d - 1));
}

template <CoeffField F>
struct RiccatiSolution {
    RatFunc<F> a, b, c, e, f, g;  // a = e = 0 always
};

// The coefficient matrix M above, built from A0, A1, A2.
template <CoeffField F>
std::array<std::array<RatFunc<F>, 3>, 3> riccati_matrix(const DynPoly<F>& phi) {
    const long d = phi.degree();
    const RatFunc<F> A0 = phi.A(0), A1 = phi.A(1), A2 = phi.A(2);
    const RatFunc<F> z = A0.zero();
    return {{{A0.times_int(d), -A0, z},
             {A1.times_int(d - 1), -A1, A0.times_int(d)},
             {A2.times_int(d - 2), -A2, A1.times_int(d - 1)}}};
}

// The derivative vector r = (A0', A1', A2').
template <CoeffField F>
std::array<RatFunc<F>, 3> riccati_derivative_vector(const DynPoly<F>& phi) {
    return {phi.A(0).d_dt(), phi.A(1).d_dt(), phi.A(2).d_dt()};
}

namespace detail {

template <CoeffField F>
RatFunc<F> det3(const std::array<std::array<RatFunc<F>, 3>, 3>& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

}  // namespace detail

// Cramer solve of M*(b,f,c) = -r (division only by the nonzero determinant),
// plus g from the constant-term relation g = A_{d-1}*c - A_d*f + A_d'.
template <CoeffField F>
RiccatiSolution<F> solve_riccati_coeffs(const DynPoly<F>& phi) {
    if (phi.degree() < 3) throw InputError("solve_riccati_coeffs needs degree >= 3");
    const int d = phi.degree();
    const RatFunc<F> zero = phi.A(0).zero();
    if (zero.one().times_int(d).is_zero())
        throw BadCharacteristic("the degree vanishes in the coefficient field");
    if (delta_phi(phi).is_zero())
        throw SingularSystem("delta_phi = 0: the Riccati coefficient system is singular");

    const auto m = riccati_matrix(phi);
    const auto r = riccati_derivative_vector(phi);
    const RatFunc<F> det = detail::det3(m);
    std::array<RatFunc<F>, 3> x;
    for (int j = 0; j < 3; ++j) {
        auto mj = m;
        for (int i = 0; i < 3; ++i) mj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = -r[static_cast<std::size_t>(i)];
        x[static_cast<std::size_t>(j)] = detail::det3(mj) / det;
    }
    RiccatiSolution<F> sol{zero, x[0], x[2], zero, x[1], zero};
    sol.g = phi.A(d - 1) * sol.c - phi.A(d) * sol.f + phi.A(d).d_dt();
    return sol;
}

// The x^d, x^{d-1}, x^{d-2} coefficients of P_{phi,beta} at the given
// coefficients: M*(b,f,c) + r, rowwise.  All three vanish at the solved
// coefficients.
template <CoeffField F>
std::array<RatFunc<F>, 3> p_phi_top_coefficients(const DynPoly<F>& phi,
                                                 const RiccatiSolution<F>& sol) {
    const auto m = riccati_matrix(phi);
    const auto r = riccati_derivative_vector(phi);
    std::array<RatFunc<F>, 3> out;
    for (std::size_t i = 0; i < 3; ++i) {
        out[i] = m[i][0] * sol.b + m[i][1] * sol.f + m[i][2] * sol.c + r[i];
    }
    return out;
}

enum class IsoVerdict { nonisotrivial_curve_exists, inconclusive };

template <CoeffField F>
struct IsotrivialityReport {
    RatFunc<F> delta, epsilon;
    CertStatus irreducibility_status = CertStatus::unknown;
    IrreducibilityCertificate certificate;  // method + witness when certified
    IsoVerdict verdict = IsoVerdict::inconclusive;
};

// Checks the hypotheses under which a nonisotrivial hyperelliptic curve is
// guaranteed: delta != 0, epsilon != 0, and phi^3(x) - a irreducible over K
// (one-sided certificate).  Degree >= 5 and degree invertible in K are also
// required for the affirmative verdict; everything else reports inconclusive
// without error.
template <CoeffField F>
IsotrivialityReport<F> dyniso_preconditions(const DynPoly<F>& phi, const RatFunc<F>& a,
                                            std::uint64_t cap = kDefaultDegreeCap) {
    IsotrivialityReport<F> rep;
    const int d = phi.degree();
    const RatFunc<F> zero = phi.A(0).zero();
    rep.delta = d >= 3 ? delta_phi(phi) : zero;
    rep.epsilon = d >= 3 ? epsilon_phi(phi) : zero;
    const bool d_invertible = !zero.one().times_int(d).is_zero();
    if (d >= 5 && d_invertible) {
        rep.certificate = certify_iterate_irreducible(phi, a, 3, cap);
        rep.irreducibility_status = rep.certificate.status;
        if (rep.irreducibility_status == CertStatus::certified && !rep.delta.is_zero() &&
            !rep.epsilon.is_zero()) {
            rep.verdict = IsoVerdict::nonisotrivial_curve_exists;
        }
    }
    return rep;
}

}  // namespace dynprim
