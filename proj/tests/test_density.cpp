#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dynprim/density.hpp"
#include "dynprim/dynpoly.hpp"
#include "dynprim/errors.hpp"
#include "dynprim/poly.hpp"
#include "dynprim/rat.hpp"
#include "dynprim/ratfunc.hpp"
#include "oracles.hpp"

using namespace dynprim;
using oracles::qpoly;
using oracles::random_qpoly;

namespace {

// t^deg with an optional scale, as an integer polynomial.
Poly<Rat> mono(long deg, long lc = 1) {
    std::vector<Rat> v(static_cast<std::size_t>(deg) + 1, Rat(0));
    v[static_cast<std::size_t>(deg)] = Rat(lc);
    return Poly<Rat>(v);
}

// The witness pair (t^d, 2t^d + t).
QuadPair witness_pair(long d) {
    Poly<Rat> c = mono(d, 2) + mono(1);
    return QuadPair(d, mono(d), c);
}

Rat coeff_or_zero(const Poly<Rat>& f, long i) {
    if (f.is_zero() || i > f.degree()) return Rat(0);
    return f[static_cast<std::size_t>(i)];
}

// From-scratch classification of one pair: the degenerate-coefficient test,
// then direct iteration in Q[t] deciding square-freeness by the exact
// gcd(y, y') route only — no modular shortcut anywhere.
struct OracleVerdict {
    char cls;  // 'M', 'V', 'O'
    int witness;
};

OracleVerdict oracle_classify(const QuadPair& pair, int n_max) {
    const Rat ad = coeff_or_zero(pair.gamma, pair.d);
    const Rat bd = coeff_or_zero(pair.c, pair.d);
    if (ad.is_zero() || bd.is_zero() || ad == bd) return {'M', 0};
    Poly<Rat> y;
    for (int n = 1; n <= n_max; ++n) {
        if (n == 1) {
            y = pair.c;
        } else {
            const Poly<Rat> w = y - pair.gamma;
            y = w * w + pair.c;
        }
        if (y.is_zero()) return {'V', n};
        if (y.degree() >= 1 && poly_gcd(y, y.derivative()).degree() != 0) return {'V', n};
    }
    return {'O', 0};
}

char cls_char(PairClass cls) {
    return cls == PairClass::M ? 'M' : cls == PairClass::V ? 'V' : 'O';
}

// Box index of a pair, inverting the documented digit order.
std::uint64_t encode_pair(const QuadPair& pair, long B) {
    const std::uint64_t width = 2 * static_cast<std::uint64_t>(B) + 1;
    std::uint64_t index = 0;
    std::uint64_t place = 1;
    for (long i = 0; i <= 2 * pair.d + 1; ++i) {
        const Poly<Rat>& f = i <= pair.d ? pair.gamma : pair.c;
        const Rat a = coeff_or_zero(f, i <= pair.d ? i : i - pair.d - 1);
        index += place * static_cast<std::uint64_t>(a.num().get_si() + B);
        place *= width;
    }
    return index;
}

// Random integer pair with degrees <= d, resampled until outside M_d.
QuadPair random_pair_outside_m(std::mt19937_64& rng, long d) {
    for (;;) {
        QuadPair pair(d, random_qpoly(rng, static_cast<int>(d), -4, 4),
                      random_qpoly(rng, static_cast<int>(d), -4, 4));
        if (!in_M_d(pair)) return pair;
    }
}

}  // namespace

TEST_CASE("quadratic pair construction and induced map") {
    CHECK_THROWS_AS(QuadPair(0, qpoly({1}), qpoly({1})), InputError);
    CHECK_THROWS_AS(QuadPair(1, qpoly({0, 0, 1}), qpoly({1})), InputError);
    CHECK_THROWS_AS(QuadPair(1, Poly<Rat>(std::vector<Rat>{Rat(1, 2)}), qpoly({1})),
                    InputError);
    CHECK_NOTHROW(QuadPair(2, Poly<Rat>(), Poly<Rat>()));  // zero polynomials allowed

    // phi(x) = (x - gamma)^2 + c, checked against the dynamical-polynomial view.
    QuadPair pair(2, qpoly({1, -2, 1}), qpoly({0, 3}));
    DynPoly<Rat> phi = pair.as_dynpoly();
    CHECK(phi.degree() == 2);
    using K = RatFunc<Rat>;
    for (const Poly<Rat>& x0 : {qpoly({0}), qpoly({5}), qpoly({0, 1}), qpoly({-2, 0, 7})}) {
        const Poly<Rat> direct = (x0 - pair.gamma) * (x0 - pair.gamma) + pair.c;
        const K via_phi = phi.evaluate(x0.is_zero() ? K(qpoly({1})).zero() : K(x0));
        CHECK(via_phi == (direct.is_zero() ? K(qpoly({1})).zero() : K(direct)));
    }
}

TEST_CASE("degenerate-coefficient membership") {
    CHECK(in_M_d(QuadPair(1, qpoly({0, 1}), qpoly({1, 1}))));   // a_1 = b_1 = 1
    CHECK(in_M_d(QuadPair(1, qpoly({1}), qpoly({0, 1}))));      // a_1 = 0
    CHECK(in_M_d(QuadPair(2, qpoly({0, 1}), qpoly({0, 0, 1}))));  // a_2 = 0, b_2 = 1
    for (long d : {1L, 2L, 3L, 4L}) CHECK_FALSE(in_M_d(witness_pair(d)));
    CHECK_FALSE(in_M_d(QuadPair(1, qpoly({7, 2}), qpoly({0, -1}))));
}

TEST_CASE("critical-orbit square-freeness verdicts") {
    for (long d : {1L, 2L, 3L}) {
        const VdResult r = in_V_d(witness_pair(d), 6);
        CHECK_FALSE(r.member());
        CHECK(r.exact);
        CHECK(r.n_max == 6);
    }

    // Degenerate conventions: the zero pair is a witness at level one (the
    // zero polynomial is not square-free), a pair whose orbit freezes on a
    // square-free value never is.
    const VdResult zero = in_V_d(QuadPair(1, Poly<Rat>(), Poly<Rat>()), 4);
    REQUIRE(zero.member());
    CHECK(*zero.witness == 1);
    const VdResult frozen = in_V_d(QuadPair(1, qpoly({0, 1}), qpoly({0, 1})), 6);
    CHECK_FALSE(frozen.member());  // phi(t) = t: every iterate equals t

    // phi^2(gamma) = (c - gamma)^2 + c = t^2 for gamma = t, c = 2t - 1.
    const VdResult square = in_V_d(QuadPair(1, qpoly({0, 1}), qpoly({-1, 2})), 6);
    REQUIRE(square.member());
    CHECK(*square.witness == 2);
    CHECK(square.exact);

    CHECK_THROWS_AS(in_V_d(witness_pair(1), 0), InputError);
    CHECK_THROWS_AS(in_V_d(witness_pair(1), 17), InputError);

    // The cap is checked before a level is expanded: degrees run 1,2,4,8,...
    // so a cap of 8 coefficients stops at the degree-8 iterate.
    try {
        in_V_d(witness_pair(1), 6, 8);
        FAIL("expected DegreeCapExceeded");
    } catch (const DegreeCapExceeded& e) {
        CHECK(e.attempted == 9);
        CHECK(e.cap == 8);
        CHECK(std::string(e.what()).find("n = 4") != std::string::npos);
    }

    // Verdicts are monotone in the window: a small-window "no" never hides a
    // witness inside that window, and witnesses do not move.
    std::mt19937_64 rng(0x5eed'dead'beefULL);
    for (int round = 0; round < 50; ++round) {
        QuadPair pair(1, random_qpoly(rng, 1, -3, 3), random_qpoly(rng, 1, -3, 3));
        const VdResult narrow = in_V_d(pair, 3);
        const VdResult wide = in_V_d(pair, 6);
        if (narrow.member()) {
            REQUIRE(wide.member());
            CHECK(*wide.witness == *narrow.witness);
        } else if (wide.member()) {
            CHECK(*wide.witness > 3);
        }
    }
}

TEST_CASE("square-freeness past the exact-degree limit") {
    // d = 512: levels 1..3 stay exact (degrees 512, 1024, 2048), level 4
    // (degree 4096) is certified square-free by reductions mod word primes.
    const VdResult big = in_V_d(witness_pair(512), 4);
    CHECK_FALSE(big.member());
    CHECK(big.exact);

    // gamma = t^2048 + 1, c = 2t^2048 + 1 is outside M_d and reaches the
    // modular regime at level 2, where phi^2(gamma) = (t^2048 + 1)^2: every
    // reduction shows the repeated factor, so the level is reported as a
    // witness that rests on modular evidence alone.
    const VdResult mod = in_V_d(QuadPair(2048, mono(2048) + mono(0), mono(2048, 2) + mono(0)), 2);
    REQUIRE(mod.member());
    CHECK(*mod.witness == 2);
    CHECK_FALSE(mod.exact);

    // A pair in M_d has no degree law to anchor modular certification, so
    // exact growth past the limit stops the test instead.
    std::vector<Rat> cv(601, Rat(0));
    cv[600] = Rat(1);
    cv[1] = Rat(1);
    cv[0] = Rat(1);
    QuadPair degenerate_growth(600, qpoly({0, 1}), Poly<Rat>(cv));
    REQUIRE(in_M_d(degenerate_growth));
    try {
        in_V_d(degenerate_growth, 4);
        FAIL("expected DegreeCapExceeded");
    } catch (const DegreeCapExceeded& e) {
        CHECK(e.cap == static_cast<std::uint64_t>(kVdExactDegreeLimit));
        CHECK(std::string(e.what()).find("M_d") != std::string::npos);
    }

    // Degenerate pairs whose degrees collapse stay exact indefinitely: here
    // every iterate past the first has degree 512 again.
    const VdResult collapse = in_V_d(QuadPair(512, mono(512), mono(512) + mono(1)), 8);
    CHECK_FALSE(collapse.member());
    CHECK(collapse.exact);
}

TEST_CASE("degree law along the critical and zero orbits") {
    std::mt19937_64 rng(0xfeed'5eedULL);
    using K = RatFunc<Rat>;
    const K zero_pt = K(qpoly({1})).zero();
    for (int round = 0; round < 100; ++round) {
        const long d = 1 + round % 2;
        const QuadPair pair = random_pair_outside_m(rng, d);
        const DynPoly<Rat> phi = pair.as_dynpoly();

        // Direct Z[t] iteration for phi^n(gamma)...
        Poly<Rat> y = pair.c;
        const K gamma_pt = pair.gamma.is_zero() ? zero_pt : K(pair.gamma);
        const std::vector<K> orbit_g = orbit_values(phi, gamma_pt, 5);
        const std::vector<K> orbit_0 = orbit_values(phi, zero_pt, 5);
        for (int n = 1; n <= 5; ++n) {
            if (n > 1) {
                const Poly<Rat> w = y - pair.gamma;
                y = w * w + pair.c;
            }
            CHECK(y.degree() == d * (1L << (n - 1)));
            // ...agrees with the generic orbit through the dynamical view,
            const K& g_val = orbit_g[static_cast<std::size_t>(n - 1)];
            CHECK(g_val.is_polynomial());
            CHECK(g_val == K(y));
            // ...and the zero orbit obeys deg(phi^n(0)) = d * 2^n.
            const K& z_val = orbit_0[static_cast<std::size_t>(n - 1)];
            CHECK(z_val.is_polynomial());
            CHECK(z_val.num().degree() == d * (1L << n));
        }
    }
}

TEST_CASE("mod-2 derivative certificate") {
    for (long d : {1L, 2L, 3L, 4L}) {
        const Mod2Certificate cert = mod2_derivative_certificate(d, 8);
        CHECK(cert.pass);
        CHECK(cert.failed_n == 0);
        CHECK(cert.d == d);
        CHECK(cert.n_max == 8);
    }

    // The general-pair entry point agrees with the fixed-pair one.
    const Mod2Certificate general = mod2_derivative_certificate(witness_pair(3), 6);
    CHECK(general.pass);

    // Dropping the +t from c kills the derivative mod 2 at the first level.
    for (long d : {1L, 3L}) {
        const Mod2Certificate cert =
            mod2_derivative_certificate(QuadPair(d, mono(d), mono(d, 2)), 4);
        CHECK_FALSE(cert.pass);
        CHECK(cert.failed_n == 1);
        CHECK(cert.detail.find("is 0") != std::string::npos);
    }

    // An odd cubic coefficient in c survives the reduction and shows up in
    // every derivative, so the very first level already fails.
    const Mod2Certificate cubic =
        mod2_derivative_certificate(QuadPair(3, mono(3), mono(3, 2) + mono(1) + mono(3)), 4);
    CHECK_FALSE(cubic.pass);
    CHECK(cubic.failed_n == 1);

    CHECK_THROWS_AS(mod2_derivative_certificate(witness_pair(1), 0), InputError);
    CHECK_THROWS_AS(mod2_derivative_certificate(0L, 4), InputError);
}

TEST_CASE("pair enumeration is a bijection onto the coefficient box") {
    CHECK(box_size(1, 1) == 81);
    CHECK(box_size(1, 2) == 625);
    CHECK(box_size(2, 1) == 729);
    CHECK(box_size(1, 0) == 1);
    CHECK_THROWS_AS(box_size(3, 10), EnumerationCapExceeded);  // 21^8 pairs
    CHECK_THROWS_AS(box_size(0, 1), InputError);
    CHECK_THROWS_AS(box_size(1, -1), InputError);

    std::set<std::string> seen;
    for (std::uint64_t i = 0; i < 81; ++i) {
        const QuadPair pair = decode_pair(1, 1, i);
        for (const Poly<Rat>* f : {&pair.gamma, &pair.c})
            for (const Rat& a : f->coeffs()) {
                CHECK(a.den() == 1);
                CHECK(abs(a.num()) <= 1);
            }
        seen.insert(pair.gamma.to_string() + "|" + pair.c.to_string());
        CHECK(encode_pair(pair, 1) == i);
    }
    CHECK(seen.size() == 81);  // all distinct: the decoder covers the box
    CHECK_THROWS_AS(decode_pair(1, 1, 81), InputError);
}

TEST_CASE("exhaustive scans match the from-scratch oracle pair for pair") {
    struct Box {
        long d, B;
        int n_max;
    };
    for (const Box box : {Box{1, 1, 6}, Box{1, 2, 6}, Box{2, 1, 4}}) {
        std::vector<PairVerdict> per_pair;
        const DensityStats stats =
            density_scan(box.d, box.B, box.n_max, 4, &per_pair);
        CHECK(stats.total == box_size(box.d, box.B));
        CHECK(stats.count_m + stats.count_v + stats.count_o == stats.total);
        CHECK(stats.exact);
        REQUIRE(per_pair.size() == stats.total);

        std::uint64_t m = 0, v = 0, o = 0;
        std::vector<std::uint64_t> hist(static_cast<std::size_t>(box.n_max) + 1, 0);
        for (std::uint64_t i = 0; i < stats.total; ++i) {
            const OracleVerdict expect =
                oracle_classify(decode_pair(box.d, box.B, i), box.n_max);
            REQUIRE(cls_char(per_pair[i].cls) == expect.cls);
            REQUIRE(per_pair[i].witness == expect.witness);
            REQUIRE(per_pair[i].index == i);
            (expect.cls == 'M' ? m : expect.cls == 'V' ? v : o) += 1;
            if (expect.cls == 'V') hist[static_cast<std::size_t>(expect.witness)] += 1;
        }
        CHECK(stats.count_m == m);
        CHECK(stats.count_v == v);
        CHECK(stats.count_o == o);
        CHECK(stats.v_witness_by_n == hist);
    }
}

TEST_CASE("scan counts for the small boxes") {
    // d=1, B=1: outside M_d needs a_1, b_1 in {-1,1} distinct (2 sign
    // patterns) with a_0, b_0 free (9 combinations): 18 pairs, none of which
    // hit a square-freeness witness within the window.
    const DensityStats small = density_scan(1, 1, 6, 1);
    CHECK(small.total == 81);
    CHECK(small.count_m == 63);
    CHECK(small.count_v == 0);
    CHECK(small.count_o == 18);

    // d=1, B=2: the four sign-symmetric pairs around phi^2(gamma) = (t +- 1)^2
    // and t^2 are the only witnesses, all at level 2.
    const DensityStats wider = density_scan(1, 2, 6, 4);
    CHECK(wider.total == 625);
    CHECK(wider.count_m == 325);
    CHECK(wider.count_v == 4);
    CHECK(wider.count_o == 296);
    REQUIRE(wider.v_witness_by_n.size() == 7);
    CHECK(wider.v_witness_by_n[2] == 4);
    for (std::size_t n : {1u, 3u, 4u, 5u, 6u}) CHECK(wider.v_witness_by_n[n] == 0);

    // The single pair at B=0 is the zero pair, which is degenerate.
    const DensityStats tiny = density_scan(1, 0, 4, 1);
    CHECK(tiny.total == 1);
    CHECK(tiny.count_m == 1);
    CHECK(tiny.count_v == 0);
    CHECK(tiny.count_o == 0);
}

TEST_CASE("scan statistics are independent of the worker count") {
    std::vector<PairVerdict> one, four, ref;
    const DensityStats s1 = density_scan(1, 2, 6, 1, &one);
    const DensityStats s4 = density_scan(1, 2, 6, 4, &four);
    const DensityStats sr = density_scan_reference(1, 2, 6, &ref);

    for (const DensityStats* s : {&s4, &sr}) {
        CHECK(s1.total == s->total);
        CHECK(s1.count_m == s->count_m);
        CHECK(s1.count_v == s->count_v);
        CHECK(s1.count_o == s->count_o);
        CHECK(s1.v_witness_by_n == s->v_witness_by_n);
        CHECK(s1.exact == s->exact);
    }
    CHECK(one == four);
    CHECK(one == ref);
    CHECK(s1.workers == 1);
    CHECK(s4.workers == 4);

    CHECK_THROWS_AS(density_scan(1, 1, 6, 0), InputError);
    CHECK_THROWS_AS(density_scan(1, 1, 0, 1), InputError);
    CHECK_THROWS_AS(density_scan(1, 1, 17, 1), InputError);
    CHECK_THROWS_AS(density_scan(3, 10, 4, 1), EnumerationCapExceeded);
}

TEST_CASE("height-bound level limits") {
    for (long d : {1L, 2L, 3L, 10L, 1000000L}) {
        const StabilityBounds bounds = stability_bounds(d);
        CHECK(bounds.n_stab == 8);
        CHECK(bounds.n_zsig == 16);
    }
    // Boundary arithmetic at d = 1: 2^6 = 64 <= 114 but 2^7 = 128 > 114, and
    // 2^14 = 16384 <= 36 * 769 = 27684 but 2^15 = 32768 > 27684.
    CHECK((1L << 6) <= 110 + 4);
    CHECK((1L << 7) > 110 + 4);
    CHECK((1L << 14) <= 36 * ((1L << 9) + (1L << 8) + 1));
    CHECK((1L << 15) > 36 * ((1L << 9) + (1L << 8) + 1));

    CHECK_THROWS_AS(stability_bounds(0), InputError);
}
