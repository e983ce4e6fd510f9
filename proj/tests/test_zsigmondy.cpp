#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dynprim/dynpoly.hpp"
#include "dynprim/errors.hpp"
#include "dynprim/factor.hpp"
#include "dynprim/places.hpp"
#include "dynprim/poly.hpp"
#include "dynprim/ratfunc.hpp"
#include "dynprim/zsigmondy.hpp"
#include "oracles.hpp"

using namespace dynprim;
using oracles::dynpoly;
using oracles::fppoly;
using oracles::fpt;
using oracles::qpoly;
using oracles::qt;
using oracles::random_fppoly;

namespace {

using KP = RatFunc<Fp>;

// x^d + c0 over F_p (c0 a polynomial in t; zero gives the pure power).
DynPoly<Fp> power_plus(const PrimeField& field, int d, const Poly<Fp>& c0) {
    KP one = fpt(field).one();
    std::vector<KP> cx(static_cast<std::size_t>(d) + 1, one.zero());
    cx[0] = KP(c0);
    cx[static_cast<std::size_t>(d)] = one;
    return dynpoly<Fp>(std::move(cx));
}

std::set<std::string> place_names(const std::vector<PrimeDivisor<Fp>>& v) {
    std::set<std::string> out;
    for (const auto& p : v) out.insert(p.to_string());
    return out;
}

std::map<std::string, long> support_map(const std::vector<std::pair<PrimeDivisor<Fp>, long>>& v) {
    std::map<std::string, long> out;
    for (const auto& [place, mult] : v) out.emplace(place.to_string(), mult);
    return out;
}

// Independent orbit evaluation: Horner directly in F_p[t], never touching
// rational-function arithmetic.  Returns c_1..c_N for c_n = phi^n(b) - a.
std::vector<Poly<Fp>> scratch_values(const DynPoly<Fp>& phi, const Poly<Fp>& a, const Poly<Fp>& b,
                                     int N) {
    const Poly<RatFunc<Fp>>& px = phi.in_x();
    std::vector<Poly<Fp>> coef;
    for (std::size_t i = 0; i <= static_cast<std::size_t>(px.degree()); ++i) {
        coef.push_back(px.get(i).is_zero() ? Poly<Fp>() : px.get(i).num());
    }
    std::vector<Poly<Fp>> out;
    Poly<Fp> x = b;
    for (int n = 1; n <= N; ++n) {
        Poly<Fp> acc = coef.back();
        for (std::size_t i = coef.size() - 1; i-- > 0;) acc = acc * x + coef[i];
        x = std::move(acc);
        out.push_back(x - a);
    }
    return out;
}

// From-scratch cross-check of every report field: values recomputed by the
// Horner loop above, supports re-derived with a different factoring seed, and
// primitivity decided by valuation tests against all earlier values.
void check_against_scratch(const DynPoly<Fp>& phi, const Poly<Fp>& a, const Poly<Fp>& b, int N,
                           std::uint64_t scan_seed, std::uint64_t oracle_seed) {
    ZsigmondyReport rep = zsigmondy_scan(phi, a, b, N, scan_seed);
    REQUIRE(rep.range == N);
    REQUIRE(rep.levels.size() == static_cast<std::size_t>(N));
    REQUIRE(rep.support.levels.size() == static_cast<std::size_t>(N));

    std::vector<Poly<Fp>> cs = scratch_values(phi, a, b, N);
    std::vector<int> z_expected, z_odd_expected;
    std::map<std::string, int> first_seen_expected;

    for (int n = 1; n <= N; ++n) {
        const ZsigmondyLevel& lvl = rep.levels[static_cast<std::size_t>(n) - 1];
        CHECK(lvl.n == n);
        CHECK(lvl.value == cs[static_cast<std::size_t>(n) - 1]);
        CHECK(lvl.inf_valuation == -cs[static_cast<std::size_t>(n) - 1].degree());
        CHECK(lvl.inf_valuation <= 0);
        CHECK(support_map(rep.support.levels[static_cast<std::size_t>(n) - 1]) ==
              support_map(lvl.support));

        FpFactorization fac = factor_fp(cs[static_cast<std::size_t>(n) - 1], oracle_seed);
        std::map<std::string, long> expect_support;
        std::set<std::string> expect_primitive, expect_primitive_odd;
        for (const auto& f : fac.factors) {
            expect_support.emplace(f.factor.to_string(), static_cast<long>(f.multiplicity));
            // Dual route: multiplicity from factoring must agree with repeated
            // exact division.
            CHECK(valuation(cs[static_cast<std::size_t>(n) - 1], f.factor) ==
                  static_cast<long>(f.multiplicity));
            bool fresh = true;
            for (int m = 1; m < n; ++m) {
                if (valuation(cs[static_cast<std::size_t>(m) - 1], f.factor) > 0) fresh = false;
            }
            if (fresh) {
                expect_primitive.insert(f.factor.to_string());
                if (f.multiplicity % 2 == 1) expect_primitive_odd.insert(f.factor.to_string());
                if (!first_seen_expected.count(f.factor.to_string()))
                    first_seen_expected.emplace(f.factor.to_string(), n);
            }
        }
        CHECK(support_map(lvl.support) == expect_support);
        CHECK(place_names(lvl.primitive) == expect_primitive);
        CHECK(place_names(lvl.primitive_odd) == expect_primitive_odd);
        if (expect_primitive.empty()) z_expected.push_back(n);
        if (expect_primitive_odd.empty()) z_odd_expected.push_back(n);
    }

    CHECK(rep.zsigmondy_set == z_expected);
    CHECK(rep.zsigmondy_set_odd == z_odd_expected);

    std::map<std::string, int> first_seen_got;
    for (const auto& [place, n] : rep.support.first_seen) first_seen_got.emplace(place.to_string(), n);
    CHECK(first_seen_got == first_seen_expected);
}

}  // namespace

TEST_CASE("valuation: pinned examples") {
    PrimeField f5(5);
    Poly<Fp> t5 = fppoly(f5, {0, 1});

    // t^2 (t+1) at t.
    Poly<Fp> c = t5 * t5 * fppoly(f5, {1, 1});
    CHECK(valuation(c, t5) == 2);
    CHECK(valuation(c, fppoly(f5, {1, 1})) == 1);
    CHECK(valuation(c, fppoly(f5, {2, 1})) == 0);
    CHECK(valuation(KP(c), PrimeDivisor<Fp>::at(t5)) == 2);

    // 1/t at infinity: deg den - deg num.
    KP invt = fpt(f5).inv();
    CHECK(valuation(invt, PrimeDivisor<Fp>::at_infinity()) == 1);
    CHECK(valuation(invt, PrimeDivisor<Fp>::at(t5)) == -1);
    CHECK(valuation(KP(t5 * t5), PrimeDivisor<Fp>::at_infinity()) == -2);
    CHECK(valuation(KP(fppoly(f5, {4})), PrimeDivisor<Fp>::at_infinity()) == 0);

    // (2t^3 + 2t) / (3t^2 + 2) over Q: t divides the numerator once and
    // misses the denominator.
    RatFunc<Rat> beta(qpoly({0, 2, 0, 2}), qpoly({2, 0, 3}));
    CHECK(valuation(beta, PrimeDivisor<Rat>::at(qpoly({0, 1}))) == 1);
    CHECK(valuation(beta, PrimeDivisor<Rat>::at_infinity()) == -1);

    CHECK_THROWS_AS(valuation(Poly<Fp>(), t5), ZeroInput);
    CHECK_THROWS_AS(valuation(KP(c).zero(), PrimeDivisor<Fp>::at(t5)), ZeroInput);
}

TEST_CASE("valuation: product formula over the full support") {
    std::mt19937_64 rng(771);
    PrimeField f7(7);
    std::uniform_int_distribution<int> deg(0, 4);
    for (int round = 0; round < 30; ++round) {
        Poly<Fp> num = random_fppoly(rng, f7, deg(rng));
        Poly<Fp> den = random_fppoly(rng, f7, deg(rng));
        KP beta(num, den);
        if (beta.is_zero() || beta.is_constant()) continue;

        long total = 0;
        std::vector<PrimeDivisor<Fp>> places;
        for (const auto& f : factor_fp(beta.num()).factors)
            places.push_back(PrimeDivisor<Fp>::at(f.factor));
        for (const auto& f : factor_fp(beta.den()).factors)
            places.push_back(PrimeDivisor<Fp>::at(f.factor));
        for (const auto& place : places) total += valuation(beta, place) * place.degree();
        total += valuation(beta, PrimeDivisor<Fp>::at_infinity());
        CHECK(total == 0);
    }
}

TEST_CASE("valuation: additive on products") {
    std::mt19937_64 rng(772);
    PrimeField f7(7);
    std::uniform_int_distribution<int> deg(0, 3);
    for (int round = 0; round < 20; ++round) {
        KP beta(random_fppoly(rng, f7, deg(rng)), random_fppoly(rng, f7, deg(rng)));
        KP gamma(random_fppoly(rng, f7, deg(rng)), random_fppoly(rng, f7, deg(rng)));
        std::vector<PrimeDivisor<Fp>> places{PrimeDivisor<Fp>::at_infinity()};
        for (const Poly<Fp>& part : {beta.num(), beta.den(), gamma.num(), gamma.den()}) {
            for (const auto& f : factor_fp(part).factors)
                places.push_back(PrimeDivisor<Fp>::at(f.factor));
        }
        for (const auto& place : places) {
            CHECK(valuation(beta * gamma, place) == valuation(beta, place) + valuation(gamma, place));
        }
    }
}

TEST_CASE("squarefree split: pinned examples over F_5") {
    PrimeField f5(5);
    Fp one = Fp::from_int(1, f5);
    Poly<Fp> t = fppoly(f5, {0, 1});

    SquarefreeSplit s = squarefree_part(fppoly(f5, {0, 0, 2}));  // 2t^2
    CHECK(s.unit == Fp::from_int(2, f5));
    CHECK(s.sqfree == fppoly(f5, {1}));
    CHECK(s.square == t);

    s = squarefree_part(fppoly(f5, {0, 1, 0, 1}));  // t^3 + t = t(t+2)(t+3)
    CHECK(s.unit == one);
    CHECK(s.sqfree == fppoly(f5, {0, 1, 0, 1}));
    CHECK(s.square == fppoly(f5, {1}));

    // 3 t^4 (t+1)
    s = squarefree_part(fppoly(f5, {0, 0, 0, 0, 3}) * fppoly(f5, {1, 1}));
    CHECK(s.unit == Fp::from_int(3, f5));
    CHECK(s.sqfree == fppoly(f5, {1, 1}));
    CHECK(s.square == t * t);

    CHECK_THROWS_AS(squarefree_part(Poly<Fp>()), ZeroInput);
}

TEST_CASE("squarefree split: u d y^2 reconstructs the input") {
    std::mt19937_64 rng(773);
    for (std::uint64_t p : {5ull, 7ull}) {
        PrimeField field(p);
        std::uniform_int_distribution<int> deg(1, 3);
        for (int round = 0; round < 20; ++round) {
            // Force interesting multiplicity structure: r1 * r2^2 * r3^3.
            Poly<Fp> r1 = random_fppoly(rng, field, deg(rng));
            Poly<Fp> r2 = random_fppoly(rng, field, deg(rng));
            Poly<Fp> r3 = random_fppoly(rng, field, deg(rng));
            Poly<Fp> c = r1 * r2 * r2 * r3 * r3 * r3;

            SquarefreeSplit s = squarefree_part(c);
            CHECK(Poly<Fp>::constant(s.unit) * s.sqfree * s.square * s.square == c);
            CHECK(s.unit == c.lc());
            if (s.sqfree.degree() > 0) {
                CHECK(s.sqfree.is_monic());
                CHECK(poly_gcd(s.sqfree, s.sqfree.derivative()).is_one());
            } else {
                CHECK(s.sqfree.is_one());
            }
            if (s.square.degree() > 0) {
                CHECK(s.square.is_monic());
            } else {
                CHECK(s.square.is_one());
            }
        }
    }
}

TEST_CASE("scan: pure square orbit over F_3 has an eventually empty primitive list") {
    PrimeField f3(3);
    Poly<Fp> t = fppoly(f3, {0, 1});
    DynPoly<Fp> phi = power_plus(f3, 2, Poly<Fp>());  // x^2
    ZsigmondyReport rep = zsigmondy_scan(phi, Poly<Fp>(), t, 8);

    // c_n = t^{2^n}: the only prime ever seen is t, at level 1.
    CHECK(rep.zsigmondy_set == std::vector<int>{2, 3, 4, 5, 6, 7, 8});
    CHECK(rep.zsigmondy_set_odd == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8});
    REQUIRE(rep.support.first_seen.size() == 1);
    CHECK(rep.support.first_seen.begin()->first == PrimeDivisor<Fp>::at(t));
    CHECK(rep.support.first_seen.begin()->second == 1);

    for (int n = 1; n <= 8; ++n) {
        const ZsigmondyLevel& lvl = rep.levels[static_cast<std::size_t>(n) - 1];
        long e = 1L << n;
        if (n <= 3) CHECK(lvl.value == t.pow(static_cast<std::uint64_t>(e)));
        CHECK(lvl.value.degree() == e);
        CHECK(lvl.inf_valuation == -e);
        CHECK(lvl.inf_valuation <= 0);
        REQUIRE(lvl.support.size() == 1);
        CHECK(lvl.support[0].first == PrimeDivisor<Fp>::at(t));
        CHECK(lvl.support[0].second == e);
        if (n == 1) {
            CHECK(place_names(lvl.primitive) == std::set<std::string>{"t"});
        } else {
            CHECK(lvl.primitive.empty());
        }
        // Even exponent at every level: the odd refinement never fires.
        CHECK(lvl.primitive_odd.empty());
    }
}

TEST_CASE("scan: orbit of zero under x^3 + t over F_5") {
    PrimeField f5(5);
    Poly<Fp> t = fppoly(f5, {0, 1});
    DynPoly<Fp> phi = power_plus(f5, 3, t);  // x^3 + t
    ZsigmondyReport rep = zsigmondy_scan(phi, Poly<Fp>(), Poly<Fp>(), 6);

    // c_1 = t is vacuously primitive; c_2 = t^3 + t = t(t+2)(t+3) picks up
    // two fresh places.
    CHECK(rep.levels[0].value == t);
    CHECK(place_names(rep.levels[0].primitive) == std::set<std::string>{"t"});
    CHECK(place_names(rep.levels[0].primitive_odd) == std::set<std::string>{"t"});

    CHECK(rep.levels[1].value == fppoly(f5, {0, 1, 0, 1}));
    CHECK(place_names(rep.levels[1].primitive) == std::set<std::string>{"t + 2", "t + 3"});
    CHECK(place_names(rep.levels[1].primitive_odd) == std::set<std::string>{"t + 2", "t + 3"});
    CHECK(support_map(rep.levels[1].support) ==
          std::map<std::string, long>{{"t", 1}, {"t + 2", 1}, {"t + 3", 1}});

    CHECK(std::find(rep.zsigmondy_set.begin(), rep.zsigmondy_set.end(), 1) == rep.zsigmondy_set.end());
    CHECK(std::find(rep.zsigmondy_set.begin(), rep.zsigmondy_set.end(), 2) == rep.zsigmondy_set.end());
}

TEST_CASE("scan: incremental table equals from-scratch recomputation") {
    PrimeField f3(3), f5(5), f7(7);

    // x^2, a = 0, b = t over F_3.
    check_against_scratch(power_plus(f3, 2, Poly<Fp>()), Poly<Fp>(), fppoly(f3, {0, 1}), 6, 0, 99);
    // x^3 + t, a = 0, b = 0 over F_5.
    check_against_scratch(power_plus(f5, 3, fppoly(f5, {0, 1})), Poly<Fp>(), Poly<Fp>(), 6, 0, 99);
    // x^2 + t, a = 1, b = t over F_7.
    check_against_scratch(power_plus(f7, 2, fppoly(f7, {0, 1})), fppoly(f7, {1}), fppoly(f7, {0, 1}),
                          6, 0, 99);
}

TEST_CASE("scan: primitive lists are disjoint across levels") {
    PrimeField f5(5), f7(7);
    std::vector<ZsigmondyReport> reps;
    reps.push_back(zsigmondy_scan(power_plus(f5, 3, fppoly(f5, {0, 1})), Poly<Fp>(), Poly<Fp>(), 6));
    reps.push_back(zsigmondy_scan(power_plus(f7, 2, fppoly(f7, {0, 1})), fppoly(f7, {1}),
                                  fppoly(f7, {0, 1}), 6));
    for (const ZsigmondyReport& rep : reps) {
        std::set<std::string> all;
        for (const ZsigmondyLevel& lvl : rep.levels) {
            for (const auto& p : lvl.primitive) {
                CHECK(!all.count(p.to_string()));
                all.insert(p.to_string());
            }
            // The odd list is a sublist of the primitive list.
            std::set<std::string> prim = place_names(lvl.primitive);
            for (const auto& p : lvl.primitive_odd) CHECK(prim.count(p.to_string()));
        }
        // first_seen matches the first level whose support contains the place.
        for (const auto& [place, n0] : rep.support.first_seen) {
            for (int n = 1; n <= rep.range; ++n) {
                bool in_level = false;
                for (const auto& [q, mult] : rep.support.levels[static_cast<std::size_t>(n) - 1]) {
                    if (q == place) in_level = true;
                }
                if (n < n0) CHECK(!in_level);
                if (n == n0) CHECK(in_level);
            }
        }
    }
}

TEST_CASE("scan: preperiodic bases are rejected") {
    PrimeField f3(3);
    DynPoly<Fp> phi = power_plus(f3, 2, Poly<Fp>());  // x^2

    // 1 is fixed; 0 is fixed.
    CHECK_THROWS_AS(zsigmondy_scan(phi, fppoly(f3, {2}), fppoly(f3, {1}), 4), PreperiodicBase);
    CHECK_THROWS_AS(zsigmondy_scan(phi, fppoly(f3, {2}), Poly<Fp>(), 4), PreperiodicBase);
    try {
        zsigmondy_scan(phi, fppoly(f3, {2}), fppoly(f3, {1}), 4);
        FAIL("expected PreperiodicBase");
    } catch (const PreperiodicBase& e) {
        CHECK(std::string(e.what()).find("preperiod 0") != std::string::npos);
        CHECK(std::string(e.what()).find("period 1") != std::string::npos);
    }
}

TEST_CASE("scan: caller override skips the wandering certificate") {
    PrimeField f3(3);
    DynPoly<Fp> phi = power_plus(f3, 2, Poly<Fp>());  // x^2, base 1 is fixed
    CHECK_THROWS_AS(zsigmondy_scan(phi, Poly<Fp>(), fppoly(f3, {1}), 3), PreperiodicBase);

    ZsigmondyReport rep = zsigmondy_scan(phi, Poly<Fp>(), fppoly(f3, {1}), 3, 0, kDefaultDegreeCap,
                                         /*assume_wandering=*/true);
    // c_n = 1: a unit, so no primes at all and every level lands in Z.
    CHECK(rep.zsigmondy_set == std::vector<int>{1, 2, 3});
    CHECK(rep.zsigmondy_set_odd == std::vector<int>{1, 2, 3});
    for (const ZsigmondyLevel& lvl : rep.levels) {
        CHECK(lvl.value == fppoly(f3, {1}));
        CHECK(lvl.inf_valuation == 0);
        CHECK(lvl.support.empty());
        CHECK(lvl.primitive.empty());
    }
    CHECK(rep.support.first_seen.empty());
}

TEST_CASE("scan: orbit hitting the target is a zero input") {
    PrimeField f3(3);
    DynPoly<Fp> phi = power_plus(f3, 2, Poly<Fp>());  // x^2
    Poly<Fp> t = fppoly(f3, {0, 1});
    Poly<Fp> t4 = t.pow(4);
    try {
        zsigmondy_scan(phi, t4, t, 3);
        FAIL("expected ZeroInput");
    } catch (const ZeroInput& e) {
        CHECK(std::string(e.what()).find("phi^2") != std::string::npos);
    }
}

TEST_CASE("scan: degree cap and input validation") {
    PrimeField f3(3);
    DynPoly<Fp> phi = power_plus(f3, 2, Poly<Fp>());
    Poly<Fp> t = fppoly(f3, {0, 1});

    // deg c_n = 2^n: the first level over a cap of 100 is n = 7.
    try {
        zsigmondy_scan(phi, Poly<Fp>(), t, 10, 0, 100);
        FAIL("expected DegreeCapExceeded");
    } catch (const DegreeCapExceeded& e) {
        CHECK(e.attempted == 129);
        CHECK(e.cap == 100);
    }

    CHECK_THROWS_AS(zsigmondy_scan(phi, Poly<Fp>(), t, 0), InputError);

    // Non-integral coefficient: x^2 + 1/t.
    KP invt = fpt(f3).inv();
    DynPoly<Fp> bad = dynpoly<Fp>({invt, invt.zero(), invt.one()});
    CHECK_THROWS_AS(zsigmondy_scan(bad, Poly<Fp>(), t, 3), InputError);
}

TEST_CASE("scan: report does not depend on the factoring seed") {
    PrimeField f5(5);
    DynPoly<Fp> phi = power_plus(f5, 3, fppoly(f5, {0, 1}));
    ZsigmondyReport r0 = zsigmondy_scan(phi, Poly<Fp>(), Poly<Fp>(), 5, 0);
    ZsigmondyReport r1 = zsigmondy_scan(phi, Poly<Fp>(), Poly<Fp>(), 5, 0xdeadbeefULL);

    CHECK(r0.zsigmondy_set == r1.zsigmondy_set);
    CHECK(r0.zsigmondy_set_odd == r1.zsigmondy_set_odd);
    REQUIRE(r0.levels.size() == r1.levels.size());
    for (std::size_t i = 0; i < r0.levels.size(); ++i) {
        CHECK(r0.levels[i].value == r1.levels[i].value);
        CHECK(support_map(r0.levels[i].support) == support_map(r1.levels[i].support));
        CHECK(place_names(r0.levels[i].primitive) == place_names(r1.levels[i].primitive));
        CHECK(place_names(r0.levels[i].primitive_odd) == place_names(r1.levels[i].primitive_odd));
    }
    CHECK(r0.support.first_seen == r1.support.first_seen);
}

TEST_CASE("odd refinement wrapper matches the per-level lists") {
    PrimeField f3(3), f5(5);

    DynPoly<Fp> cube = power_plus(f5, 3, fppoly(f5, {0, 1}));
    ZsigmondyReport rep = zsigmondy_scan(cube, Poly<Fp>(), Poly<Fp>(), 4);
    auto odd = odd_primitive_scan(cube, Poly<Fp>(), Poly<Fp>(), 4);
    REQUIRE(odd.size() == 4);
    for (std::size_t i = 0; i < odd.size(); ++i) {
        CHECK(place_names(odd[i]) == place_names(rep.levels[i].primitive_odd));
    }

    // Exponent-one primitive primes are retained by the refinement...
    CHECK(place_names(odd[1]) == std::set<std::string>{"t + 2", "t + 3"});
    // ...while a primitive prime appearing as a square is dropped from the
    // odd list but kept in the primitive list.
    DynPoly<Fp> square = power_plus(f3, 2, Poly<Fp>());
    ZsigmondyReport sq = zsigmondy_scan(square, Poly<Fp>(), fppoly(f3, {0, 1}), 2);
    CHECK(place_names(sq.levels[0].primitive) == std::set<std::string>{"t"});
    CHECK(sq.levels[0].primitive_odd.empty());
}
