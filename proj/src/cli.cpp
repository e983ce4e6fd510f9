#include "dynprim/cli.hpp"

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dynprim/density.hpp"
#include "dynprim/dynpoly.hpp"
#include "dynprim/errors.hpp"
#include "dynprim/factor.hpp"
#include "dynprim/family.hpp"
#include "dynprim/fp.hpp"
#include "dynprim/parse.hpp"
#include "dynprim/places.hpp"
#include "dynprim/report.hpp"
#include "dynprim/riccati.hpp"
#include "dynprim/trinomial.hpp"
#include "dynprim/zsigmondy.hpp"

namespace dynprim {
namespace {

using ojson = nlohmann::ordered_json;

// Polynomial strings above this degree are elided from reports; the degree is
// always present, so nothing is lost for machine consumers, and human output
// stays readable when iterates reach degrees in the hundreds.
constexpr int kMaxPrintedDegree = 30;

std::uint64_t degree_cap_from_env() {
    const char* v = std::getenv("DYNPRIM_DEGREE_CAP");
    if (v == nullptr || *v == '\0') return kDefaultDegreeCap;
    char* end = nullptr;
    errno = 0;
    const unsigned long long val = std::strtoull(v, &end, 10);
    if (errno != 0 || end == v || *end != '\0' || val == 0)
        throw InputError("DYNPRIM_DEGREE_CAP must be a positive integer, got '" + std::string(v) + "'");
    return static_cast<std::uint64_t>(val);
}

std::string field_name(std::uint64_t p) { return p == 0 ? "Q" : "F_" + std::to_string(p); }

// Parse an x-free expression as an element of F(t).
template <CoeffField F>
RatFunc<F> parse_coeff(const std::string& src, const F& one, std::uint64_t cap) {
    return as_coefficient(parse_expr(src, one, cap));
}

// Parse an x-free expression that must additionally be a polynomial in t.
template <CoeffField F>
Poly<F> parse_poly_in_t(const std::string& src, const F& one, std::uint64_t cap, const std::string& flag) {
    const RatFunc<F> k = parse_coeff(src, one, cap);
    if (!k.is_polynomial())
        throw InputError("--" + flag + " must be a polynomial in t, got " + k.to_string("t"));
    return k.is_zero() ? Poly<F>() : k.num();
}

template <CoeffField F>
ojson poly_json(const Poly<F>& f) {
    ojson j;
    j["degree"] = f.degree();
    if (f.degree() <= kMaxPrintedDegree) j["value"] = f.to_string("t");
    return j;
}

ojson cert_json(const IrreducibilityCertificate& c) {
    ojson j;
    j["status"] = c.status == CertStatus::certified ? "certified" : "unknown";
    if (!c.method.empty()) j["method"] = c.method;
    if (!c.witness.empty()) j["witness"] = c.witness;
    return j;
}

ojson wandering_json(const WanderingReport& w) {
    ojson j;
    switch (w.verdict) {
        case WanderingVerdict::wandering: j["verdict"] = "wandering"; break;
        case WanderingVerdict::preperiodic: j["verdict"] = "preperiodic"; break;
        case WanderingVerdict::unknown: j["verdict"] = "unknown"; break;
    }
    if (w.verdict == WanderingVerdict::wandering) {
        j["witness_index"] = w.witness_index;
        j["defect_bound"] = w.defect_bound;
    }
    if (w.verdict == WanderingVerdict::preperiodic) {
        j["preperiod"] = w.preperiod;
        j["period"] = w.period;
    }
    return j;
}

// ---------------------------------------------------------------------------
// riccati
// ---------------------------------------------------------------------------

struct RiccatiArgs {
    std::string phi;
    std::string a = "0";
    std::uint64_t p = 0;
    bool isotriviality = false;
};

template <CoeffField F>
ojson riccati_result(const RiccatiArgs& args, const F& one, std::uint64_t cap, ojson& input) {
    const Poly<RatFunc<F>> expr = parse_expr(args.phi, one, cap);
    const DynPoly<F> phi = as_dynpoly(expr);
    input["phi"] = expr_to_string(expr);

    ojson body;
    body["degree"] = phi.degree();
    const RatFunc<F> delta = delta_phi(phi);
    const RatFunc<F> eps = epsilon_phi(phi);
    body["delta"] = delta.to_string("t");
    body["epsilon"] = eps.to_string("t");
    body["delta_is_zero"] = delta.is_zero();
    if (!delta.is_zero()) {
        const RiccatiSolution<F> sol = solve_riccati_coeffs(phi);
        ojson s;
        s["a"] = sol.a.to_string("t");
        s["b"] = sol.b.to_string("t");
        s["c"] = sol.c.to_string("t");
        s["e"] = sol.e.to_string("t");
        s["f"] = sol.f.to_string("t");
        s["g"] = sol.g.to_string("t");
        body["solution"] = s;
        const auto top = p_phi_top_coefficients(phi, sol);
        body["residual"] = ojson::array({top[0].to_string("t"), top[1].to_string("t"), top[2].to_string("t")});
        body["residual_is_zero"] = top[0].is_zero() && top[1].is_zero() && top[2].is_zero();
        body["epsilon_identity"] = eps == (sol.b - sol.f) * delta;
    }
    if (args.isotriviality) {
        const RatFunc<F> a = parse_coeff(args.a, one, cap);
        input["a"] = a.to_string("t");
        const IsotrivialityReport<F> rep = dyniso_preconditions(phi, a, cap);
        ojson j;
        j["delta_nonzero"] = !rep.delta.is_zero();
        j["epsilon_nonzero"] = !rep.epsilon.is_zero();
        j["iterate_irreducibility"] = cert_json(rep.certificate);
        j["verdict"] = rep.verdict == IsoVerdict::nonisotrivial_curve_exists ? "nonisotrivial_curve_exists"
                                                                             : "inconclusive";
        body["isotriviality"] = j;
    }
    return body;
}

Report run_riccati(const RiccatiArgs& args, std::uint64_t cap) {
    Report rep;
    rep.subcommand = "riccati";
    rep.input["field"] = field_name(args.p);
    if (args.p == 0) {
        rep.result = riccati_result(args, Rat(1), cap, rep.input);
    } else {
        rep.result = riccati_result(args, Fp(1, PrimeField(args.p)), cap, rep.input);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// zsigmondy
// ---------------------------------------------------------------------------

struct ZsigmondyArgs {
    std::string phi;
    std::string a = "0";
    std::string b = "0";
    std::uint64_t p = 0;
    int nmax = 0;
    std::uint64_t seed = 0;
    bool assume_wandering = false;
};

Report run_zsigmondy(const ZsigmondyArgs& args, std::uint64_t cap) {
    const PrimeField field(args.p);
    const Fp one(1, field);
    const Poly<RatFunc<Fp>> expr = parse_expr(args.phi, one, cap);
    const DynPoly<Fp> phi = as_dynpoly(expr);
    const Poly<Fp> a = parse_poly_in_t(args.a, one, cap, "a");
    const Poly<Fp> b = parse_poly_in_t(args.b, one, cap, "b");

    Report rep;
    rep.subcommand = "zsigmondy";
    rep.input["field"] = field_name(args.p);
    rep.input["phi"] = expr_to_string(expr);
    rep.input["a"] = a.to_string("t");
    rep.input["b"] = b.to_string("t");
    rep.input["nmax"] = args.nmax;
    rep.input["seed"] = args.seed;

    const ZsigmondyReport scan = zsigmondy_scan(phi, a, b, args.nmax, args.seed, cap, args.assume_wandering);
    ojson body;
    body["range"] = scan.range;
    ojson levels = ojson::array();
    for (const ZsigmondyLevel& lvl : scan.levels) {
        ojson row;
        row["n"] = lvl.n;
        row["degree"] = lvl.value.degree();
        if (lvl.value.degree() <= kMaxPrintedDegree) row["value"] = lvl.value.to_string("t");
        row["inf_valuation"] = lvl.inf_valuation;
        ojson support = ojson::array();
        for (const auto& [pd, v] : lvl.support) {
            ojson e;
            e["place"] = pd.to_string("t");
            e["valuation"] = v;
            support.push_back(e);
        }
        row["support"] = support;
        ojson prim = ojson::array();
        for (const auto& pd : lvl.primitive) prim.push_back(pd.to_string("t"));
        row["primitive"] = prim;
        ojson prim_odd = ojson::array();
        for (const auto& pd : lvl.primitive_odd) prim_odd.push_back(pd.to_string("t"));
        row["primitive_odd"] = prim_odd;
        levels.push_back(row);
    }
    body["levels"] = levels;
    body["zsigmondy_set"] = scan.zsigmondy_set;
    body["zsigmondy_set_odd"] = scan.zsigmondy_set_odd;
    rep.result = body;
    return rep;
}

// ---------------------------------------------------------------------------
// trinomial
// ---------------------------------------------------------------------------

struct TrinomialArgs {
    std::string phi;
    std::uint64_t p = 0;
    std::string place;  // empty = no place-specific checks
    std::string gamma;  // empty = no dynamical checks
    int n = 0;          // 0 = no dynamical checks
};

template <CoeffField F>
PrimeDivisor<F> parse_place(const std::string& src, const F& one, std::uint64_t cap) {
    if (src == "inf" || src == "infinity") return PrimeDivisor<F>::at_infinity();
    const Poly<F> pi = parse_poly_in_t(src, one, cap, "place");
    if (pi.degree() < 1) throw InputError("--place must be a nonconstant polynomial in t, or 'infinity'");
    return PrimeDivisor<F>::at(pi);
}

template <CoeffField F>
ojson trinomial_result(const TrinomialArgs& args, const F& one, std::uint64_t cap, ojson& input) {
    const Poly<RatFunc<F>> expr = parse_expr(args.phi, one, cap);
    const Trinomial<F> tri = trinomial_from_poly(expr);
    input["phi"] = expr_to_string(expr);

    ojson body;
    body["d"] = tri.d;
    body["s"] = tri.s;
    body["A"] = tri.A.to_string("t");
    body["B"] = tri.B.to_string("t");
    const RatFunc<F> disc = trinomial_disc(tri);
    body["disc"] = disc.to_string("t");
    body["disc_is_zero"] = disc.is_zero();

    if (args.place.empty()) {
        if (!args.gamma.empty() || args.n != 0)
            throw InputError("--gamma/--n require --place (the checks are valuation-theoretic)");
        return body;
    }
    const PrimeDivisor<F> place = parse_place(args.place, one, cap);
    input["place"] = place.to_string("t");

    const TranspositionChecklist chk = transposition_hypotheses(tri, place, cap);
    ojson c;
    c["coprime_exponents"] = chk.coprime_exponents;
    c["degrees_unit"] = chk.degrees_unit;
    c["ab_unit"] = chk.ab_unit;
    c["ab_valuation"] = chk.ab_valuation;
    c["disc_nonzero"] = chk.disc_nonzero;
    c["disc_valuation"] = chk.disc_valuation;
    c["disc_divides"] = chk.disc_divides;
    c["disc_odd"] = chk.disc_odd;
    c["irreducibility"] = cert_json(chk.irreducibility);
    c["all_pass"] = chk.all_pass;
    c["conclusion"] = chk.conclusion;
    body["transposition_hypotheses"] = c;

    if (args.gamma.empty() && args.n == 0) return body;
    if (args.gamma.empty() || args.n == 0)
        throw InputError("the dynamical checks need both --gamma and --n");
    const RatFunc<F> gamma = parse_coeff<F>(args.gamma, one, cap);
    input["gamma"] = gamma.to_string("t");
    input["n"] = args.n;

    if (args.n >= 2) {
        const DynTranspositionReport dyn = dyn_transposition_check(tri, gamma, args.n, place, cap);
        ojson d;
        d["n"] = dyn.n;
        d["integral_model"] = dyn.integral_model;
        d["gamma_valuation"] = dyn.gamma_valuation;
        d["odd_valuation"] = dyn.odd_valuation;
        d["a_valuation"] = dyn.a_valuation;
        d["zero_orbit_valuation"] = dyn.zero_orbit_valuation;
        d["others_valuation"] = dyn.others_valuation;
        d["unit_product"] = dyn.unit_product;
        d["irreducibility"] = cert_json(dyn.irreducibility);
        d["pass"] = dyn.pass;
        d["conclusion"] = dyn.conclusion;
        body["dyn_transposition"] = d;
    }

    const MaximalityReport max = maximality_conditions(tri, gamma, args.n, place, cap);
    ojson m;
    m["n"] = max.n;
    m["integral_model"] = max.integral_model;
    m["gamma_valuations"] = max.gamma_valuations;
    m["primitive"] = max.primitive;
    m["others_unit"] = max.others_unit;
    m["pass"] = max.pass;
    m["conclusion"] = max.conclusion;
    body["maximality"] = m;
    return body;
}

Report run_trinomial(const TrinomialArgs& args, std::uint64_t cap) {
    Report rep;
    rep.subcommand = "trinomial";
    rep.input["field"] = field_name(args.p);
    if (args.p == 0) {
        rep.result = trinomial_result(args, Rat(1), cap, rep.input);
    } else {
        rep.result = trinomial_result(args, Fp(1, PrimeField(args.p)), cap, rep.input);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// family
// ---------------------------------------------------------------------------

struct FamilyArgs {
    long p = 0;
    std::string B = "t";
    int levels = 0;
    std::string action;  // construct | certify | an | stability | index
};

Report run_family(const FamilyArgs& args, std::uint64_t cap) {
    Report rep;
    rep.subcommand = "family " + args.action;
    rep.input["field"] = "Q";
    rep.input["p"] = args.p;

    const Rat one(1);
    ojson body;
    if (args.action == "construct") {
        const RatFunc<Rat> B = parse_coeff(args.B, one, cap);
        rep.input["B"] = B.to_string("t");
        const FamilyPhi<Rat> fam = family_phi(args.p, B);
        body["p"] = fam.p;
        body["B"] = fam.B.to_string("t");
        body["A"] = fam.A.to_string("t");
        body["gamma"] = fam.gamma.to_string("t");
        body["phi"] = expr_to_string(fam.phi.in_x());
        body["delta"] = delta_phi(fam.phi).to_string("t");
        body["epsilon"] = epsilon_phi(fam.phi).to_string("t");
    } else if (args.action == "certify") {
        rep.input["levels"] = args.levels;
        const SurjectivityReport sr = surjectivity_certificate(args.p, args.levels, cap);
        body["p"] = sr.p;
        body["n_max"] = sr.n_max;
        body["rho"] = sr.sequence.rho.to_string("t");
        ojson terms = ojson::array();
        for (const OrbitNumeratorTerm& term : sr.sequence.terms) {
            ojson row;
            row["n"] = term.n;
            row["a"] = poly_json(term.a);
            row["rho_power"] = term.rho_power;
            row["mod_p_sign"] = term.mod_p_sign;
            terms.push_back(row);
        }
        body["terms"] = terms;
        ojson levels = ojson::array();
        bool all = true;
        for (const SurjectivityLevel& lvl : sr.levels) {
            ojson row;
            row["n"] = lvl.n;
            row["stability_cert"] = lvl.stability_cert;
            row["a_n_squarefree"] = lvl.a_n_squarefree;
            row["degree_identity"] = lvl.degree_identity;
            row["degree_inequality"] = lvl.degree_inequality;
            row["maximal_certified"] = lvl.maximal_certified;
            if (!lvl.failure.empty()) row["failure"] = lvl.failure;
            all = all && lvl.maximal_certified;
            levels.push_back(row);
        }
        body["levels"] = levels;
        body["all_maximal_certified"] = all;
    } else if (args.action == "an") {
        rep.input["levels"] = args.levels;
        const RatFunc<Rat> B = parse_coeff(args.B, one, cap);
        rep.input["B"] = B.to_string("t");
        const FamilyPhi<Rat> fam = family_phi(args.p, B);
        const OrbitNumeratorSequence seq = a_n_sequence(fam, args.levels, cap);
        body["p"] = seq.p;
        body["rho"] = seq.rho.to_string("t");
        ojson terms = ojson::array();
        for (const OrbitNumeratorTerm& term : seq.terms) {
            ojson row;
            row["n"] = term.n;
            row["a"] = poly_json(term.a);
            row["den"] = poly_json(term.den);
            row["rho_power"] = term.rho_power;
            row["mod_p_sign"] = term.mod_p_sign;
            terms.push_back(row);
        }
        body["terms"] = terms;
    } else if (args.action == "stability") {
        rep.input["levels"] = args.levels;
        const RatFunc<Rat> B = parse_coeff(args.B, one, cap);
        rep.input["B"] = B.to_string("t");
        const FamilyPhi<Rat> fam = family_phi(args.p, B);
        const StabilityCertificate cert = eisenstein_stability(fam, args.levels, cap);
        body["place"] = cert.place;
        ojson levels = ojson::array();
        for (const StabilityLevel& lvl : cert.levels) {
            ojson row;
            row["n"] = lvl.n;
            row["constant_valuation"] = lvl.constant_valuation;
            levels.push_back(row);
        }
        body["levels"] = levels;
    } else if (args.action == "index") {
        const RatFunc<Rat> B = parse_coeff(args.B, one, cap);
        rep.input["B"] = B.to_string("t");
        const FiniteIndexChecklist chk = finite_index_report(args.p, B, cap);
        body["p"] = chk.p;
        body["p_invertible"] = chk.p_invertible;
        body["b_nonconstant"] = chk.b_nonconstant;
        body["delta_nonzero"] = chk.delta_nonzero;
        body["epsilon_nonzero"] = chk.epsilon_nonzero;
        body["zero_orbit"] = wandering_json(chk.zero_orbit);
        body["gamma_orbit"] = wandering_json(chk.gamma_orbit);
        body["zero_wandering"] = chk.zero_wandering;
        body["gamma_wandering"] = chk.gamma_wandering;
        body["gamma_simple"] = chk.gamma_simple;
        body["all_pass"] = chk.all_pass;
        body["conclusion"] = chk.conclusion;
    }
    rep.result = body;
    return rep;
}

// ---------------------------------------------------------------------------
// density
// ---------------------------------------------------------------------------

struct DensityArgs {
    long d = 0;
    long B = 0;
    int nmax = 0;
    int workers = 1;
    bool seedless = false;
    std::string csv;
    std::string action;  // scan | lemma | bounds
};

const char* pair_class_name(PairClass cls) {
    switch (cls) {
        case PairClass::M: return "M";
        case PairClass::V: return "V";
        case PairClass::O: return "O";
    }
    return "?";
}

Report run_density(const DensityArgs& args, std::uint64_t cap) {
    Report rep;
    rep.subcommand = "density " + args.action;
    rep.input["d"] = args.d;

    ojson body;
    if (args.action == "scan") {
        rep.input["B"] = args.B;
        rep.input["nmax"] = args.nmax;
        rep.input["workers"] = args.workers;
        rep.input["seedless"] = args.seedless;
        std::vector<PairVerdict> per_pair;
        std::vector<PairVerdict>* per_pair_ptr = args.csv.empty() ? nullptr : &per_pair;
        const DensityStats stats =
            density_scan(args.d, args.B, args.nmax, args.workers, per_pair_ptr, kDefaultEnumerationCap, cap);
        if (!args.csv.empty()) {
            std::ofstream f(args.csv);
            if (!f) throw InputError("cannot open CSV output file '" + args.csv + "'");
            f << "index,gamma,c,class,witness_n\n";
            for (const PairVerdict& v : per_pair) {
                const QuadPair pair = decode_pair(args.d, args.B, v.index);
                f << v.index << "," << pair.gamma.to_string("t") << "," << pair.c.to_string("t") << ","
                  << pair_class_name(v.cls) << "," << v.witness << "\n";
            }
            rep.input["csv"] = args.csv;
        }
        body["d"] = stats.d;
        body["B"] = stats.B;
        body["n_max"] = stats.n_max;
        body["workers"] = stats.workers;
        body["total"] = stats.total;
        body["count_m"] = stats.count_m;
        body["count_v"] = stats.count_v;
        body["count_o"] = stats.count_o;
        body["v_witness_by_n"] = stats.v_witness_by_n;
        body["exact"] = stats.exact;
        body["o_fraction"] = stats.total == 0 ? 0.0
                                              : static_cast<double>(stats.count_o) / static_cast<double>(stats.total);
    } else if (args.action == "lemma") {
        rep.input["nmax"] = args.nmax;
        const Mod2Certificate cert = mod2_derivative_certificate(args.d, args.nmax, cap);
        body["d"] = cert.d;
        body["n_max"] = cert.n_max;
        body["pass"] = cert.pass;
        if (!cert.pass) {
            body["failed_n"] = cert.failed_n;
            body["detail"] = cert.detail;
        }
    } else if (args.action == "bounds") {
        const StabilityBounds bounds = stability_bounds(args.d);
        body["d"] = args.d;
        body["n_stab"] = bounds.n_stab;
        body["n_zsig"] = bounds.n_zsig;
    }
    rep.result = body;
    return rep;
}

// ---------------------------------------------------------------------------
// factor
// ---------------------------------------------------------------------------

struct FactorArgs {
    std::string poly;
    std::uint64_t p = 0;
    std::uint64_t seed = 0;
};

Report run_factor(const FactorArgs& args, std::uint64_t cap) {
    Report rep;
    rep.subcommand = "factor";
    rep.input["field"] = field_name(args.p);
    rep.input["seed"] = args.seed;

    ojson body;
    if (args.p != 0) {
        const PrimeField field(args.p);
        const Fp one(1, field);
        const Poly<Fp> f = parse_poly_in_t(args.poly, one, cap, "poly");
        rep.input["poly"] = f.to_string("t");
        const FpFactorization fac = factor_fp(f, args.seed);
        body["mode"] = "irreducible_factorization";
        body["degree"] = f.degree();
        body["unit"] = fac.unit.to_string();
        ojson factors = ojson::array();
        bool squarefree = true;
        for (const FpFactor& part : fac.factors) {
            ojson row;
            row["factor"] = part.factor.to_string("t");
            row["multiplicity"] = part.multiplicity;
            row["degree"] = part.factor.degree();
            squarefree = squarefree && part.multiplicity == 1;
            factors.push_back(row);
        }
        body["factors"] = factors;
        body["squarefree"] = squarefree;
        body["reconstruction_matches"] = fac.reconstruct() == f;
    } else {
        const Poly<Rat> f = parse_poly_in_t(args.poly, Rat(1), cap, "poly");
        if (f.is_zero()) throw ZeroInput("cannot decompose the zero polynomial");
        rep.input["poly"] = f.to_string("t");
        const SquarefreeDecomposition<Rat> sf = squarefree_decomposition(f);
        body["mode"] = "squarefree_decomposition";
        body["degree"] = f.degree();
        body["unit"] = sf.unit.to_string();
        ojson parts = ojson::array();
        bool squarefree = true;
        for (const SquarefreePart<Rat>& part : sf.parts) {
            ojson row;
            row["factor"] = part.factor.to_string("t");
            row["multiplicity"] = part.multiplicity;
            squarefree = squarefree && part.multiplicity == 1;
            parts.push_back(row);
        }
        body["parts"] = parts;
        body["squarefree"] = squarefree;
        body["reconstruction_matches"] = sf.reconstruct() == f;
    }
    rep.result = body;
    return rep;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact arithmetic-dynamics toolkit over Q(t) and F_p(t)"};
    app.name(kToolName);
    app.require_subcommand(1);
    bool json = false;
    app.add_flag("--json", json, "emit the report as versioned JSON instead of text");
    app.set_version_flag("--version",
                         std::string(kToolName) + " " + kToolVersion + " (report schema " + kReportSchemaVersion + ")");

    RiccatiArgs riccati_args;
    CLI::App* riccati_cmd =
        app.add_subcommand("riccati", "isotriviality invariants delta/epsilon and the coefficient solution");
    riccati_cmd->add_option("--phi", riccati_args.phi, "polynomial in x over the coefficient field")->required();
    riccati_cmd->add_option("--p", riccati_args.p, "prime characteristic (omit for Q)");
    riccati_cmd->add_option("--a", riccati_args.a, "basepoint for the isotriviality preconditions")->default_val("0");
    riccati_cmd->add_flag("--isotriviality", riccati_args.isotriviality,
                          "also evaluate the nonisotriviality preconditions at --a");

    ZsigmondyArgs zsig_args;
    CLI::App* zsig_cmd =
        app.add_subcommand("zsigmondy", "primitive-prime-divisor scan of phi^n(b) - a over F_p(t)");
    zsig_cmd->add_option("--phi", zsig_args.phi, "polynomial in x over F_p(t)")->required();
    zsig_cmd->add_option("--p", zsig_args.p, "prime characteristic")->required();
    zsig_cmd->add_option("--a", zsig_args.a, "target point (polynomial in t)")->default_val("0");
    zsig_cmd->add_option("--b", zsig_args.b, "orbit basepoint (polynomial in t)")->default_val("0");
    zsig_cmd->add_option("--nmax", zsig_args.nmax, "scan levels n = 1..nmax")->required()->check(CLI::PositiveNumber);
    zsig_cmd->add_option("--seed", zsig_args.seed, "seed for the randomized factoring stage");
    zsig_cmd->add_flag("--assume-wandering", zsig_args.assume_wandering,
                       "skip the wandering-orbit precheck (caller asserts it)");

    TrinomialArgs tri_args;
    CLI::App* tri_cmd =
        app.add_subcommand("trinomial", "discriminant and Galois-condition checklists for x^d + A x^s + B");
    tri_cmd->add_option("--phi", tri_args.phi, "trinomial in x")->required();
    tri_cmd->add_option("--p", tri_args.p, "prime characteristic (omit for Q)");
    tri_cmd->add_option("--place", tri_args.place, "place of F(t): a polynomial in t, or 'infinity'");
    tri_cmd->add_option("--gamma", tri_args.gamma, "critical point in F(t) for the dynamical checks");
    tri_cmd->add_option("--n", tri_args.n, "iterate level for the dynamical checks")->check(CLI::PositiveNumber);

    FamilyArgs fam_args;
    CLI::App* fam_cmd = app.add_subcommand("family", "the degree-p trinomial family with gamma -> 0 -> B");
    fam_cmd->require_subcommand(1);
    CLI::App* fam_construct = fam_cmd->add_subcommand("construct", "build phi_{p,B} and its invariants");
    CLI::App* fam_certify =
        fam_cmd->add_subcommand("certify", "surjectivity certificate for B = t: maximality at levels 2..nmax");
    CLI::App* fam_an = fam_cmd->add_subcommand("an", "critical-orbit numerator sequence a_n");
    CLI::App* fam_stability = fam_cmd->add_subcommand("stability", "Eisenstein stability of phi^n at t");
    CLI::App* fam_index = fam_cmd->add_subcommand("index", "finite-index hypothesis checklist");
    for (CLI::App* sub : {fam_construct, fam_certify, fam_an, fam_stability, fam_index}) {
        sub->add_option("--p", fam_args.p, "odd prime degree of the family")->required();
    }
    for (CLI::App* sub : {fam_construct, fam_an, fam_stability, fam_index}) {
        sub->add_option("--B", fam_args.B, "image of 0 (element of Q(t))")->default_val("t");
    }
    for (CLI::App* sub : {fam_certify, fam_an, fam_stability}) {
        sub->add_option("--levels", fam_args.levels, "largest orbit level n")->required();
    }

    DensityArgs dens_args;
    CLI::App* dens_cmd = app.add_subcommand("density", "quadratic-family critical-orbit density experiment");
    dens_cmd->require_subcommand(1);
    CLI::App* dens_scan = dens_cmd->add_subcommand("scan", "classify every coefficient pair in a box");
    dens_scan->add_option("--d", dens_args.d, "coefficient degree bound")->required();
    dens_scan->add_option("--B", dens_args.B, "coefficient height bound")->required();
    dens_scan->add_option("--nmax", dens_args.nmax, "discriminant window depth")->default_val(kDefaultVdWindow);
    dens_scan->add_option("--workers", dens_args.workers, "parallel workers")->default_val(1);
    dens_scan->add_flag("--seedless", dens_args.seedless, "assert that the scan uses no randomness (always true)");
    dens_scan->add_option("--csv", dens_args.csv, "write one line per pair (index,gamma,c,class,witness_n)");
    CLI::App* dens_lemma = dens_cmd->add_subcommand("lemma", "mod-2 derivative certificate for (t^d, 2t^d + t)");
    dens_lemma->add_option("--d", dens_args.d, "coefficient degree")->required();
    dens_lemma->add_option("--nmax", dens_args.nmax, "levels to certify")->default_val(8);
    CLI::App* dens_bounds = dens_cmd->add_subcommand("bounds", "height-gap stability windows (n_stab, n_zsig)");
    dens_bounds->add_option("--d", dens_args.d, "coefficient degree bound")->required();

    FactorArgs factor_args;
    CLI::App* factor_cmd =
        app.add_subcommand("factor", "factor over F_p[t], or squarefree-decompose over Q[t]");
    factor_cmd->add_option("--poly", factor_args.poly, "polynomial in t")->required();
    factor_cmd->add_option("--p", factor_args.p, "prime characteristic (omit for Q)");
    factor_cmd->add_option("--seed", factor_args.seed, "seed for the randomized splitting stage");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        const std::uint64_t cap = degree_cap_from_env();
        const auto t0 = std::chrono::steady_clock::now();
        Report rep;
        if (riccati_cmd->parsed()) {
            rep = run_riccati(riccati_args, cap);
        } else if (zsig_cmd->parsed()) {
            rep = run_zsigmondy(zsig_args, cap);
        } else if (tri_cmd->parsed()) {
            rep = run_trinomial(tri_args, cap);
        } else if (fam_cmd->parsed()) {
            fam_args.action = fam_construct->parsed()   ? "construct"
                              : fam_certify->parsed()   ? "certify"
                              : fam_an->parsed()        ? "an"
                              : fam_stability->parsed() ? "stability"
                                                        : "index";
            rep = run_family(fam_args, cap);
        } else if (dens_cmd->parsed()) {
            dens_args.action = dens_scan->parsed() ? "scan" : dens_lemma->parsed() ? "lemma" : "bounds";
            rep = run_density(dens_args, cap);
        } else if (factor_cmd->parsed()) {
            rep = run_factor(factor_args, cap);
        }
        rep.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out << (json ? report_to_json(rep) : report_to_text(rep));
        return 0;
    } catch (const CapExceeded& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 70;
    }
}

}  // namespace dynprim
