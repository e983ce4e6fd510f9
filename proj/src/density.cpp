#include "dynprim/density.hpp"

#include <omp.h>

#include <chrono>
#include <exception>
#include <limits>
#include <stdexcept>
#include <utility>

#include "dynprim/fp.hpp"
#include "dynprim/intpoly.hpp"

namespace dynprim {

namespace {

// Coefficient of t^i, defined as zero beyond the degree (and for the zero
// polynomial, which Poly::get cannot serve without a field context).
Rat coeff_at(const Poly<Rat>& f, long i) {
    if (f.is_zero() || i > f.degree()) return Rat(0);
    return f[static_cast<std::size_t>(i)];
}

// Upper bound on deg(phi^n(gamma)): d * 2^(n-1), attained exactly outside M_d.
std::uint64_t level_degree_bound(long d, int n) {
    return static_cast<std::uint64_t>(d) << (n - 1);
}

Poly<Fp> step_mod(const Poly<Fp>& y, const Poly<Fp>& gamma, const Poly<Fp>& c) {
    const Poly<Fp> w = y - gamma;
    return w * w + c;
}

}  // namespace

QuadPair::QuadPair(long d_, Poly<Rat> gamma_, Poly<Rat> c_)
    : d(d_), gamma(std::move(gamma_)), c(std::move(c_)) {
    if (d < 1) throw InputError("quadratic pair needs d >= 1, got " + std::to_string(d));
    for (const Poly<Rat>* f : {&gamma, &c}) {
        if (f->degree() > d)
            throw InputError("quadratic pair coefficients must have degree <= " +
                             std::to_string(d) + ", got degree " + std::to_string(f->degree()));
        for (const Rat& a : f->coeffs())
            if (a.den() != 1)
                throw InputError("quadratic pair coefficients must be integer polynomials");
    }
}

DynPoly<Rat> QuadPair::as_dynpoly() const {
    using K = RatFunc<Rat>;
    const K one{Poly<Rat>::constant(Rat(1))};
    const auto wrap = [&](const Poly<Rat>& p) { return p.is_zero() ? one.zero() : K(p); };
    return DynPoly<Rat>(Poly<K>(std::vector<K>{
        wrap(gamma * gamma + c), wrap(gamma.times_int(-2)), one}));
}

bool in_M_d(const QuadPair& pair) {
    const Rat ad = coeff_at(pair.gamma, pair.d);
    const Rat bd = coeff_at(pair.c, pair.d);
    return ad.is_zero() || bd.is_zero() || ad == bd;
}

VdResult in_V_d(const QuadPair& pair, int n_max, std::uint64_t cap) {
    if (n_max < 1 || n_max > kVdWindowLimit)
        throw InputError("orbit window must be between 1 and " +
                         std::to_string(kVdWindowLimit) + ", got " + std::to_string(n_max));
    VdResult out;
    out.n_max = n_max;
    const bool degenerate = in_M_d(pair);

    Poly<Rat> y;  // phi^n(gamma) while in the exact regime; phi^1(gamma) = c
    bool modular_mode = false;
    std::vector<PrimeField> fields;
    std::vector<Poly<Fp>> ybar, gbar, cbar;  // parallel to fields

    for (int n = 1; n <= n_max; ++n) {
        if (!modular_mode) {
            // Degree the next exact iterate can reach; for pairs outside M_d
            // this equals d * 2^(n-1), for degenerate pairs it tracks the
            // actual (possibly collapsing) degrees.
            long projected = n == 1 ? pair.c.degree()
                                    : std::max(2 * std::max(y.degree(), pair.gamma.degree()),
                                               pair.c.degree());
            if (projected < 0) projected = 0;
            if (static_cast<std::uint64_t>(projected) + 1 > cap)
                throw DegreeCapExceeded(static_cast<std::uint64_t>(projected) + 1, cap,
                                        "critical-orbit iterate n = " + std::to_string(n));
            if (projected > kVdExactDegreeLimit) {
                // Exact coefficients double in size each level; past the limit
                // the verdict comes from reductions mod word primes.  That
                // needs the degree law to anchor the reduced degree, which
                // M_d pairs lack.
                if (degenerate)
                    throw DegreeCapExceeded(
                        static_cast<std::uint64_t>(projected) + 1,
                        static_cast<std::uint64_t>(kVdExactDegreeLimit),
                        "exact critical-orbit iterate n = " + std::to_string(n) +
                            " for a pair in M_d");
                for (std::uint64_t ell : kSquarefreeLadder) {
                    PrimeField field(ell);
                    gbar.push_back(reduce_mod(pair.gamma, field).value());
                    cbar.push_back(reduce_mod(pair.c, field).value());
                    ybar.push_back(reduce_mod(y, field).value());
                    fields.push_back(field);
                }
                modular_mode = true;
            }
        }

        if (modular_mode) {
            const std::uint64_t bound = level_degree_bound(pair.d, n);
            if (bound + 1 > cap)
                throw DegreeCapExceeded(bound + 1, cap,
                                        "critical-orbit iterate n = " + std::to_string(n));
            bool certified = false;
            for (std::size_t i = 0; i < ybar.size(); ++i) {
                ybar[i] = n == 1 ? cbar[i] : step_mod(ybar[i], gbar[i], cbar[i]);
                if (!certified && ybar[i].degree() == static_cast<int>(bound) &&
                    is_squarefree(ybar[i]))
                    certified = true;
            }
            if (!certified) {
                out.witness = n;
                out.exact = false;
                return out;
            }
            continue;
        }

        if (n == 1) {
            y = pair.c;
        } else {
            const Poly<Rat> w = y - pair.gamma;
            y = w * w + pair.c;
        }
        if (!degenerate && y.degree() != static_cast<int>(level_degree_bound(pair.d, n)))
            throw std::logic_error("critical-orbit degree law violated at n = " +
                                   std::to_string(n));
        if (y.is_zero()) {
            out.witness = n;  // zero polynomial: not square-free by convention
            return out;
        }
        if (y.degree() < 1) continue;  // nonzero constants are square-free
        if (!is_squarefree_exact(y)) {
            out.witness = n;
            return out;
        }
    }
    return out;
}

Mod2Certificate mod2_derivative_certificate(const QuadPair& pair, int n_max,
                                            std::uint64_t cap) {
    if (n_max < 1)
        throw InputError("mod-2 certificate needs n_max >= 1, got " + std::to_string(n_max));
    Mod2Certificate out;
    out.d = pair.d;
    out.n_max = n_max;

    PrimeField f2(2);
    const Poly<Fp> gamma = reduce_mod(pair.gamma, f2).value();
    const Poly<Fp> c = reduce_mod(pair.c, f2).value();
    const Poly<Fp> one = Poly<Fp>::constant(Fp::from_int(1, f2));

    Poly<Fp> y;
    for (int n = 1; n <= n_max; ++n) {
        const std::uint64_t bound = level_degree_bound(pair.d, n);
        if (bound + 1 > cap)
            throw DegreeCapExceeded(bound + 1, cap,
                                    "critical-orbit iterate n = " + std::to_string(n));
        y = n == 1 ? c : step_mod(y, gamma, c);
        const Poly<Fp> dy = y.derivative();
        if (!(dy == one)) {
            out.pass = false;
            out.failed_n = n;
            out.detail = "d/dt of the level-" + std::to_string(n) +
                         " iterate mod 2 is " + (dy.is_zero() ? "0" : dy.to_string()) +
                         ", not 1";
            return out;
        }
    }
    out.pass = true;
    return out;
}

Mod2Certificate mod2_derivative_certificate(long d, int n_max, std::uint64_t cap) {
    if (d < 1) throw InputError("witness pair needs d >= 1, got " + std::to_string(d));
    std::vector<Rat> g(static_cast<std::size_t>(d) + 1, Rat(0));
    g[static_cast<std::size_t>(d)] = Rat(1);
    std::vector<Rat> c(static_cast<std::size_t>(d) + 1, Rat(0));
    c[static_cast<std::size_t>(d)] = Rat(2);
    c[1] = c[1] + Rat(1);  // c = 2t^d + t (for d = 1 this is 3t)
    return mod2_derivative_certificate(QuadPair(d, Poly<Rat>(g), Poly<Rat>(c)), n_max, cap);
}

std::uint64_t box_size(long d, long B, std::uint64_t enumeration_cap) {
    if (d < 1) throw InputError("enumeration needs d >= 1, got " + std::to_string(d));
    if (B < 0) throw InputError("coefficient bound must be >= 0, got " + std::to_string(B));
    const std::uint64_t width = 2 * static_cast<std::uint64_t>(B) + 1;
    unsigned __int128 total = 1;
    for (long i = 0; i < 2 * d + 2; ++i) {
        total *= width;
        if (total > enumeration_cap) {
            const auto sat = std::numeric_limits<std::uint64_t>::max();
            throw EnumerationCapExceeded(
                total > sat ? sat : static_cast<std::uint64_t>(total), enumeration_cap);
        }
    }
    return static_cast<std::uint64_t>(total);
}

QuadPair decode_pair(long d, long B, std::uint64_t index) {
    if (d < 1) throw InputError("enumeration needs d >= 1, got " + std::to_string(d));
    if (B < 0) throw InputError("coefficient bound must be >= 0, got " + std::to_string(B));
    const std::uint64_t width = 2 * static_cast<std::uint64_t>(B) + 1;
    std::vector<Rat> g, c;
    for (long i = 0; i < 2 * d + 2; ++i) {
        const long digit = static_cast<long>(index % width) - B;
        index /= width;
        (i <= d ? g : c).push_back(Rat(digit));
    }
    if (index != 0) throw InputError("pair index outside the coefficient box");
    return QuadPair(d, Poly<Rat>(g), Poly<Rat>(c));
}

namespace {

struct LocalCounts {
    std::uint64_t m = 0, v = 0, o = 0;
    std::vector<std::uint64_t> witness;
    bool exact = true;
};

// Shared per-pair work of both scan implementations.
void classify_into(const QuadPair& pair, int n_max, std::uint64_t degree_cap,
                   std::uint64_t index, LocalCounts& counts,
                   std::vector<PairVerdict>* per_pair) {
    PairVerdict verdict;
    verdict.index = index;
    if (in_M_d(pair)) {
        verdict.cls = PairClass::M;
        counts.m += 1;
    } else {
        const VdResult v = in_V_d(pair, n_max, degree_cap);
        counts.exact = counts.exact && v.exact;
        if (v.member()) {
            verdict.cls = PairClass::V;
            verdict.witness = *v.witness;
            counts.v += 1;
            counts.witness[static_cast<std::size_t>(*v.witness)] += 1;
        } else {
            verdict.cls = PairClass::O;
            counts.o += 1;
        }
    }
    if (per_pair) (*per_pair)[index] = verdict;
}

DensityStats finish_stats(long d, long B, int n_max, int workers, std::uint64_t total,
                          const LocalCounts& counts, double elapsed) {
    DensityStats stats;
    stats.d = d;
    stats.B = B;
    stats.n_max = n_max;
    stats.workers = workers;
    stats.total = total;
    stats.count_m = counts.m;
    stats.count_v = counts.v;
    stats.count_o = counts.o;
    stats.v_witness_by_n = counts.witness;
    stats.exact = counts.exact;
    stats.elapsed_seconds = elapsed;
    std::uint64_t witness_sum = 0;
    for (std::uint64_t w : stats.v_witness_by_n) witness_sum += w;
    if (stats.count_m + stats.count_v + stats.count_o != total || witness_sum != stats.count_v)
        throw std::logic_error("density scan counts do not partition the box");
    return stats;
}

void validate_scan_window(int n_max) {
    if (n_max < 1 || n_max > kVdWindowLimit)
        throw InputError("orbit window must be between 1 and " +
                         std::to_string(kVdWindowLimit) + ", got " + std::to_string(n_max));
}

}  // namespace

DensityStats density_scan(long d, long B, int n_max, int workers,
                          std::vector<PairVerdict>* per_pair,
                          std::uint64_t enumeration_cap, std::uint64_t degree_cap) {
    validate_scan_window(n_max);
    if (workers < 1)
        throw InputError("worker count must be >= 1, got " + std::to_string(workers));
    const std::uint64_t total = box_size(d, B, enumeration_cap);
    if (per_pair) per_pair->assign(total, PairVerdict{});

    const auto start = std::chrono::steady_clock::now();
    LocalCounts merged;
    merged.witness.assign(static_cast<std::size_t>(n_max) + 1, 0);
    std::exception_ptr failure;

#pragma omp parallel num_threads(workers)
    {
        LocalCounts local;
        local.witness.assign(static_cast<std::size_t>(n_max) + 1, 0);
#pragma omp for schedule(dynamic, 64)
        for (long long i = 0; i < static_cast<long long>(total); ++i) {
            const auto index = static_cast<std::uint64_t>(i);
            try {
                classify_into(decode_pair(d, B, index), n_max, degree_cap, index, local,
                              per_pair);
            } catch (...) {
#pragma omp critical(density_scan_failure)
                if (!failure) failure = std::current_exception();
            }
        }
#pragma omp critical(density_scan_merge)
        {
            merged.m += local.m;
            merged.v += local.v;
            merged.o += local.o;
            merged.exact = merged.exact && local.exact;
            for (std::size_t n = 0; n < merged.witness.size(); ++n)
                merged.witness[n] += local.witness[n];
        }
    }
    if (failure) std::rethrow_exception(failure);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    return finish_stats(d, B, n_max, workers, total, merged, elapsed.count());
}

DensityStats density_scan_reference(long d, long B, int n_max,
                                    std::vector<PairVerdict>* per_pair,
                                    std::uint64_t enumeration_cap,
                                    std::uint64_t degree_cap) {
    validate_scan_window(n_max);
    const std::uint64_t total = box_size(d, B, enumeration_cap);
    if (per_pair) per_pair->assign(total, PairVerdict{});

    const auto start = std::chrono::steady_clock::now();
    LocalCounts counts;
    counts.witness.assign(static_cast<std::size_t>(n_max) + 1, 0);
    for (std::uint64_t index = 0; index < total; ++index)
        classify_into(decode_pair(d, B, index), n_max, degree_cap, index, counts, per_pair);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    return finish_stats(d, B, n_max, 1, total, counts, elapsed.count());
}

StabilityBounds stability_bounds(long d) {
    if (d < 1) throw InputError("stability bounds need d >= 1, got " + std::to_string(d));
    const mpz_class D(d);
    StabilityBounds out;
    // Both left-hand sides grow by a factor 2 per level while the right-hand
    // sides grow strictly slower, so scanning a fixed range finds the maxima.
    for (int n = 2; n <= 200; ++n) {
        const mpz_class pow2 = mpz_class(1) << (n - 2);
        if (pow2 * D <= 110 * D + 4) out.n_stab = n;
        const mpz_class twist = (mpz_class(1) << (n / 2 + 1)) + (mpz_class(1) << (n / 2)) + 1;
        if (pow2 <= 36 * twist) out.n_zsig = n;
    }
    return out;
}

}  // namespace dynprim
