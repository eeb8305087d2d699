#include "primpoint/fermat.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>

#include "primpoint/budget.hpp"
#include "primpoint/rational.hpp"

#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace primpoint {

namespace {

double pow_d(double b, uint32_t e) {
    double r = 1;
    while (e--) r *= b;
    return r;
}

void validate_shape(const FieldCtx& ctx, const FermatShape& shape) {
    const uint64_t m = ctx.order();
    if (shape.coeffs.empty()) throw std::invalid_argument("Fermat shape: s >= 1 required");
    for (size_t i = 0; i < shape.coeffs.size(); ++i) {
        if (shape.coeffs[i].is_zero()) throw std::invalid_argument("Fermat shape: zero coefficient");
        if (shape.exps[i] == 0 || m % shape.exps[i] != 0)
            throw std::invalid_argument("Fermat shape: exponent d_i must divide q-1");
    }
}

double elapsed_ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

uint64_t count_order_restricted(const FieldCtx& ctx, const FermatShape& shape) {
    validate_shape(ctx, shape);
    const uint64_t q = ctx.q(), m = ctx.order();
    const size_t s = shape.coeffs.size();
    require_budget(static_cast<double>(q) * m * s, "count_order_restricted");

    std::vector<uint64_t> table(q, 0), next(q, 0);
    table[0] = 1;
    for (size_t i = 0; i < s; ++i) {
        const uint64_t d = shape.exps[i];
        // y_i of order (q-1)/d: logs k with gcd(k, m) = d.
        std::vector<uint64_t> vals;
        for (uint64_t k = 0; k < m; ++k)
            if (gcd_u64(k, m) == d)
                vals.push_back(ctx.encoding(ctx.mul(shape.coeffs[i], FqElem{static_cast<int64_t>(k)})));
        std::fill(next.begin(), next.end(), 0);
        for (uint64_t e = 0; e < q; ++e) {
            uint64_t c = table[e];
            if (!c) continue;
            for (uint64_t v : vals) next[ctx.add_enc(e, v)] += c;
        }
        table.swap(next);
    }
    return table[ctx.encoding(shape.constant)];
}

uint64_t primitive_count_fermat_exact(const FieldCtx& ctx, const FermatShape& shape) {
    validate_shape(ctx, shape);
    const uint64_t m = ctx.order();
    uint64_t scale = 1;
    for (uint64_t d : shape.exps) {
        uint64_t num = euler_phi(m), den = euler_phi(m / d);
        if (num % den != 0) throw std::logic_error("phi divisibility failed");
        scale *= num / den;
    }
    return scale * count_order_restricted(ctx, shape);
}

uint64_t primitive_count_fermat_charsum(const FieldCtx& ctx, const FermatShape& shape, const CharTable* table) {
    validate_shape(ctx, shape);
    const uint64_t q = ctx.q(), m = ctx.order();
    const uint32_t s = static_cast<uint32_t>(shape.coeffs.size());
    std::optional<CharTable> own;
    if (!table) {
        own.emplace(ctx);
        table = &*own;
    }
    const CharTable& tbl = *table;
    const bool b_zero = shape.constant.is_zero();

    // Per coordinate: divisors r != 1 of q-1 whose Moebius coefficient
    // mu(r/(r,d))/phi(r/(r,d)) survives, with their exact-order characters.
    struct ROption {
        double coeff;
        std::vector<MulCharacter> chars;
    };
    std::vector<std::vector<ROption>> options(s);
    std::vector<uint64_t> divs = divisors(ctx.order_factorization());
    double tuple_estimate = 1;
    for (uint32_t i = 0; i < s; ++i) {
        for (uint64_t r : divs) {
            if (r == 1) continue;
            uint64_t a = r / gcd_u64(r, shape.exps[i]);
            int mu = moebius(a);
            if (mu == 0) continue;
            ROption opt;
            opt.coeff = static_cast<double>(mu) / static_cast<double>(euler_phi(a));
            opt.chars = characters_of_order(ctx, r);
            options[i].push_back(std::move(opt));
        }
        double k = 0;
        for (const auto& o : options[i]) k += static_cast<double>(o.chars.size());
        tuple_estimate *= 1.0 + k;
    }
    require_budget(tuple_estimate * (b_zero ? static_cast<double>(q) : 8.0), "primitive_count_fermat_charsum");

    const double eps = static_cast<double>(euler_phi(m)) / static_cast<double>(m);
    double total = pow_d(static_cast<double>(euler_phi(m)), s) / static_cast<double>(q);
    total -= pow_d(-eps, s) / static_cast<double>(q);
    if (b_zero) total += pow_d(-eps, s);

    // Triple sum over nonempty subsets, surviving divisor tuples, and
    // character tuples; every Jacobi sum carries the coefficient twist
    // J^{(a)} = prod l_i(a_i)^{-1} J_b(l).
    Cplx triple{0, 0};
    std::vector<uint32_t> members;
    for (uint32_t mask = 1; mask < (1u << s); ++mask) {
        members.clear();
        for (uint32_t i = 0; i < s; ++i)
            if (mask >> i & 1) members.push_back(i);
        const size_t k = members.size();
        bool empty_axis = false;
        for (uint32_t i : members) empty_axis |= options[i].empty();
        if (empty_axis) continue;
        double sign = ((s - k) % 2 == 0) ? 1.0 : -1.0;

        std::vector<size_t> rcode(k, 0);
        while (true) {
            double coeff = 1;
            for (size_t j = 0; j < k; ++j) coeff *= options[members[j]][rcode[j]].coeff;

            std::vector<size_t> ccode(k, 0);
            std::vector<MulCharacter> chars(k);
            Cplx inner{0, 0};
            while (true) {
                Cplx ascale{1, 0};
                for (size_t j = 0; j < k; ++j) {
                    chars[j] = options[members[j]][rcode[j]].chars[ccode[j]];
                    // l(a^{-1}) = conj(l(a)) on the unit circle
                    ascale *= std::conj(tbl.chi(chars[j], shape.coeffs[members[j]], ZeroConvention::AlwaysZero));
                }
                inner += ascale * jacobi_sum_fast(tbl, chars, shape.constant);
                size_t j = 0;
                for (; j < k; ++j) {
                    if (++ccode[j] < options[members[j]][rcode[j]].chars.size()) break;
                    ccode[j] = 0;
                }
                if (j == k) break;
            }
            triple += sign * coeff * inner;

            size_t j = 0;
            for (; j < k; ++j) {
                if (++rcode[j] < options[members[j]].size()) break;
                rcode[j] = 0;
            }
            if (j == k) break;
        }
    }
    total += pow_d(eps, s) * triple.real();

    double rounded = std::round(total);
    if (std::abs(total - rounded) > 1e-3)
        throw std::runtime_error("primitive_count_fermat_charsum: accumulated value " + std::to_string(total) +
                                 " is not within 1e-3 of an integer");
    if (rounded < 0) rounded = 0;
    return static_cast<uint64_t>(rounded);
}

double fermat_deviation_bound(uint64_t q, std::span<const uint64_t> d, bool b_is_zero) {
    const uint64_t m = q - 1;
    const double eps = static_cast<double>(euler_phi(m)) / static_cast<double>(m);
    double sq = std::sqrt(static_cast<double>(q));
    double prod = 1;
    for (uint64_t di : d) {
        if (di == 0 || m % di != 0) throw std::invalid_argument("fermat_deviation_bound: d_i must divide q-1");
        prod *= 1.0 + (static_cast<double>(di) * static_cast<double>(squarefree_divisor_count(m / di)) - 1.0) * sq;
    }
    const double eps_s = pow_d(eps, static_cast<uint32_t>(d.size()));
    if (!b_is_zero) return eps_s / sq * prod;
    // At b = 0 the degenerate Jacobi sums reach (q-1) q^{(|I|-2)/2}, not
    // q^{(|I|-1)/2}; the eps^s/sqrt(q) form is falsified at e.g. q = 9,
    // d = (1,1), a = (1, g^3). Same collapse with the correct magnitudes:
    return eps_s * (1.0 / static_cast<double>(q) +
                    static_cast<double>(m) / static_cast<double>(q) * (prod - 1.0) + 1.0);
}

CountReport fermat_deviation_check(const FieldCtx& ctx, const FermatShape& shape) {
    auto t0 = std::chrono::steady_clock::now();
    CountReport rep;
    rep.q = ctx.q();
    rep.p = ctx.p();
    rep.n = ctx.n();
    rep.poly = shape.to_poly(ctx).serialize();
    rep.method = "fermat-exact";
    rep.count = primitive_count_fermat_exact(ctx, shape);
    const uint32_t s = static_cast<uint32_t>(shape.coeffs.size());
    rep.main_term = pow_d(static_cast<double>(euler_phi(ctx.order())), s) / static_cast<double>(ctx.q());
    rep.deviation = std::abs(static_cast<double>(rep.count) - rep.main_term);
    rep.bound = fermat_deviation_bound(ctx.q(), shape.exps, shape.constant.is_zero());
    rep.holds = rep.deviation <= *rep.bound + 1e-9 * std::max(1.0, *rep.bound);
    rep.elapsed_ms = elapsed_ms_since(t0);
    return rep;
}

CountReport dwork_bound_check(const FieldCtx& ctx, const MultiPoly& f) {
    auto t0 = std::chrono::steady_clock::now();
    if (dwork_regularity_check(f) != Dwork::RegularCertified)
        throw std::invalid_argument("dwork_bound_check: polynomial is not certified Dwork-regular");
    const uint32_t d = f.degree();
    if (d % ctx.p() == 0) throw std::invalid_argument("dwork_bound_check: degree divisible by p");
    CountReport rep;
    rep.q = ctx.q();
    rep.p = ctx.p();
    rep.n = ctx.n();
    rep.poly = f.serialize();
    rep.method = "brute";
    rep.count = count_primitive_brute(f);
    const uint32_t s = f.vars();
    rep.main_term = pow_d(static_cast<double>(euler_phi(ctx.order())), s) / static_cast<double>(ctx.q());
    rep.deviation = std::abs(static_cast<double>(rep.count) - rep.main_term);
    double sq = std::sqrt(static_cast<double>(ctx.q()));
    rep.bound = pow_d(d * sq + 1.0, s) * pow_d(static_cast<double>(squarefree_divisor_count(ctx.order())), s);
    rep.holds = rep.deviation <= *rep.bound + 1e-9 * std::max(1.0, *rep.bound);
    rep.elapsed_ms = elapsed_ms_since(t0);
    return rep;
}

double superelliptic_bound(uint64_t q, uint64_t n, uint64_t d, uint32_t s) {
    const uint64_t m = q - 1;
    if (n == 0 || m % n != 0) throw std::invalid_argument("superelliptic_bound: n must divide q-1");
    double phi = static_cast<double>(euler_phi(m));
    return static_cast<double>(n) * static_cast<double>(d) *
           static_cast<double>(squarefree_divisor_count(m / n)) *
           static_cast<double>(squarefree_divisor_count(m)) * pow_d(phi, s + 1) /
           (static_cast<double>(m) * static_cast<double>(m)) * std::sqrt(static_cast<double>(q));
}

double sieve_delta(const SieveConfig& config) {
    double delta = 1;
    const size_t s = config.d.empty() ? config.primes.size() : config.d.size();
    if (config.primes.size() != s) throw std::invalid_argument("sieve_delta: one prime list per coordinate");
    for (size_t i = 0; i < s; ++i) {
        for (uint64_t pj : config.primes[i]) {
            if (!is_prime(pj)) throw std::invalid_argument("sieve_delta: sieving values must be prime");
            if (config.q) {
                uint64_t cap = (config.q - 1) / config.d[i];
                if (cap % pj != 0) throw std::invalid_argument("sieve_delta: prime must divide (q-1)/d_i");
                if (i < config.ell.size() && config.ell[i] % pj == 0)
                    throw std::invalid_argument("sieve_delta: prime must not divide ell_i");
            }
            delta -= 1.0 / static_cast<double>(pj);
        }
    }
    return delta;
}

bool sieve_criterion(uint64_t q, std::span<const uint64_t> d, std::span<const double> w_ell, uint64_t t_total,
                     double delta) {
    if (delta <= 0) throw std::invalid_argument("sieve_criterion: delta must be positive");
    if (d.size() != w_ell.size()) throw std::invalid_argument("sieve_criterion: length mismatch");
    double sq = std::sqrt(static_cast<double>(q));
    double lhs = pow_d(static_cast<double>(q - 1), static_cast<uint32_t>(d.size())) / sq;
    double rhs = (static_cast<double>(t_total) - 1.0) / delta + 2.0;
    for (size_t i = 0; i < d.size(); ++i)
        rhs *= 1.0 + (static_cast<double>(d[i]) * w_ell[i] - 1.0) * sq;
    return lhs > rhs;
}

bool sieve_criterion_from_ell(uint64_t q, std::span<const uint64_t> d, std::span<const uint64_t> ell,
                              uint64_t t_total, double delta) {
    std::vector<double> w;
    w.reserve(ell.size());
    for (uint64_t l : ell) w.push_back(static_cast<double>(squarefree_divisor_count(l)));
    return sieve_criterion(q, d, w, t_total, delta);
}

CountReport sieve_lower_bound_check(const FieldCtx& ctx, const SieveConfig& config, std::span<const FqElem> a,
                                    FqElem b) {
    auto t0 = std::chrono::steady_clock::now();
    const size_t s = config.d.size();
    if (config.ell.size() != s || config.primes.size() != s || a.size() != s)
        throw std::invalid_argument("sieve_lower_bound_check: length mismatch");
    const uint64_t m = ctx.order();
    for (size_t i = 0; i < s; ++i) {
        if (m % config.d[i] != 0) throw std::invalid_argument("d_i must divide q-1");
        if ((m / config.d[i]) % config.ell[i] != 0) throw std::invalid_argument("ell_i must divide (q-1)/d_i");
    }

    std::vector<uint64_t> full(s);
    for (size_t i = 0; i < s; ++i) full[i] = m / config.d[i];
    uint64_t lhs = count_free_solutions(ctx, a, b, config.d, full);

    int64_t rhs = 0;
    uint64_t t_total = 0;
    for (size_t i = 0; i < s; ++i) {
        for (uint64_t pj : config.primes[i]) {
            std::vector<uint64_t> R(config.ell.begin(), config.ell.end());
            R[i] = config.ell[i] * pj;
            if ((m / config.d[i]) % R[i] != 0)
                throw std::invalid_argument("ell_i * p must divide (q-1)/d_i");
            rhs += static_cast<int64_t>(count_free_solutions(ctx, a, b, config.d, R));
            ++t_total;
        }
    }
    rhs -= static_cast<int64_t>(t_total - 1) *
           static_cast<int64_t>(count_free_solutions(ctx, a, b, config.d, config.ell));

    CountReport rep;
    rep.q = ctx.q();
    rep.p = ctx.p();
    rep.n = ctx.n();
    rep.method = "sieve-lower-bound";
    rep.count = lhs;
    rep.main_term = static_cast<double>(rhs);
    rep.deviation = static_cast<double>(lhs) - static_cast<double>(rhs);
    rep.holds = static_cast<int64_t>(lhs) >= rhs;
    rep.elapsed_ms = elapsed_ms_since(t0);
    return rep;
}

bool sphere_has_primitive(const FieldCtx& ctx, SphereWitness* witness) {
    if (ctx.p() == 2) throw std::invalid_argument("sphere_has_primitive: q must be odd");
    const uint64_t q = ctx.q(), m = ctx.order();

    // Squares of primitive elements; keep the smallest primitive root per square.
    std::vector<uint32_t> root(q, UINT32_MAX);
    std::vector<uint64_t> prim_enc;
    std::vector<uint64_t> prim_sq;
    prim_enc.reserve(euler_phi(ctx.order_factorization()));
    for (uint64_t e = 1; e < q; ++e) {
        int64_t k = ctx.log_of(e);
        if (gcd_u64(static_cast<uint64_t>(k), m) != 1) continue;
        prim_enc.push_back(e);
        uint64_t sq_enc = ctx.exp_enc(2 * static_cast<uint64_t>(k) % m);
        prim_sq.push_back(sq_enc);
        if (root[sq_enc] == UINT32_MAX) root[sq_enc] = static_cast<uint32_t>(e);
    }

    const uint64_t one = 1;  // encoding of the field identity
    for (size_t ix = 0; ix < prim_enc.size(); ++ix) {
        uint64_t u = ctx.add_enc(one, ctx.neg_enc(prim_sq[ix]));  // 1 - x^2
        for (size_t iy = 0; iy < prim_enc.size(); ++iy) {
            uint64_t c = ctx.add_enc(u, ctx.neg_enc(prim_sq[iy]));
            if (root[c] != UINT32_MAX) {
                if (witness) *witness = {prim_enc[ix], prim_enc[iy], root[c]};
                return true;
            }
        }
    }
    return false;
}

bool sphere_has_primitive(uint64_t q) {
    Factorization f = factorize(q);
    if (f.factors.size() != 1) throw std::invalid_argument("sphere_has_primitive: q must be a prime power");
    FieldCtx ctx(f.factors[0].first, f.factors[0].second);
    return sphere_has_primitive(ctx);
}

namespace {

std::string scan_entry_line(const SphereScanEntry& e) {
    std::string s = "{\"q\":" + std::to_string(e.q) + ",\"has_primitive\":" + (e.has_primitive ? "true" : "false");
    if (e.witness)
        s += ",\"witness\":[" + std::to_string(e.witness->x) + "," + std::to_string(e.witness->y) + "," +
             std::to_string(e.witness->z) + "]}";
    else
        s += ",\"witness\":null}";
    return s;
}

std::map<uint64_t, SphereScanEntry> load_checkpoint(const std::string& path) {
    std::map<uint64_t, SphereScanEntry> done;
    if (path.empty()) return done;
    std::ifstream in(path);
    if (!in.is_open()) return done;  // nothing to resume
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
            SphereScanEntry e;
            e.q = j.at("q").get<uint64_t>();
            e.has_primitive = j.at("has_primitive").get<bool>();
            if (!j.at("witness").is_null()) {
                auto w = j.at("witness");
                e.witness = SphereWitness{w.at(0).get<uint64_t>(), w.at(1).get<uint64_t>(), w.at(2).get<uint64_t>()};
            }
            done[e.q] = e;
        } catch (const nlohmann::json::exception& ex) {
            throw std::runtime_error("checkpoint " + path + " line " + std::to_string(lineno) +
                                     " is not a valid scan record: " + ex.what());
        }
    }
    return done;
}

SphereScanResult sphere_scan_impl(uint64_t max_q, int jobs, const std::string& checkpoint_path, bool parallel) {
    SphereScanResult res;
    std::vector<PrimePower> pps = prime_powers_up_to(max_q, /*odd_only=*/true);
    const size_t nq = pps.size();
    std::map<uint64_t, SphereScanEntry> done = load_checkpoint(checkpoint_path);

    std::vector<SphereScanEntry> entries(nq);
    std::vector<char> have(nq, 0), from_file(nq, 0);
    for (size_t i = 0; i < nq; ++i) {
        auto it = done.find(pps[i].q);
        if (it != done.end()) {
            entries[i] = it->second;
            have[i] = from_file[i] = 1;
            ++res.resumed;
        }
    }

    std::ofstream out;
    if (!checkpoint_path.empty()) {
        out.open(checkpoint_path, std::ios::app);
        if (!out.is_open()) throw std::runtime_error("cannot open checkpoint file " + checkpoint_path);
    }
    size_t flushed = 0;
    auto flush_ready = [&]() {
        while (flushed < nq && have[flushed]) {
            if (out.is_open() && !from_file[flushed]) {
                out << scan_entry_line(entries[flushed]) << "\n";
                out.flush();
                if (!out) throw std::runtime_error("checkpoint write failed: " + checkpoint_path);
            }
            ++flushed;
        }
    };
    flush_ready();

#ifdef _OPENMP
    int prev_threads = omp_get_max_threads();
    if (parallel && jobs > 0) omp_set_num_threads(jobs);
#else
    (void)jobs;
#endif

#pragma omp parallel for schedule(dynamic, 1) if (parallel)
    for (size_t i = 0; i < nq; ++i) {
        if (have[i]) continue;
        FieldCtx ctx(pps[i].p, pps[i].n);
        SphereScanEntry e;
        e.q = pps[i].q;
        SphereWitness w{};
        e.has_primitive = sphere_has_primitive(ctx, &w);
        if (e.has_primitive) e.witness = w;
#pragma omp critical(primpoint_scan_flush)
        {
            entries[i] = e;
            have[i] = 1;
            flush_ready();
        }
    }

#ifdef _OPENMP
    if (parallel && jobs > 0) omp_set_num_threads(prev_threads);
#endif

    flush_ready();
    res.entries = std::move(entries);
    res.checked = nq;
    for (const auto& e : res.entries)
        if (!e.has_primitive) res.exceptional.push_back(e.q);
    return res;
}

}  // namespace

SphereScanResult sphere_scan(uint64_t max_q, int jobs, const std::string& checkpoint_path) {
    return sphere_scan_impl(max_q, jobs, checkpoint_path, true);
}

SphereScanResult sphere_scan_serial(uint64_t max_q, const std::string& checkpoint_path) {
    return sphere_scan_impl(max_q, 1, checkpoint_path, false);
}

double sufficiency_threshold() {
    // log-difference of the two sides of (q-1)^3 > sqrt(q) [1 + (2 Wb - 1) sqrt(q)]^3
    auto margin = [](double q) {
        double t = (q + 1.0) / 2.0;
        double wb = std::pow(t, 0.96 / std::log(std::log(t)));
        double rhs_core = 1.0 + (2.0 * wb - 1.0) * std::sqrt(q);
        return 3.0 * std::log(q - 1.0) - (0.5 * std::log(q) + 3.0 * std::log(rhs_core));
    };
    double lo = 1e6, hi = 1e13;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (margin(mid) > 0)
            hi = mid;
        else
            lo = mid;
    }
    // Outward integer check around the real crossing.
    uint64_t qi = static_cast<uint64_t>(hi);
    while (qi > 3 && margin(static_cast<double>(qi - 1)) > 0) --qi;
    while (margin(static_cast<double>(qi)) <= 0) ++qi;
    return static_cast<double>(qi);
}

}  // namespace primpoint
