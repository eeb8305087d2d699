#include "primpoint/count.hpp"

#include <algorithm>
#include <cmath>

#include "primpoint/arith.hpp"
#include "primpoint/budget.hpp"
#include "primpoint/rational.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace primpoint {

namespace {

// Zeros of f over the product of per-coordinate domains.
uint64_t count_zeros_over(const MultiPoly& f, const std::vector<std::vector<FqElem>>& doms, bool parallel) {
    const uint32_t s = f.vars();
    for (const auto& d : doms)
        if (d.empty()) return 0;
    uint64_t total = 0;
    const int64_t outer = static_cast<int64_t>(doms[0].size());
#pragma omp parallel for reduction(+ : total) schedule(static) if (parallel && outer >= 32)
    for (int64_t o = 0; o < outer; ++o) {
        std::vector<FqElem> pt(s);
        std::vector<size_t> code(s, 0);
        pt[0] = doms[0][o];
        uint64_t local = 0;
        while (true) {
            for (uint32_t i = 1; i < s; ++i) pt[i] = doms[i][code[i]];
            if (f.eval(pt).is_zero()) ++local;
            uint32_t i = 1;
            for (; i < s; ++i) {
                if (++code[i] < doms[i].size()) break;
                code[i] = 0;
            }
            if (i == s) break;
        }
        total += local;
    }
    return total;
}

std::vector<FqElem> all_elements(const FieldCtx& ctx, bool include_zero) {
    std::vector<FqElem> v;
    v.reserve(ctx.q());
    if (include_zero) v.push_back(FqElem::zero());
    for (uint64_t k = 0; k < ctx.order(); ++k) v.push_back(FqElem{static_cast<int64_t>(k)});
    return v;
}

double pow_d(double b, uint32_t e) {
    double r = 1;
    while (e--) r *= b;
    return r;
}

// N* of a Fermat-shape polynomial by dynamic programming over partial sums,
// indexed by encoding. Each x_i^{e_i} sweeps the subgroup of index
// gcd(e_i, q-1) with that multiplicity.
uint64_t nstar_fermat_dp(const FieldCtx& ctx, const FermatShape& shape) {
    const uint64_t q = ctx.q(), m = ctx.order();
    const size_t s = shape.coeffs.size();
    std::vector<uint64_t> table(q, 0), next(q, 0);
    table[0] = 1;
    for (size_t i = 0; i < s; ++i) {
        if (shape.coeffs[i].is_zero()) throw std::invalid_argument("Fermat shape with zero coefficient");
        uint64_t g = gcd_u64(shape.exps[i] % m == 0 ? m : shape.exps[i] % m, m);
        // values a_i * c over the image subgroup, each hit g times
        std::vector<uint64_t> vals;
        vals.reserve(m / g);
        for (uint64_t k = 0; k < m; k += g) vals.push_back(ctx.encoding(ctx.mul(shape.coeffs[i], FqElem{static_cast<int64_t>(k)})));
        std::fill(next.begin(), next.end(), 0);
        for (uint64_t e = 0; e < q; ++e) {
            uint64_t c = table[e];
            if (!c) continue;
            for (uint64_t v : vals) next[ctx.add_enc(e, v)] += c * g;
        }
        table.swap(next);
    }
    return table[ctx.encoding(shape.constant)];
}

}  // namespace

uint64_t count_points(const MultiPoly& f) {
    const FieldCtx& ctx = f.ctx();
    require_budget(pow_d(static_cast<double>(ctx.q()), f.vars()) * static_cast<double>(f.terms().size() + 1),
                   "count_points");
    std::vector<std::vector<FqElem>> doms(f.vars(), all_elements(ctx, true));
    return count_zeros_over(f, doms, true);
}

uint64_t count_points_serial(const MultiPoly& f) {
    const FieldCtx& ctx = f.ctx();
    require_budget(pow_d(static_cast<double>(ctx.q()), f.vars()) * static_cast<double>(f.terms().size() + 1),
                   "count_points");
    std::vector<std::vector<FqElem>> doms(f.vars(), all_elements(ctx, true));
    return count_zeros_over(f, doms, false);
}

uint64_t count_points_nonzero(const MultiPoly& f) {
    const FieldCtx& ctx = f.ctx();
    const uint64_t m = ctx.order();
    if (auto shape = as_fermat_shape(f)) {
        require_budget(static_cast<double>(ctx.q()) * m * f.vars(), "count_points_nonzero");
        return nstar_fermat_dp(ctx, *shape);
    }

    // x_i -> x_i^{G_i} is G_i-to-1 from F_q^* onto the index-G_i subgroup
    // whenever G_i divides every exponent of x_i; counting the reduced
    // polynomial over the subgroups scales by prod G_i.
    const uint32_t s = f.vars();
    std::vector<uint64_t> G(s, m);
    for (const auto& t : f.terms())
        for (uint32_t i = 0; i < s; ++i)
            if (t.exps[i]) G[i] = gcd_u64(G[i], t.exps[i]);
    uint64_t mult = 1;
    bool reduced = false;
    for (uint64_t g : G) {
        mult *= g;
        reduced |= g > 1;
    }
    if (reduced) {
        std::vector<MultiPoly::Term> terms = f.terms();
        for (auto& t : terms)
            for (uint32_t i = 0; i < s; ++i)
                if (t.exps[i]) t.exps[i] = static_cast<uint32_t>(t.exps[i] / G[i]);
        MultiPoly g_poly(ctx, s, std::move(terms));
        std::vector<std::vector<FqElem>> doms(s);
        double est = 1;
        for (uint32_t i = 0; i < s; ++i) {
            for (uint64_t k = 0; k < m; k += G[i]) doms[i].push_back(FqElem{static_cast<int64_t>(k)});
            est *= static_cast<double>(doms[i].size());
        }
        require_budget(est * static_cast<double>(f.terms().size() + 1), "count_points_nonzero");
        return mult * count_zeros_over(g_poly, doms, true);
    }

    require_budget(pow_d(static_cast<double>(m), s) * static_cast<double>(f.terms().size() + 1),
                   "count_points_nonzero");
    std::vector<std::vector<FqElem>> doms(s, all_elements(ctx, false));
    return count_zeros_over(f, doms, true);
}

uint64_t count_points_nonzero_serial(const MultiPoly& f) {
    const FieldCtx& ctx = f.ctx();
    require_budget(pow_d(static_cast<double>(ctx.order()), f.vars()) * static_cast<double>(f.terms().size() + 1),
                   "count_points_nonzero");
    std::vector<std::vector<FqElem>> doms(f.vars(), all_elements(ctx, false));
    return count_zeros_over(f, doms, false);
}

uint64_t count_points_zeroed(const MultiPoly& f, uint32_t kept_mask) {
    const FieldCtx& ctx = f.ctx();
    const uint32_t s = f.vars();
    if (kept_mask >= (1u << s)) throw std::invalid_argument("count_points_zeroed: subset out of range");
    int kept = __builtin_popcount(kept_mask);
    require_budget(pow_d(static_cast<double>(ctx.q()), kept) * static_cast<double>(f.terms().size() + 1),
                   "count_points_zeroed");
    std::vector<std::vector<FqElem>> doms;
    for (uint32_t i = 0; i < s; ++i) {
        if (kept_mask >> i & 1)
            doms.push_back(all_elements(ctx, true));
        else
            doms.push_back({FqElem::zero()});
    }
    return count_zeros_over(f, doms, kept >= 2);
}

uint64_t nstar_via_inclusion_exclusion(const MultiPoly& f) {
    const uint32_t s = f.vars();
    int64_t acc = 0;
    for (uint32_t mask = 0; mask < (1u << s); ++mask) {
        int sign = ((s - __builtin_popcount(mask)) % 2 == 0) ? 1 : -1;
        acc += sign * static_cast<int64_t>(count_points_zeroed(f, mask));
    }
    if (acc < 0) throw std::logic_error("inclusion-exclusion produced a negative count");
    return static_cast<uint64_t>(acc);
}

namespace {

uint64_t primitive_brute_impl(const MultiPoly& f, bool allow_linear_solve, bool parallel) {
    const FieldCtx& ctx = f.ctx();
    const uint32_t s = f.vars();
    std::vector<FqElem> prims = ctx.primitive_elements();

    int lin = -1;
    if (allow_linear_solve && s >= 1) {
        for (int v = static_cast<int>(s) - 1; v >= 0; --v) {
            bool linear = true;
            for (const auto& t : f.terms())
                if (t.exps[v] > 1) linear = false;
            if (linear) {
                lin = v;
                break;
            }
        }
    }

    if (lin < 0) {
        require_budget(pow_d(static_cast<double>(prims.size()), s) * static_cast<double>(f.terms().size() + 1),
                       "count_primitive_brute");
        std::vector<std::vector<FqElem>> doms(s, prims);
        return count_zeros_over(f, doms, parallel);
    }

    // f = A(x') + B(x') * x_lin: one candidate per prefix when B != 0.
    require_budget(pow_d(static_cast<double>(prims.size()), s >= 1 ? s - 1 : 0) *
                       static_cast<double>(f.terms().size() + 1),
                   "count_primitive_brute");
    std::vector<MultiPoly::Term> a_terms, b_terms;
    for (const auto& t : f.terms()) {
        if (t.exps[lin] == 0) {
            a_terms.push_back(t);
        } else {
            MultiPoly::Term u = t;
            u.exps[lin] = 0;
            b_terms.push_back(u);
        }
    }
    auto eval_terms = [&](const std::vector<MultiPoly::Term>& terms, const std::vector<FqElem>& pt) {
        const uint64_t m = ctx.order();
        FqElem acc = FqElem::zero();
        for (const auto& t : terms) {
            int64_t lg = t.coeff.log;
            bool dead = false;
            for (uint32_t i = 0; i < s; ++i) {
                uint32_t e = t.exps[i];
                if (!e) continue;
                if (pt[i].is_zero()) {
                    dead = true;
                    break;
                }
                lg = (pt[i].log * static_cast<int64_t>(e) + lg) % static_cast<int64_t>(m);
            }
            if (!dead) acc = ctx.add(acc, FqElem{lg});
        }
        return acc;
    };

    uint64_t total = 0;
    if (s == 1) {
        std::vector<FqElem> pt(1, FqElem::zero());
        FqElem a = eval_terms(a_terms, pt), b = eval_terms(b_terms, pt);
        if (b.is_zero()) return a.is_zero() ? prims.size() : 0;
        FqElem cand = ctx.neg(ctx.mul(a, ctx.inv(b)));
        return ctx.is_primitive(cand) ? 1 : 0;
    }

    const int64_t outer = static_cast<int64_t>(prims.size());
    const uint64_t nprims = prims.size();
#pragma omp parallel for reduction(+ : total) schedule(static) if (parallel && outer >= 16)
    for (int64_t o = 0; o < outer; ++o) {
        std::vector<FqElem> pt(s, FqElem::zero());
        std::vector<size_t> code(s, 0);  // positions over prims for all vars except lin; slot lin unused
        uint64_t local = 0;
        // assign outer prim to the first non-lin variable
        uint32_t first = (lin == 0) ? 1 : 0;
        pt[first] = prims[o];
        while (true) {
            for (uint32_t i = 0; i < s; ++i) {
                if (i == first || i == static_cast<uint32_t>(lin)) continue;
                pt[i] = prims[code[i]];
            }
            FqElem a = eval_terms(a_terms, pt), b = eval_terms(b_terms, pt);
            if (b.is_zero()) {
                if (a.is_zero()) local += nprims;
            } else {
                FqElem cand = ctx.neg(ctx.mul(a, ctx.inv(b)));
                if (ctx.is_primitive(cand)) ++local;
            }
            uint32_t i = 0;
            for (; i < s; ++i) {
                if (i == first || i == static_cast<uint32_t>(lin)) continue;
                if (++code[i] < nprims) break;
                code[i] = 0;
            }
            if (i == s) break;
        }
        total += local;
    }
    return total;
}

}  // namespace

uint64_t count_primitive_brute(const MultiPoly& f) { return primitive_brute_impl(f, true, true); }

uint64_t count_primitive_brute_serial(const MultiPoly& f) { return primitive_brute_impl(f, false, false); }

uint64_t primitive_via_moebius(const MultiPoly& f) {
    const FieldCtx& ctx = f.ctx();
    const uint32_t s = f.vars();
    std::vector<uint64_t> sqd = divisors(ctx.order_factorization(), /*squarefree_only=*/true);
    require_budget(pow_d(static_cast<double>(sqd.size()), s) *
                       (static_cast<double>(ctx.q()) * ctx.order() * s),  // DP cost bound per twist
                   "primitive_via_moebius");

    Rat acc;
    std::vector<uint64_t> r(s, 1);
    std::vector<size_t> code(s, 0);
    while (true) {
        int mu_prod = 1;
        int128 denom = 1;
        for (uint32_t i = 0; i < s; ++i) {
            r[i] = sqd[code[i]];
            mu_prod *= moebius(r[i]);
            denom *= static_cast<int64_t>(r[i]);
        }
        uint64_t nstar = count_points_nonzero(f.twist(r));
        acc += Rat(static_cast<int128>(mu_prod) * static_cast<int128>(nstar), denom);
        uint32_t i = 0;
        for (; i < s; ++i) {
            if (++code[i] < sqd.size()) break;
            code[i] = 0;
        }
        if (i == s) break;
    }
    if (!acc.is_integer() || acc.num() < 0)
        throw std::logic_error("primitive_via_moebius: non-integral accumulation " + acc.str());
    return static_cast<uint64_t>(acc.as_int64());
}

uint64_t primitive_dth_root_count(const FieldCtx& ctx, uint64_t d, FqElem y) {
    const uint64_t m = ctx.order();
    if (d == 0 || m % d != 0) throw std::invalid_argument("primitive_dth_root_count: d must divide q-1");
    if (y.is_zero() || ctx.element_order(y) != m / d)
        throw std::invalid_argument("primitive_dth_root_count: y must have order (q-1)/d");
    uint64_t count = 0;
    for (uint64_t k = 0; k < m; ++k) {
        if (gcd_u64(k, m) != 1) continue;
        if (static_cast<int64_t>(k * d % m) == y.log) ++count;
    }
    return count;
}

bool is_free(const FieldCtx& ctx, FqElem h, uint64_t R, uint64_t d) {
    const uint64_t m = ctx.order();
    if (d == 0 || m % d != 0) throw std::invalid_argument("is_free: d must divide q-1");
    if (R == 0 || (m / d) % R != 0) throw std::invalid_argument("is_free: R must divide (q-1)/d");
    if (h.is_zero()) return false;
    uint64_t k = static_cast<uint64_t>(h.log);
    if (k % d != 0) return false;  // h must lie in C_d
    uint64_t j = k / d;            // index of h w.r.t. the generator g^d of C_d
    for (auto [l, e] : factorize(R).factors) {
        (void)e;
        if (j % l == 0) return false;  // h is an l-th power inside C_d
    }
    return true;
}

uint64_t count_free_solutions(const FieldCtx& ctx, std::span<const FqElem> a, FqElem b,
                              std::span<const uint64_t> d, std::span<const uint64_t> R) {
    const size_t s = a.size();
    if (d.size() != s || R.size() != s) throw std::invalid_argument("count_free_solutions: length mismatch");
    if (s == 0) throw std::invalid_argument("count_free_solutions: s >= 1 required");
    for (const auto& ai : a)
        if (ai.is_zero()) throw std::invalid_argument("count_free_solutions: coefficients must be nonzero");

    // Allowed value sets: encodings of a_i * y_i for free y_i.
    std::vector<std::vector<uint64_t>> allowed(s);
    std::vector<char> last_ok(ctx.q(), 0);
    for (size_t i = 0; i < s; ++i) {
        for (uint64_t k = 0; k < ctx.order(); ++k) {
            FqElem y{static_cast<int64_t>(k)};
            if (is_free(ctx, y, R[i], d[i])) {
                uint64_t enc = ctx.encoding(ctx.mul(a[i], y));
                allowed[i].push_back(enc);
                if (i + 1 == s) last_ok[enc] = 1;
            }
        }
    }
    double est = 1;
    for (size_t i = 0; i + 1 < s; ++i) est *= static_cast<double>(std::max<size_t>(allowed[i].size(), 1));
    require_budget(est * static_cast<double>(s), "count_free_solutions");

    if (s == 1) return last_ok[ctx.encoding(b)] ? 1 : 0;

    uint64_t total = 0;
    const uint64_t b_enc = ctx.encoding(b);
    std::vector<size_t> code(s - 1, 0);
    for (const auto& al : allowed)
        if (al.empty()) return 0;
    while (true) {
        uint64_t partial = 0;
        for (size_t i = 0; i + 1 < s; ++i) partial = ctx.add_enc(partial, allowed[i][code[i]]);
        uint64_t need = ctx.add_enc(b_enc, ctx.neg_enc(partial));
        if (last_ok[need]) ++total;
        size_t i = 0;
        for (; i + 1 < s; ++i) {
            if (++code[i] < allowed[i].size()) break;
            code[i] = 0;
        }
        if (i + 1 == s) break;
    }
    return total;
}

double free_solutions_lower_bound(uint64_t q, std::span<const uint64_t> d, std::span<const uint64_t> R,
                                  bool b_is_zero) {
    const size_t s = d.size();
    if (R.size() != s) throw std::invalid_argument("free_solutions_lower_bound: length mismatch");
    double eps = 1, weil = 1;
    double sq = std::sqrt(static_cast<double>(q));
    for (size_t i = 0; i < s; ++i) {
        eps *= static_cast<double>(euler_phi(R[i])) / (static_cast<double>(R[i]) * static_cast<double>(d[i]));
        weil *= 1.0 + (static_cast<double>(d[i]) * static_cast<double>(squarefree_divisor_count(R[i])) - 1.0) * sq;
    }
    double main = pow_d(static_cast<double>(q - 1), static_cast<uint32_t>(s)) / static_cast<double>(q);
    if (!b_is_zero) return eps * (main - weil / sq);
    // At b = 0 the degenerate Jacobi sums reach magnitude (q-1) q^{(|I|-2)/2}
    // instead of q^{(|I|-1)/2}, so each character-sum estimate inflates by
    // (q-1)/sqrt(q), and the empty-subset boundary term costs one more eps.
    double jfactor = static_cast<double>(q - 1) / static_cast<double>(q);
    return eps * (main - jfactor * weil) - eps;
}

}  // namespace primpoint
