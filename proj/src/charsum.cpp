#include "primpoint/charsum.hpp"

#include <cmath>
#include <numbers>

#include "primpoint/budget.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace primpoint {

CharTable::CharTable(const FieldCtx& ctx) : ctx_(&ctx) {
    const uint64_t m = ctx.order();
    roots_.resize(m);
    for (uint64_t j = 0; j < m; ++j) {
        double a = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m);
        roots_[j] = {std::cos(a), std::sin(a)};
    }
    std::vector<Cplx> psi_p(ctx.p());
    for (uint64_t t = 0; t < ctx.p(); ++t) {
        double a = 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(ctx.p());
        psi_p[t] = {std::cos(a), std::sin(a)};
    }
    psi_.resize(ctx.q());
    psi_[0] = {1, 0};
    for (uint64_t k = 0; k < m; ++k) {
        FqElem x{static_cast<int64_t>(k)};
        psi_[ctx.encoding(x)] = psi_p[ctx.trace(x)];
    }
    gauss_.resize(m);
    gauss_done_.resize(m, false);
}

Cplx CharTable::gauss(uint64_t index) const {
    index %= ctx_->order();
    if (!gauss_done_[index]) {
        Cplx acc{0, 0};
        for (uint64_t k = 0; k < ctx_->order(); ++k)
            acc += unity(index * k) * psi_[ctx_->exp_enc(k)];
        gauss_[index] = acc;
        gauss_done_[index] = true;
    }
    return gauss_[index];
}

Cplx jacobi0_direct_pair(const CharTable& tbl, uint64_t m1, uint64_t m2) {
    const FieldCtx& ctx = tbl.ctx();
    std::vector<MulCharacter> chars{{&ctx, m1}, {&ctx, m2}};
    return jacobi_sum_direct(tbl, chars, FqElem::zero());
}

Cplx CharTable::jacobi0_pair(uint64_t m1, uint64_t m2) const {
    const uint64_t m = ctx_->order();
    m1 %= m;
    m2 %= m;
    if (m > 1024) return jacobi0_direct_pair(*this, m1, m2);  // cache only small fields
    if (j0_.empty()) {
        j0_.resize(m * m);
        j0_done_.resize(m * m, false);
    }
    size_t idx = m1 * m + m2;
    if (!j0_done_[idx]) {
        j0_[idx] = jacobi0_direct_pair(*this, m1, m2);
        j0_done_[idx] = true;
    }
    return j0_[idx];
}

Cplx additive_char(const FieldCtx& ctx, FqElem x) {
    double a = 2.0 * std::numbers::pi * static_cast<double>(ctx.trace(x)) / static_cast<double>(ctx.p());
    return {std::cos(a), std::sin(a)};
}

std::vector<MulCharacter> characters_of_order(const FieldCtx& ctx, uint64_t r) {
    const uint64_t m = ctx.order();
    if (r == 0 || m % r != 0) throw std::invalid_argument("characters_of_order: r must divide q-1");
    std::vector<MulCharacter> out;
    const uint64_t step = m / r;
    // Exact order r means gcd(index, m) == m/r, so index = (m/r) * u with gcd(u, r) = 1.
    for (uint64_t u = 0; u < r; ++u)
        if (gcd_u64(u, r) == 1) out.push_back({&ctx, step * u});
    std::sort(out.begin(), out.end(), [](const MulCharacter& a, const MulCharacter& b) { return a.index < b.index; });
    return out;
}

Cplx dpower_indicator_sum(const FieldCtx& ctx, uint64_t d, FqElem c) {
    const uint64_t m = ctx.order();
    if (d == 0 || m % d != 0) throw std::invalid_argument("dpower_indicator_sum: d must divide q-1");
    CharTable tbl(ctx);
    MulCharacter chi_d{&ctx, m / d};
    Cplx acc{0, 0};
    for (uint64_t j = 0; j < d; ++j) {
        MulCharacter cj{&ctx, chi_d.index * j % m};
        acc += tbl.chi(cj, c, ZeroConvention::TrivialIsOne);
    }
    return acc;
}

Cplx gauss_sum(const CharTable& tbl, const MulCharacter& chi) { return tbl.gauss(chi.index); }

Cplx gauss_sum(const MulCharacter& chi) {
    CharTable tbl(*chi.ctx);
    return tbl.gauss(chi.index);
}

Cplx jacobi_sum_direct(const CharTable& tbl, std::span<const MulCharacter> chars, FqElem b) {
    if (chars.empty()) throw std::invalid_argument("jacobi_sum_direct: s >= 1 required");
    const FieldCtx& ctx = tbl.ctx();
    for (const auto& c : chars)
        if (c.ctx != &ctx) throw std::invalid_argument("jacobi_sum_direct: characters from different fields");
    const size_t s = chars.size();
    require_budget(std::pow(static_cast<double>(ctx.q()), static_cast<double>(s - 1)) * static_cast<double>(s),
                   "jacobi_sum_direct");
    if (s == 1) return tbl.chi(chars[0], b, ZeroConvention::TrivialIsOne);

    const uint64_t q = ctx.q();
    std::vector<uint64_t> enc(s, 0);
    Cplx acc{0, 0};
    // Iterate the first s-1 coordinates over F_q; the last is forced.
    std::vector<uint64_t> code(s - 1, 0);
    while (true) {
        uint64_t partial = 0;
        Cplx prod{1, 0};
        bool dead = false;
        for (size_t i = 0; i + 1 < s && !dead; ++i) {
            uint64_t e = code[i];
            partial = ctx.add_enc(partial, e);
            Cplx v = tbl.chi(chars[i], ctx.from_encoding(e), ZeroConvention::TrivialIsOne);
            if (v.real() == 0 && v.imag() == 0) dead = true;
            prod *= v;
        }
        if (!dead) {
            uint64_t last = ctx.add_enc(ctx.encoding(b), ctx.neg_enc(partial));
            prod *= tbl.chi(chars[s - 1], ctx.from_encoding(last), ZeroConvention::TrivialIsOne);
            acc += prod;
        }
        size_t i = 0;
        for (; i + 1 < s; ++i) {
            if (++code[i] < q) break;
            code[i] = 0;
        }
        if (i + 1 == s) break;
    }
    return acc;
}

Cplx jacobi_sum_direct(std::span<const MulCharacter> chars, FqElem b) {
    CharTable tbl(*chars[0].ctx);
    return jacobi_sum_direct(tbl, chars, b);
}

Cplx jacobi_sum_fast(const CharTable& tbl, std::span<const MulCharacter> chars, FqElem b) {
    if (chars.empty()) throw std::invalid_argument("jacobi_sum_fast: s >= 1 required");
    const FieldCtx& ctx = tbl.ctx();
    const size_t s = chars.size();
    size_t trivial = 0;
    for (const auto& c : chars) trivial += c.is_trivial();
    if (trivial == s) {
        double v = std::pow(static_cast<double>(ctx.q()), static_cast<double>(s - 1));
        return {v, 0};
    }
    if (trivial > 0) return {0, 0};
    if (b.is_zero()) {
        if (s == 2) return tbl.jacobi0_pair(chars[0].index, chars[1].index);
        return jacobi_sum_direct(tbl, chars, b);
    }

    uint64_t prod_index = 0;
    Cplx num{1, 0};
    for (const auto& c : chars) {
        prod_index = (prod_index + c.index) % ctx.order();
        num *= tbl.gauss(c.index);
    }
    Cplx j1 = (prod_index != 0) ? num / tbl.gauss(prod_index) : -num / static_cast<double>(ctx.q());
    Cplx scale{1, 0};
    for (const auto& c : chars) scale *= tbl.chi(c, b, ZeroConvention::AlwaysZero);
    return scale * j1;
}

namespace {

Cplx mixed_char_sum_impl(const CharTable& tbl, const MultiPoly& f, std::span<const MulCharacter> chars,
                         bool parallel) {
    const FieldCtx& ctx = tbl.ctx();
    if (chars.size() != f.vars()) throw std::invalid_argument("mixed_char_sum: one character per variable");
    for (const auto& c : chars)
        if (c.ctx != &ctx) throw std::invalid_argument("mixed_char_sum: characters from different fields");
    const uint32_t s = f.vars();
    const uint64_t m = ctx.order();
    require_budget(std::pow(static_cast<double>(ctx.q()), static_cast<double>(s)) *
                       static_cast<double>(f.terms().size() + 1),
                   "mixed_char_sum");

    // chi(0) = 0 for every component, so only nonzero coordinates survive;
    // iterate log tuples. The character product collapses to one root lookup.
    double re = 0, im = 0;
    const int64_t m_i = static_cast<int64_t>(m);
#pragma omp parallel for reduction(+ : re, im) schedule(static) if (parallel && m >= 64)
    for (int64_t k0 = 0; k0 < m_i; ++k0) {
        std::vector<FqElem> pt(s);
        std::vector<int64_t> code(s, 0);
        pt[0] = FqElem{k0};
        uint64_t chi_acc0 = chars[0].index * static_cast<uint64_t>(k0) % m;
        while (true) {
            uint64_t chi_acc = chi_acc0;
            for (uint32_t i = 1; i < s; ++i) {
                pt[i] = FqElem{code[i]};
                chi_acc += chars[i].index * static_cast<uint64_t>(code[i]) % m;
            }
            FqElem v = f.eval(pt);
            Cplx term = tbl.psi(v) * tbl.unity(chi_acc);
            re += term.real();
            im += term.imag();
            uint32_t i = 1;
            for (; i < s; ++i) {
                if (++code[i] < m_i) break;
                code[i] = 0;
            }
            if (i == s) break;
        }
    }
    return {re, im};
}

}  // namespace

Cplx mixed_char_sum(const CharTable& tbl, const MultiPoly& f, std::span<const MulCharacter> chars) {
    return mixed_char_sum_impl(tbl, f, chars, true);
}

Cplx mixed_char_sum_serial(const CharTable& tbl, const MultiPoly& f, std::span<const MulCharacter> chars) {
    return mixed_char_sum_impl(tbl, f, chars, false);
}

double order_indicator(const CharTable& tbl, uint64_t d, FqElem y) {
    const FieldCtx& ctx = tbl.ctx();
    const uint64_t m = ctx.order();
    if (d == 0 || m % d != 0) throw std::invalid_argument("order_indicator: d must divide q-1");
    Cplx acc{0, 0};
    for (uint64_t r : divisors(ctx.order_factorization())) {
        uint64_t a = r / gcd_u64(r, d);
        int mu = moebius(a);
        if (mu == 0) continue;
        double coeff = static_cast<double>(mu) / static_cast<double>(euler_phi(a));
        Cplx inner{0, 0};
        for (const auto& lam : characters_of_order(ctx, r)) inner += tbl.chi(lam, y, ZeroConvention::TrivialIsOne);
        acc += coeff * inner;
    }
    double pref = static_cast<double>(euler_phi(m / d)) / static_cast<double>(m);
    return pref * acc.real();
}

double order_indicator(const FieldCtx& ctx, uint64_t d, FqElem y) {
    CharTable tbl(ctx);
    return order_indicator(tbl, d, y);
}

int64_t mu_phi_divisor_sum(uint64_t q_minus_1, uint64_t d) {
    if (d == 0 || q_minus_1 % d != 0) throw std::invalid_argument("mu_phi_divisor_sum: d must divide q-1");
    int64_t acc = 0;
    for (uint64_t r : divisors(q_minus_1)) {
        uint64_t a = r / gcd_u64(r, d);
        if (moebius(a) == 0) continue;
        uint64_t num = euler_phi(r), den = euler_phi(a);
        if (num % den != 0) throw std::logic_error("mu_phi_divisor_sum: phi divisibility failed");
        acc += static_cast<int64_t>(num / den);
    }
    return acc;
}

}  // namespace primpoint
