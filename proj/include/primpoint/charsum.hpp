#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "primpoint/field.hpp"
#include "primpoint/poly.hpp"

namespace primpoint {

using Cplx = std::complex<double>;

// Multiplicative character chi_m with chi_m(g^k) = exp(2 pi i m k / (q-1)).
struct MulCharacter {
    const FieldCtx* ctx = nullptr;
    uint64_t index = 0;  // m in [0, q-2]

    uint64_t order() const { return ctx->order() / gcd_u64(index, ctx->order()); }
    bool is_trivial() const { return index == 0; }
};

// chi(0) for a nontrivial character is always 0. The trivial character is 0
// at 0 inside Gauss and mixed sums, but 1 at 0 inside the d-power identity,
// the order indicator, and Jacobi sums (the convention the closed-form
// identities require).
enum class ZeroConvention { AlwaysZero, TrivialIsOne };

// Per-field caches: roots of unity, additive character values by encoding,
// and all Gauss sums. Build once, share read-only.
class CharTable {
public:
    explicit CharTable(const FieldCtx& ctx);

    const FieldCtx& ctx() const { return *ctx_; }
    Cplx unity(uint64_t j) const { return roots_[j % roots_.size()]; }
    Cplx psi_enc(uint64_t enc) const { return psi_[enc]; }
    Cplx psi(FqElem x) const { return psi_[ctx_->encoding(x)]; }

    Cplx chi(const MulCharacter& c, FqElem x, ZeroConvention zc) const {
        if (x.is_zero()) return (zc == ZeroConvention::TrivialIsOne && c.is_trivial()) ? Cplx{1, 0} : Cplx{0, 0};
        return unity(c.index * static_cast<uint64_t>(x.log));
    }

    Cplx gauss(uint64_t index) const;  // lazily computed, cached per table

    // J_0 of a character pair by direct summation, cached for small fields.
    // The b = 0 sums do not factor through Gauss sums, but they repeat
    // heavily across coefficient sweeps.
    Cplx jacobi0_pair(uint64_t m1, uint64_t m2) const;

    // The lazy caches are not thread-safe; fill what you need before sharing
    // the table across workers.
    void precompute_gauss() const {
        for (uint64_t m = 0; m < ctx_->order(); ++m) gauss(m);
    }

private:
    const FieldCtx* ctx_;
    std::vector<Cplx> roots_;  // exp(2 pi i j/(q-1)), j < q-1
    std::vector<Cplx> psi_;    // exp(2 pi i Tr(x)/p) by encoding
    mutable std::vector<Cplx> gauss_;
    mutable std::vector<bool> gauss_done_;
    mutable std::vector<Cplx> j0_;
    mutable std::vector<bool> j0_done_;
};

// exp(2 pi i Tr(x) / p)
Cplx additive_char(const FieldCtx& ctx, FqElem x);

// The phi(r) characters of exact order r, ascending by index. Requires r | q-1.
std::vector<MulCharacter> characters_of_order(const FieldCtx& ctx, uint64_t r);

// sum_{j=0}^{d-1} chi_d^j(c): 1 at c = 0, d on nonzero d-th powers, else 0.
Cplx dpower_indicator_sum(const FieldCtx& ctx, uint64_t d, FqElem c);

// sum_{x in F_q} chi(x) psi(x) with chi(0) = 0 (trivial chi gives -1).
Cplx gauss_sum(const MulCharacter& chi);
Cplx gauss_sum(const CharTable& tbl, const MulCharacter& chi);

// J_b(l_1,...,l_s) by direct summation over all s-tuples with coordinate sum
// b; cost O(q^(s-1)).
Cplx jacobi_sum_direct(std::span<const MulCharacter> chars, FqElem b);
Cplx jacobi_sum_direct(const CharTable& tbl, std::span<const MulCharacter> chars, FqElem b);

// Gauss-factored evaluation, validated against jacobi_sum_direct: for b != 0
// and all characters nontrivial, J_1 = prod g(l_i)/g(prod l_i) when the
// product character is nontrivial and -prod g(l_i)/q when it is trivial,
// scaled by prod l_i(b). Tuples with trivial components take the classical
// q^(s-1) / 0 values; b = 0 falls back to direct summation.
Cplx jacobi_sum_fast(const CharTable& tbl, std::span<const MulCharacter> chars, FqElem b);

// sum over x in F_q^s of psi(f(x)) prod l_i(x_i), with chi(0) = 0 so the sum
// effectively runs over nonzero coordinates. O(q^s), work budget enforced.
Cplx mixed_char_sum(const CharTable& tbl, const MultiPoly& f, std::span<const MulCharacter> chars);
Cplx mixed_char_sum_serial(const CharTable& tbl, const MultiPoly& f, std::span<const MulCharacter> chars);

// Carlitz indicator I_d(y) evaluated through its character-sum form:
// 1 on elements of order (q-1)/d, 0 on other nonzero y, phi((q-1)/d)/(q-1)
// at y = 0.
double order_indicator(const FieldCtx& ctx, uint64_t d, FqElem y);
double order_indicator(const CharTable& tbl, uint64_t d, FqElem y);

// sum over r | q-1 of |mu(r/(r,d))|/phi(r/(r,d)) * phi(r); equals
// d * W((q-1)/d) whenever d | q-1.
int64_t mu_phi_divisor_sum(uint64_t q_minus_1, uint64_t d);

}  // namespace primpoint
