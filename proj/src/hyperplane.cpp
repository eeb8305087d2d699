#include "primpoint/hyperplane.hpp"

#include <stdexcept>

#include "primpoint/arith.hpp"

namespace primpoint {

void QuadExt::check_same(const QuadExt& a, const QuadExt& b) {
    if (a.q_ != b.q_) throw std::invalid_argument("QuadExt: mixed radicands");
}

QuadExt operator+(const QuadExt& a, const QuadExt& b) {
    QuadExt::check_same(a, b);
    return QuadExt(a.rat_ + b.rat_, a.surd_ + b.surd_, a.q_);
}

QuadExt operator-(const QuadExt& a, const QuadExt& b) {
    QuadExt::check_same(a, b);
    return QuadExt(a.rat_ - b.rat_, a.surd_ - b.surd_, a.q_);
}

QuadExt operator*(const QuadExt& a, const QuadExt& b) {
    QuadExt::check_same(a, b);
    Rat q(static_cast<int64_t>(a.q_));
    return QuadExt(a.rat_ * b.rat_ + q * a.surd_ * b.surd_, a.rat_ * b.surd_ + a.surd_ * b.rat_, a.q_);
}

bool operator==(const QuadExt& a, const QuadExt& b) {
    QuadExt::check_same(a, b);
    return a.rat_ == b.rat_ && a.surd_ == b.surd_;
}

int64_t QuadExt::as_int64() const {
    if (!is_integral()) throw std::logic_error("QuadExt: value " + str() + " is not integral");
    return rat_.as_int64();
}

std::string QuadExt::str() const {
    return rat_.str() + " + (" + surd_.str() + ")*sqrt(" + std::to_string(q_) + ")";
}

namespace {

uint64_t ipow(uint64_t b, uint32_t e) {
    uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

// chi_2 on F_q^*: +1 on squares, -1 otherwise; 0 at 0.
int chi2(FqElem x) {
    if (x.is_zero()) return 0;
    return (x.log % 2 == 0) ? 1 : -1;
}

int64_t nu(const FieldCtx& ctx, FqElem b) {
    return b.is_zero() ? static_cast<int64_t>(ctx.order()) : -1;
}

void require_fermat_gt3(uint64_t q, const char* what) {
    FermatPrimeInfo info = classify_fermat_prime(q);
    if (!info.is_fermat_prime || !info.l_positive)
        throw std::invalid_argument(std::string(what) + ": q must be a Fermat prime > 3");
}

}  // namespace

uint64_t quad_solution_count(const FieldCtx& ctx, std::span<const FqElem> a, FqElem b) {
    if (ctx.p() == 2) throw std::invalid_argument("quad_solution_count: q must be odd");
    const uint32_t s = static_cast<uint32_t>(a.size());
    if (s == 0) throw std::invalid_argument("quad_solution_count: s >= 1 required");
    FqElem delta = FqElem::one();
    for (const auto& ai : a) {
        if (ai.is_zero()) throw std::invalid_argument("quad_solution_count: zero coefficient");
        delta = ctx.mul(delta, ai);
    }
    const uint64_t q = ctx.q();
    FqElem minus_one = ctx.neg(FqElem::one());
    if (s % 2 == 0) {
        // q^(s-1) + q^((s-2)/2) nu(b) chi2((-1)^(s/2} Delta)
        FqElem arg = delta;
        if ((s / 2) % 2 == 1) arg = ctx.mul(arg, minus_one);
        int64_t dev = static_cast<int64_t>(ipow(q, (s - 2) / 2)) * nu(ctx, b) * chi2(arg);
        return static_cast<uint64_t>(static_cast<int64_t>(ipow(q, s - 1)) + dev);
    }
    // q^(s-1) + q^((s-1)/2) chi2((-1)^((s-1)/2) b Delta)
    FqElem arg = ctx.mul(b, delta);
    if (((s - 1) / 2) % 2 == 1) arg = ctx.mul(arg, minus_one);
    int64_t dev = static_cast<int64_t>(ipow(q, (s - 1) / 2)) * chi2(arg);
    return static_cast<uint64_t>(static_cast<int64_t>(ipow(q, s - 1)) + dev);
}

uint64_t ni_linear(uint64_t q, uint32_t size) {
    if (size < 1) throw std::invalid_argument("ni_linear: |I| >= 1 required");
    return ipow(q, size - 1);
}

uint64_t ni_quadratic(const FieldCtx& ctx, std::span<const FqElem> a_restricted, FqElem b) {
    require_fermat_gt3(ctx.q(), "ni_quadratic");
    const uint32_t k = static_cast<uint32_t>(a_restricted.size());
    if (k == 0) throw std::invalid_argument("ni_quadratic: |I| >= 1 required");
    // chi2(-1) = 1 here, so the quadratic-form count drops its sign factors.
    int chi_prod = 1;
    for (const auto& ai : a_restricted) {
        if (ai.is_zero()) throw std::invalid_argument("ni_quadratic: zero coefficient");
        chi_prod *= chi2(ai);
    }
    const uint64_t q = ctx.q();
    if (k % 2 == 0) {
        int64_t dev = static_cast<int64_t>(ipow(q, (k - 2) / 2)) * nu(ctx, b) * chi_prod;
        return static_cast<uint64_t>(static_cast<int64_t>(ipow(q, k - 1)) + dev);
    }
    int64_t dev = static_cast<int64_t>(ipow(q, (k - 1) / 2)) * chi2(b) * chi_prod;
    return static_cast<uint64_t>(static_cast<int64_t>(ipow(q, k - 1)) + dev);
}

uint64_t primitive_count_hyperplane_exact(const FieldCtx& ctx, std::span<const FqElem> a, FqElem b) {
    const uint64_t q = ctx.q();
    require_fermat_gt3(q, "primitive_count_hyperplane_exact");
    const uint32_t s = static_cast<uint32_t>(a.size());
    if (s == 0) throw std::invalid_argument("primitive_count_hyperplane_exact: s >= 1 required");
    for (const auto& ai : a)
        if (ai.is_zero()) throw std::invalid_argument("primitive_count_hyperplane_exact: zero coefficient");

    const QuadExt one = QuadExt::integer(1, q);
    QuadExt tau0 = QuadExt(Rat(nu(ctx, b)), Rat(chi2(b)), q);
    QuadExt tau1 = QuadExt(Rat(nu(ctx, b)), Rat(-chi2(b)), q);
    QuadExt prod_plus = one, prod_minus = one;
    for (const auto& ai : a) {
        QuadExt t = QuadExt(Rat(0), Rat(chi2(ai)), q);  // sqrt(q) chi2(a_i)
        prod_plus = prod_plus * (t + one);
        prod_minus = prod_minus * (t - one);
    }
    int64_t sign = (s % 2 == 0) ? 1 : -1;
    QuadExt bracket = QuadExt(Rat(sign), Rat(0), q) * tau0 * prod_plus + tau1 * prod_minus;
    QuadExt correction = bracket.divided_by(Rat(static_cast<int64_t>(ipow(2, s + 1))));

    int64_t phi = static_cast<int64_t>(euler_phi(q - 1));
    Rat phis(1);
    for (uint32_t i = 0; i < s; ++i) phis *= Rat(phi);
    QuadExt total = QuadExt(phis, Rat(0), q) + correction;
    total = total.divided_by(Rat(static_cast<int64_t>(q)));

    int64_t v = total.as_int64();  // hard failure on a non-integral value
    if (v < 0) throw std::logic_error("primitive_count_hyperplane_exact: negative count");
    return static_cast<uint64_t>(v);
}

uint64_t primitive_count_zero_sum(uint64_t q, uint32_t s) {
    require_fermat_gt3(q, "primitive_count_zero_sum");
    if (s < 2) throw std::invalid_argument("primitive_count_zero_sum: s >= 2 required");
    const QuadExt sq = QuadExt::sqrt_q(q);
    const QuadExt one = QuadExt::integer(1, q);
    QuadExt plus = one, minus = one;
    for (uint32_t i = 0; i < s; ++i) {
        plus = plus * (sq - one);
        minus = minus * (sq + one);
    }
    if (s % 2 == 1) minus = -minus;
    QuadExt inner = (plus + minus).divided_by(Rat(static_cast<int64_t>(ipow(2, s + 1))));
    int64_t phi = static_cast<int64_t>(euler_phi(q - 1));
    Rat phis(1);
    for (uint32_t i = 0; i < s; ++i) phis *= Rat(phi);
    QuadExt total = (QuadExt(phis, Rat(0), q) + QuadExt(Rat(static_cast<int64_t>(q - 1)), Rat(0), q) * inner)
                        .divided_by(Rat(static_cast<int64_t>(q)));
    int64_t v = total.as_int64();
    if (v < 0) throw std::logic_error("primitive_count_zero_sum: negative count");
    return static_cast<uint64_t>(v);
}

bool zero_sum_cubic_identity(uint64_t q) {
    require_fermat_gt3(q, "zero_sum_cubic_identity");
    uint64_t lhs = primitive_count_zero_sum(q, 3);
    // (q^2 - 6q + 5)/8 = (q-1)(q-5)/8
    uint64_t num = (q - 1) * (q - 5);
    if (num % 8 != 0) return false;
    return lhs == num / 8;
}

}  // namespace primpoint
