#pragma once

#include <cstdint>
#include <span>

#include "primpoint/count.hpp"
#include "primpoint/field.hpp"
#include "primpoint/rational.hpp"

namespace primpoint {

// Exact arithmetic in Q(sqrt q): rat + surd * sqrt(q). Values are immutable;
// mixing radicands throws.
class QuadExt {
public:
    QuadExt() : q_(0) {}
    QuadExt(Rat rational, Rat surd, uint64_t q) : rat_(rational), surd_(surd), q_(q) {}
    static QuadExt integer(int64_t v, uint64_t q) { return QuadExt(Rat(v), Rat(0), q); }
    static QuadExt sqrt_q(uint64_t q) { return QuadExt(Rat(0), Rat(1), q); }

    const Rat& rational_part() const { return rat_; }
    const Rat& surd_part() const { return surd_; }
    uint64_t radicand() const { return q_; }

    bool is_integral() const { return surd_.is_zero() && rat_.is_integer(); }
    int64_t as_int64() const;

    friend QuadExt operator+(const QuadExt& a, const QuadExt& b);
    friend QuadExt operator-(const QuadExt& a, const QuadExt& b);
    friend QuadExt operator*(const QuadExt& a, const QuadExt& b);
    QuadExt operator-() const { return QuadExt(-rat_, -surd_, q_); }
    QuadExt divided_by(const Rat& r) const { return QuadExt(rat_ / r, surd_ / r, q_); }
    friend bool operator==(const QuadExt& a, const QuadExt& b);

    std::string str() const;

private:
    static void check_same(const QuadExt& a, const QuadExt& b);
    Rat rat_, surd_;
    uint64_t q_;
};

// Diagonal quadratic form sum a_i x_i^2 = b over odd q: the closed count
// from the classical nondegenerate-form formulas; equals count_points.
uint64_t quad_solution_count(const FieldCtx& ctx, std::span<const FqElem> a, FqElem b);

// N_I of a linear form twisted by r_i = 1 somewhere: q^(|I|-1).
uint64_t ni_linear(uint64_t q, uint32_t size);

// N_I of a linear form twisted by r_i = 2 on all of I, over a Fermat prime
// q > 3; equals count_points_zeroed of the twisted polynomial. `a_restricted`
// holds the coefficients indexed by I.
uint64_t ni_quadratic(const FieldCtx& ctx, std::span<const FqElem> a_restricted, FqElem b);

// P_q of a_1 x_1 + ... + a_s x_s = b over a Fermat prime q > 3, entirely in
// QuadExt arithmetic; the result must come out integral.
uint64_t primitive_count_hyperplane_exact(const FieldCtx& ctx, std::span<const FqElem> a, FqElem b);

// The all-ones b = 0 specialization with closed product terms.
uint64_t primitive_count_zero_sum(uint64_t q, uint32_t s);

// primitive_count_zero_sum(q, 3) == (q^2 - 6q + 5)/8, exactly.
bool zero_sum_cubic_identity(uint64_t q);

}  // namespace primpoint
