#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "primpoint/field.hpp"

namespace primpoint {

class ParseError : public std::invalid_argument {
public:
    ParseError(const std::string& msg, size_t pos)
        : std::invalid_argument(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
    size_t position;
};

// Sparse multivariate polynomial over a FieldCtx. Terms are kept in graded
// lexicographic order with distinct exponent vectors and nonzero coefficients.
class MultiPoly {
public:
    struct Term {
        std::vector<uint32_t> exps;  // length = vars
        FqElem coeff;
    };

    MultiPoly(const FieldCtx& ctx, uint32_t vars, std::vector<Term> terms);

    const FieldCtx& ctx() const { return *ctx_; }
    uint32_t vars() const { return vars_; }
    const std::vector<Term>& terms() const { return terms_; }
    uint32_t degree() const;  // max total degree; 0 for the zero polynomial
    bool is_constant() const;

    FqElem eval(std::span<const FqElem> point) const;

    // f(x_1^{r_1}, ..., x_s^{r_s})
    MultiPoly twist(std::span<const uint64_t> r) const;

    std::string serialize() const;

private:
    const FieldCtx* ctx_;
    uint32_t vars_;
    std::vector<Term> terms_;
};

// Grammar: signed sum of terms `c`, `c*x<i>^<e>`, `x<i>`, and products of
// powers of distinct variables; integer literals are reduced mod p.
// Variables are 1-indexed: x1..xs; the variable count is the highest index
// mentioned.
MultiPoly parse_poly(const std::string& text, const FieldCtx& ctx);

// a_1 x_1^{d_1} + ... + a_s x_s^{d_s} - b, all a_i nonzero, d_i >= 1.
struct FermatShape {
    std::vector<FqElem> coeffs;
    std::vector<uint64_t> exps;
    FqElem constant;  // b

    MultiPoly to_poly(const FieldCtx& ctx) const;
};

// Succeeds iff every non-constant term is a power of a single variable and
// each of the s variables appears in exactly one term.
std::optional<FermatShape> as_fermat_shape(const MultiPoly& f);

enum class Dwork { RegularCertified, NotRegular, Unknown };
const char* to_string(Dwork d);

// Three-valued regularity test. Certification is exact but limited to
// diagonal top forms; refutation searches the restricted top forms for
// projective singular points over GF(q^j), j <= max_extension.
Dwork dwork_regularity_check(const MultiPoly& f, uint32_t max_extension = 3);

}  // namespace primpoint
