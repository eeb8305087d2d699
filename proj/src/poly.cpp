#include "primpoint/poly.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace primpoint {

namespace {

bool grlex_less(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    uint64_t ta = 0, tb = 0;
    for (uint32_t e : a) ta += e;
    for (uint32_t e : b) tb += e;
    if (ta != tb) return ta > tb;  // higher degree first
    return a > b;
}

}  // namespace

MultiPoly::MultiPoly(const FieldCtx& ctx, uint32_t vars, std::vector<Term> terms) : ctx_(&ctx), vars_(vars) {
    if (vars_ < 1) throw std::invalid_argument("MultiPoly: at least one variable");
    // Merge duplicate exponent vectors, drop zero coefficients, sort.
    std::map<std::vector<uint32_t>, FqElem> acc;
    for (auto& t : terms) {
        if (t.exps.size() != vars_) throw std::invalid_argument("MultiPoly: exponent vector length mismatch");
        auto it = acc.find(t.exps);
        if (it == acc.end())
            acc.emplace(std::move(t.exps), t.coeff);
        else
            it->second = ctx.add(it->second, t.coeff);
    }
    for (auto& [e, c] : acc)
        if (!c.is_zero()) terms_.push_back({e, c});
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return grlex_less(a.exps, b.exps); });
}

uint32_t MultiPoly::degree() const {
    uint32_t d = 0;
    for (const auto& t : terms_) {
        uint32_t td = 0;
        for (uint32_t e : t.exps) td += e;
        d = std::max(d, td);
    }
    return d;
}

bool MultiPoly::is_constant() const {
    for (const auto& t : terms_)
        for (uint32_t e : t.exps)
            if (e) return false;
    return true;
}

FqElem MultiPoly::eval(std::span<const FqElem> point) const {
    if (point.size() != vars_) throw std::invalid_argument("eval: point dimension mismatch");
    const uint64_t m = ctx_->order();
    FqElem acc = FqElem::zero();
    for (const auto& t : terms_) {
        int64_t lg = t.coeff.log;
        bool dead = false;
        for (uint32_t i = 0; i < vars_; ++i) {
            uint32_t e = t.exps[i];
            if (!e) continue;
            if (point[i].is_zero()) {
                dead = true;
                break;
            }
            // log < 2^24 and e < 2^32, so the product stays inside int64
            lg = (point[i].log * static_cast<int64_t>(e) + lg) % static_cast<int64_t>(m);
        }
        if (!dead) acc = ctx_->add(acc, FqElem{lg});
    }
    return acc;
}

MultiPoly MultiPoly::twist(std::span<const uint64_t> r) const {
    if (r.size() != vars_) throw std::invalid_argument("twist: exponent vector length mismatch");
    for (uint64_t ri : r)
        if (ri == 0) throw std::invalid_argument("twist: exponents must be positive");
    std::vector<Term> out = terms_;
    for (auto& t : out)
        for (uint32_t i = 0; i < vars_; ++i) {
            uint64_t e = static_cast<uint64_t>(t.exps[i]) * r[i];
            if (e > UINT32_MAX) throw std::overflow_error("twist: exponent overflow");
            t.exps[i] = static_cast<uint32_t>(e);
        }
    return MultiPoly(*ctx_, vars_, std::move(out));
}

std::string MultiPoly::serialize() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& t : terms_) {
        if (!out.empty()) out += "+";
        uint64_t c = ctx_->encoding(t.coeff);
        bool any_var = false;
        for (uint32_t e : t.exps) any_var |= e > 0;
        bool wrote = false;
        if (c != 1 || !any_var) {
            out += std::to_string(c);
            wrote = true;
        }
        for (uint32_t i = 0; i < vars_; ++i) {
            if (!t.exps[i]) continue;
            if (wrote) out += "*";
            out += "x" + std::to_string(i + 1);
            if (t.exps[i] > 1) out += "^" + std::to_string(t.exps[i]);
            wrote = true;
        }
    }
    return out;
}

namespace {

struct Parser {
    const std::string& s;
    const FieldCtx& ctx;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    bool eof() {
        skip_ws();
        return pos >= s.size();
    }

    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }

    uint64_t integer() {
        skip_ws();
        if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
            throw ParseError("expected integer", pos);
        uint64_t v = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            v = v * 10 + static_cast<uint64_t>(s[pos] - '0');
            if (v > (1ull << 62)) throw ParseError("integer literal too large", pos);
            ++pos;
        }
        return v;
    }

    // term := integer ('*' powerprod)? | powerprod
    // powerprod := var ('^' integer)? ('*' var ('^' integer)?)*
    MultiPoly::Term term(uint32_t& max_var) {
        MultiPoly::Term t;
        t.coeff = FqElem::one();
        bool saw_var = false, saw_coeff = false;
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            uint64_t c = integer();
            t.coeff = ctx.from_int(static_cast<int64_t>(c % ctx.p()));
            saw_coeff = true;
            skip_ws();
            if (peek() == '*') {
                ++pos;
            } else if (peek() == 'x') {
                throw ParseError("expected '*' between coefficient and variable", pos);
            } else {
                return t;  // bare constant
            }
        }
        while (true) {
            skip_ws();
            if (peek() != 'x') {
                if (!saw_var) throw ParseError("expected variable", pos);
                break;
            }
            ++pos;  // consume 'x'
            size_t idx_pos = pos;
            uint64_t idx = integer();
            if (idx == 0) throw ParseError("variable index 0 is invalid", idx_pos);
            if (idx > 64) throw ParseError("variable index too large", idx_pos);
            uint32_t e = 1;
            skip_ws();
            if (peek() == '^') {
                ++pos;
                skip_ws();
                if (peek() == '-') throw ParseError("negative exponent", pos);
                uint64_t ev = integer();
                if (ev > UINT32_MAX) throw ParseError("exponent too large", pos);
                e = static_cast<uint32_t>(ev);
            }
            if (t.exps.size() < idx) t.exps.resize(idx, 0);
            if (t.exps[idx - 1] != 0) throw ParseError("variable repeated within a term", idx_pos);
            t.exps[idx - 1] = e;
            max_var = std::max<uint32_t>(max_var, static_cast<uint32_t>(idx));
            saw_var = true;
            skip_ws();
            if (peek() == '*') {
                ++pos;
                continue;
            }
            break;
        }
        (void)saw_coeff;
        return t;
    }

    MultiPoly parse() {
        std::vector<MultiPoly::Term> terms;
        uint32_t max_var = 0;
        bool first = true;
        while (!eof()) {
            int sign = 1;
            skip_ws();
            if (peek() == '+' || peek() == '-') {
                sign = (s[pos] == '-') ? -1 : 1;
                ++pos;
            } else if (!first) {
                throw ParseError("expected '+' or '-'", pos);
            }
            if (eof()) throw ParseError("dangling sign", pos);
            MultiPoly::Term t = term(max_var);
            if (sign < 0) t.coeff = ctx.neg(t.coeff);
            terms.push_back(std::move(t));
            first = false;
        }
        if (first) throw ParseError("empty polynomial", 0);
        uint32_t vars = std::max<uint32_t>(max_var, 1);
        for (auto& t : terms) t.exps.resize(vars, 0);
        return MultiPoly(ctx, vars, std::move(terms));
    }
};

}  // namespace

MultiPoly parse_poly(const std::string& text, const FieldCtx& ctx) {
    Parser p{text, ctx};
    return p.parse();
}

MultiPoly FermatShape::to_poly(const FieldCtx& ctx) const {
    std::vector<MultiPoly::Term> terms;
    uint32_t s = static_cast<uint32_t>(coeffs.size());
    for (uint32_t i = 0; i < s; ++i) {
        MultiPoly::Term t;
        t.exps.assign(s, 0);
        t.exps[i] = static_cast<uint32_t>(exps[i]);
        t.coeff = coeffs[i];
        terms.push_back(std::move(t));
    }
    if (!constant.is_zero()) {
        MultiPoly::Term t;
        t.exps.assign(s, 0);
        t.coeff = ctx.neg(constant);
        terms.push_back(std::move(t));
    }
    return MultiPoly(ctx, s, std::move(terms));
}

std::optional<FermatShape> as_fermat_shape(const MultiPoly& f) {
    const uint32_t s = f.vars();
    FermatShape shape;
    shape.coeffs.assign(s, FqElem::zero());
    shape.exps.assign(s, 0);
    shape.constant = FqElem::zero();
    bool saw_const = false;
    std::vector<bool> seen(s, false);
    for (const auto& t : f.terms()) {
        int var = -1;
        for (uint32_t i = 0; i < s; ++i) {
            if (!t.exps[i]) continue;
            if (var >= 0) return std::nullopt;  // two variables in one term
            var = static_cast<int>(i);
        }
        if (var < 0) {
            if (saw_const) return std::nullopt;
            shape.constant = f.ctx().neg(t.coeff);
            saw_const = true;
        } else {
            if (seen[var]) return std::nullopt;
            seen[var] = true;
            shape.coeffs[var] = t.coeff;
            shape.exps[var] = t.exps[var];
        }
    }
    for (uint32_t i = 0; i < s; ++i)
        if (!seen[i]) return std::nullopt;  // every variable must appear exactly once
    return shape;
}

const char* to_string(Dwork d) {
    switch (d) {
        case Dwork::RegularCertified: return "REGULAR_CERTIFIED";
        case Dwork::NotRegular: return "NOT_REGULAR";
        case Dwork::Unknown: return "UNKNOWN";
    }
    return "?";
}

namespace {

// Top form of f restricted to `kept` (variables outside are set to 0),
// as terms over the same variable indexing.
std::vector<MultiPoly::Term> restricted_top_form(const MultiPoly& f, uint32_t kept_mask, uint32_t d) {
    std::vector<MultiPoly::Term> out;
    for (const auto& t : f.terms()) {
        uint32_t td = 0;
        bool uses_zeroed = false;
        for (uint32_t i = 0; i < f.vars(); ++i) {
            td += t.exps[i];
            if (t.exps[i] && !(kept_mask >> i & 1)) uses_zeroed = true;
        }
        if (td == d && !uses_zeroed) out.push_back(t);
    }
    return out;
}

// Looks for a projective singular point of the form (terms over `kept`
// variables) with coordinates in GF(q^j). Exhaustive over nonzero affine
// representatives; fine at desk scale.
bool has_singular_point(const FieldCtx& base, const std::vector<MultiPoly::Term>& form, uint32_t vars,
                        uint32_t kept_mask, uint32_t max_extension) {
    int kept_count = __builtin_popcount(kept_mask);
    if (kept_count < 2) return false;
    std::vector<uint32_t> kept;
    for (uint32_t i = 0; i < vars; ++i)
        if (kept_mask >> i & 1) kept.push_back(i);

    for (uint32_t j = 1; j <= max_extension; ++j) {
        // GF(q^j) = GF(p^(n*j)); skip extensions over the table cap.
        __uint128_t qj = 1;
        bool too_big = false;
        for (uint32_t i = 0; i < base.n() * j; ++i) {
            qj *= base.p();
            if (qj > FieldCtx::kDefaultCap || qj > (1u << 22)) {
                too_big = true;
                break;
            }
        }
        if (too_big) break;
        FieldCtx ext(base.p(), base.n() * j);
        {
            // Enumeration cost grows like q^(j*(|kept|-1)); skip levels that
            // would take too long (refutation stays best-effort).
            double pts = 1;
            for (int i = 0; i < kept_count - 1; ++i) pts *= static_cast<double>(ext.q());
            if (pts * kept_count * static_cast<double>(form.size()) > 2e7) break;
        }
        // Embed GF(q) into GF(q^j): g_base^k -> g_ext^(k * (q^j-1)/(q-1)).
        const uint64_t stride = ext.order() / base.order();
        auto embed = [&](FqElem x) -> FqElem {
            if (x.is_zero()) return x;
            return FqElem{static_cast<int64_t>(static_cast<uint64_t>(x.log) * stride % ext.order())};
        };

        struct EmbTerm {
            std::vector<uint32_t> exps;
            FqElem coeff;
        };
        std::vector<EmbTerm> emb;
        for (const auto& t : form) emb.push_back({t.exps, embed(t.coeff)});

        // Partial derivative of the form w.r.t. kept variable v, evaluated at a point.
        auto eval_partial = [&](uint32_t v, const std::vector<FqElem>& pt) -> FqElem {
            FqElem acc = FqElem::zero();
            for (const auto& t : emb) {
                uint32_t e = t.exps[v];
                if (!e) continue;
                FqElem c = ext.mul(t.coeff, ext.from_int(static_cast<int64_t>(e % ext.p())));
                if (c.is_zero()) continue;
                bool dead = false;
                int64_t lg = c.log;
                for (uint32_t i : kept) {
                    uint32_t ei = t.exps[i] - (i == v ? 1 : 0);
                    if (!ei) continue;
                    if (pt[i].is_zero()) {
                        dead = true;
                        break;
                    }
                    lg = (pt[i].log * static_cast<int64_t>(ei) + lg) % static_cast<int64_t>(ext.order());
                }
                if (!dead) acc = ext.add(acc, FqElem{lg});
            }
            return acc;
        };

        // Enumerate nonzero points up to scaling: first nonzero coordinate = 1.
        std::vector<FqElem> pt(vars, FqElem::zero());
        size_t kc = kept.size();
        for (size_t lead = 0; lead < kc; ++lead) {
            // coordinates kept[0..lead-1] = 0, kept[lead] = 1, rest free
            std::vector<uint64_t> idx(kc, 0);
            size_t free_count = kc - lead - 1;
            uint64_t total = 1;
            bool overflow = false;
            for (size_t i = 0; i < free_count; ++i) {
                if (total > (1ull << 40) / ext.q()) {
                    overflow = true;
                    break;
                }
                total *= ext.q();
            }
            if (overflow) return false;  // unreachable at desk scale
            for (uint64_t code = 0; code < total; ++code) {
                for (uint32_t i = 0; i < vars; ++i) pt[i] = FqElem::zero();
                pt[kept[lead]] = FqElem::one();
                uint64_t c = code;
                for (size_t i = lead + 1; i < kc; ++i) {
                    pt[kept[i]] = ext.from_encoding(c % ext.q());
                    c /= ext.q();
                }
                bool singular = true;
                for (uint32_t v : kept) {
                    if (!eval_partial(v, pt).is_zero()) {
                        singular = false;
                        break;
                    }
                }
                if (singular) return true;
            }
        }
    }
    return false;
}

}  // namespace

Dwork dwork_regularity_check(const MultiPoly& f, uint32_t max_extension) {
    if (f.is_constant()) throw std::invalid_argument("dwork_regularity_check: f must be nonconstant");
    const FieldCtx& ctx = f.ctx();
    const uint32_t s = f.vars();
    const uint32_t d = f.degree();
    if (d % ctx.p() == 0) return Dwork::NotRegular;  // degree must be prime to p

    // Exact certificate: top form diagonal in all s variables, every
    // coefficient nonzero. Each subset restriction is then again diagonal of
    // degree d with gradient vanishing only at the origin.
    {
        std::vector<bool> diag(s, false);
        bool diagonal = true;
        for (const auto& t : f.terms()) {
            uint32_t td = 0;
            int var = -1;
            bool single = true;
            for (uint32_t i = 0; i < s; ++i) {
                td += t.exps[i];
                if (t.exps[i]) {
                    if (var >= 0) single = false;
                    var = static_cast<int>(i);
                }
            }
            if (td != d) continue;
            if (!single || var < 0) {
                diagonal = false;
                break;
            }
            diag[var] = true;
        }
        if (diagonal) {
            bool all = true;
            for (uint32_t i = 0; i < s; ++i) all = all && diag[i];
            if (all) return Dwork::RegularCertified;
        }
    }

    // Refutation: a subset restriction that drops degree, or a singular
    // projective point of a restricted top form.
    if (s > 20) return Dwork::Unknown;
    for (uint32_t kept_mask = 1; kept_mask < (1u << s); ++kept_mask) {
        auto top = restricted_top_form(f, kept_mask, d);
        if (top.empty()) return Dwork::NotRegular;  // degree drops when zeroing the complement
        if (has_singular_point(ctx, top, s, kept_mask, max_extension)) return Dwork::NotRegular;
    }
    return Dwork::Unknown;
}

}  // namespace primpoint
