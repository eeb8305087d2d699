#include "primpoint/field.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace primpoint {

namespace {

// Dense polynomial arithmetic over GF(p), used only during construction.
using Poly = std::vector<uint64_t>;  // coefficient i of x^i, trailing zeros trimmed

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mod(Poly a, const Poly& m, uint64_t p) {
    // m monic of degree d
    size_t d = m.size() - 1;
    trim(a);
    while (a.size() > d) {
        uint64_t lead = a.back();
        size_t shift = a.size() - 1 - d;
        if (lead) {
            for (size_t i = 0; i < d; ++i) {
                uint64_t t = (lead * m[i]) % p;
                a[shift + i] = (a[shift + i] + p - t) % p;
            }
        }
        a.pop_back();
        trim(a);
    }
    return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, uint64_t p) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    }
    return poly_mod(std::move(c), m, p);
}

Poly poly_powmod(Poly base, uint64_t e, const Poly& m, uint64_t p) {
    Poly r{1};
    while (e) {
        if (e & 1) r = poly_mulmod(r, base, m, p);
        base = poly_mulmod(base, base, m, p);
        e >>= 1;
    }
    return r;
}

Poly poly_gcd(Poly a, Poly b, uint64_t p) {
    auto inv_mod_p = [p](uint64_t x) {
        // Fermat inverse; p prime.
        uint64_t r = 1, e = p - 2;
        while (e) {
            if (e & 1) r = (r * x) % p;
            x = (x * x) % p;
            e >>= 1;
        }
        return r;
    };
    while (!b.empty()) {
        // a mod b with b made monic
        uint64_t li = inv_mod_p(b.back());
        Poly bm = b;
        for (auto& c : bm) c = (c * li) % p;
        a = poly_mod(std::move(a), bm, p);
        std::swap(a, b);
    }
    return a;
}

bool is_irreducible(const Poly& m, uint64_t p, uint32_t n, const Factorization& n_fact) {
    // x^(p^n) == x mod m, and gcd(x^(p^(n/l)) - x, m) = 1 for prime l | n.
    Poly x{0, 1};
    uint64_t pn = 1;
    for (uint32_t i = 0; i < n; ++i) pn *= p;
    Poly xq = poly_powmod(x, pn, m, p);
    if (xq != x) return false;
    for (auto [l, e] : n_fact.factors) {
        (void)e;
        uint64_t pe = 1;
        for (uint32_t i = 0; i < n / l; ++i) pe *= p;
        Poly t = poly_powmod(x, pe, m, p);
        // t - x
        if (t.size() < 2) t.resize(2, 0);
        t[1] = (t[1] + p - 1) % p;
        trim(t);
        Poly g = poly_gcd(m, t, p);
        if (g.size() != 1) return false;
    }
    return true;
}

uint64_t encode(const Poly& a, uint64_t p) {
    uint64_t e = 0, mult = 1;
    for (size_t i = 0; i < a.size(); ++i) {
        e += a[i] * mult;
        mult *= p;
    }
    return e;
}

Poly decode(uint64_t enc, uint64_t p, uint32_t n) {
    Poly a(n, 0);
    for (uint32_t i = 0; i < n; ++i) {
        a[i] = enc % p;
        enc /= p;
    }
    trim(a);
    return a;
}

}  // namespace

FieldCtx::FieldCtx(uint64_t p, uint32_t n, uint64_t cap) : p_(p), n_(n) {
    if (!is_prime(p)) throw std::invalid_argument("build_field: p = " + std::to_string(p) + " is not prime");
    if (n < 1) throw std::invalid_argument("build_field: extension degree must be >= 1");
    __uint128_t q128 = 1;
    for (uint32_t i = 0; i < n; ++i) {
        q128 *= p;
        if (q128 > cap) throw std::invalid_argument("build_field: q = p^n exceeds table cap " + std::to_string(cap));
    }
    q_ = static_cast<uint64_t>(q128);
    order_fact_ = q_ > 1 ? factorize(q_ - 1) : Factorization{};
    if (q_ == 1) throw std::invalid_argument("build_field: trivial field");

    // Modulus: monic x^n + (lower part), lower part scanned by increasing encoding.
    Factorization n_fact = factorize(n);
    modulus_.assign(n + 1, 0);
    modulus_[n] = 1;
    if (n == 1) {
        // Every monic linear is irreducible; encoding 0 gives x.
    } else {
        bool found = false;
        for (uint64_t e = 0; e < q_; ++e) {
            Poly m = decode(e, p, n);
            m.resize(n + 1, 0);
            m[n] = 1;
            if (is_irreducible(m, p, n, n_fact)) {
                for (uint32_t i = 0; i <= n; ++i) modulus_[i] = static_cast<uint32_t>(i < m.size() ? m[i] : 0);
                found = true;
                break;
            }
        }
        if (!found) throw std::logic_error("no irreducible polynomial found");  // cannot happen
    }

    Poly mod_poly(modulus_.begin(), modulus_.end());

    // Generator: smallest encoding of multiplicative order q-1.
    uint64_t gen_enc = 1;  // q = 2: the identity generates the trivial group
    if (q_ > 2) {
        for (uint64_t e = 2; e < q_; ++e) {
            Poly cand = decode(e, p, n);
            bool primitive = true;
            for (auto [l, ex] : order_fact_.factors) {
                (void)ex;
                Poly t = poly_powmod(cand, (q_ - 1) / l, mod_poly, p);
                if (t == Poly{1}) {
                    primitive = false;
                    break;
                }
            }
            if (primitive) {
                gen_enc = e;
                break;
            }
        }
    }

    // exp table by repeated multiplication, then invert into the log table.
    exp_.assign(q_ - 1, 0);
    log_.assign(q_, 0);
    Poly g = decode(gen_enc, p, n);
    Poly cur{1};
    for (uint64_t k = 0; k < q_ - 1; ++k) {
        exp_[k] = static_cast<uint32_t>(encode(cur, p));
        log_[exp_[k]] = static_cast<uint32_t>(k);
        cur = poly_mulmod(cur, g, mod_poly, p);
    }
    if (cur != Poly{1}) throw std::logic_error("generator order mismatch");

    // Negation table on encodings.
    neg_.assign(q_, 0);
    for (uint64_t e = 0; e < q_; ++e) {
        Poly a = decode(e, p, n);
        for (auto& c : a) c = c ? p - c : 0;
        neg_[e] = static_cast<uint32_t>(encode(a, p));
    }
}

FqElem FieldCtx::from_encoding(uint64_t enc) const {
    if (enc >= q_) throw std::invalid_argument("from_encoding: encoding out of range");
    return FqElem{log_of(enc)};
}

FqElem FieldCtx::from_int(int64_t v) const {
    int64_t r = v % static_cast<int64_t>(p_);
    if (r < 0) r += p_;
    return from_encoding(static_cast<uint64_t>(r));
}

FqElem FieldCtx::inv(FqElem a) const {
    if (a.is_zero()) throw std::invalid_argument("inv(0) is undefined");
    int64_t k = a.log == 0 ? 0 : static_cast<int64_t>(q_ - 1) - a.log;
    return FqElem{k};
}

FqElem FieldCtx::pow(FqElem a, int64_t e) const {
    if (a.is_zero()) {
        if (e < 0) throw std::invalid_argument("pow: negative power of zero");
        return e == 0 ? FqElem::one() : FqElem::zero();
    }
    int64_t m = static_cast<int64_t>(q_ - 1);
    int64_t k = static_cast<int64_t>((__int128)a.log * e % m);
    if (k < 0) k += m;
    return FqElem{k};
}

uint64_t FieldCtx::add_enc_digits(uint64_t a, uint64_t b) const {
    uint64_t out = 0, mult = 1;
    for (uint32_t i = 0; i < n_; ++i) {
        uint64_t da = a % p_, db = b % p_;
        uint64_t s = da + db;
        if (s >= p_) s -= p_;
        out += s * mult;
        a /= p_;
        b /= p_;
        mult *= p_;
    }
    return out;
}

uint64_t FieldCtx::element_order(FqElem x) const {
    if (x.is_zero()) throw std::invalid_argument("element_order: zero has no multiplicative order");
    return (q_ - 1) / gcd_u64(static_cast<uint64_t>(x.log), q_ - 1);
}

std::vector<FqElem> FieldCtx::primitive_elements() const {
    std::vector<uint64_t> encs;
    for (uint64_t k = 0; k < q_ - 1; ++k)
        if (gcd_u64(k, q_ - 1) == 1) encs.push_back(exp_[k]);
    std::sort(encs.begin(), encs.end());
    std::vector<FqElem> out;
    out.reserve(encs.size());
    for (uint64_t e : encs) out.push_back(FqElem{log_of(e)});
    return out;
}

uint64_t FieldCtx::trace(FqElem x) const {
    if (x.is_zero()) return 0;
    uint64_t enc = 0;
    FqElem t = x;
    for (uint32_t i = 0; i < n_; ++i) {
        enc = add_enc(enc, encoding(t));
        t = pow(t, static_cast<int64_t>(p_));
    }
    if (enc >= p_) throw std::logic_error("trace landed outside GF(p)");
    return enc;
}

void FieldCtx::build_add_table() const {
    if (!add_table_.empty() || n_ == 1) return;
    if (q_ > 2048) throw std::invalid_argument("add table limited to q <= 2048");
    add_table_.resize(q_ * q_);
    for (uint64_t a = 0; a < q_; ++a)
        for (uint64_t b = 0; b < q_; ++b) add_table_[a * q_ + b] = static_cast<uint32_t>(add_enc_digits(a, b));
}

}  // namespace primpoint
