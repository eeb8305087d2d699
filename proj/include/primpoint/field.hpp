#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "primpoint/arith.hpp"

namespace primpoint {

// One element of GF(q) in discrete-log form: log = k means g^k, log = -1 means 0.
struct FqElem {
    int64_t log = -1;

    static FqElem zero() { return FqElem{-1}; }
    static FqElem one() { return FqElem{0}; }
    bool is_zero() const { return log < 0; }
    friend bool operator==(FqElem a, FqElem b) { return a.log == b.log; }
    friend bool operator!=(FqElem a, FqElem b) { return a.log != b.log; }
};

// Fully materialized GF(p^n) with exp/log tables. Immutable after
// construction and safe to share across threads.
//
// Element encodings are integers sum c_i * p^i for the polynomial-basis
// coordinates c_i; for prime fields the encoding is the usual residue.
class FieldCtx {
public:
    static constexpr uint64_t kDefaultCap = 1ull << 24;

    // Deterministic construction: the modulus is the monic irreducible of
    // degree n whose non-leading coefficient encoding is smallest, and the
    // generator is the smallest encoding of multiplicative order q-1.
    FieldCtx(uint64_t p, uint32_t n, uint64_t cap = kDefaultCap);

    uint64_t p() const { return p_; }
    uint32_t n() const { return n_; }
    uint64_t q() const { return q_; }
    uint64_t order() const { return q_ - 1; }
    const std::vector<uint32_t>& modulus() const { return modulus_; }  // constant term first, monic
    FqElem generator() const { return FqElem{q_ > 2 ? 1 : 0}; }
    uint32_t generator_encoding() const { return exp_[q_ > 2 ? 1 : 0]; }
    const Factorization& order_factorization() const { return order_fact_; }

    FqElem from_encoding(uint64_t enc) const;
    uint64_t encoding(FqElem x) const { return x.is_zero() ? 0 : exp_[x.log]; }
    FqElem from_int(int64_t v) const;  // embeds an integer via reduction mod p

    FqElem mul(FqElem a, FqElem b) const {
        if (a.is_zero() || b.is_zero()) return FqElem::zero();
        int64_t k = a.log + b.log;
        if (k >= static_cast<int64_t>(q_ - 1)) k -= q_ - 1;
        return FqElem{k};
    }
    FqElem add(FqElem a, FqElem b) const {
        uint64_t e = add_enc(encoding(a), encoding(b));
        return FqElem{log_of(e)};
    }
    FqElem sub(FqElem a, FqElem b) const { return add(a, neg(b)); }
    FqElem neg(FqElem a) const {
        if (a.is_zero()) return a;
        return FqElem{log_of(neg_[exp_[a.log]])};
    }
    FqElem inv(FqElem a) const;
    FqElem pow(FqElem a, int64_t e) const;

    // Encoding-level helpers for hot loops.
    uint64_t add_enc(uint64_t a, uint64_t b) const {
        if (n_ == 1) {
            uint64_t s = a + b;
            return s >= p_ ? s - p_ : s;
        }
        if (!add_table_.empty()) return add_table_[a * q_ + b];
        return add_enc_digits(a, b);
    }
    uint64_t neg_enc(uint64_t a) const { return neg_[a]; }
    uint64_t exp_enc(uint64_t k) const { return exp_[k]; }
    int64_t log_of(uint64_t enc) const { return enc == 0 ? -1 : static_cast<int64_t>(log_[enc]); }

    uint64_t element_order(FqElem x) const;
    bool is_primitive(FqElem x) const {
        return !x.is_zero() && gcd_u64(static_cast<uint64_t>(x.log), q_ - 1) == 1;
    }
    // All primitive elements, sorted by encoding.
    std::vector<FqElem> primitive_elements() const;

    // Tr(x) = x + x^p + ... + x^(p^(n-1)), as a GF(p) representative.
    uint64_t trace(FqElem x) const;

    // Optional q x q addition table for small extension fields; speeds up
    // dense sweeps. Not thread-safe against concurrent first use: call it
    // before sharing the context.
    void build_add_table() const;

private:
    uint64_t add_enc_digits(uint64_t a, uint64_t b) const;

    uint64_t p_, q_;
    uint32_t n_;
    std::vector<uint32_t> modulus_;
    std::vector<uint32_t> exp_;   // size q-1: k -> encoding of g^k
    std::vector<uint32_t> log_;   // size q: encoding -> k (log_[0] unused)
    std::vector<uint32_t> neg_;   // size q: encoding -> encoding of the negative
    Factorization order_fact_;
    mutable std::vector<uint32_t> add_table_;
};

}  // namespace primpoint
