#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "primpoint/charsum.hpp"
#include "primpoint/count.hpp"
#include "primpoint/field.hpp"
#include "primpoint/poly.hpp"

namespace primpoint {

// M = #{y in (F_q^*)^s : sum a_i y_i = b, ord(y_i) = (q-1)/d_i}, by dynamic
// programming over partial sums. Requires d_i | q-1.
uint64_t count_order_restricted(const FieldCtx& ctx, const FermatShape& shape);

// P_q of the Fermat hypersurface sum a_i x_i^{d_i} = b: the order-restricted
// count scaled by prod phi(q-1)/phi((q-1)/d_i). Exact integers.
uint64_t primitive_count_fermat_exact(const FieldCtx& ctx, const FermatShape& shape);

// Same value through the character-sum expansion (main term, boundary term,
// Jacobi triple sum, and the b = 0 correction), rounded from floats. Throws
// if the accumulated value sits farther than 1e-3 from an integer.
uint64_t primitive_count_fermat_charsum(const FieldCtx& ctx, const FermatShape& shape,
                                        const CharTable* table = nullptr);

// (phi(q-1)/(q-1))^s q^{-1/2} prod_i [1 + (d_i W((q-1)/d_i) - 1) sqrt(q)],
// plus (phi(q-1)/(q-1))^s when b = 0.
double fermat_deviation_bound(uint64_t q, std::span<const uint64_t> d, bool b_is_zero);

// Exact P_q versus main term against fermat_deviation_bound.
CountReport fermat_deviation_check(const FieldCtx& ctx, const FermatShape& shape);

// |P_q(f) - phi(q-1)^s/q| <= (d sqrt(q) + 1)^s W(q-1)^s for certified
// Dwork-regular f. Uncertified input is rejected.
CountReport dwork_bound_check(const FieldCtx& ctx, const MultiPoly& f);

// n d W((q-1)/n) W(q-1) phi(q-1)^{s+1} (q-1)^{-2} sqrt(q); bound value only.
double superelliptic_bound(uint64_t q, uint64_t n, uint64_t d, uint32_t s);

struct SieveConfig {
    uint64_t q = 0;
    std::vector<uint64_t> d;                       // exponents, d_i | q-1
    std::vector<uint64_t> ell;                     // ell_i | (q-1)/d_i
    std::vector<std::vector<uint64_t>> primes;     // sieving primes per coordinate
};

// delta = 1 - sum_i sum_j 1/p_j^(i)
double sieve_delta(const SieveConfig& config);

// (q-1)^s / sqrt(q) > ((t_1+...+t_s-1)/delta + 2) prod [1 + (d_i w_ell_i - 1) sqrt(q)]
// The W(ell_i) values are explicit inputs; the overload derives them.
bool sieve_criterion(uint64_t q, std::span<const uint64_t> d, std::span<const double> w_ell, uint64_t t_total,
                     double delta);
bool sieve_criterion_from_ell(uint64_t q, std::span<const uint64_t> d, std::span<const uint64_t> ell,
                              uint64_t t_total, double delta);

// Checks the sieving inequality with every N(...) term brute-forced.
CountReport sieve_lower_bound_check(const FieldCtx& ctx, const SieveConfig& config, std::span<const FqElem> a,
                                    FqElem b);

// Existence of a primitive point on x^2 + y^2 + z^2 = 1.
struct SphereWitness {
    uint64_t x, y, z;  // encodings
};
bool sphere_has_primitive(const FieldCtx& ctx, SphereWitness* witness = nullptr);
bool sphere_has_primitive(uint64_t q);

struct SphereScanEntry {
    uint64_t q = 0;
    bool has_primitive = false;
    std::optional<SphereWitness> witness;
};

struct SphereScanResult {
    std::vector<uint64_t> exceptional;   // q with no primitive point, ascending
    std::vector<SphereScanEntry> entries;  // every checked q, ascending
    uint64_t checked = 0;
    uint64_t resumed = 0;  // entries taken from the checkpoint file
};

// Scans all odd prime powers q <= max_q. Results are deterministic at any
// parallelism; the checkpoint file (JSON Lines) is appended as work
// completes, in ascending q order, and an existing file is trusted and
// extended.
SphereScanResult sphere_scan(uint64_t max_q, int jobs = 0, const std::string& checkpoint_path = "");
SphereScanResult sphere_scan_serial(uint64_t max_q, const std::string& checkpoint_path = "");

// Smallest q beyond which (q-1)^3 > sqrt(q) [1 + (2 Wb - 1) sqrt(q)]^3, with
// Wb the analytic squarefree-divisor estimate taken at t = (q+1)/2. Beyond
// the returned value the sphere always carries a primitive point; the
// crossing sits near 5.21e9.
double sufficiency_threshold();

}  // namespace primpoint
