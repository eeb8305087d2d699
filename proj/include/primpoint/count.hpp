#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "primpoint/field.hpp"
#include "primpoint/poly.hpp"

namespace primpoint {

// Result record shared by the checking front-ends.
struct CountReport {
    uint64_t q = 0;
    uint64_t p = 0;
    uint32_t n = 1;
    std::string poly;
    std::string method;
    uint64_t count = 0;
    double main_term = 0;
    double deviation = 0;
    std::optional<double> bound;
    std::optional<bool> holds;
    double elapsed_ms = 0;
};

// N(f): zeros of f over F_q^s. The unsuffixed versions run OpenMP-parallel
// where it pays off and take structural fast paths; the _serial versions are
// plain reference loops kept for testing.
uint64_t count_points(const MultiPoly& f);
uint64_t count_points_serial(const MultiPoly& f);

// N*(f): zeros with all coordinates nonzero.
uint64_t count_points_nonzero(const MultiPoly& f);
uint64_t count_points_nonzero_serial(const MultiPoly& f);

// N_I(f): zeros with x_i = 0 for every i outside I. `kept_mask` bit i-1
// corresponds to variable x_i.
uint64_t count_points_zeroed(const MultiPoly& f, uint32_t kept_mask);

// sum over I of (-1)^(s-|I|) N_I(f); equals N*(f).
uint64_t nstar_via_inclusion_exclusion(const MultiPoly& f);

// P_q(f): zeros all of whose coordinates are primitive. Solves the last
// variable directly when f is linear in it.
uint64_t count_primitive_brute(const MultiPoly& f);
uint64_t count_primitive_brute_serial(const MultiPoly& f);

// Moebius inclusion-exclusion over squarefree twists, accumulated in exact
// rational arithmetic; equals count_primitive_brute.
uint64_t primitive_via_moebius(const MultiPoly& f);

// #{x primitive : x^d = y} for y of order (q-1)/d; equals
// phi(q-1)/phi((q-1)/d).
uint64_t primitive_dth_root_count(const FieldCtx& ctx, uint64_t d, FqElem y);

// (R,d)-freeness: h lies in the index-d subgroup C_d and is not an l-th
// power within C_d for any prime l | R.
bool is_free(const FieldCtx& ctx, FqElem h, uint64_t R, uint64_t d);

// N(R_1,...,R_s): solutions of sum a_i y_i = b over (F_q^*)^s with y_i
// (R_i,d_i)-free coordinate-wise.
uint64_t count_free_solutions(const FieldCtx& ctx, std::span<const FqElem> a, FqElem b,
                              std::span<const uint64_t> d, std::span<const uint64_t> R);

// The sieving lower bound for N(R_1,...,R_s):
//   prod phi(R_i)/(R_i d_i) * [ (q-1)^s/q - (1/sqrt q) prod (1 + (d_i W(R_i) - 1) sqrt q) ]
// For b = 0 the degenerate Jacobi magnitudes force a weaker estimate: the
// character-sum product picks up a factor (q-1)/sqrt(q) and the boundary
// term subtracts one epsilon. (The b != 0 form applied at b = 0 is falsified
// by e.g. q = 9, d = (2,1), R = (1,2), where N = 0.)
double free_solutions_lower_bound(uint64_t q, std::span<const uint64_t> d, std::span<const uint64_t> R,
                                  bool b_is_zero);

}  // namespace primpoint
