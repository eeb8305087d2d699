#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace primpoint {

// Euler-Mascheroni constant exponentiated, e^gamma, to 17 significant digits.
inline constexpr double kExpGamma = 1.7810724179901979;

struct Factorization {
    uint64_t value = 1;
    std::vector<std::pair<uint64_t, uint32_t>> factors;  // (prime, exponent), primes ascending

    bool is_prime() const { return factors.size() == 1 && factors[0].second == 1; }
    size_t distinct_primes() const { return factors.size(); }
};

bool is_prime(uint64_t n);

// Canonical factorization. Trial division below 1e6, then deterministic
// Miller-Rabin plus Brent-Pollard rho for the 64-bit remainder.
Factorization factorize(uint64_t n);

uint64_t euler_phi(uint64_t n);
uint64_t euler_phi(const Factorization& f);

int moebius(uint64_t n);

// W(t) = number of squarefree divisors = 2^omega(t).
uint64_t squarefree_divisor_count(uint64_t t);

std::vector<uint64_t> divisors(uint64_t n, bool squarefree_only = false);
std::vector<uint64_t> divisors(const Factorization& f, bool squarefree_only = false);

// 2*ln(ln n) / (2*e^gamma*(ln ln n)^2 + 5); strict lower bound for phi(n)/n
// for every n >= 3 except n = 223092870 (23#).
double phi_ratio_lower_bound(uint64_t n);
bool is_phi_ratio_exception(uint64_t n);

// t^(0.96/ln(ln t)); strict upper bound for W(t-1), t >= 3.
double w_upper_bound(double t);

struct FermatPrimeInfo {
    bool is_fermat_prime = false;
    uint32_t l = 0;            // q = 2^(2^l) + 1 when is_fermat_prime
    bool l_positive = false;   // q > 3, the range where the closed hyperplane formulas apply
};
FermatPrimeInfo classify_fermat_prime(uint64_t q);
inline bool is_fermat_prime(uint64_t q) { return classify_fermat_prime(q).is_fermat_prime; }

// Ascending prime powers p^k <= max (k >= 1).
struct PrimePower {
    uint64_t q;
    uint64_t p;
    uint32_t n;
};
std::vector<PrimePower> prime_powers_up_to(uint64_t max, bool odd_only = false);

uint64_t gcd_u64(uint64_t a, uint64_t b);

}  // namespace primpoint
