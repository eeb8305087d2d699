#include "primpoint/arith.hpp"

#include <algorithm>
#include <cmath>

namespace primpoint {

uint64_t gcd_u64(uint64_t a, uint64_t b) {
    while (b) {
        a %= b;
        std::swap(a, b);
    }
    return a;
}

namespace {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((__uint128_t)a * b % m);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

bool miller_rabin(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // Deterministic witness set for the full 64-bit range.
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 0; i < s - 1; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

uint64_t pollard_brent(uint64_t n) {
    if ((n & 1) == 0) return 2;
    uint64_t x0 = 2, c = 1;
    while (true) {
        uint64_t x = x0, y = x0, d = 1;
        uint64_t q = 1;
        int lam = 1;
        while (d == 1) {
            y = x;
            for (int i = 0; i < lam; ++i) x = (mulmod(x, x, n) + c) % n;
            int k = 0;
            while (k < lam && d == 1) {
                uint64_t ys = x;
                int lim = std::min(128, lam - k);
                for (int i = 0; i < lim; ++i) {
                    x = (mulmod(x, x, n) + c) % n;
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                d = gcd_u64(q, n);
                if (d == n) {
                    // Backtrack one step at a time.
                    d = 1;
                    x = ys;
                    do {
                        x = (mulmod(x, x, n) + c) % n;
                        d = gcd_u64(x > y ? x - y : y - x, n);
                    } while (d == 1);
                    break;
                }
                k += lim;
            }
            lam *= 2;
        }
        if (d != n) return d;
        ++c;
        ++x0;
    }
}

void factor_rec(uint64_t n, std::vector<uint64_t>& out) {
    if (n == 1) return;
    if (miller_rabin(n)) {
        out.push_back(n);
        return;
    }
    uint64_t d = pollard_brent(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

}  // namespace

bool is_prime(uint64_t n) { return miller_rabin(n); }

Factorization factorize(uint64_t n) {
    if (n == 0) throw std::invalid_argument("factorize: n must be positive");
    Factorization f;
    f.value = n;
    std::vector<uint64_t> primes;
    for (uint64_t p = 2; p < 1000000 && p * p <= n; p += (p == 2 ? 1 : 2)) {
        while (n % p == 0) {
            primes.push_back(p);
            n /= p;
        }
    }
    factor_rec(n, primes);
    std::sort(primes.begin(), primes.end());
    for (uint64_t p : primes) {
        if (!f.factors.empty() && f.factors.back().first == p)
            ++f.factors.back().second;
        else
            f.factors.emplace_back(p, 1);
    }
    return f;
}

uint64_t euler_phi(const Factorization& f) {
    uint64_t r = f.value;
    for (auto [p, e] : f.factors) {
        (void)e;
        r -= r / p;
    }
    return r;
}

uint64_t euler_phi(uint64_t n) { return euler_phi(factorize(n)); }

int moebius(uint64_t n) {
    Factorization f = factorize(n);
    for (auto [p, e] : f.factors)
        if (e > 1) return 0;
    return (f.factors.size() % 2 == 0) ? 1 : -1;
}

uint64_t squarefree_divisor_count(uint64_t t) {
    Factorization f = factorize(t);
    return 1ull << f.distinct_primes();
}

std::vector<uint64_t> divisors(const Factorization& f, bool squarefree_only) {
    std::vector<uint64_t> out{1};
    for (auto [p, e] : f.factors) {
        uint32_t top = squarefree_only ? 1 : e;
        size_t base = out.size();
        uint64_t pk = 1;
        for (uint32_t k = 1; k <= top; ++k) {
            pk *= p;
            for (size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<uint64_t> divisors(uint64_t n, bool squarefree_only) {
    return divisors(factorize(n), squarefree_only);
}

double phi_ratio_lower_bound(uint64_t n) {
    if (n < 3) throw std::invalid_argument("phi_ratio_lower_bound: n >= 3 required");
    double ll = std::log(std::log(static_cast<double>(n)));
    return 2.0 * ll / (2.0 * kExpGamma * ll * ll + 5.0);
}

bool is_phi_ratio_exception(uint64_t n) { return n == 223092870ull; }

double w_upper_bound(double t) {
    if (t < 3) throw std::invalid_argument("w_upper_bound: t >= 3 required");
    return std::pow(t, 0.96 / std::log(std::log(t)));
}

FermatPrimeInfo classify_fermat_prime(uint64_t q) {
    FermatPrimeInfo info;
    if (q < 3 || !is_prime(q)) return info;
    uint64_t m = q - 1;
    if ((m & (m - 1)) != 0) return info;  // not a power of two
    uint32_t e = 0;
    while (m > 1) {
        m >>= 1;
        ++e;
    }
    if ((e & (e - 1)) != 0) return info;  // exponent itself must be a power of two
    uint32_t l = 0;
    while ((1u << l) < e) ++l;
    if ((1u << l) != e) return info;
    info.is_fermat_prime = true;
    info.l = l;
    info.l_positive = l > 0;
    return info;
}

std::vector<PrimePower> prime_powers_up_to(uint64_t max, bool odd_only) {
    std::vector<PrimePower> out;
    if (max < 2) return out;
    // Sieve primes, then extend to powers.
    std::vector<bool> comp(max + 1, false);
    for (uint64_t p = 2; p * p <= max; ++p)
        if (!comp[p])
            for (uint64_t k = p * p; k <= max; k += p) comp[k] = true;
    for (uint64_t p = 2; p <= max; ++p) {
        if (comp[p]) continue;
        if (odd_only && p == 2) continue;
        uint64_t q = p;
        uint32_t n = 1;
        while (q <= max) {
            out.push_back({q, p, n});
            if (q > max / p) break;
            q *= p;
            ++n;
        }
    }
    std::sort(out.begin(), out.end(), [](const PrimePower& a, const PrimePower& b) { return a.q < b.q; });
    return out;
}

}  // namespace primpoint
