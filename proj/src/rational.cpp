#include "primpoint/rational.hpp"

namespace primpoint {

namespace {
int128 gcd_i128(int128 a, int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
        int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}
}  // namespace

std::string to_string_i128(int128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    __uint128_t u = neg ? -(__uint128_t)v : (__uint128_t)v;
    std::string s;
    while (u) {
        s.push_back(static_cast<char>('0' + (int)(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    return std::string(s.rbegin(), s.rend());
}

int128 Rat::checked_add(int128 a, int128 b) {
    int128 r = a + b;
    if ((b > 0 && r < a) || (b < 0 && r > a)) throw std::overflow_error("Rat: add overflow");
    return r;
}

int128 Rat::checked_sub(int128 a, int128 b) {
    int128 r = a - b;
    if ((b < 0 && r < a) || (b > 0 && r > a)) throw std::overflow_error("Rat: sub overflow");
    return r;
}

int128 Rat::checked_mul(int128 a, int128 b) {
    if (a == 0 || b == 0) return 0;
    int128 r = a * b;
    if (r / b != a) throw std::overflow_error("Rat: mul overflow");
    return r;
}

void Rat::normalize() {
    if (den_ == 0) throw std::domain_error("Rat: zero denominator");
    if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    int128 g = gcd_i128(num_, den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
}

int64_t Rat::as_int64() const {
    if (den_ != 1) throw std::logic_error("Rat: not an integer: " + str());
    if (num_ > INT64_MAX || num_ < INT64_MIN) throw std::overflow_error("Rat: value exceeds int64");
    return static_cast<int64_t>(num_);
}

std::string Rat::str() const {
    std::string s = to_string_i128(num_);
    if (den_ != 1) s += "/" + to_string_i128(den_);
    return s;
}

}  // namespace primpoint
