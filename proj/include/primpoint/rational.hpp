#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace primpoint {

using int128 = __int128;

std::string to_string_i128(int128 v);

// Exact rational on 128-bit integers, always normalized (den > 0, gcd = 1).
// Big enough for every Moebius accumulation and Q(sqrt q) value at desk scale;
// overflow throws instead of wrapping.
class Rat {
public:
    Rat() : num_(0), den_(1) {}
    Rat(int64_t n) : num_(n), den_(1) {}
    Rat(int128 n, int128 d) : num_(n), den_(d) { normalize(); }

    int128 num() const { return num_; }
    int128 den() const { return den_; }

    bool is_integer() const { return den_ == 1; }
    bool is_zero() const { return num_ == 0; }
    int64_t as_int64() const;
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    friend Rat operator+(const Rat& a, const Rat& b) { return Rat(checked_add(checked_mul(a.num_, b.den_), checked_mul(b.num_, a.den_)), checked_mul(a.den_, b.den_)); }
    friend Rat operator-(const Rat& a, const Rat& b) { return Rat(checked_sub(checked_mul(a.num_, b.den_), checked_mul(b.num_, a.den_)), checked_mul(a.den_, b.den_)); }
    friend Rat operator*(const Rat& a, const Rat& b) { return Rat(checked_mul(a.num_, b.num_), checked_mul(a.den_, b.den_)); }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.num_ == 0) throw std::domain_error("Rat: division by zero");
        return Rat(checked_mul(a.num_, b.den_), checked_mul(a.den_, b.num_));
    }
    Rat operator-() const { return Rat(-num_, den_); }
    Rat& operator+=(const Rat& o) { return *this = *this + o; }
    Rat& operator-=(const Rat& o) { return *this = *this - o; }
    Rat& operator*=(const Rat& o) { return *this = *this * o; }
    Rat& operator/=(const Rat& o) { return *this = *this / o; }

    friend bool operator==(const Rat& a, const Rat& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) { return checked_mul(a.num_, b.den_) < checked_mul(b.num_, a.den_); }

    std::string str() const;

private:
    static int128 checked_add(int128 a, int128 b);
    static int128 checked_sub(int128 a, int128 b);
    static int128 checked_mul(int128 a, int128 b);
    void normalize();

    int128 num_, den_;
};

}  // namespace primpoint
