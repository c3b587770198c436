#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <utility>

#include "jp/errors.hpp"

namespace jp {

namespace bmp = boost::multiprecision;

// Plain value semantics (no expression templates); everything downstream
// relies on `auto x = a * b;` being an Int/Rat again.
using Int = bmp::number<bmp::cpp_int_backend<>, bmp::et_off>;
using Rat = bmp::number<bmp::rational_adaptor<bmp::cpp_int_backend<>>, bmp::et_off>;

inline Int rat_num(const Rat& q) { return numerator(q); }
inline Int rat_den(const Rat& q) { return denominator(q); }

inline int sign_of(const Int& x) { return x.sign(); }
inline int sign_of(const Rat& q) { return q.sign(); }

// Floor division, b > 0.
inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b;
    if (a % b != 0 && ((a < 0) != (b < 0))) --q;
    return q;
}

inline Int floor_rat(const Rat& q) { return floor_div(rat_num(q), rat_den(q)); }
inline Int ceil_rat(const Rat& q) { return -floor_rat(-q); }

inline Int ipow(Int base, unsigned long e) {
    Int r = 1;
    while (e) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

inline Rat rat_pow(const Rat& base, long e) {
    if (e >= 0)
        return Rat(ipow(rat_num(base), static_cast<unsigned long>(e)),
                   ipow(rat_den(base), static_cast<unsigned long>(e)));
    if (base == 0) throw error(errc::division_by_zero, "0^negative");
    return Rat(ipow(rat_den(base), static_cast<unsigned long>(-e)),
               ipow(rat_num(base), static_cast<unsigned long>(-e)));
}

// 2^k as an exact rational, k may be negative.
inline Rat pow2_rat(long k) {
    Int one = 1;
    if (k >= 0) return Rat(one << static_cast<unsigned>(k), 1);
    return Rat(1, one << static_cast<unsigned>(-k));
}

inline Rat rat_abs(const Rat& q) { return q < 0 ? Rat(-q) : q; }
inline Int int_abs(const Int& x) { return x < 0 ? Int(-x) : x; }

// Nearest decimal with `digits` places, ties away from zero. Deterministic.
inline std::string decimal_string(const Rat& q, unsigned digits) {
    Int scale = ipow(Int(10), digits);
    Rat scaled = q * Rat(scale, 1);
    Int twice = floor_rat(scaled * 2);
    Int n = floor_div(twice + 1, Int(2)); // round half up on the doubled value
    bool neg = n < 0;
    Int an = int_abs(n);
    Int ip = an / scale;
    Int fp = an % scale;
    std::string frac = fp.str();
    if (frac.size() < digits) frac.insert(frac.begin(), digits - frac.size(), '0');
    std::string out = (neg ? "-" : "") + ip.str();
    if (digits > 0) out += "." + frac;
    return out;
}

inline std::string rat_string(const Rat& q) {
    return rat_num(q).str() + "/" + rat_den(q).str();
}

// Deterministic PRNG for property tests and `selftest`.
struct SplitMix64 {
    std::uint64_t s;
    explicit SplitMix64(std::uint64_t seed) : s(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }
};

} // namespace jp
