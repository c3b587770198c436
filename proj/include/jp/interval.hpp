#pragma once

#include <algorithm>
#include <mutex>
#include <optional>
#include <string>

#include "jp/numeric.hpp"

namespace jp {

// Closed rational interval [lo, hi]. Endpoint arithmetic is exact; callers
// control growth of endpoint size with round_out().
struct Interval {
    Rat lo, hi;

    Interval() : lo(0), hi(0) {}
    Interval(Rat v) : lo(v), hi(v) {}
    Interval(Rat l, Rat h) : lo(std::move(l)), hi(std::move(h)) {
        if (lo > hi) throw error(errc::internal_check, "interval endpoints out of order");
    }

    Rat width() const { return hi - lo; }
    Rat mid() const { return (lo + hi) / 2; }
    bool contains_zero() const { return lo <= 0 && 0 <= hi; }
    bool contains(const Rat& v) const { return lo <= v && v <= hi; }

    // -1, +1, or 0 when the sign is not decided by this enclosure.
    int sign() const {
        if (lo > 0) return 1;
        if (hi < 0) return -1;
        return 0;
    }
};

inline Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }
inline Interval operator+(const Interval& a, const Interval& b) { return {a.lo + b.lo, a.hi + b.hi}; }
inline Interval operator-(const Interval& a, const Interval& b) { return {a.lo - b.hi, a.hi - b.lo}; }

inline Interval operator*(const Interval& a, const Interval& b) {
    Rat p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    return {std::min(std::min(p1, p2), std::min(p3, p4)),
            std::max(std::max(p1, p2), std::max(p3, p4))};
}

inline Interval inv(const Interval& a) {
    if (a.contains_zero()) throw error(errc::internal_check, "interval inverse straddles zero");
    return {Rat(1) / a.hi, Rat(1) / a.lo};
}

inline Interval operator/(const Interval& a, const Interval& b) { return a * inv(b); }

inline Interval operator*(const Interval& a, const Rat& s) {
    return s >= 0 ? Interval{a.lo * s, a.hi * s} : Interval{a.hi * s, a.lo * s};
}
inline Interval operator*(const Rat& s, const Interval& a) { return a * s; }
inline Interval operator+(const Interval& a, const Rat& s) { return {a.lo + s, a.hi + s}; }
inline Interval operator+(const Rat& s, const Interval& a) { return a + s; }
inline Interval operator-(const Interval& a, const Rat& s) { return {a.lo - s, a.hi - s}; }
inline Interval operator-(const Rat& s, const Interval& a) { return (-a) + s; }

inline Interval hull(const Interval& a, const Interval& b) {
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

inline Interval abs_iv(const Interval& a) {
    if (a.lo >= 0) return a;
    if (a.hi <= 0) return -a;
    return {Rat(0), std::max(Rat(-a.lo), a.hi)};
}

inline Rat round_down_dyadic(const Rat& q, int bits) {
    Int s = Int(1) << static_cast<unsigned>(bits);
    return Rat(floor_rat(q * Rat(s, 1)), s);
}
inline Rat round_up_dyadic(const Rat& q, int bits) {
    Int s = Int(1) << static_cast<unsigned>(bits);
    return Rat(ceil_rat(q * Rat(s, 1)), s);
}

// Outward rounding to dyadic endpoints with `bits` fractional bits.
inline Interval round_out(const Interval& a, int bits) {
    return {round_down_dyadic(a.lo, bits), round_up_dyadic(a.hi, bits)};
}

inline Interval square(const Interval& a) {
    Rat l1 = a.lo * a.lo, l2 = a.hi * a.hi;
    if (a.contains_zero()) return {Rat(0), std::max(l1, l2)};
    return {std::min(l1, l2), std::max(l1, l2)};
}

// Floor of sqrt(q) on a dyadic grid: result^2 <= q.
inline Rat sqrt_down(const Rat& q, int bits) {
    if (q < 0) throw error(errc::internal_check, "sqrt of negative");
    Int s = Int(1) << static_cast<unsigned>(bits);
    Int t = floor_rat(q * Rat(s * s, 1));
    return Rat(sqrt(t), s);
}
inline Rat sqrt_up(const Rat& q, int bits) {
    if (q < 0) throw error(errc::internal_check, "sqrt of negative");
    Int s = Int(1) << static_cast<unsigned>(bits);
    Int t = ceil_rat(q * Rat(s * s, 1));
    Int r = sqrt(t);
    if (r * r < t) ++r;
    return Rat(r, s);
}

inline Interval sqrt_iv(const Interval& a, int bits) {
    if (a.lo < 0) throw error(errc::internal_check, "sqrt of interval below zero");
    return {sqrt_down(a.lo, bits), sqrt_up(a.hi, bits)};
}

inline Int icbrt(const Int& n) {
    if (n < 0) throw error(errc::internal_check, "icbrt of negative");
    if (n == 0) return 0;
    Int x = Int(1) << static_cast<unsigned>(msb(n) / 3 + 1);
    while (true) {
        Int y = (2 * x + n / (x * x)) / 3;
        if (y >= x) break;
        x = y;
    }
    while (x * x * x > n) --x;
    return x;
}

// q >= 0; result^3 <= q (resp. >= q) on the dyadic grid.
inline Rat cbrt_down(const Rat& q, int bits) {
    Int s = Int(1) << static_cast<unsigned>(bits);
    return Rat(icbrt(floor_rat(q * Rat(s * s * s, 1))), s);
}
inline Rat cbrt_up(const Rat& q, int bits) {
    Int s = Int(1) << static_cast<unsigned>(bits);
    Int t = ceil_rat(q * Rat(s * s * s, 1));
    Int r = icbrt(t);
    if (r * r * r < t) ++r;
    return Rat(r, s);
}

inline Interval cbrt_iv(const Interval& a, int bits) {
    if (a.lo < 0) throw error(errc::internal_check, "cbrt of interval below zero");
    return {cbrt_down(a.lo, bits), cbrt_up(a.hi, bits)};
}

namespace detail {

// atanh(y) for exact rational y in [0, 1/3], enclosed at `bits` working bits.
inline Interval atanh_small(const Rat& y, int bits) {
    Interval yi = round_out(Interval(y), bits + 4);
    Interval y2 = round_out(square(yi), bits);
    Interval term = yi;
    Interval sum = yi;
    Rat eps = pow2_rat(-bits);
    unsigned long k = 1;
    while (true) {
        term = round_out(term * y2, bits);
        Interval contrib = round_out(term * Rat(Int(1), Int(2 * k + 1)), bits);
        sum = round_out(sum + contrib, bits);
        if (term.hi <= eps) break;
        ++k;
        if (k > 100000) throw error(errc::internal_check, "atanh series stalled");
    }
    // Geometric tail: sum_{j>k} y^(2j+1)/(2j+1) <= term*y2/(1-y2).
    Rat tail = term.hi * y2.hi / (1 - y2.hi);
    return {sum.lo, sum.hi + tail};
}

inline Interval ln2_enclosure(int bits) {
    static std::mutex mu;
    static Interval cached;
    static int cached_bits = -1;
    std::lock_guard<std::mutex> lk(mu);
    if (cached_bits < bits) {
        Interval a = atanh_small(Rat(1, 3), bits + 8);
        cached = Interval{a.lo * 2, a.hi * 2};
        cached_bits = bits;
    }
    return cached;
}

} // namespace detail

// Rigorous enclosure of ln(q) for exact rational q > 0.
inline Interval ln_rat(const Rat& q, int bits) {
    if (q <= 0) throw error(errc::internal_check, "ln of nonpositive rational");
    if (q == 1) return Interval(Rat(0));
    if (q < 1) return -ln_rat(Rat(1) / q, bits);
    // q = 2^k * m with m in [1,2)
    long k = 0;
    {
        Int n = rat_num(q), d = rat_den(q);
        k = static_cast<long>(msb(n)) - static_cast<long>(msb(d));
        Rat p = pow2_rat(k);
        while (p * 2 <= q) { p *= 2; ++k; }
        while (p > q) { p /= 2; --k; }
    }
    Rat m = q / pow2_rat(k);
    int w = bits + 8;
    Rat y = (m - 1) / (m + 1); // in [0, 1/3)
    Interval lnm = detail::atanh_small(y, w);
    lnm = Interval{lnm.lo * 2, lnm.hi * 2};
    if (k == 0) return round_out(lnm, bits);
    Interval l2 = detail::ln2_enclosure(w);
    Interval kl2 = l2 * Rat(k);
    return round_out(lnm + kl2, bits);
}

inline Interval ln_iv(const Interval& a, int bits) {
    if (a.lo <= 0) throw error(errc::internal_check, "ln of interval touching zero");
    // Shrink the operand sizes first; ln is monotone so directed dyadic
    // rounding keeps the enclosure valid.
    Rat lo = round_down_dyadic(a.lo, bits + 16);
    if (lo <= 0) lo = a.lo;
    Rat hi = round_up_dyadic(a.hi, bits + 16);
    return {ln_rat(lo, bits).lo, ln_rat(hi, bits).hi};
}

// Rectangular complex enclosure.
struct Box {
    Interval re, im;

    Box() = default;
    Box(Interval r, Interval i) : re(std::move(r)), im(std::move(i)) {}
    explicit Box(const Rat& v) : re(Interval(v)), im(Interval(Rat(0))) {}

    bool is_real_exact() const { return im.lo == 0 && im.hi == 0; }
    Rat width() const { return std::max(re.width(), im.width()); }
};

inline Box operator-(const Box& a) { return {-a.re, -a.im}; }
inline Box operator+(const Box& a, const Box& b) { return {a.re + b.re, a.im + b.im}; }
inline Box operator-(const Box& a, const Box& b) { return {a.re - b.re, a.im - b.im}; }
inline Box operator*(const Box& a, const Box& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline Box operator*(const Box& a, const Rat& s) { return {a.re * s, a.im * s}; }
inline Box operator*(const Rat& s, const Box& a) { return a * s; }
inline Box operator+(const Box& a, const Rat& s) { return {a.re + s, a.im}; }
inline Box conj(const Box& a) { return {a.re, -a.im}; }

inline Interval abs_sq(const Box& a) { return square(a.re) + square(a.im); }

inline std::optional<Box> checked_div(const Box& a, const Box& b) {
    Interval n = abs_sq(b);
    if (n.contains_zero()) return std::nullopt;
    Box num = a * conj(b);
    Interval in = inv(n);
    return Box{num.re * in, num.im * in};
}

inline Box operator/(const Box& a, const Box& b) {
    auto r = checked_div(a, b);
    if (!r) throw error(errc::internal_check, "box division straddles zero");
    return *r;
}

inline Box round_out(const Box& a, int bits) {
    return {round_out(a.re, bits), round_out(a.im, bits)};
}

inline Rat abs_upper(const Box& a, int bits) { return sqrt_up(abs_sq(a).hi, bits); }
inline Rat abs_lower(const Box& a, int bits) {
    Interval s = abs_sq(a);
    if (s.lo <= 0) return Rat(0);
    return sqrt_down(s.lo, bits);
}

inline bool contains_zero(const Box& a) { return a.re.contains_zero() && a.im.contains_zero(); }

// Decide a predicate by refining precision: f(bits) returns nullopt while the
// enclosures are still too coarse. Throws precision_exhausted at the cap.
template <class F>
bool decide_with_precision(F&& f, int start_bits, int cap_bits, const char* what) {
    for (int bits = start_bits; bits <= cap_bits; bits *= 2) {
        std::optional<bool> r = f(bits);
        if (r) return *r;
    }
    throw error(errc::precision_exhausted, what);
}

} // namespace jp
