#pragma once

#include <array>
#include <memory>
#include <mutex>
#include <vector>

#include "jp/interval.hpp"
#include "jp/polynomial.hpp"

namespace jp {

namespace detail {

// Trial-division factorization; coefficients of minimal polynomials are small.
inline std::vector<Int> positive_divisors(Int n) {
    n = int_abs(n);
    if (n == 0) throw error(errc::internal_check, "divisors of zero");
    std::vector<std::pair<Int, int>> fac;
    Int d = 2;
    Int limit = 2000003;
    while (d * d <= n && d < limit) {
        if (n % d == 0) {
            int e = 0;
            while (n % d == 0) { n /= d; ++e; }
            fac.emplace_back(d, e);
        }
        d += (d == 2) ? 1 : 2;
    }
    if (n > 1) {
        // No factor below the trial bound; prime iff below its square.
        if (n >= limit * limit)
            throw error(errc::parse_error, "minimal polynomial coefficient too large for rational-root test");
        fac.emplace_back(n, 1);
    }
    std::vector<Int> divs{Int(1)};
    for (auto& [p, e] : fac) {
        size_t sz = divs.size();
        Int pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (size_t i = 0; i < sz; ++i) divs.push_back(divs[i] * pk);
        }
    }
    return divs;
}

} // namespace detail

// A real algebraic number field Q(theta) of degree 1..3; theta is pinned by
// an integer minimal polynomial plus an isolating interval for one real root.
class NumberField {
public:
    static std::shared_ptr<const NumberField> make(std::vector<Int> coeffs, Rat lo, Rat hi) {
        auto f = std::shared_ptr<NumberField>(new NumberField(std::move(coeffs), std::move(lo), std::move(hi)));
        return f;
    }

    // Degree-1 field representing plain rationals (theta = 0, unused).
    static const std::shared_ptr<const NumberField>& rationals() {
        static std::shared_ptr<const NumberField> q = make({Int(0), Int(1)}, Rat(-1), Rat(1));
        return q;
    }

    int degree() const { return deg_; }
    const std::vector<Int>& minpoly() const { return c_; }
    const Rat& declared_lo() const { return lo0_; }
    const Rat& declared_hi() const { return hi0_; }

    bool same(const NumberField& o) const {
        return c_ == o.c_ && lo0_ == o.lo0_ && hi0_ == o.hi0_;
    }

    // For degree 3: 1 or 3; degree 2 always 2; degree 1 always 1.
    int real_root_count() const {
        if (deg_ == 1) return 1;
        if (deg_ == 2) return 2;
        return cubic_is_totally_real() ? 3 : 1;
    }

    // Isolating interval for theta refined to width <= 2^-bits. Cached,
    // monotone, safe to call concurrently.
    Interval root_interval(int bits) const {
        if (deg_ == 1) {
            Rat r(-c_[0], c_[1]);
            return Interval(r);
        }
        std::lock_guard<std::mutex> lk(mu_);
        Rat target = pow2_rat(-bits);
        while (rhi_ - rlo_ > target) {
            Rat mid = (rlo_ + rhi_) / 2;
            int s = sign_at(mid);
            if (s == 0) throw error(errc::internal_check, "rational root of irreducible polynomial");
            if (s == sign_lo_) rlo_ = mid; else rhi_ = mid;
        }
        return Interval(rlo_, rhi_);
    }

    // Rigorous box for the root_index-th conjugate of theta, width <= 2^-bits.
    // Index 0 is the distinguished real root. For a cubic with a complex pair,
    // index 1 has positive imaginary part and index 2 is its conjugate; for
    // totally real fields the remaining roots are ordered ascending.
    Box root_box(int root_index, int bits) const {
        if (root_index < 0 || root_index >= deg_)
            throw error(errc::index_out_of_range, "embedding root index");
        Rat target = pow2_rat(-bits);
        for (int work = std::max(bits, 32); work <= (1 << 24); work *= 2) {
            Box b = root_box_attempt(root_index, work);
            if (b.width() <= target) return b;
        }
        throw error(errc::internal_check, "conjugate root refinement stalled");
    }

    // theta^k (k <= 4) expressed in the power basis; used by element products.
    const std::array<Rat, 3>& theta_power(int k) const { return pow_[k]; }

private:
    NumberField(std::vector<Int> coeffs, Rat lo, Rat hi)
        : c_(std::move(coeffs)), lo0_(std::move(lo)), hi0_(std::move(hi)) {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
        deg_ = static_cast<int>(c_.size()) - 1;
        if (deg_ < 1 || deg_ > 3)
            throw error(errc::parse_error, "minimal polynomial degree must be 1..3");
        normalize_content();
        if (lo0_ > hi0_) throw error(errc::parse_error, "isolating interval endpoints out of order");
        check_irreducible();
        isolate_root();
        build_power_table();
    }

    void normalize_content() {
        Int g = 0;
        for (const Int& x : c_) g = gcd(g, x);
        if (c_.back() < 0) g = -g;
        if (g != 0 && g != 1)
            for (Int& x : c_) x /= g;
    }

    Poly as_poly() const {
        Poly p;
        for (const Int& x : c_) p.push_back(Rat(x, 1));
        return p;
    }

    int sign_at(const Rat& x) const {
        // Integer evaluation of c(x) * den(x)^deg.
        Int p = rat_num(x), q = rat_den(x);
        Int acc = 0, ppow = 1;
        std::vector<Int> qpow(deg_ + 1);
        qpow[deg_] = 1;
        for (int i = deg_ - 1; i >= 0; --i) qpow[i] = qpow[i + 1] * q;
        for (int i = 0; i <= deg_; ++i) {
            acc += c_[i] * ppow * qpow[i];
            ppow *= p;
        }
        return sign_of(acc);
    }

    void check_irreducible() const {
        if (deg_ == 1) return;
        if (c_[0] == 0) throw error(errc::reducible, "rational root 0");
        if (deg_ == 2) {
            Int disc = c_[1] * c_[1] - 4 * c_[2] * c_[0];
            if (disc >= 0) {
                Int s = sqrt(disc);
                if (s * s == disc) throw error(errc::reducible, "quadratic with rational roots");
            }
            return;
        }
        for (const Int& p : detail::positive_divisors(c_[0]))
            for (const Int& q : detail::positive_divisors(c_[3]))
                for (int s : {1, -1}) {
                    Rat cand(s * p, q);
                    if (poly_eval(as_poly(), cand) == 0)
                        throw error(errc::reducible, "rational root " + rat_string(cand));
                }
    }

    void isolate_root() {
        if (deg_ == 1) {
            Rat r(-c_[0], c_[1]);
            if (r < lo0_ || r > hi0_)
                throw error(errc::no_root_in_interval, "degree-1 root outside interval");
            rlo_ = rhi_ = r;
            sign_lo_ = 0;
            return;
        }
        int n = sturm_count(as_poly(), lo0_, hi0_);
        if (n == 0) throw error(errc::no_root_in_interval, "no real root in interval");
        if (n > 1) throw error(errc::multiple_roots_in_interval, "interval isolates more than one root");
        rlo_ = lo0_;
        rhi_ = hi0_;
        sign_lo_ = sign_at(rlo_);
        if (sign_lo_ == 0 || sign_at(rhi_) == 0)
            throw error(errc::internal_check, "rational root of irreducible polynomial at endpoint");
    }

    void build_power_table() {
        pow_[0] = {Rat(1), Rat(0), Rat(0)};
        pow_[1] = deg_ >= 2 ? std::array<Rat, 3>{Rat(0), Rat(1), Rat(0)}
                            : std::array<Rat, 3>{Rat(-c_[0], c_[1]), Rat(0), Rat(0)};
        for (int k = 2; k <= 4; ++k) pow_[k] = shift_reduce(pow_[k - 1]);
    }

    // coords(x) -> coords(theta * x)
    std::array<Rat, 3> shift_reduce(const std::array<Rat, 3>& v) const {
        if (deg_ == 1) {
            Rat t(-c_[0], c_[1]);
            return {v[0] * t, Rat(0), Rat(0)};
        }
        if (deg_ == 2) {
            // theta^2 = -(c0 + c1 theta)/c2
            Rat q2(-c_[0], c_[2]), q1(-c_[1], c_[2]);
            return {v[1] * q2, v[0] + v[1] * q1, Rat(0)};
        }
        Rat t0(-c_[0], c_[3]), t1(-c_[1], c_[3]), t2(-c_[2], c_[3]);
        return {v[2] * t0, v[0] + v[2] * t1, v[1] + v[2] * t2};
    }

    bool cubic_is_totally_real() const {
        // Sign of the discriminant of the quadratic cofactor at theta.
        for (int bits = 32; bits <= (1 << 24); bits *= 2) {
            int s = quadratic_disc(bits).sign();
            if (s != 0) return s > 0;
        }
        throw error(errc::internal_check, "cofactor discriminant sign undecidable");
    }

    // b, c with minpoly/lead = (X - theta)(X^2 + bX + c), as enclosures.
    std::pair<Interval, Interval> cofactor(int bits) const {
        Interval th = root_interval(bits);
        Rat A(c_[2], c_[3]), B(c_[1], c_[3]);
        Interval b = th + A;
        Interval c = b * th + B;
        return {b, c};
    }

    Interval quadratic_disc(int bits) const {
        auto [b, c] = cofactor(bits);
        return square(b) - Interval(Rat(4)) * c;
    }

    Box root_box_attempt(int root_index, int bits) const {
        if (deg_ == 1) return Box(Rat(-c_[0], c_[1]));
        if (root_index == 0) return Box{root_interval(bits), Interval(Rat(0))};
        if (deg_ == 2) {
            // other root = -c1/c2 - theta
            Interval th = root_interval(bits);
            return Box{Rat(-c_[1], c_[2]) - th, Interval(Rat(0))};
        }
        auto [b, c] = cofactor(bits);
        Interval disc = square(b) - Interval(Rat(4)) * c;
        int ds = disc.sign();
        if (ds == 0) return Box{Interval(Rat(-1), Rat(1)), Interval(Rat(-1), Rat(1))}; // too coarse, caller refines
        if (ds > 0) {
            Interval s = sqrt_iv(disc, bits);
            Interval lo_root = (-b - s) * Rat(1, 2);
            Interval hi_root = (-b + s) * Rat(1, 2);
            return Box{root_index == 1 ? lo_root : hi_root, Interval(Rat(0))};
        }
        Interval re = -b * Rat(1, 2);
        Interval im = sqrt_iv(-disc, bits) * Rat(1, 2);
        return root_index == 1 ? Box{re, im} : Box{re, -im};
    }

    std::vector<Int> c_;
    int deg_ = 0;
    Rat lo0_, hi0_;
    mutable std::mutex mu_;
    mutable Rat rlo_, rhi_;
    mutable int sign_lo_ = 0;
    std::array<std::array<Rat, 3>, 5> pow_;
};

using FieldPtr = std::shared_ptr<const NumberField>;

// Element of a fixed field, as a coordinate vector over the power basis.
class FieldElement {
public:
    FieldElement() : f_(NumberField::rationals()), c_{Rat(0), Rat(0), Rat(0)} {}
    FieldElement(const Rat& r) : f_(NumberField::rationals()), c_{r, Rat(0), Rat(0)} {}
    FieldElement(long v) : FieldElement(Rat(v)) {}
    FieldElement(const Int& v) : FieldElement(Rat(v, 1)) {}

    FieldElement(FieldPtr f, std::vector<Rat> coords) : f_(std::move(f)), c_{Rat(0), Rat(0), Rat(0)} {
        if (static_cast<int>(coords.size()) != f_->degree())
            throw error(errc::parse_error, "coordinate count must equal field degree");
        for (size_t i = 0; i < coords.size(); ++i) c_[i] = std::move(coords[i]);
    }

    static FieldElement generator(const FieldPtr& f) {
        FieldElement x;
        x.f_ = f;
        x.c_ = f->theta_power(1);
        return x;
    }

    static FieldElement from_rat(const FieldPtr& f, const Rat& r) {
        FieldElement x;
        x.f_ = f;
        x.c_ = {r, Rat(0), Rat(0)};
        return x;
    }

    const FieldPtr& field() const { return f_; }
    const std::array<Rat, 3>& coords() const { return c_; }

    bool is_zero() const { return c_[0] == 0 && c_[1] == 0 && c_[2] == 0; }
    bool is_rational() const { return c_[1] == 0 && c_[2] == 0; }
    Rat as_rat() const {
        if (!is_rational()) throw error(errc::internal_check, "element is not rational");
        return c_[0];
    }

    friend FieldElement operator-(FieldElement a) {
        for (auto& x : a.c_) x = -x;
        return a;
    }

    friend FieldElement operator+(FieldElement a, const FieldElement& b) {
        const FieldPtr& f = merge_fields(a, b);
        a.f_ = f;
        for (int i = 0; i < 3; ++i) a.c_[i] += b.c_[i];
        return a;
    }

    friend FieldElement operator-(FieldElement a, const FieldElement& b) {
        const FieldPtr& f = merge_fields(a, b);
        a.f_ = f;
        for (int i = 0; i < 3; ++i) a.c_[i] -= b.c_[i];
        return a;
    }

    friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
        const FieldPtr& f = merge_fields(a, b);
        std::array<Rat, 5> prod{Rat(0), Rat(0), Rat(0), Rat(0), Rat(0)};
        for (int i = 0; i < 3; ++i) {
            if (a.c_[i] == 0) continue;
            for (int j = 0; j < 3; ++j) {
                if (b.c_[j] == 0) continue;
                prod[i + j] += a.c_[i] * b.c_[j];
            }
        }
        FieldElement r;
        r.f_ = f;
        r.c_ = {Rat(0), Rat(0), Rat(0)};
        for (int k = 0; k < 5; ++k) {
            if (prod[k] == 0) continue;
            const auto& pk = f->theta_power(k);
            for (int i = 0; i < 3; ++i) r.c_[i] += prod[k] * pk[i];
        }
        return r;
    }

    FieldElement inverse() const {
        if (is_zero()) throw error(errc::division_by_zero, "inverse of zero");
        if (is_rational()) return from_rat(f_, Rat(1) / c_[0]);
        Poly a{c_[0], c_[1], c_[2]};
        poly_trim(a);
        Poly m;
        for (const Int& x : f_->minpoly()) m.push_back(Rat(x, 1));
        auto [g, u, v] = poly_xgcd(a, m);
        (void)v;
        if (poly_deg(g) != 0)
            throw error(errc::internal_check, "element shares a factor with the minimal polynomial");
        FieldElement r;
        r.f_ = f_;
        r.c_ = {Rat(0), Rat(0), Rat(0)};
        for (size_t i = 0; i < u.size() && i < 3; ++i) r.c_[i] = u[i] / g[0];
        return r;
    }

    friend FieldElement operator/(const FieldElement& a, const FieldElement& b) {
        if (b.is_zero()) throw error(errc::division_by_zero, "division by zero element");
        return a * b.inverse();
    }

    friend FieldElement& operator+=(FieldElement& a, const FieldElement& b) { return a = a + b; }
    friend FieldElement& operator-=(FieldElement& a, const FieldElement& b) { return a = a - b; }
    friend FieldElement& operator*=(FieldElement& a, const FieldElement& b) { return a = a * b; }
    friend FieldElement& operator/=(FieldElement& a, const FieldElement& b) { return a = a / b; }

    friend bool operator==(const FieldElement& a, const FieldElement& b) {
        merge_fields(a, b);
        return a.c_ == b.c_;
    }
    friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

    // Exact sign of the element under the distinguished real embedding.
    int sign() const {
        if (is_rational()) return sign_of(c_[0]);
        for (int bits = 32; bits <= (1 << 24); bits *= 2) {
            int s = enclosure(bits).sign();
            if (s != 0) return s;
        }
        throw error(errc::internal_check, "sign refinement stalled on nonzero element");
    }

    friend bool operator<(const FieldElement& a, const FieldElement& b) { return (a - b).sign() < 0; }
    friend bool operator>(const FieldElement& a, const FieldElement& b) { return (a - b).sign() > 0; }
    friend bool operator<=(const FieldElement& a, const FieldElement& b) { return (a - b).sign() <= 0; }
    friend bool operator>=(const FieldElement& a, const FieldElement& b) { return (a - b).sign() >= 0; }

    friend FieldElement abs(const FieldElement& x) { return x.sign() < 0 ? -x : x; }

    // Exact ([x], {x}) with [x] <= x < [x]+1, decided by interval refinement
    // plus an exact equality test against the straddled integer.
    std::pair<Int, FieldElement> floor_frac() const {
        if (is_rational()) {
            Int fl = floor_rat(c_[0]);
            return {fl, from_rat(f_, c_[0] - Rat(fl, 1))};
        }
        for (int bits = 32; bits <= (1 << 24); bits *= 2) {
            Interval e = enclosure(bits);
            Int flo = floor_rat(e.lo), fhi = floor_rat(e.hi);
            if (flo == fhi) return {flo, *this - FieldElement(flo)};
            // An irrational element never equals the straddled integer;
            // keep refining until the interval clears it.
        }
        throw error(errc::internal_check, "floor refinement stalled");
    }

    // Certified enclosure under the distinguished real embedding; the root
    // interval is refined to 2^-bits, output width scales with coordinates.
    Interval enclosure(int bits) const {
        if (is_rational()) return Interval(c_[0]);
        Interval th = f_->root_interval(bits);
        Interval r(c_[2]);
        r = r * th + Interval(c_[1]);
        r = r * th + Interval(c_[0]);
        return r;
    }

    friend FieldElement pow(const FieldElement& base, unsigned long e) {
        FieldElement r = from_rat(base.f_, Rat(1));
        FieldElement b = base;
        unsigned long k = e;
        while (k) {
            if (k & 1) r *= b;
            b *= b;
            k >>= 1;
        }
        return r;
    }

    // Strict total order on coordinates; used for exact state hashing.
    friend bool coord_less(const FieldElement& a, const FieldElement& b) {
        for (int i = 0; i < 3; ++i) {
            if (a.c_[i] < b.c_[i]) return true;
            if (a.c_[i] > b.c_[i]) return false;
        }
        return false;
    }

private:
    static const FieldPtr& merge_fields(const FieldElement& a, const FieldElement& b) {
        if (a.f_ == b.f_) return a.f_;
        if (a.is_rational() && a.f_->degree() == 1) return b.f_;
        if (b.is_rational() && b.f_->degree() == 1) return a.f_;
        if (a.f_->same(*b.f_)) return a.f_;
        throw error(errc::field_mismatch, "operands live in different fields");
    }

    FieldPtr f_;
    std::array<Rat, 3> c_;
};

inline FieldElement operator+(const FieldElement& a, const Rat& r) { return a + FieldElement(r); }
inline FieldElement operator+(const Rat& r, const FieldElement& a) { return FieldElement(r) + a; }
inline FieldElement operator-(const FieldElement& a, const Rat& r) { return a - FieldElement(r); }
inline FieldElement operator-(const Rat& r, const FieldElement& a) { return FieldElement(r) - a; }
inline FieldElement operator*(const FieldElement& a, const Rat& r) { return a * FieldElement(r); }
inline FieldElement operator*(const Rat& r, const FieldElement& a) { return FieldElement(r) * a; }

} // namespace jp
