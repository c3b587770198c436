#pragma once

#include <vector>

#include "jp/interval.hpp"
#include "jp/numeric.hpp"

namespace jp {

// Dense univariate polynomial over Q, ascending coefficients.
using Poly = std::vector<Rat>;

inline void poly_trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline int poly_deg(const Poly& p) { return static_cast<int>(p.size()) - 1; }

inline Rat poly_eval(const Poly& p, const Rat& x) {
    Rat r = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) r = r * x + *it;
    return r;
}

inline Interval poly_eval(const Poly& p, const Interval& x) {
    Interval r{Rat(0)};
    for (auto it = p.rbegin(); it != p.rend(); ++it) r = r * x + Interval(*it);
    return r;
}

inline Poly poly_derivative(const Poly& p) {
    Poly d;
    for (size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * Rat(Int(i), 1));
    return d;
}

inline Poly poly_neg(Poly p) {
    for (auto& c : p) c = -c;
    return p;
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, Rat(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    poly_trim(r);
    return r;
}

inline Poly poly_sub(Poly a, const Poly& b) {
    if (a.size() < b.size()) a.resize(b.size(), Rat(0));
    for (size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    poly_trim(a);
    return a;
}

// Euclidean division a = q*b + r over Q, deg r < deg b.
inline std::pair<Poly, Poly> poly_divmod(Poly a, const Poly& b) {
    if (b.empty()) throw error(errc::division_by_zero, "polynomial division by zero");
    Poly q;
    int db = poly_deg(b);
    poly_trim(a);
    if (poly_deg(a) >= db) q.assign(a.size() - b.size() + 1, Rat(0));
    while (poly_deg(a) >= db) {
        int da = poly_deg(a);
        Rat c = a[da] / b[db];
        q[da - db] = c;
        for (int i = 0; i <= db; ++i) a[da - db + i] -= c * b[i];
        poly_trim(a);
    }
    return {q, a};
}

// Extended gcd: returns (g, u, v) with u*a + v*b = g.
inline std::tuple<Poly, Poly, Poly> poly_xgcd(Poly a, Poly b) {
    Poly u0{Rat(1)}, v0, u1, v1{Rat(1)};
    poly_trim(a);
    poly_trim(b);
    while (!b.empty()) {
        auto [q, r] = poly_divmod(a, b);
        Poly u2 = poly_sub(u0, poly_mul(q, u1));
        Poly v2 = poly_sub(v0, poly_mul(q, v1));
        a = b; b = r;
        u0 = u1; v0 = v1;
        u1 = u2; v1 = v2;
    }
    return {a, u0, v0};
}

// Sturm chain root count in (lo, hi], squarefree input assumed.
inline int sturm_count(const Poly& p, const Rat& lo, const Rat& hi) {
    std::vector<Poly> chain;
    chain.push_back(p);
    chain.push_back(poly_derivative(p));
    poly_trim(chain.back());
    while (!chain.back().empty() && poly_deg(chain.back()) > 0) {
        auto [q, r] = poly_divmod(chain[chain.size() - 2], chain.back());
        (void)q;
        if (r.empty()) break;
        chain.push_back(poly_neg(r));
    }
    auto variations = [&](const Rat& x) {
        int v = 0, last = 0;
        for (const Poly& f : chain) {
            int s = sign_of(poly_eval(f, x));
            if (s == 0) continue;
            if (last != 0 && s != last) ++v;
            last = s;
        }
        return v;
    };
    return variations(lo) - variations(hi);
}

} // namespace jp
