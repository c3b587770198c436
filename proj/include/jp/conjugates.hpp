#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "jp/convergence.hpp"
#include "jp/embedding.hpp"

namespace jp {

// ---------------------------------------------------------------------------
// Dimension-1 continued fractions with conjugate tracking

struct CFTrace {
    FieldElement gamma;
    std::vector<Int> partial_quotients;           // a_0, a_1, ...
    std::vector<std::pair<Int, Int>> convergents; // (p_n, r_n)
    std::vector<Box> conjugate_track;             // gamma'_n, defined for n >= 1
    std::vector<Box> limit_track;                 // gamma'_n + r_{n-1}/r_n
};

// Expands gamma > 1 with exact field arithmetic and follows the image of the
// chosen conjugate through gamma'_n = -(gamma' r_{n-1} - p_{n-1})/(gamma' r_n - p_n).
inline CFTrace cf_trace(const FieldElement& gamma, const Embedding& conj, long steps) {
    if (gamma.is_rational()) throw error(errc::rational_input, "continued fraction conjugates need an irrational");
    if (conj.is_identity())
        throw error(errc::parse_error, "conjugate embedding must select a non-identity root");
    if ((gamma - Rat(1)).sign() <= 0)
        throw error(errc::not_in_domain, "continued fraction input must exceed 1");
    if (steps < 1) throw error(errc::horizon_invalid, "step count must be >= 1");

    CFTrace t;
    t.gamma = gamma;
    std::vector<Int> rs, ps;
    FieldElement x = gamma;
    Int p2 = 0, p1 = 1; // p_{-2}, p_{-1}
    Int r2 = 1, r1 = 0; // r_{-2}, r_{-1}
    for (long k = 0; k < steps; ++k) {
        auto [a, frac] = x.floor_frac();
        t.partial_quotients.push_back(a);
        Int p0 = a * p1 + p2, r0 = a * r1 + r2;
        t.convergents.emplace_back(p0, r0);
        ps.push_back(p0);
        rs.push_back(r0);
        if (frac.is_zero())
            throw error(errc::rational_input, "expansion terminated; input was rational after all");
        x = frac.inverse();
        if (k >= 1 && (x - Rat(1)).sign() <= 0)
            throw error(errc::internal_check, "complete quotient fell below 1");
        // gamma = (p_{k} x + p_{k-1}) / (r_{k} x + r_{k-1}) with the next x
        FieldElement num = FieldElement(p0) * x + FieldElement(p1);
        FieldElement den = FieldElement(r0) * x + FieldElement(r1);
        if (num != gamma * den) throw error(errc::internal_check, "convergent identity failed");
        p2 = p1; p1 = p0;
        r2 = r1; r1 = r0;
    }

    for (int bits = std::max(64, conj.precision_bits); bits <= conj.precision_cap; bits *= 2) {
        Embedding e{conj.field, conj.root_index, bits, conj.precision_cap};
        Box g = embed(gamma, e);
        std::vector<Box> track, limit;
        bool ok = true;
        for (size_t n = 1; n < rs.size() && ok; ++n) {
            Box den = g * Rat(rs[n], 1) - Box(Rat(ps[n], 1));
            Box num = g * Rat(rs[n - 1], 1) - Box(Rat(ps[n - 1], 1));
            auto q = checked_div(num, den);
            if (!q) {
                ok = false;
                break;
            }
            Box gp = -*q;
            track.push_back(gp);
            limit.push_back(gp + Rat(rs[n - 1], rs[n]));
        }
        if (ok) {
            t.conjugate_track = std::move(track);
            t.limit_track = std::move(limit);
            return t;
        }
    }
    throw error(errc::precision_exhausted, "conjugate track could not be separated from zero");
}

// ---------------------------------------------------------------------------
// Conjugate sequences along an expansion

struct ConjugateTrace {
    Embedding e_alpha, e_beta; // conjugate choice per component
    Box alpha0_prime, beta0_prime;
    std::vector<Box> alpha_prime, beta_prime; // index n, 0 .. last state
    std::vector<Box> quantity;                // index n, defined for n >= 1
    int bits_used = 0;
};

namespace detail {

// D'_{k,l} with first column (1, x, y): exact integer cofactors, boxed x, y.
inline Box dkl_prime(const ExpansionTrace& t, long k, long l, const Box& x, const Box& y) {
    Column ck = t.col(k), cl = t.col(l);
    Rat c1(ck.p * cl.q - cl.p * ck.q, 1);
    Rat c2(ck.r * cl.q - cl.r * ck.q, 1);
    Rat c3(ck.r * cl.p - cl.r * ck.p, 1);
    return Box(c1) - x * c2 + y * c3;
}

} // namespace detail

// Conjugate sequences. With a single embedding the values are the embeddings
// of the exact states; with a mixed pair (the sign-flip swaps) they are
// produced from the determinant expressions, which stay linear in the chosen
// (alpha'_0, beta'_0) and avoid iterating the recurrence numerically.
inline ConjugateTrace jp_conjugate_trace(const ExpansionTrace& t, const Embedding& ea,
                                         const Embedding& eb) {
    if (t.initial.alpha.field()->degree() < 2 && t.initial.beta.field()->degree() < 2)
        throw error(errc::rational_input, "rational traces have no nontrivial embedding");
    if (ea.is_identity() || eb.is_identity())
        throw error(errc::parse_error, "conjugate embeddings must select non-identity roots");
    const bool same = ea.root_index == eb.root_index;
    const long S = t.state_count();

    for (int bits = std::max(64, std::max(ea.precision_bits, eb.precision_bits));
         bits <= ea.precision_cap; bits *= 2) {
        Embedding wa{ea.field, ea.root_index, bits, ea.precision_cap};
        Embedding wb{eb.field, eb.root_index, bits, eb.precision_cap};
        ConjugateTrace ct;
        ct.e_alpha = ea;
        ct.e_beta = eb;
        ct.bits_used = bits;
        ct.alpha0_prime = embed(t.initial.alpha, wa);
        ct.beta0_prime = embed(t.initial.beta, wb);
        bool ok = true;

        if (same) {
            for (long n = 0; n < S; ++n) {
                ct.alpha_prime.push_back(embed(t.states[static_cast<size_t>(n)].alpha, wa));
                ct.beta_prime.push_back(embed(t.states[static_cast<size_t>(n)].beta, wb));
            }
        } else {
            ct.alpha_prime.push_back(ct.alpha0_prime);
            ct.beta_prime.push_back(ct.beta0_prime);
            for (long n = 1; n < S && ok; ++n) {
                Box den = detail::dkl_prime(t, n - 2, n - 1, ct.alpha0_prime, ct.beta0_prime);
                if (contains_zero(den)) {
                    ok = false;
                    break;
                }
                Box an = -(detail::dkl_prime(t, n - 3, n - 1, ct.alpha0_prime, ct.beta0_prime) / den);
                Box bn = detail::dkl_prime(t, n - 3, n - 2, ct.alpha0_prime, ct.beta0_prime) / den;
                ct.alpha_prime.push_back(round_out(an, 4 * bits));
                ct.beta_prime.push_back(round_out(bn, 4 * bits));
            }
        }
        if (!ok) continue;

        ct.quantity.push_back(Box(Rat(0))); // placeholder at n = 0
        for (long n = 1; n < S; ++n) {
            Int r1 = t.col(n - 1).r, r2 = t.col(n - 2).r, r3 = t.col(n - 3).r;
            Box q = ct.beta_prime[static_cast<size_t>(n)] +
                    ct.alpha_prime[static_cast<size_t>(n)] * Rat(r2, r1) + Box(Rat(r3, r1));
            ct.quantity.push_back(q);
        }
        return ct;
    }
    throw error(errc::precision_exhausted, "conjugate trace could not be computed at the precision cap");
}

inline ConjugateTrace jp_conjugate_trace(const ExpansionTrace& t, const Embedding& e) {
    return jp_conjugate_trace(t, e, e);
}

// The recurrence residuals alpha'_{n-1} - a_{n-1} - 1/beta'_n and
// beta'_{n-1} - b_{n-1} - alpha'_n/beta'_n; every box must contain zero.
inline bool conjugate_residuals_contain_zero(const ExpansionTrace& t, const ConjugateTrace& ct) {
    for (size_t n = 1; n < ct.alpha_prime.size(); ++n) {
        const Box& bn = ct.beta_prime[n];
        auto inv = checked_div(Box(Rat(1)), bn);
        auto frac = checked_div(ct.alpha_prime[n], bn);
        if (!inv || !frac) return false;
        Rat a(t.digits[n - 1].a, 1), b(t.digits[n - 1].b, 1);
        Box res_a = ct.alpha_prime[n - 1] - Box(a) - *inv;
        Box res_b = ct.beta_prime[n - 1] - Box(b) - *frac;
        if (!contains_zero(res_a) || !contains_zero(res_b)) return false;
    }
    return true;
}

// Second evaluation route for the limit quantity: the exact rational
// numerator N_u over the boxed denominator D_e. Defined for n >= 3.
inline std::optional<Box> quantity_fraction_route(const ExpansionTrace& t, const ConjugateTrace& ct,
                                                  long n) {
    if (n < 3 || n >= t.state_count()) return std::nullopt;
    Column c1 = t.col(n - 1), c2 = t.col(n - 2), c3 = t.col(n - 3);
    Int A = c1.r * c2.p - c2.r * c1.p;
    Int C = c1.r * c2.q - c2.r * c1.q;
    Rat nu = Rat(c3.r, 1) * (Rat(A, 1) * (Rat(c1.q, c1.r) - Rat(c3.q, c3.r)) -
                             Rat(C, 1) * (Rat(c1.p, c1.r) - Rat(c3.p, c3.r)));
    Box de = (Box(Rat(c1.q, c1.r)) - ct.beta0_prime) * Rat(A, 1) -
             (Box(Rat(c1.p, c1.r)) - ct.alpha0_prime) * Rat(C, 1);
    de = de * Rat(c1.r, 1);
    auto q = checked_div(Box(nu), de);
    if (!q) return std::nullopt;
    return *q;
}

// ---------------------------------------------------------------------------
// Vanishing-limit hypothesis classification

struct Theorem3Report {
    enum class Case { both_real, both_imaginary, alpha_real_beta_imaginary, alpha_imaginary_beta_real };
    Case kind = Case::both_real;
    long N = 0;
    int hypothesis_sign = 0; // sign of Delta_N Delta'_N f_alpha f_beta
    bool satisfied = false;
    Rat tail_max{0};  // sup |quantity| over the last quarter
    long tail_from = 0;
    // conjugate root choice (alpha, beta) that satisfies the hypothesis, when
    // one exists among the available swaps
    std::optional<std::pair<int, int>> satisfying_pair;
};

namespace detail {

enum class FactorMode { real_diff, imag };

// real_diff: sign of x0 - Re(sigma(x0)); imag: sign of Im(sigma(x0)).
// Decided by refining the embedding; both quantities are nonzero for a
// distinct conjugate of an irrational element.
inline int conjugate_factor_sign(const FieldElement& x0, const Embedding& e, FactorMode mode) {
    return decide_with_precision(
               [&](int bits) -> std::optional<bool> {
                   Embedding w{e.field, e.root_index, bits, e.precision_cap};
                   Box b = embed(x0, w);
                   Interval v = mode == FactorMode::imag ? b.im : x0.enclosure(bits) - b.re;
                   if (v.sign() != 0) return v.sign() > 0;
                   return std::nullopt;
               },
               std::max(64, e.precision_bits), e.precision_cap, "conjugate factor sign")
               ? 1
               : -1;
}

// The two hypothesis factors: a real conjugate contributes x0 - sigma(x0);
// an imaginary one contributes Im(sigma(x0)) when its partner is imaginary
// too, and x0 - Re(sigma(x0)) otherwise.
inline std::pair<int, int> hypothesis_factor_signs(const FieldElement& a0, const FieldElement& b0,
                                                   const Embedding& ea, const Embedding& eb) {
    bool ar = ea.is_real(), br = eb.is_real();
    FactorMode ma = (!ar && !br) ? FactorMode::imag : FactorMode::real_diff;
    FactorMode mb = (!ar && !br) ? FactorMode::imag : FactorMode::real_diff;
    return {conjugate_factor_sign(a0, ea, ma), conjugate_factor_sign(b0, eb, mb)};
}

} // namespace detail

// Classifies the conjugate case, evaluates the sign hypothesis at the index N
// past the last observed sign agreement (both delta families), and reports the
// tail maximum of |quantity|. Abstains when agreements persist near the end.
inline Theorem3Report theorem3_report(const ExpansionTrace& t, const DeltaTrace& d,
                                      const ConjugateTrace& ct) {
    SignAnalysis sa = sign_analysis(d);
    const long L = sa.limit;
    long last_agree = 0;
    if (!sa.agree.empty()) last_agree = std::max(last_agree, sa.agree.back());
    if (!sa.agree_prime.empty()) last_agree = std::max(last_agree, sa.agree_prime.back());
    long N = sa.agree.empty() && sa.agree_prime.empty() ? 0 : last_agree + 1;
    if (N + 5 > L)
        throw error(errc::no_valid_n, "sign agreements persist to the end of the trace");

    Theorem3Report rep;
    rep.N = N;

    const FieldElement& a0 = t.initial.alpha;
    const FieldElement& b0 = t.initial.beta;
    if (a0.is_rational() || b0.is_rational())
        throw error(errc::rational_input, "both coordinates need a distinct conjugate");
    bool alpha_real = ct.e_alpha.is_real();
    bool beta_real = ct.e_beta.is_real();
    rep.kind = alpha_real
                   ? (beta_real ? Theorem3Report::Case::both_real
                                : Theorem3Report::Case::alpha_real_beta_imaginary)
                   : (beta_real ? Theorem3Report::Case::alpha_imaginary_beta_real
                                : Theorem3Report::Case::both_imaginary);

    auto [fa_sign, fb_sign] = detail::hypothesis_factor_signs(a0, b0, ct.e_alpha, ct.e_beta);
    int ds = d.sign[static_cast<size_t>(N)] * d.sign_prime[static_cast<size_t>(N)];
    rep.hypothesis_sign = ds * fa_sign * fb_sign;
    rep.satisfied = rep.hypothesis_sign < 0;

    // Search the available conjugate swaps for a sign that satisfies.
    const FieldPtr& f = ct.e_alpha.field;
    for (int ia = 1; ia < f->degree() && !rep.satisfying_pair; ++ia)
        for (int ib = 1; ib < f->degree(); ++ib) {
            Embedding ca = make_embedding(f, ia, ct.e_alpha.precision_bits, ct.e_alpha.precision_cap);
            Embedding cb = make_embedding(f, ib, ct.e_beta.precision_bits, ct.e_beta.precision_cap);
            auto [sa2, sb2] = detail::hypothesis_factor_signs(a0, b0, ca, cb);
            if (ds * sa2 * sb2 < 0) {
                rep.satisfying_pair = std::make_pair(ia, ib);
                break;
            }
        }

    long last = static_cast<long>(ct.quantity.size()) - 1;
    rep.tail_from = std::max<long>(1, last - (last - 1) / 4);
    Rat mx(0);
    for (long n = rep.tail_from; n <= last; ++n) {
        Rat v = abs_upper(ct.quantity[static_cast<size_t>(n)], ct.bits_used);
        if (v > mx) mx = v;
    }
    rep.tail_max = mx;
    return rep;
}

} // namespace jp
