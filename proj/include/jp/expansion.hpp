#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jp/element_io.hpp"
#include "jp/number_field.hpp"

namespace jp {

struct Digit {
    Int a, b;
    friend bool operator==(const Digit&, const Digit&) = default;
};

inline void validate_digit(const Digit& d) {
    if (d.b < 1 || d.a < 0 || d.a > d.b)
        throw error(errc::inadmissible, "digit must satisfy 0 <= a <= b, 1 <= b");
}

// "a_{n+1} >= 1 whenever a_n = b_n"; individual digits must already be valid.
inline bool check_admissible(const std::vector<Digit>& digits) {
    for (const Digit& d : digits) validate_digit(d);
    for (size_t i = 0; i + 1 < digits.size(); ++i)
        if (digits[i].a == digits[i].b && digits[i + 1].a < 1) return false;
    return true;
}

// A point of the domain {0 <= x <= y, 1 <= y}, membership checked exactly.
struct State {
    FieldElement alpha, beta;

    static State checked(FieldElement a, FieldElement b) {
        if (a.sign() < 0 || (b - Rat(1)).sign() < 0 || (b - a).sign() < 0)
            throw error(errc::not_in_domain, "point violates 0 <= alpha <= beta, 1 <= beta");
        return State{std::move(a), std::move(b)};
    }

    friend bool operator==(const State& x, const State& y) {
        return x.alpha == y.alpha && x.beta == y.beta;
    }
};

// Columns (r,p,q) of L_n at indices n-2, n-1, n.
struct ConvergentMatrix {
    long n = 0;
    std::array<Int, 3> r{}, p{}, q{};

    Int det() const {
        return r[0] * (p[1] * q[2] - p[2] * q[1]) - r[1] * (p[0] * q[2] - p[2] * q[0]) +
               r[2] * (p[0] * q[1] - p[1] * q[0]);
    }
};

struct Column {
    Int r, p, q;
};

enum class TerminationKind { terminated, horizon, periodic };

struct Termination {
    TerminationKind kind = TerminationKind::horizon;
    long steps = 0; // for terminated: expansion stopped at this step count
    long u = 0, v = 0;
};

struct PeriodReport {
    long u = 0; // preperiod length, minimal
    long v = 1; // period length, minimal
};

struct StepResult {
    Digit digit;
    std::optional<State> next; // empty when {alpha} = 0 (terminal)
};

// One application of the map: digit ([a],[b]); next = ({b}/{a}, 1/{a}).
inline StepResult jp_step(const State& s) {
    State checkeds = State::checked(s.alpha, s.beta); // NotInDomain on bad input
    auto [fa, ra] = checkeds.alpha.floor_frac();
    auto [fb, rb] = checkeds.beta.floor_frac();
    Digit d{fa, fb};
    if (ra.is_zero()) return {d, std::nullopt};
    FieldElement inv_ra = ra.inverse();
    return {d, State{rb * inv_ra, inv_ra}};
}

struct ExpansionTrace {
    State initial;
    std::vector<Digit> digits;              // d_0 .. d_m
    std::vector<State> states;              // s_0 .. s_K (K = m for terminated, m+1 otherwise)
    std::vector<ConvergentMatrix> matrices; // L_0 .. L_m
    std::vector<FieldElement> pi;           // pi[0] = 1, pi[n] = beta_1 ... beta_n
    Termination termination;

    long step_count() const { return static_cast<long>(digits.size()); }
    long state_count() const { return static_cast<long>(states.size()); }

    // (r_j, p_j, q_j) for j >= -3; identity conventions below j = 0.
    Column col(long j) const {
        if (j < -3 || j >= static_cast<long>(matrices.size()))
            throw error(errc::index_out_of_range, "convergent column index");
        if (j == -3) return {Int(1), Int(0), Int(0)};
        if (j == -2) return {Int(0), Int(1), Int(0)};
        if (j == -1) return {Int(0), Int(0), Int(1)};
        const ConvergentMatrix& m = matrices[static_cast<size_t>(j)];
        return {m.r[2], m.p[2], m.q[2]};
    }

    // Exact fractional parts {alpha_n}, {beta_n}; needs the digit at n.
    FieldElement frac_alpha(long n) const {
        return states[static_cast<size_t>(n)].alpha - FieldElement(digits[static_cast<size_t>(n)].a);
    }
    FieldElement frac_beta(long n) const {
        return states[static_cast<size_t>(n)].beta - FieldElement(digits[static_cast<size_t>(n)].b);
    }
};

inline std::vector<ConvergentMatrix> convergent_matrices(const std::vector<Digit>& digits) {
    if (!check_admissible(digits)) throw error(errc::inadmissible, "digit sequence is not admissible");
    std::vector<ConvergentMatrix> out;
    out.reserve(digits.size());
    // Columns of L_{-1} = identity.
    Column c3{Int(1), Int(0), Int(0)}, c2{Int(0), Int(1), Int(0)}, c1{Int(0), Int(0), Int(1)};
    long n = 0;
    for (const Digit& d : digits) {
        Column c0{c1.r * d.b + c2.r * d.a + c3.r,
                  c1.p * d.b + c2.p * d.a + c3.p,
                  c1.q * d.b + c2.q * d.a + c3.q};
        ConvergentMatrix m;
        m.n = n++;
        m.r = {c2.r, c1.r, c0.r};
        m.p = {c2.p, c1.p, c0.p};
        m.q = {c2.q, c1.q, c0.q};
        out.push_back(m);
        c3 = c2; c2 = c1; c1 = c0;
    }
    return out;
}

// Runs the map up to `horizon` digits, recording exact states, matrices and
// the products pi_n. Exact state repetition is recorded as Periodic(u,v) but
// the trace still continues to the horizon so that diagnostics see a full
// prefix.
inline ExpansionTrace expand(const State& start, long horizon) {
    if (horizon < 1) throw error(errc::horizon_invalid, "horizon must be >= 1");
    ExpansionTrace t;
    t.initial = State::checked(start.alpha, start.beta);
    t.states.push_back(t.initial);
    t.pi.push_back(FieldElement(Rat(1)));

    using Key = std::array<Rat, 6>;
    std::map<Key, long> seen;
    auto key_of = [](const State& s) {
        Key k;
        for (int i = 0; i < 3; ++i) {
            k[static_cast<size_t>(i)] = s.alpha.coords()[static_cast<size_t>(i)];
            k[static_cast<size_t>(3 + i)] = s.beta.coords()[static_cast<size_t>(i)];
        }
        return k;
    };
    bool periodic = false;
    seen.emplace(key_of(t.initial), 0);

    Column c3{Int(1), Int(0), Int(0)}, c2{Int(0), Int(1), Int(0)}, c1{Int(0), Int(0), Int(1)};
    for (long k = 0; k < horizon; ++k) {
        const State& s = t.states.back();
        auto [fa, ra] = s.alpha.floor_frac();
        auto [fb, rb] = s.beta.floor_frac();
        Digit d{fa, fb};
        t.digits.push_back(d);
        Column c0{c1.r * d.b + c2.r * d.a + c3.r,
                  c1.p * d.b + c2.p * d.a + c3.p,
                  c1.q * d.b + c2.q * d.a + c3.q};
        ConvergentMatrix m;
        m.n = k;
        m.r = {c2.r, c1.r, c0.r};
        m.p = {c2.p, c1.p, c0.p};
        m.q = {c2.q, c1.q, c0.q};
        t.matrices.push_back(m);
        c3 = c2; c2 = c1; c1 = c0;

        if (ra.is_zero()) {
            t.termination = {TerminationKind::terminated, k + 1, 0, 0};
            return t;
        }
        FieldElement inv_ra = ra.inverse();
        State next{rb * inv_ra, inv_ra};
        t.states.push_back(next);
        t.pi.push_back(t.pi.back() * next.beta);
        if (!periodic) {
            auto [it, inserted] = seen.emplace(key_of(next), k + 1);
            if (!inserted) {
                periodic = true;
                t.termination = {TerminationKind::periodic, 0, it->second, (k + 1) - it->second};
            }
        }
    }
    if (!periodic) t.termination = {TerminationKind::horizon, 0, 0, 0};
    return t;
}

// Minimal (u, v) with s_u = s_{u+v}, by exact-coordinate lookup.
inline std::optional<PeriodReport> detect_period(const ExpansionTrace& t) {
    using Key = std::array<Rat, 6>;
    std::map<Key, long> seen;
    for (long i = 0; i < t.state_count(); ++i) {
        Key k;
        for (int j = 0; j < 3; ++j) {
            k[static_cast<size_t>(j)] = t.states[static_cast<size_t>(i)].alpha.coords()[static_cast<size_t>(j)];
            k[static_cast<size_t>(3 + j)] = t.states[static_cast<size_t>(i)].beta.coords()[static_cast<size_t>(j)];
        }
        auto [it, inserted] = seen.emplace(k, i);
        if (!inserted) return PeriodReport{it->second, i - it->second};
    }
    return std::nullopt;
}

struct IdentityReport {
    enum class Status { pass, fail, skip };
    struct Item {
        std::string id;
        long n;
        Status status;
        std::string note;
    };
    std::vector<Item> items;

    long failures() const {
        long c = 0;
        for (const auto& it : items)
            if (it.status == Status::fail) ++c;
        return c;
    }
    bool all_ok() const { return failures() == 0; }
};

// Exact verification of det L_n = 1, the one-step and cumulative matrix
// relations, the linear forms recovering pi_n / alpha_0 / beta_0, and the
// strict betweenness of successive convergents.
inline IdentityReport verify_identities(const ExpansionTrace& t) {
    IdentityReport rep;
    auto push = [&](const char* id, long n, bool ok, std::string note = "") {
        rep.items.push_back({id, n, ok ? IdentityReport::Status::pass : IdentityReport::Status::fail,
                             std::move(note)});
    };
    auto skip = [&](const char* id, long n, std::string note) {
        rep.items.push_back({id, n, IdentityReport::Status::skip, std::move(note)});
    };

    const long M = static_cast<long>(t.matrices.size());
    const long S = t.state_count();

    for (long n = 0; n < M; ++n)
        push("det", n, t.matrices[static_cast<size_t>(n)].det() == 1);

    for (long n = 0; n + 1 < S; ++n) {
        const State& s = t.states[static_cast<size_t>(n)];
        const State& nx = t.states[static_cast<size_t>(n + 1)];
        const Digit& d = t.digits[static_cast<size_t>(n)];
        bool ok = (FieldElement(Rat(1)) + FieldElement(d.a) * nx.beta == nx.beta * s.alpha) &&
                  (nx.alpha + FieldElement(d.b) * nx.beta == nx.beta * s.beta);
        push("step-relation", n, ok);
    }

    for (long n = 1; n < S; ++n) {
        const State& s = t.states[static_cast<size_t>(n)];
        Column a = t.col(n - 3), b = t.col(n - 2), c = t.col(n - 1);
        FieldElement vr = FieldElement(a.r) + FieldElement(b.r) * s.alpha + FieldElement(c.r) * s.beta;
        FieldElement vp = FieldElement(a.p) + FieldElement(b.p) * s.alpha + FieldElement(c.p) * s.beta;
        FieldElement vq = FieldElement(a.q) + FieldElement(b.q) * s.alpha + FieldElement(c.q) * s.beta;
        const FieldElement& pin = t.pi[static_cast<size_t>(n)];
        push("matrix-relation", n,
             vr == pin && vp == pin * t.initial.alpha && vq == pin * t.initial.beta);
        push("pi-linear-form", n, vr == pin);
        push("alpha-quotient", n, vp == vr * t.initial.alpha);
        push("beta-quotient", n, vq == vr * t.initial.beta);
    }

    for (long n = 3; n < M; ++n) {
        for (auto [id, pick] : {std::pair<const char*, int>{"p-between", 0},
                                std::pair<const char*, int>{"q-between", 1}}) {
            Rat v[4];
            for (long j = 0; j < 4; ++j) {
                Column c = t.col(n - 3 + j);
                v[j] = pick == 0 ? Rat(c.p, c.r) : Rat(c.q, c.r);
            }
            Rat mn = std::min({v[0], v[1], v[2]});
            Rat mx = std::max({v[0], v[1], v[2]});
            if (v[3] == mn || v[3] == mx)
                skip(id, n, "ties an extreme predecessor convergent");
            else
                push(id, n, mn < v[3] && v[3] < mx);
        }
    }

    return rep;
}

// Digits as "a0/b0,a1/b1,...".
inline std::vector<Digit> parse_digit_word(const std::string& s) {
    std::vector<Digit> w;
    size_t pos = 0;
    while (pos <= s.size()) {
        size_t comma = s.find(',', pos);
        std::string part = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        size_t slash = part.find('/');
        if (slash == std::string::npos)
            throw error(errc::parse_error, "digit must be a/b: '" + part + "'");
        Rat a = parse_rat(part.substr(0, slash));
        Rat b = parse_rat(part.substr(slash + 1));
        if (rat_den(a) != 1 || rat_den(b) != 1)
            throw error(errc::parse_error, "digit entries must be integers");
        Digit d{rat_num(a), rat_num(b)};
        validate_digit(d);
        w.push_back(d);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (w.empty()) throw error(errc::parse_error, "empty digit word");
    return w;
}

} // namespace jp
