#include <catch2/catch_amalgamated.hpp>

#include "jp/expansion.hpp"

using namespace jp;

namespace {

FieldPtr cbrt2_field() { return NumberField::make({Int(-2), Int(0), Int(0), Int(1)}, Rat(1), Rat(2)); }

State cbrt_point() {
    auto f = cbrt2_field();
    FieldElement th = FieldElement::generator(f);
    return State::checked(th, th * th); // (cbrt2, cbrt4)
}

State rat_state(const Rat& a, const Rat& b) {
    return State::checked(FieldElement(a), FieldElement(b));
}

} // namespace

TEST_CASE("jp_step on the worked examples") {
    auto r1 = jp_step(rat_state(Rat(1, 2), Rat(3, 2)));
    REQUIRE(r1.digit == Digit{Int(0), Int(1)});
    REQUIRE(r1.next.has_value());
    REQUIRE(r1.next->alpha == FieldElement(Rat(1)));
    REQUIRE(r1.next->beta == FieldElement(Rat(2)));

    auto r2 = jp_step(rat_state(Rat(1), Rat(2)));
    REQUIRE(r2.digit == Digit{Int(1), Int(2)});
    REQUIRE_FALSE(r2.next.has_value());

    auto f = cbrt2_field();
    FieldElement th = FieldElement::generator(f);
    auto r3 = jp_step(cbrt_point());
    REQUIRE(r3.digit == Digit{Int(1), Int(1)});
    REQUIRE(r3.next->alpha == th + Rat(1));
    REQUIRE(r3.next->beta == th * th + th + Rat(1));

    REQUIRE_THROWS_AS(jp_step(State{FieldElement(Rat(2)), FieldElement(Rat(1))}), error);
    REQUIRE_THROWS_AS(State::checked(FieldElement(Rat(1, 2)), FieldElement(Rat(3, 4))), error);
}

TEST_CASE("expand terminates on rational inputs") {
    ExpansionTrace t = expand(rat_state(Rat(1, 2), Rat(3, 2)), 10);
    REQUIRE(t.digits == std::vector<Digit>{{Int(0), Int(1)}, {Int(1), Int(2)}});
    REQUIRE(t.termination.kind == TerminationKind::terminated);
    REQUIRE(t.termination.steps == 2);
    REQUIRE(t.state_count() == 2);

    ExpansionTrace z = expand(rat_state(Rat(0), Rat(1)), 5);
    REQUIRE(z.digits == std::vector<Digit>{{Int(0), Int(1)}});
    REQUIRE(z.termination.kind == TerminationKind::terminated);
    REQUIRE(z.termination.steps == 1);

    REQUIRE_THROWS_AS(expand(rat_state(Rat(0), Rat(1)), 0), error);
}

TEST_CASE("expand detects the cubic period") {
    auto f = cbrt2_field();
    FieldElement th = FieldElement::generator(f);
    ExpansionTrace t = expand(cbrt_point(), 10);
    REQUIRE(t.termination.kind == TerminationKind::periodic);
    REQUIRE(t.termination.u == 2);
    REQUIRE(t.termination.v == 1);
    REQUIRE(t.digits[0] == Digit{Int(1), Int(1)});
    REQUIRE(t.digits[1] == Digit{Int(2), Int(3)});
    REQUIRE(t.digits[2] == Digit{Int(3), Int(3)});
    REQUIRE(t.digits[3] == Digit{Int(3), Int(3)});
    REQUIRE(t.states[2].alpha == th + Rat(2));
    REQUIRE(t.states[2].beta == th * th + th + Rat(1));

    // exact fixed point of the map
    auto st = jp_step(t.states[2]);
    REQUIRE(st.next.has_value());
    REQUIRE(*st.next == t.states[2]);

    auto pr = detect_period(t);
    REQUIRE(pr.has_value());
    REQUIRE(pr->u == 2);
    REQUIRE(pr->v == 1);

    // digit periodicity mirrors state periodicity
    for (size_t n = static_cast<size_t>(pr->u); n + static_cast<size_t>(pr->v) < t.digits.size(); ++n)
        REQUIRE(t.digits[n] == t.digits[n + static_cast<size_t>(pr->v)]);
}

TEST_CASE("detect_period on terminating and purely periodic traces") {
    REQUIRE_FALSE(detect_period(expand(rat_state(Rat(1, 2), Rat(3, 2)), 10)).has_value());

    auto f = cbrt2_field();
    FieldElement th = FieldElement::generator(f);
    State fixed = State::checked(th + Rat(2), th * th + th + Rat(1));
    ExpansionTrace t = expand(fixed, 8);
    auto pr = detect_period(t);
    REQUIRE(pr.has_value());
    REQUIRE(pr->u == 0);
    REQUIRE(pr->v == 1);
    REQUIRE(t.termination.kind == TerminationKind::periodic);
}

TEST_CASE("convergent matrices on the worked example") {
    std::vector<Digit> digits{{Int(0), Int(1)}, {Int(1), Int(2)}};
    auto ms = convergent_matrices(digits);
    REQUIRE(ms.size() == 2);
    // L_0 = K_0
    REQUIRE(ms[0].r == std::array<Int, 3>{Int(0), Int(0), Int(1)});
    REQUIRE(ms[0].p == std::array<Int, 3>{Int(1), Int(0), Int(0)});
    REQUIRE(ms[0].q == std::array<Int, 3>{Int(0), Int(1), Int(1)});
    // r_1 = b_1, p_1 = 1 + a_0 b_1, q_1 = a_1 + b_0 b_1
    REQUIRE(ms[1].r[2] == 2);
    REQUIRE(ms[1].p[2] == 1);
    REQUIRE(ms[1].q[2] == 3);
    for (const auto& m : ms) REQUIRE(m.det() == 1);
}

TEST_CASE("minimal digit sequence gives r_n = r_{n-1} + r_{n-3}") {
    std::vector<Digit> digits(12, Digit{Int(0), Int(1)});
    auto ms = convergent_matrices(digits);
    std::vector<Int> r;
    for (const auto& m : ms) r.push_back(m.r[2]);
    std::vector<long> expect{1, 1, 1, 2, 3, 4, 6, 9, 13, 19, 28, 41};
    for (size_t i = 0; i < expect.size(); ++i) REQUIRE(r[i] == expect[i]);
}

TEST_CASE("single digit matrices are unimodular") {
    for (long b = 1; b <= 4; ++b)
        for (long a = 0; a <= b; ++a) {
            auto ms = convergent_matrices({Digit{Int(a), Int(b)}});
            REQUIRE(ms[0].det() == 1);
        }
}

TEST_CASE("admissibility predicate") {
    REQUIRE(check_admissible({{Int(1), Int(1)}, {Int(2), Int(3)}}));
    REQUIRE_FALSE(check_admissible({{Int(1), Int(1)}, {Int(0), Int(2)}}));
    REQUIRE(check_admissible({{Int(0), Int(1)}, {Int(0), Int(1)}}));
    REQUIRE_THROWS_AS(check_admissible({{Int(2), Int(1)}}), error);
    REQUIRE_THROWS_AS(convergent_matrices({{Int(1), Int(1)}, {Int(0), Int(1)}}), error);
}

TEST_CASE("identities on the terminating example") {
    ExpansionTrace t = expand(rat_state(Rat(1, 2), Rat(3, 2)), 10);
    IdentityReport rep = verify_identities(t);
    REQUIRE(rep.all_ok());
    // terminating reconstruction: p_1/r_1 = alpha_0, q_1/r_1 = beta_0
    Column last = t.col(t.step_count() - 1);
    REQUIRE(Rat(last.p, last.r) == Rat(1, 2));
    REQUIRE(Rat(last.q, last.r) == Rat(3, 2));
}

TEST_CASE("identities on the cubic trace") {
    ExpansionTrace t = expand(cbrt_point(), 30);
    IdentityReport rep = verify_identities(t);
    INFO("failures: " << rep.failures());
    REQUIRE(rep.all_ok());

    // pi_1 = beta_1 = r_0 beta_1 + r_{-1} alpha_1 + r_{-2}
    auto f = cbrt2_field();
    FieldElement th = FieldElement::generator(f);
    REQUIRE(t.pi[1] == th * th + th + Rat(1));
    Column c0 = t.col(0), cm1 = t.col(-1), cm2 = t.col(-2);
    REQUIRE(t.pi[1] == FieldElement(c0.r) * t.states[1].beta + FieldElement(cm1.r) * t.states[1].alpha +
                           FieldElement(cm2.r));

    // (1.4) strict inequalities hold at n = 5 (and everywhere, per all_ok)
    bool saw_n5 = false;
    for (const auto& it : rep.items)
        if (it.id == "p-between" && it.n == 5) {
            REQUIRE(it.status == IdentityReport::Status::pass);
            saw_n5 = true;
        }
    REQUIRE(saw_n5);
}

TEST_CASE("domain preservation and emergent admissibility on random rationals") {
    SplitMix64 rng(99);
    for (int i = 0; i < 50; ++i) {
        Int den1 = Int(rng.below(9999)) + 1;
        Int den2 = Int(rng.below(9999)) + 1;
        Int bnum = Int(rng.below(9 * den2.convert_to<std::uint64_t>())) + den2;
        Rat beta(bnum, den2);
        Int anum = Int(rng.below(floor_rat(beta * Rat(den1, 1)).convert_to<std::uint64_t>() + 1));
        Rat alpha(anum, den1);
        if (alpha > beta) alpha = beta;

        ExpansionTrace t = expand(rat_state(alpha, beta), 400);
        // rational inputs always terminate
        REQUIRE(t.termination.kind == TerminationKind::terminated);
        REQUIRE(check_admissible(t.digits));
        for (const State& s : t.states) {
            REQUIRE(s.alpha.sign() >= 0);
            REQUIRE((s.beta - s.alpha).sign() >= 0);
            REQUIRE((s.beta - Rat(1)).sign() >= 0);
        }
        REQUIRE(verify_identities(t).all_ok());

        // r_n >= r_{n-1} + r_{n-3}
        for (long n = 1; n < t.step_count(); ++n) {
            Column cn = t.col(n), c1 = t.col(n - 1), c3 = t.col(n - 3);
            REQUIRE(cn.r >= c1.r + c3.r);
        }
    }
}

TEST_CASE("boundary inputs are accepted") {
    // alpha_0 = 0
    ExpansionTrace t0 = expand(rat_state(Rat(0), Rat(7, 5)), 5);
    REQUIRE(t0.termination.kind == TerminationKind::terminated);
    // alpha_0 = beta_0
    ExpansionTrace t1 = expand(rat_state(Rat(8, 5), Rat(8, 5)), 5);
    REQUIRE(check_admissible(t1.digits));
}

TEST_CASE("digit word parser") {
    auto w = parse_digit_word("0/1,1/2");
    REQUIRE(w.size() == 2);
    REQUIRE(w[0] == Digit{Int(0), Int(1)});
    REQUIRE(w[1] == Digit{Int(1), Int(2)});
    REQUIRE_THROWS_AS(parse_digit_word("2/1"), error);
    REQUIRE_THROWS_AS(parse_digit_word(""), error);
    REQUIRE_THROWS_AS(parse_digit_word("1,2"), error);
}
