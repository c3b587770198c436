#include <catch2/catch_amalgamated.hpp>

#include "jp/convergence.hpp"

using namespace jp;

namespace {

FieldPtr cbrt2_field() { return NumberField::make({Int(-2), Int(0), Int(0), Int(1)}, Rat(1), Rat(2)); }

State cbrt_point() {
    auto f = cbrt2_field();
    FieldElement th = FieldElement::generator(f);
    return State::checked(th, th * th);
}

State rat_state(const Rat& a, const Rat& b) {
    return State::checked(FieldElement(a), FieldElement(b));
}

} // namespace

TEST_CASE("delta closed forms on the worked examples") {
    ExpansionTrace t = expand(rat_state(Rat(1, 2), Rat(3, 2)), 10);
    DeltaTrace d = delta_trace(t);
    REQUIRE(d.delta[0] == FieldElement(Rat(-1, 2))); // Delta_0 = -{alpha_0}
    REQUIRE(d.delta[1].is_zero());                   // {beta_1} = 0 here

    auto f = cbrt2_field();
    FieldElement th = FieldElement::generator(f);
    ExpansionTrace tc = expand(cbrt_point(), 40);
    DeltaTrace dc = delta_trace(tc);
    REQUIRE(dc.delta[1] == (th - Rat(1)) * (th * th + th - Rat(2)));
    REQUIRE(delta_identity_report(tc, dc).all_ok());
}

TEST_CASE("delta envelope |Delta_n| and |Delta'_n|") {
    ExpansionTrace t = expand(cbrt_point(), 120);
    DeltaTrace d = delta_trace(t);
    FieldElement a0 = t.frac_alpha(0);
    REQUIRE(abs(d.delta[0]) == a0); // equality by definition at n = 0
    for (long n = 1; n < t.step_count(); ++n)
        REQUIRE((abs(d.delta[static_cast<size_t>(n)]) - a0).sign() < 0);
    for (long n = 0; n < t.step_count(); ++n)
        REQUIRE((abs(d.delta_prime[static_cast<size_t>(n)]) - Rat(1)).sign() < 0);
}

TEST_CASE("sign analysis from synthetic sign vectors") {
    SignAnalysis a = sign_analysis_from_signs({-1, 1, -1, 1, -1}, {});
    REQUIRE(a.agree.empty());
    REQUIRE_FALSE(a.nstar(4).has_value());

    SignAnalysis b = sign_analysis_from_signs({-1, -1, 1, -1}, {});
    REQUIRE(b.agree == std::vector<long>{1});
    REQUIRE(b.nstar(3).has_value());
    REQUIRE(*b.nstar(3) == 1);
    REQUIRE_FALSE(b.nstar(0).has_value());
}

TEST_CASE("sign analysis invariants on the cubic trace") {
    ExpansionTrace t = expand(cbrt_point(), 60);
    DeltaTrace d = delta_trace(t);
    SignAnalysis a = sign_analysis(d);
    REQUIRE(d.sign_limit == t.step_count()); // no vanishing delta on this trace
    // consecutive agreements are at least 2 apart
    for (size_t i = 1; i < a.agree.size(); ++i) REQUIRE(a.agree[i - 1] + 2 <= a.agree[i]);
    // three consecutive deltas never share a sign
    for (long n = 2; n < d.sign_limit; ++n)
        REQUIRE_FALSE((d.sign[static_cast<size_t>(n - 2)] == d.sign[static_cast<size_t>(n - 1)] &&
                       d.sign[static_cast<size_t>(n - 1)] == d.sign[static_cast<size_t>(n)]));
}

TEST_CASE("determinants D_{k,l}") {
    ExpansionTrace t = expand(cbrt_point(), 20);
    DeltaTrace d = delta_trace(t);
    // D_{-1,0} = {alpha_0}
    REQUIRE(determinant_Dkl(t, -1, 0) == t.frac_alpha(0));
    // D_{n-1,n} = {alpha_0}...{alpha_n} for n <= 5
    FieldElement prod(Rat(1));
    for (long n = 0; n <= 5; ++n) {
        prod = prod * t.frac_alpha(n);
        if (n >= 1) REQUIRE(determinant_Dkl(t, n - 1, n) == prod);
    }
    REQUIRE_THROWS_AS(determinant_Dkl(t, -3, 0), error);
    REQUIRE_THROWS_AS(determinant_Dkl(t, 5, 5), error);
    REQUIRE_THROWS_AS(determinant_Dkl(t, 0, 100), error);

    IdentityReport rep = determinant_report(t, d);
    INFO("failures: " << rep.failures());
    REQUIRE(rep.all_ok());
}

TEST_CASE("determinant facts also hold on rational traces") {
    SplitMix64 rng(3);
    for (int i = 0; i < 20; ++i) {
        Rat beta(Int(rng.below(800)) + 101, 100);
        Rat alpha(Int(rng.below(100)), 100);
        ExpansionTrace t = expand(rat_state(alpha, beta), 200);
        DeltaTrace d = delta_trace(t);
        REQUIRE(delta_identity_report(t, d).all_ok());
        REQUIRE(determinant_report(t, d).all_ok());
    }
}

TEST_CASE("bounds report is clean on the cubic trace") {
    ExpansionTrace t = expand(cbrt_point(), 80);
    DeltaTrace d = delta_trace(t);
    auto items = bounds_report(t, d);
    long fails = 0, passes = 0, lemma22 = 0, lemma23 = 0;
    for (const auto& it : items) {
        if (it.status == IdentityReport::Status::fail) ++fails;
        if (it.status == IdentityReport::Status::pass) ++passes;
        if (it.lemma == "alternation-step" && it.status == IdentityReport::Status::pass) ++lemma22;
        if (it.lemma == "agreement-step") ++lemma23;
    }
    INFO("items: " << items.size());
    REQUIRE(fails == 0);
    REQUIRE(passes > 50);
    REQUIRE(lemma22 > 0); // alternation sites exist
    REQUIRE(lemma23 > 0); // agreement sites exist on this trace
}

TEST_CASE("bounds report on terminating traces covers the defined range only") {
    ExpansionTrace t = expand(rat_state(Rat(1, 2), Rat(3, 2)), 10);
    DeltaTrace d = delta_trace(t);
    auto items = bounds_report(t, d);
    for (const auto& it : items) REQUIRE(it.status != IdentityReport::Status::fail);
}

TEST_CASE("bounds report across random rational traces") {
    SplitMix64 rng(17);
    for (int i = 0; i < 30; ++i) {
        Rat beta(Int(rng.below(3000)) + 1001, 1000);
        Rat alpha(Int(rng.below(1000)), 1000);
        ExpansionTrace t = expand(rat_state(alpha, beta), 300);
        DeltaTrace d = delta_trace(t);
        for (const auto& it : bounds_report(t, d)) {
            INFO(it.lemma << " at n=" << it.n);
            REQUIRE(it.status != IdentityReport::Status::fail);
        }
    }
}

TEST_CASE("growth model constants") {
    GrowthModel g = growth_model();
    REQUIRE(g.lambda * g.lambda * g.lambda == g.lambda * g.lambda + Rat(1));
    // lambda = 1.4655712318767680...
    REQUIRE(g.lambda_numeric.lo > Rat(14655712, 10000000));
    REQUIRE(g.lambda_numeric.hi < Rat(14655713, 10000000));
    // |delta_i| = 0.826...
    REQUIRE(g.delta_abs.lo > Rat(826, 1000));
    REQUIRE(g.delta_abs.hi < Rat(827, 1000));
    // lambda^3/(3 lambda - 2) = 1.3134230...
    REQUIRE(g.limit_numeric.lo > Rat(13134230, 10000000));
    REQUIRE(g.limit_numeric.hi < Rat(13134231, 10000000));
}

TEST_CASE("minimal r sequence and its growth") {
    std::vector<long> expect{1, 1, 1, 2, 3, 4, 6, 9, 13, 19, 28, 41, 60};
    for (size_t i = 0; i < expect.size(); ++i) REQUIRE(minimal_r(static_cast<long>(i)) == expect[i]);
    REQUIRE(minimal_r(6) == 6);

    GrowthModel g = growth_model();
    // lambda^(n-2) < r_n < lambda^(n-1) for 3 <= n <= 120
    for (long n = 3; n <= 120; ++n) {
        FieldElement rn(minimal_r(n));
        REQUIRE((pow(g.lambda, static_cast<unsigned long>(n - 2)) - rn).sign() < 0);
        REQUIRE((rn - pow(g.lambda, static_cast<unsigned long>(n - 1))).sign() < 0);
    }
    // r_n / lambda^(n-2) -> limit_const
    REQUIRE(minimal_growth_within(g, 60, Rat(1, 1000000)));
    REQUIRE(minimal_growth_within(g, 90, Rat(1, 1000000000)));
    REQUIRE_FALSE(minimal_growth_within(g, 3, Rat(1, 1000000)));
}

TEST_CASE("classification on the cubic trace") {
    ExpansionTrace t = expand(cbrt_point(), 120);
    DeltaTrace d = delta_trace(t);
    ConvergenceReport rep = classify_ideal_convergence(t, d, Rat(1, 2));
    REQUIRE(rep.thm23_1 == Verdict::holds);
    REQUIRE(rep.thm23_2 == Verdict::holds);
    REQUIRE(rep.M_ceil == 4); // beta_n <= theta^2+theta+1 < 4
    REQUIRE_FALSE(rep.m_at_most_2);
    REQUIRE(rep.bound_N == 0);
    // the periodic tail keeps (2+a_n)/b_n = 5/3 > 1
    REQUIRE(rep.satz_v == Verdict::fails);
    REQUIRE(rep.theta == Rat(5, 3));

    REQUIRE_THROWS_AS(classify_ideal_convergence(t, d, Rat(0)), error);
    REQUIRE_THROWS_AS(classify_ideal_convergence(t, d, Rat(2)), error);
}

TEST_CASE("short traces are undecidable") {
    ExpansionTrace t = expand(rat_state(Rat(1, 2), Rat(3, 2)), 10);
    DeltaTrace d = delta_trace(t);
    ConvergenceReport rep = classify_ideal_convergence(t, d, Rat(1, 2));
    REQUIRE(rep.thm21 == Verdict::undecidable);
    REQUIRE(rep.thm22 == Verdict::undecidable);
    REQUIRE(rep.thm23_1 == Verdict::undecidable);
    REQUIRE(rep.thm24 == Verdict::undecidable);
    REQUIRE(rep.thm25 == Verdict::undecidable);
    REQUIRE(rep.satz_v == Verdict::undecidable);
}

TEST_CASE("windowed product surrogate distinguishes vanishing tails") {
    // the cubic trace has {beta_n} ~ 0.85 forever: windowed product over 60
    // steps is far below 2^-8
    ExpansionTrace t = expand(cbrt_point(), 120);
    DeltaTrace d = delta_trace(t);
    ConvergenceReport rep = classify_ideal_convergence(t, d, Rat(1, 2));
    REQUIRE(rep.tail_product_vanishing);
    REQUIRE(rep.thm24 == Verdict::fails);
}

TEST_CASE("perron bound lambda^(n-2) < r_n on arbitrary traces") {
    GrowthModel g = growth_model();
    ExpansionTrace t = expand(cbrt_point(), 100);
    for (long n = 3; n < t.step_count(); ++n) {
        FieldElement rn(t.col(n).r);
        REQUIRE((pow(g.lambda, static_cast<unsigned long>(n - 2)) - rn).sign() < 0);
    }
}
