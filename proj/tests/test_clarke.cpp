#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qprior/clarke.hpp"

using namespace qprior;
using Catch::Approx;

namespace {

struct PriorSet {
    PriorDensity B = build_prior("p_B");
    PriorDensity Bt = build_prior("p_Btrunc");
    PriorDensity F = build_prior("p_F");
    PriorDensity F1 = build_prior("p_Fq1");
};

const PriorSet& priors() {
    static const PriorSet p;
    return p;
}

}  // namespace

TEST_CASE("kl of a prior with itself vanishes", "[clarke]") {
    KLResult r = kl(priors().Bt, priors().Bt);
    CHECK(r.value == Approx(0.0).margin(1e-8));
    CHECK(r.value >= 0.0);
}

TEST_CASE("printed Bures-pair relative entropies", "[clarke]") {
    CHECK(kl(priors().B, priors().Bt).value == Approx(0.101846).epsilon(0.02));
    CHECK(kl(priors().Bt, priors().B).value == Approx(0.0661775).epsilon(0.02));
    // tight agreement: these reproduce to ~1e-5
    CHECK(kl(priors().B, priors().Bt).value == Approx(0.101846).epsilon(2e-4));
    CHECK(kl(priors().Bt, priors().B).value == Approx(0.0661775).epsilon(2e-4));
}

TEST_CASE("kl is nonnegative on every computed pair", "[clarke][properties]") {
    const PriorDensity* ps[] = {&priors().B, &priors().Bt, &priors().F, &priors().F1};
    for (const auto* a : ps)
        for (const auto* b : ps) CHECK(kl(*a, *b).value >= 0.0);
}

TEST_CASE("support mismatch raises instead of returning a number", "[clarke]") {
    // q with a hole in the middle of the box
    PriorDensity q = build_prior("p_Btrunc");
    auto base = q.density;
    q.density = [base](std::span<const double> x) { return (x[0] > 0.4 && x[0] < 0.6) ? 0.0 : base(x); };
    CHECK_THROWS_AS(kl(priors().B, q), SupportMismatchError);
}

TEST_CASE("clarke_compare on the Bures pair reproduces all printed stages", "[clarke]") {
    ClarkeVerdict v = clarke_compare(priors().B, priors().Bt);
    CHECK(v.s12 == Approx(0.101846).epsilon(0.02));
    CHECK(v.s21 == Approx(0.0661775).epsilon(0.02));
    CHECK(v.s12_post_pow1 == Approx(0.169782).epsilon(0.02));
    CHECK(v.s21_post_pow1 == Approx(0.197657).epsilon(0.02));
    CHECK(v.s12_post == Approx(0.093849).epsilon(0.02));
    CHECK(v.s21_post == Approx(0.114669).epsilon(0.02));
    CHECK(v.verdict == Verdict::first_more_noninformative);
}

TEST_CASE("clarke_compare (p_F, p_Fq1) power-1 stage", "[clarke]") {
    ClarkeVerdict v = clarke_compare(priors().F, priors().F1);
    CHECK(v.s12 == Approx(0.229666).epsilon(0.02));
    CHECK(v.s21 == Approx(0.170145).epsilon(0.02));
    CHECK(v.s12_post_pow1 == Approx(0.70766).epsilon(0.02));
    CHECK(v.s21_post_pow1 == Approx(0.0641738).epsilon(0.02));
    CHECK(v.verdict == Verdict::second_more_noninformative);
}

TEST_CASE("clarke_compare of a prior with itself is inconclusive", "[clarke]") {
    ClarkeVerdict v = clarke_compare(priors().Bt, priors().Bt);
    CHECK(v.verdict == Verdict::inconclusive);
}

TEST_CASE("mirrored arguments mirror the verdict", "[clarke][properties]") {
    ClarkeVerdict ab = clarke_compare(priors().Bt, priors().F);
    ClarkeVerdict ba = clarke_compare(priors().F, priors().Bt);
    CHECK(ab.verdict == Verdict::first_more_noninformative);
    CHECK(ba.verdict == Verdict::second_more_noninformative);
    CHECK(ab.s12 == Approx(ba.s21).epsilon(1e-6));
    CHECK(ab.s12_post == Approx(ba.s21_post).epsilon(1e-4));
}

TEST_CASE("(p_Btrunc, p_F) pair reproduces the printed four statistics", "[clarke]") {
    ClarkeVerdict v = clarke_compare(priors().Bt, priors().F);
    CHECK(v.s12 == Approx(0.0191948).epsilon(0.02));
    CHECK(v.s21 == Approx(0.0234599).epsilon(0.02));
    CHECK(v.s12_post == Approx(0.0143147).epsilon(0.02));
    CHECK(v.s21_post == Approx(0.1047772).epsilon(0.02));
}

TEST_CASE("(p_Btrunc, p_Fq1) posterior stage: the two statistics beyond the gate", "[clarke]") {
    ClarkeVerdict v = clarke_compare(priors().Bt, priors().F1);
    CHECK(v.s12 == Approx(0.105463).epsilon(0.02));
    CHECK(v.s21 == Approx(0.0914175).epsilon(0.02));
    CHECK(v.s12_post == Approx(0.245602).epsilon(0.02));
    CHECK(v.s21_post == Approx(0.0408236).epsilon(0.02));
    CHECK(v.verdict == Verdict::second_more_noninformative);
}

TEST_CASE("rank returns the printed total order, transitively", "[clarke][slow]") {
    std::vector<PriorDensity> ps{priors().F1, priors().B, priors().Bt, priors().F};
    RankingReport rep = rank(ps);
    REQUIRE(rep.total_order);
    CHECK(rep.transitive);
    CHECK_FALSE(rep.any_inconclusive);
    CHECK(rep.order == std::vector<int>{0, 1, 2, 3});  // p_Fq1 > p_B > p_Btrunc > p_F
}

TEST_CASE("duplicate priors are flagged, no order forced", "[clarke]") {
    std::vector<PriorDensity> ps{priors().Bt, priors().Bt};
    RankingReport rep = rank(ps);
    CHECK(rep.any_inconclusive);
    CHECK_FALSE(rep.total_order);
    CHECK(rep.order.empty());
}
