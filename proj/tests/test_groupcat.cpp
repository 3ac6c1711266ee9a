#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "realdescent/groupcat.hpp"

using namespace realdescent;

namespace {

std::mt19937_64 rng(987);

GroupObject random_object(int max_factors = 4) {
    static const std::vector<std::string> taus = {"i", "2i", "sqrt2*1i", "sqrt3*(1+1i)",
                                                  "1/2 + sqrt7*1i"};
    std::uniform_int_distribution<int> n(1, max_factors), kind(0, 4), pick(0, 4);
    GroupObject g;
    int count = n(rng);
    for (int k = 0; k < count; ++k) {
        switch (kind(rng)) {
            case 0: g.push(SimpleFactor::ga()); break;
            case 1: g.push(SimpleFactor::gm()); break;
            case 2: g.push(SimpleFactor::elliptic(parse_exact(taus[pick(rng)]))); break;
            case 3: g.push_ext_ga(parse_exact(taus[pick(rng)]), Rational(1)); break;
            default: g.push_ext_gm(parse_exact(taus[pick(rng)]), false); break;
        }
    }
    return g;
}

} // namespace

TEST_CASE("conj_object") {
    GroupObject g = parse_group_object("Gm x E(tau=i)");
    GroupObject c = conj_object(g);
    CHECK(c.str() == g.str()); // CM square lattice is self-conjugate

    GroupObject e = parse_group_object("E(tau=sqrt3*(1+1i))");
    GroupObject ec = conj_object(e);
    const auto& f = std::get<SimpleFactor>(ec.factors[0]);
    CHECK(*f.tau == parse_exact("sqrt3*(-1+1i)"));

    for (int iter = 0; iter < 15; ++iter) {
        GroupObject r = random_object();
        CHECK(conj_object(conj_object(r)).str() == r.str());
    }
}

TEST_CASE("delta invariant") {
    CHECK(delta_invariant(parse_group_object("E(tau=i) x Gm")) == 2);
    CHECK(delta_invariant(parse_group_object("ExtGa(E(tau=i),t=1)")) == 1);
    CHECK(delta_invariant(
              parse_group_object("ExtGa(E(tau=i),t=1) x ExtGa(E(tau=i),t=1) x S")) == 3);

    // additivity over products, conjugation invariance
    for (int iter = 0; iter < 25; ++iter) {
        GroupObject a = random_object(), b = random_object();
        GroupObject prod = a;
        for (const auto& f : b.factors) prod.factors.push_back(f);
        CHECK(delta_invariant(prod) == delta_invariant(a) + delta_invariant(b));
        CHECK(delta_invariant(conj_object(a)) == delta_invariant(a));
    }
}

TEST_CASE("max plurisimple quotient") {
    GroupObject a = parse_group_object("ExtGm(E(tau=i),omega=nontorsion)");
    CHECK(max_plurisimple_quotient(a).str() == "E(tau=" + parse_exact("i").str() + ")");

    GroupObject b = parse_group_object("Gm x S");
    CHECK(max_plurisimple_quotient(b).str() == b.str());

    GroupObject c = parse_group_object("ExtGa(E(tau=i),t=1) x Gm");
    GroupObject q = max_plurisimple_quotient(c);
    CHECK(q.factors.size() == 2);
    CHECK(std::get<SimpleFactor>(q.factors[0]).kind == SimpleFactor::Kind::Elliptic);

    // idempotence and product compatibility
    for (int iter = 0; iter < 25; ++iter) {
        GroupObject g = random_object();
        GroupObject q1 = max_plurisimple_quotient(g);
        CHECK(max_plurisimple_quotient(q1).str() == q1.str());
        CHECK(delta_invariant(q1) == delta_invariant(g));
    }
}

TEST_CASE("hom_rank table") {
    auto E_i = SimpleFactor::elliptic(parse_exact("i"));
    auto E_2i = SimpleFactor::elliptic(parse_exact("2i"));

    CHECK(hom_rank(SimpleFactor::gm(), E_i).rank == 0);
    CHECK(hom_rank(E_i, SimpleFactor::gm()).rank == 0);
    CHECK(hom_rank(SimpleFactor::ga(), SimpleFactor::gm()).rank == 0);
    CHECK(hom_rank(SimpleFactor::gm(), SimpleFactor::ga()).rank == 0);

    auto gmgm = hom_rank(SimpleFactor::gm(), SimpleFactor::gm());
    CHECK(gmgm.rank == 1);
    CHECK(gmgm.note == HomRank::Note::Characters);

    auto gaga = hom_rank(SimpleFactor::ga(), SimpleFactor::ga());
    CHECK(gaga.rank == 1);
    CHECK(gaga.note == HomRank::Note::Scalars);

    auto cm = hom_rank(E_i, E_2i);
    CHECK(cm.rank == 2); // CM pair, oracle = descent::hom_module
    CHECK(cm.note == HomRank::Note::CMOrder);

    auto s = hom_rank(SimpleFactor::storus(), SimpleFactor::gm());
    CHECK(s.rank == 1);
    CHECK(s.note == HomRank::Note::Characters);

    // rank 0 <=> note Zero; conjugation invariance
    for (int iter = 0; iter < 10; ++iter) {
        GroupObject g = random_object(2);
        for (const auto& fa : g.factors)
            for (const auto& fb : g.factors) {
                if (!std::holds_alternative<SimpleFactor>(fa) ||
                    !std::holds_alternative<SimpleFactor>(fb))
                    continue;
                auto A = std::get<SimpleFactor>(fa);
                auto B = std::get<SimpleFactor>(fb);
                auto r = hom_rank(A, B);
                CHECK((r.rank == 0) == (r.note == HomRank::Note::Zero));
                auto rc = hom_rank(conj_factor(A), conj_factor(B));
                CHECK(rc.rank == r.rank);
            }
    }
}

TEST_CASE("inherited hypothesis checks") {
    // G = E(tau) x Gm, kernel = Gm: Hom(Gm, E^h) = 0 both ways
    GroupObject g1 = parse_group_object("E(tau=sqrt2*1i) x Gm");
    CHECK(inherited_hypothesis_check(g1, {1}) == HypothesisCheck::StrongOK);

    // G = E(tau) x conj factor with rank >= 1 hom: fails
    ExactComplex tau = parse_exact("sqrt3*(1+1i)");
    GroupObject g2;
    g2.push(SimpleFactor::elliptic(tau));
    g2.push(SimpleFactor::elliptic(conjugate_curve_tau(tau)));
    // kernel = second factor; U = E(tau); U^h = E(conj) and
    // Hom(kernel, U^h) = Hom(E(conj), E(conj)) != 0
    CHECK(inherited_hypothesis_check(g2, {1}) == HypothesisCheck::Fails);

    GroupObject g3 = parse_group_object("Ga x Gm");
    CHECK(inherited_hypothesis_check(g3, {0}) == HypothesisCheck::StrongOK);

    CHECK_THROWS_AS(inherited_hypothesis_check(g3, {0, 1}), DomainError);
    CHECK_THROWS_AS(inherited_hypothesis_check(g3, {5}), DomainError);

    // wrapper kernel: G = ExtGa(E) x Gm with kernel Gm -> maps from Gm land
    // in the Ga fiber, which kills them: strong OK
    GroupObject g4 = parse_group_object("ExtGa(E(tau=i),t=1) x Gm");
    CHECK(inherited_hypothesis_check(g4, {1}) == HypothesisCheck::StrongOK);
}

TEST_CASE("weil restriction of objects") {
    auto r1 = weil_restrict_object(parse_group_object("Gm x Gm"));
    REQUIRE(r1.size() == 2);
    CHECK(r1[0].profile.structure == "Gm x S");
    CHECK(r1[1].profile.structure == "Gm x S");

    auto r2 = weil_restrict_object(parse_group_object("E(tau=sqrt3*(1+1i))"));
    REQUIRE(r2.size() == 1);
    CHECK(r2[0].profile.simple);
    CHECK(r2[0].profile.structure == "Simple");

    auto r3 = weil_restrict_object(parse_group_object("E(tau=i) x Gm"));
    REQUIRE(r3.size() == 2);
    CHECK(r3[0].profile.structure == "E' x E'");
    CHECK(r3[0].profile.endomorphisms == "Mat2(Z)");
    CHECK(r3[1].profile.structure == "Gm x S");
    CHECK(r3[1].profile.endomorphisms == "Z x Z");
}

TEST_CASE("object literal parsing errors") {
    CHECK_THROWS_AS(parse_group_object("ExtGa(E(tau=i),t=0)"), DomainError);
    CHECK_THROWS_AS(parse_group_object("ExtGm(E(tau=i),omega=torsion)"), DomainError);
    CHECK_THROWS_AS(parse_group_object("Gq"), ParseError);
    CHECK_THROWS_AS(parse_group_object("E(i)"), ParseError);
    CHECK(parse_group_object("E(tau=i) x Gm x ExtGa(E(tau=i),t=1)").factors.size() == 3);
}
