#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "realdescent/descent.hpp"
#include "realdescent/parse.hpp"
#include "realdescent/weierstrass.hpp"

using namespace realdescent;

namespace {

ExactComplex ec(const std::string& s) { return parse_exact(s); }

TorusVerdict tv(std::initializer_list<std::string> bs) {
    TorusSpec spec;
    for (const auto& s : bs) spec.exponents.push_back(ec(s));
    return torus_verdict(spec);
}

// Independent oracle for the norm-witness search: brute force over a box.
std::optional<std::pair<long, long>> brute_norm_witness(const ExactComplex& tau, long bound) {
    for (long d1 = 1; d1 <= bound; ++d1)
        for (long d2 = -bound; d2 <= bound; ++d2) {
            ExactComplex combo = ExactComplex(Rational(d1)) * tau + ExactComplex(Rational(d2));
            if (is_rational_square(abs_squared(combo))) return std::make_pair(d1, d2);
        }
    return std::nullopt;
}

std::mt19937_64 rng(12345);

ExactComplex random_tau() {
    static const long rads[] = {2, 3, 5, 7};
    std::uniform_int_distribution<long> num(-3, 3), den(1, 3), pick(0, 3);
    std::uniform_int_distribution<int> coin(0, 1);
    auto part = [&](bool nonzero) {
        RealAlgebraic v(make_rational(num(rng), den(rng)));
        if (coin(rng))
            v = v + RealAlgebraic::root_multiple(rads[pick(rng)], make_rational(num(rng), den(rng)));
        if (nonzero && v.is_zero()) v = v + RealAlgebraic(1L);
        return v;
    };
    ExactComplex tau(part(false), part(true));
    return normalize_to_upper(tau);
}

} // namespace

TEST_CASE("torus verdict table") {
    auto v1 = tv({"1+1i"});
    CHECK(v1.verdict == Verdict::None);
    CHECK(v1.s == 2);
    CHECK(v1.dim_g == 1);

    auto v2 = tv({"1", "sqrt2"});
    CHECK(v2.verdict == Verdict::Descends);
    CHECK(v2.r_real == 2);
    CHECK(v2.r_imag == 0);
    CHECK(v2.target_gm == 2);
    CHECK(v2.target_s == 0);

    auto v3 = tv({"1", "i"});
    CHECK(v3.verdict == Verdict::Descends);
    CHECK(v3.target_gm == 1);
    CHECK(v3.target_s == 1);

    auto v4 = tv({"1+1i", "sqrt2 + sqrt3*1i"});
    CHECK(v4.verdict == Verdict::None);
    CHECK(v4.s == 4);
    CHECK(v4.dim_g == 2);

    // redundant exponents do not inflate dim G: b3 = 2 b1, b2 = conj(b1)
    auto v5 = tv({"1+1i", "1-1i", "2+2i"});
    CHECK(v5.r_real == 1);
    CHECK(v5.r_imag == 1);
    CHECK(v5.s == 2);
    CHECK(v5.dim_g == 2);
    CHECK(v5.verdict == Verdict::Descends);
    CHECK(v5.target_gm == 1);
    CHECK(v5.target_s == 1);

    CHECK_THROWS_AS(tv({"0"}), DomainError);
}

TEST_CASE("torus verdict: weak-only window") {
    // three Q-independent exponents whose real parts span 1 dim and whose
    // imaginary parts span 2: s = 3, dim_g = 3 would be Descends; build
    // s strictly between dim_g and 2 dim_g instead.
    auto v = tv({"1+1i", "1+sqrt2*1i", "1+sqrt3*1i"});
    // re parts {1,1,1}: rank 1; im parts {1, sqrt2, sqrt3}: rank 3 => s = 4
    // dim_g = 3 (joint rank), so dim_g < s < 2 dim_g: weak only
    CHECK(v.dim_g == 3);
    CHECK(v.s == 4);
    CHECK(v.verdict == Verdict::WeakOnly);
}

TEST_CASE("twin invariance at the verdict level") {
    ExactComplex i = ExactComplex::i_unit();
    for (int iter = 0; iter < 40; ++iter) {
        std::uniform_int_distribution<int> nn(1, 3);
        TorusSpec spec, twin;
        int n = nn(rng);
        for (int k = 0; k < n; ++k) {
            ExactComplex b = random_tau(); // nonzero by construction
            spec.exponents.push_back(b);
            twin.exponents.push_back(i * b);
        }
        TorusVerdict a = torus_verdict(spec);
        TorusVerdict b = torus_verdict(twin);
        CHECK(a.verdict == b.verdict);
        CHECK(a.r_real == b.r_imag);
        CHECK(a.r_imag == b.r_real);
        CHECK(a.dim_g == b.dim_g);
    }
}

TEST_CASE("torus verdict scaling and recombination invariance") {
    for (int iter = 0; iter < 20; ++iter) {
        TorusSpec spec;
        spec.exponents = {random_tau(), random_tau()};
        TorusVerdict a = torus_verdict(spec);

        TorusSpec scaled;
        Rational c = make_rational(7, 3);
        for (const auto& b : spec.exponents) scaled.exponents.push_back(c * b);
        TorusVerdict s = torus_verdict(scaled);
        CHECK(a.verdict == s.verdict);
        CHECK(a.r_real == s.r_real);
        CHECK(a.r_imag == s.r_imag);

        // unimodular recombination (b1, b2) -> (b1 + 2 b2, b2); drop zero rows
        TorusSpec re;
        re.exponents = {spec.exponents[0] + Rational(2) * spec.exponents[1], spec.exponents[1]};
        if (!re.exponents[0].is_zero()) {
            TorusVerdict r = torus_verdict(re);
            CHECK(a.verdict == r.verdict);
            CHECK(a.s == r.s);
        }
    }
}

TEST_CASE("elliptic real model: worked examples") {
    auto v1 = elliptic_real_model(ec("sqrt2*1i"));
    CHECK(v1.definable);
    REQUIRE(std::holds_alternative<RationalRealPart>(v1.witness));
    CHECK(std::get<RationalRealPart>(v1.witness).value == 0);
    REQUIRE(v1.cm_discriminant.has_value());
    CHECK(*v1.cm_discriminant == -8);

    auto v2 = elliptic_real_model(ec("sqrt3*(1+1i)"));
    CHECK_FALSE(v2.definable);
    CHECK(std::holds_alternative<std::monostate>(v2.witness));

    auto v3 = elliptic_real_model(ec("(sqrt2-1)/2 + (sqrt2/2)*1i"));
    CHECK(v3.definable);
    REQUIRE(std::holds_alternative<NormWitness>(v3.witness));
    auto w = std::get<NormWitness>(v3.witness);
    CHECK(w.d1 == 2);
    CHECK(w.d2 == 1);
    CHECK(w.norm == 2);
    // oracle: brute force over [-20, 20]
    auto oracle = brute_norm_witness(ec("(sqrt2-1)/2 + (sqrt2/2)*1i"), 20);
    REQUIRE(oracle.has_value());
    CHECK(oracle->first == 2);
    CHECK(oracle->second == 1);

    auto v4 = elliptic_real_model(ec("1/2 + sqrt5*1i"));
    CHECK(v4.definable);
    REQUIRE(std::holds_alternative<RationalRealPart>(v4.witness));
    CHECK(std::get<RationalRealPart>(v4.witness).value == make_rational(1, 2));

    CHECK_THROWS_AS(elliptic_real_model(ec("3/2")), DomainError);
}

TEST_CASE("elliptic real model: modular invariance of definability") {
    for (int iter = 0; iter < 15; ++iter) {
        ExactComplex tau = random_tau();
        bool base = elliptic_real_model(tau).definable;
        CHECK(elliptic_real_model(tau + ExactComplex(1L)).definable == base);
        ExactComplex minus_inv = -(ExactComplex(1L) / tau);
        CHECK(elliptic_real_model(minus_inv).definable == base);
    }
}

TEST_CASE("hom_module: CM pair i*sqrt2") {
    ExactComplex tau = ec("sqrt2*1i");
    IsogenyModule mod = hom_module(tau, tau);
    REQUIRE(mod.rank() == 2);
    REQUIRE(mod.min_degree.has_value());
    CHECK(*mod.min_degree == 1);
    // the module contains an element of degree 2 (multiplication by sqrt(-2))
    bool deg2 = false;
    for (long m = -4; m <= 4; ++m)
        for (long n = -4; n <= 4; ++n) {
            std::array<mpz_class, 4> comb;
            for (int k = 0; k < 4; ++k)
                comb[k] = m * mod.generators[0][k] + n * mod.generators[1][k];
            if (IsogenyModule::degree(comb) == 2) deg2 = true;
        }
    CHECK(deg2);
}

TEST_CASE("hom_module: sqrt3(1+i) to its conjugate curve") {
    ExactComplex tau = ec("sqrt3*(1+1i)");
    ExactComplex tau2 = conjugate_curve_tau(tau);
    CHECK(tau2 == ec("sqrt3*(-1+1i)"));
    IsogenyModule mod = hom_module(tau, tau2);
    REQUIRE(mod.rank() == 1);
    REQUIRE(mod.min_degree.has_value());
    CHECK(*mod.min_degree == 6);
    // generator satisfies tau2 (c tau + d) = a tau + b exactly
    const auto& g = mod.generators[0];
    ExactComplex lhs = tau2 * (ExactComplex(Rational(g[2])) * tau + ExactComplex(Rational(g[3])));
    ExactComplex rhs = ExactComplex(Rational(g[0])) * tau + ExactComplex(Rational(g[1]));
    CHECK(lhs == rhs);
}

TEST_CASE("hom_module: i and 2i with enumeration oracle") {
    IsogenyModule mod = hom_module(ec("i"), ec("2i"));
    REQUIRE(mod.rank() == 2);
    REQUIRE(mod.min_degree.has_value());
    CHECK(*mod.min_degree == 2);

    // oracle: enumerate integer matrices with entries <= 5
    ExactComplex tau = ec("i"), tau2 = ec("2i");
    ZMat sols;
    for (long a = -5; a <= 5; ++a)
        for (long b = -5; b <= 5; ++b)
            for (long c = -5; c <= 5; ++c)
                for (long d = -5; d <= 5; ++d) {
                    if (a == 0 && b == 0 && c == 0 && d == 0) continue;
                    ExactComplex lhs =
                        tau2 * (ExactComplex(Rational(c)) * tau + ExactComplex(Rational(d)));
                    ExactComplex rhs = ExactComplex(Rational(a)) * tau + ExactComplex(Rational(b));
                    if (lhs == rhs) sols.push_back({mpz_class(a), mpz_class(b), mpz_class(c), mpz_class(d)});
                }
    CHECK(linalg::zrank(sols) == 2);
    mpz_class min_deg = 0;
    for (const auto& s : sols) {
        mpz_class deg = abs(s[0] * s[3] - s[1] * s[2]);
        if (deg != 0 && (min_deg == 0 || deg < min_deg)) min_deg = deg;
    }
    CHECK(min_deg == 2);
}

TEST_CASE("hom_module: Moebius images are isogenous with valid generators") {
    std::uniform_int_distribution<long> mm(-3, 3);
    const char* base[] = {"sqrt2*1i", "i", "1/3 + sqrt5*1i", "sqrt3*(1+1i)", "2/5 + sqrt7*1i"};
    int done = 0;
    for (int iter = 0; done < 20 && iter < 200; ++iter) {
        ExactComplex tau = ec(base[iter % 5]);
        long a = mm(rng), b = mm(rng), c = mm(rng), d = mm(rng);
        if (a * d - b * c <= 0) continue;
        ++done;
        ExactComplex tau2 = (ExactComplex(Rational(a)) * tau + ExactComplex(Rational(b))) /
                            (ExactComplex(Rational(c)) * tau + ExactComplex(Rational(d)));
        IsogenyModule mod = hom_module(tau, tau2);
        REQUIRE(mod.rank() >= 1);
        for (const auto& g : mod.generators) {
            ExactComplex lhs =
                tau2 * (ExactComplex(Rational(g[2])) * tau + ExactComplex(Rational(g[3])));
            ExactComplex rhs = ExactComplex(Rational(g[0])) * tau + ExactComplex(Rational(g[1]));
            CHECK(lhs == rhs);
            CHECK(IsogenyModule::degree(g) > 0);
            CHECK(gcd(gcd(g[0], g[1]), gcd(g[2], g[3])) == 1); // primitive
        }
        // the content-reduced input matrix witnesses an isogeny degree
        std::array<mpz_class, 4> m0 = {a, b, c, d};
        mpz_class cont = gcd(gcd(m0[0], m0[1]), gcd(m0[2], m0[3]));
        for (auto& e : m0) e /= cont;
        REQUIRE(mod.min_degree.has_value());
        CHECK(*mod.min_degree <= IsogenyModule::degree(m0));
    }
}

TEST_CASE("hom_module: degree multiplicativity under composition") {
    ExactComplex t1 = ec("i"), t2 = ec("2i"), t3 = ec("6i");
    auto m12 = hom_module(t1, t2);
    auto m23 = hom_module(t2, t3);
    REQUIRE(m12.rank() >= 1);
    REQUIRE(m23.rank() >= 1);
    const auto& a = m23.generators[0];
    const auto& b = m12.generators[0];
    // matrix product (a o b) as acting by Moebius composition
    std::array<mpz_class, 4> prod = {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
                                     a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
    ExactComplex lhs = t3 * (ExactComplex(Rational(prod[2])) * t1 + ExactComplex(Rational(prod[3])));
    ExactComplex rhs = ExactComplex(Rational(prod[0])) * t1 + ExactComplex(Rational(prod[1]));
    CHECK(lhs == rhs);
    CHECK(IsogenyModule::degree(prod) == IsogenyModule::degree(a) * IsogenyModule::degree(b));
}

TEST_CASE("weil restriction simplicity") {
    CHECK_FALSE(weil_restriction_simple(ec("sqrt3*(1+1i)")).splits);
    CHECK(weil_restriction_simple(ec("sqrt2*1i")).splits);
    CHECK(weil_restriction_simple(ec("1/2 + sqrt7*1i")).splits);
}

TEST_CASE("consistency: real model definable iff restriction splits") {
    // two independent code paths must agree on every exact tau
    std::vector<ExactComplex> taus = {ec("sqrt3*(1+1i)"), ec("sqrt2*1i"), ec("1/2 + sqrt7*1i"),
                                      ec("(sqrt2-1)/2 + (sqrt2/2)*1i"), ec("i"), ec("rho")};
    for (int iter = 0; iter < 25; ++iter) taus.push_back(random_tau());
    for (const auto& tau : taus) {
        CAPTURE(tau.str());
        CHECK(elliptic_real_model(tau).definable == restriction_splits(tau));
    }
}

TEST_CASE("norm witness agrees with brute force on random tau") {
    for (int iter = 0; iter < 25; ++iter) {
        ExactComplex tau = random_tau();
        CAPTURE(tau.str());
        auto v = elliptic_real_model(tau);
        auto oracle = brute_norm_witness(tau, 40);
        if (std::holds_alternative<NormWitness>(v.witness)) {
            auto w = std::get<NormWitness>(v.witness);
            if (w.d1 <= 40 && abs(w.d2) <= 40) CHECK(oracle.has_value());
        }
        // oracle found a witness in the box => definable
        if (oracle) CHECK(v.definable);
    }
}

TEST_CASE("complex twin") {
    // square lattice is its own twin
    Lattice sq = Lattice::from_tau_exact(ec("i"));
    Lattice tw = complex_twin(sq);
    CHECK(detail::lattice_member(tw.exact1(), sq.exact1(), sq.exact2()));
    CHECK(detail::lattice_member(sq.exact1(), tw.exact1(), tw.exact2()));

    auto same_lattice = [](const Lattice& a, const Lattice& b) {
        return detail::lattice_member(a.exact1(), b.exact1(), b.exact2()) &&
               detail::lattice_member(a.exact2(), b.exact1(), b.exact2()) &&
               detail::lattice_member(b.exact1(), a.exact1(), a.exact2()) &&
               detail::lattice_member(b.exact2(), a.exact1(), a.exact2());
    };

    // Z + i sqrt2 Z -> sqrt2 Z + i Z, homothetic to Z + (i/sqrt2) Z
    Lattice rect = Lattice::from_tau_exact(ec("sqrt2*1i"));
    Lattice tw2 = complex_twin(rect);
    CHECK(same_lattice(tw2, Lattice::from_exact(ec("sqrt2"), ec("i"))));
    PrecisionContext ctx(50);
    auto j_twin = invariants(tw2, ctx).j;
    BigComplex i_over_rt2 =
        BigComplex::i_unit(ctx.prec_bits()) / BigFloat(2, ctx.prec_bits()).sqrt();
    auto j_ref = invariants(Lattice::from_tau_numeric(i_over_rt2), ctx).j;
    CHECK((j_twin - j_ref).abs() < BigFloat::pow10(-35, 64) * (BigFloat(1, 64) + j_ref.abs()));

    // 2Z + 3iZ -> 3Z + 2iZ (swap of axis lengths)
    Lattice ax = Lattice::from_exact(ec("2"), ec("3i"));
    Lattice tw3 = complex_twin(ax);
    CHECK(same_lattice(tw3, Lattice::from_exact(ec("3"), ec("2i"))));

    // non-stable lattice is rejected
    CHECK_THROWS_AS(complex_twin(Lattice::from_tau_exact(ec("1/3 + 1i"))), DomainError);

    // twin lattice is itself conjugation-stable
    CHECK(detail::lattice_member(conjugate(tw2.exact1()), tw2.exact1(), tw2.exact2()));
}

TEST_CASE("restriction profiles") {
    auto gm = restriction_profile_gm();
    CHECK(gm.structure == "Gm x S");
    CHECK(gm.endomorphisms == "Z x Z");

    auto cm = restriction_profile_elliptic(ec("i"));
    CHECK(cm.structure == "E' x E'");
    CHECK(cm.endomorphisms == "Mat2(Z)");

    auto simple = restriction_profile_elliptic(ec("sqrt3*(1+1i)"));
    CHECK(simple.simple);
    CHECK(simple.structure == "Simple");
    CHECK(simple.endomorphisms == "Z[sqrt6]");

    auto twins = restriction_profile_elliptic(ec("(sqrt2-1)/2 + (sqrt2/2)*1i"));
    CHECK_FALSE(twins.simple);
    CHECK(twins.structure == "E' x E'_[i]");
}
