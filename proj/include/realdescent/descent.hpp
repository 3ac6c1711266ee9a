#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "realdescent/exact.hpp"
#include "realdescent/lattice.hpp"

namespace realdescent {

// ---------------------------------------------------------------------------
// Torus verdicts
// ---------------------------------------------------------------------------

/// One-parameter subgroup of Gm^n given by exponents b_j:
/// Psi(r) = (e^{b_1 r}, ..., e^{b_n r}).
struct TorusSpec {
    std::vector<ExactComplex> exponents;
};

enum class Verdict { Descends, WeakOnly, None };

struct TorusVerdict {
    std::size_t r_real = 0;   // rank_Q{Re b_j}
    std::size_t r_imag = 0;   // rank_Q{Im b_j}
    std::size_t s = 0;        // r_real + r_imag = dim H
    std::size_t dim_g = 0;    // rank of the Z-span of {b_j}: the closure of Psi
    Verdict verdict = Verdict::None;
    // Descent target Gm^{r_real} x S^{r_imag}, up to isogeny only.
    std::size_t target_gm = 0;
    std::size_t target_s = 0;
};

/**
 * Rank-based descent verdict for exponential one-parameter subgroups:
 * dim H = rank{Re b} + rank{Im b}; descends iff dim H equals the dimension
 * of the closure of Psi itself (the rank of the joint Q-span), weakly iff
 * dim H < twice that.
 */
inline TorusVerdict torus_verdict(const TorusSpec& spec) {
    if (spec.exponents.empty()) throw DomainError("no exponents");
    RealField f = spec.exponents[0].field();
    for (const auto& b : spec.exponents) f = RealField::merged(f, b.field());
    std::vector<RealAlgebraic> res, ims;
    std::vector<ExactComplex> joint;
    for (const auto& b : spec.exponents) {
        if (b.is_zero()) throw DomainError("zero exponent gives a degenerate homomorphism");
        ExactComplex e = b.embedded_into(f);
        res.push_back(e.re());
        ims.push_back(e.im());
        joint.push_back(e);
    }
    TorusVerdict v;
    v.r_real = rank_over_Q(res);
    v.r_imag = rank_over_Q(ims);
    v.s = v.r_real + v.r_imag;
    v.dim_g = rank_over_Q_joint(joint);
    if (v.s == v.dim_g) v.verdict = Verdict::Descends;
    else if (v.s < 2 * v.dim_g) v.verdict = Verdict::WeakOnly;
    else v.verdict = Verdict::None;
    if (v.verdict != Verdict::None) {
        v.target_gm = v.r_real;
        v.target_s = v.r_imag;
    }
    return v;
}

// ---------------------------------------------------------------------------
// Elliptic real-model criteria
// ---------------------------------------------------------------------------

struct RationalRealPart { Rational value; };
struct CMWitness { mpz_class discriminant; };
struct NormWitness { mpz_class d1, d2; Rational norm; }; // |d1 tau + d2| = norm
using EllipticWitness = std::variant<std::monostate, RationalRealPart, CMWitness, NormWitness>;

struct EllipticVerdict {
    bool definable = false;
    EllipticWitness witness;
    std::optional<mpz_class> cm_discriminant; // populated whenever tau is CM
};

/// Im tau > 0, replacing tau by -tau when needed (same lattice).
inline ExactComplex normalize_to_upper(const ExactComplex& tau) {
    int s = tau.im().sign();
    if (s == 0) throw DomainError("tau is real: not a lattice");
    return s > 0 ? tau : -tau;
}

/// The tau of the conjugate curve E^h of E_tau, again in the upper half plane.
inline ExactComplex conjugate_curve_tau(const ExactComplex& tau) {
    return -conjugate(normalize_to_upper(tau));
}

/**
 * Decides whether E_tau is isogenous to a curve with a model over R.
 * Criteria, in order: rational real part; CM; an integer pair (d1, d2),
 * d1 != 0, with |d1 tau + d2| rational. The last is solved exactly: each
 * non-unit coordinate of |d1 tau + d2|^2 yields a linear constraint on
 * d2/d1, and the surviving rational value must be a rational square.
 */
inline EllipticVerdict elliptic_real_model(const ExactComplex& tau_in) {
    ExactComplex tau = normalize_to_upper(tau_in);
    EllipticVerdict out;
    out.cm_discriminant = is_quadratic_irrational(tau);

    if (tau.re().is_rational()) {
        out.definable = true;
        out.witness = RationalRealPart{tau.re().rational_part()};
        return out;
    }
    if (out.cm_discriminant) {
        out.definable = true;
        out.witness = CMWitness{*out.cm_discriminant};
        return out;
    }

    const RealAlgebraic n = abs_squared(tau); // d1^2 coefficient
    const RealAlgebraic x = tau.re();         // (2 d1 d2) coefficient
    std::optional<Rational> ratio;            // d2/d1
    for (std::size_t k = 1; k < n.field().dim(); ++k) {
        Rational a = k < n.coords().size() ? n.coords()[k] : Rational(0);
        Rational b = k < x.coords().size() ? x.coords()[k] : Rational(0);
        if (b == 0) {
            if (a != 0) return out; // that coordinate can never vanish
            continue;
        }
        Rational r = -a / (2 * b);
        if (ratio && *ratio != r) return out; // inconsistent constraints
        ratio = r;
    }
    if (!ratio) return out; // cannot happen for irrational Re, kept for safety

    mpz_class d1 = ratio->get_den(), d2 = ratio->get_num();
    ExactComplex combo = ExactComplex(Rational(d1)) * tau + ExactComplex(Rational(d2));
    auto root = is_rational_square(abs_squared(combo));
    if (!root) return out;
    out.definable = true;
    out.witness = NormWitness{d1, d2, *root};
    return out;
}

// ---------------------------------------------------------------------------
// Isogeny modules between elliptic curves
// ---------------------------------------------------------------------------

/// Z-module of integer matrices (a,b;c,d) with tau2 = (a tau + b)/(c tau + d).
struct IsogenyModule {
    std::vector<std::array<mpz_class, 4>> generators; // saturated lattice basis
    std::optional<mpz_class> min_degree;

    std::size_t rank() const { return generators.size(); }

    static mpz_class degree(const std::array<mpz_class, 4>& m) {
        return m[0] * m[3] - m[1] * m[2];
    }
};

/**
 * Solves tau2 (c tau + d) = a tau + b as an exact Q-linear system and
 * returns the saturated lattice of integer solutions. Every nonzero
 * solution has positive determinant (it maps H to H). For rank 2 the
 * minimal degree is found by enumerating small integer combinations.
 */
inline IsogenyModule hom_module(const ExactComplex& tau_a, const ExactComplex& tau_b,
                                long min_degree_bound = 32) {
    if (tau_a.im().sign() <= 0 || tau_b.im().sign() <= 0)
        throw DomainError("hom_module: both tau must lie in the upper half plane");
    RealField f = RealField::merged(tau_a.field(), tau_b.field());
    ExactComplex t1 = tau_a.embedded_into(f);
    ExactComplex t2 = tau_b.embedded_into(f);

    // columns (a, b, c, d); coefficient of each unknown in
    // a*(-tau) + b*(-1) + c*(tau2 tau) + d*(tau2) = 0
    std::array<ExactComplex, 4> col = {-t1, -ExactComplex(1L).embedded_into(f), t2 * t1, t2};
    std::size_t d = f.dim();
    QMat eqs(2 * d, QVec(4, Rational(0)));
    for (std::size_t j = 0; j < 4; ++j) {
        ExactComplex cj = col[j].embedded_into(f);
        for (std::size_t k = 0; k < d; ++k) {
            eqs[k][j] = cj.re().coords()[k];
            eqs[d + k][j] = cj.im().coords()[k];
        }
    }
    ZMat rows = linalg::to_integer_rows(eqs);
    ZMat kernel = linalg::integer_kernel(rows, 4);

    IsogenyModule mod;
    for (auto& v : kernel) {
        std::array<mpz_class, 4> m = {v[0], v[1], v[2], v[3]};
        // every nonzero solution maps H to H, so its determinant is positive
        if (IsogenyModule::degree(m) <= 0)
            throw DomainError("hom_module: solution with non-positive determinant");
        mod.generators.push_back(std::move(m));
    }
    if (mod.rank() == 1) {
        mod.min_degree = abs(IsogenyModule::degree(mod.generators[0]));
    } else if (mod.rank() == 2) {
        std::optional<mpz_class> best;
        for (long m = -min_degree_bound; m <= min_degree_bound; ++m)
            for (long n = -min_degree_bound; n <= min_degree_bound; ++n) {
                if (m == 0 && n == 0) continue;
                std::array<mpz_class, 4> comb;
                for (int i = 0; i < 4; ++i)
                    comb[i] = m * mod.generators[0][i] + n * mod.generators[1][i];
                mpz_class deg = abs(IsogenyModule::degree(comb));
                if (deg == 0) continue;
                if (!best || deg < *best) best = deg;
            }
        mod.min_degree = best;
    }
    return mod;
}

// ---------------------------------------------------------------------------
// Weil restriction: simplicity and splitting profiles
// ---------------------------------------------------------------------------

struct RestrictionVerdict {
    bool splits = false;
    std::string description;
};

/**
 * Is the Weil restriction of E_tau over R simple? For CM tau a real model
 * always exists. Otherwise Hom(E, E^h) has rank <= 1 and the restriction
 * splits exactly when the generator degree is a perfect square.
 */
inline RestrictionVerdict weil_restriction_simple(const ExactComplex& tau_in) {
    ExactComplex tau = normalize_to_upper(tau_in);
    if (is_quadratic_irrational(tau))
        return {true, "CM curve: real model exists"};
    IsogenyModule mod = hom_module(tau, conjugate_curve_tau(tau));
    if (mod.rank() == 0)
        return {false, "no isogeny to the conjugate curve"};
    if (mod.rank() >= 2)
        throw DomainError("non-CM curve with Hom rank 2 is impossible");
    mpz_class deg = abs(IsogenyModule::degree(mod.generators[0]));
    if (mpz_perfect_square_p(deg.get_mpz_t()))
        return {true, "isogeny to the conjugate curve of square degree " + deg.get_str()};
    return {false, "minimal isogeny degree " + deg.get_str() + " has nontrivial squarefree part"};
}

inline bool restriction_splits(const ExactComplex& tau) {
    return weil_restriction_simple(tau).splits;
}

// ---------------------------------------------------------------------------
// Complex twin of a conjugation-stable lattice
// ---------------------------------------------------------------------------

namespace detail {

// Primitive (m, n) with m*v1 + n*v2 = 0, for RealAlgebraic v1, v2; nullopt
// when v1, v2 are linearly independent over Q.
inline std::optional<std::pair<mpz_class, mpz_class>> primitive_relation(
    const RealAlgebraic& v1, const RealAlgebraic& v2) {
    RealField f = common_field(v1, v2);
    RealAlgebraic a = v1.embedded_into(f), b = v2.embedded_into(f);
    QMat m(f.dim(), QVec(2, Rational(0)));
    for (std::size_t k = 0; k < f.dim(); ++k) {
        m[k][0] = a.coords()[k];
        m[k][1] = b.coords()[k];
    }
    QMat ker = linalg::kernel(std::move(m), 2);
    if (ker.empty()) return std::nullopt;
    if (ker.size() > 1) throw DomainError("both basis parts vanish");
    ZVec v = linalg::primitive(ker[0]);
    return std::make_pair(v[0], v[1]);
}

// Is w in the lattice Z e1 + Z e2? (exact)
inline bool lattice_member(const ExactComplex& w, const ExactComplex& e1, const ExactComplex& e2) {
    RealField f = RealField::merged(w.field(), RealField::merged(e1.field(), e2.field()));
    ExactComplex ww = w.embedded_into(f), a = e1.embedded_into(f), b = e2.embedded_into(f);
    std::size_t d = f.dim();
    QMat m(2 * d, QVec(2, Rational(0)));
    QVec rhs(2 * d, Rational(0));
    for (std::size_t k = 0; k < d; ++k) {
        m[k][0] = a.re().coords()[k];
        m[k][1] = b.re().coords()[k];
        rhs[k] = ww.re().coords()[k];
        m[d + k][0] = a.im().coords()[k];
        m[d + k][1] = b.im().coords()[k];
        rhs[d + k] = ww.im().coords()[k];
    }
    QVec x;
    if (!linalg::solve(std::move(m), std::move(rhs), x)) return false;
    return x[0].get_den() == 1 && x[1].get_den() == 1;
}

} // namespace detail

/**
 * The twin lattice i*L1 + i*L2 built from the real and imaginary
 * sublattices L1 = L meet R, L2 = L meet iR of a conjugation-stable exact
 * lattice. Rejects lattices that are not stable or whose axis sublattices
 * do not both have rank 1.
 */
inline Lattice complex_twin(const Lattice& L) {
    if (!L.is_exact()) throw DomainError("complex_twin needs an exact basis");
    const ExactComplex& e1 = L.exact1();
    const ExactComplex& e2 = L.exact2();
    if (!detail::lattice_member(conjugate(e1), e1, e2) ||
        !detail::lattice_member(conjugate(e2), e1, e2))
        throw DomainError("lattice is not stable under conjugation");

    auto real_rel = detail::primitive_relation(e1.im(), e2.im());
    auto imag_rel = detail::primitive_relation(e1.re(), e2.re());
    if (!real_rel || !imag_rel)
        throw DomainError("axis sublattices do not both have rank 1");

    ExactComplex gen_real = ExactComplex(Rational(real_rel->first)) * e1 +
                            ExactComplex(Rational(real_rel->second)) * e2;
    ExactComplex gen_imag = ExactComplex(Rational(imag_rel->first)) * e1 +
                            ExactComplex(Rational(imag_rel->second)) * e2;
    ExactComplex i = ExactComplex::i_unit();
    return Lattice::from_exact(i * gen_real, i * gen_imag);
}

// ---------------------------------------------------------------------------
// Per-factor restriction-of-scalars profiles
// ---------------------------------------------------------------------------

struct RestrictionProfile {
    bool simple = false;
    std::string structure;      // e.g. "Gm x S", "E' x E'", "Simple"
    std::string endomorphisms;  // e.g. "Z x Z", "Mat2(Z)", "Z[sqrt6]"
};

inline RestrictionProfile restriction_profile_gm() {
    return {false, "Gm x S", "Z x Z"};
}

inline RestrictionProfile restriction_profile_elliptic(const ExactComplex& tau_in) {
    ExactComplex tau = normalize_to_upper(tau_in);
    if (is_quadratic_irrational(tau))
        return {false, "E' x E'", "Mat2(Z)"};
    RestrictionVerdict v = weil_restriction_simple(tau);
    if (v.splits)
        return {false, "E' x E'_[i]", "Z x Z"};
    IsogenyModule mod = hom_module(tau, conjugate_curve_tau(tau));
    if (mod.rank() == 1) {
        mpz_class deg = abs(IsogenyModule::degree(mod.generators[0]));
        return {true, "Simple", "Z[sqrt" + deg.get_str() + "]"};
    }
    return {true, "Simple", "Z"};
}

} // namespace realdescent
