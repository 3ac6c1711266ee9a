#pragma once

#include <array>
#include <utility>

#include "realdescent/weierstrass.hpp"

namespace realdescent {

/**
 * Standard uniformizations of the extensions of an elliptic curve by Ga
 * (parameter t) and by Gm (parameter omega, a non-lattice point), as points
 * of P^5. Coordinate functions:
 *
 *   Ga:  [wp(z2) : wp'(z2) : 1 : f_t3 : f_t2 : f_t1]
 *        f_t1 = z1 + t zeta(z2)
 *        f_t2 = wp'(z2) f_t1 + 2 t wp(z2)^2
 *        f_t3 = wp(z2) f_t1 + (t/2) wp'(z2)
 *
 *   Gm:  [wp(z2) : wp'(z2) : 1 : f_w3 : f_w2 : f_w1]
 *        f_w1 = sigma^3(z2-w) e^{3 zeta(w) z2 + z1} / (sigma^3(z2) sigma^3(w))
 *        f_w2 = wp'(z2-w) f_w1
 *        f_w3 = wp(z2-w) f_w1
 *
 * The kernel generators below are the actual kernel of these maps, derived
 * from the quasi-period laws zeta(z+l) = zeta(z) + eta(l) and
 * sigma(z+l) = eps e^{eta(l)(z+l/2)} sigma(z):
 *
 *   Ga:  (-t eta(l), l)
 *   Gm:  (3(eta(l) w - zeta(w) l), l)
 *
 * (A posteriori check: with these pairs the periodicity residual vanishes
 * to working precision; with either sign flipped it is of order |eta|.)
 */
struct ExtensionSpec {
    enum class Kind { Ga, Gm };
    Kind kind;
    BigComplex param; // t for Ga, omega for Gm
    Lattice base;

    static ExtensionSpec ga(BigComplex t, Lattice base) {
        return ExtensionSpec{Kind::Ga, std::move(t), std::move(base)};
    }
    static ExtensionSpec gm(BigComplex omega, Lattice base) {
        return ExtensionSpec{Kind::Gm, std::move(omega), std::move(base)};
    }
};

struct ProjectivePoint5 {
    std::array<BigComplex, 6> coord;

    const BigComplex& operator[](std::size_t i) const { return coord[i]; }
};

/// Scale-free comparison: normalize by the first point's largest-modulus
/// coordinate and take the max difference over the remaining five.
inline BigFloat projective_distance(const ProjectivePoint5& a, const ProjectivePoint5& b) {
    std::size_t imax = 0;
    for (std::size_t i = 1; i < 6; ++i)
        if (a.coord[i].abs() > a.coord[imax].abs()) imax = i;
    if (a.coord[imax].is_zero() || b.coord[imax].is_zero())
        throw DomainError("projective point has vanishing pivot coordinate");
    BigFloat d(a.coord[0].prec());
    for (std::size_t i = 0; i < 6; ++i) {
        if (i == imax) continue;
        BigFloat di = (a.coord[i] / a.coord[imax] - b.coord[i] / b.coord[imax]).abs();
        if (di > d) d = di;
    }
    return d;
}

namespace detail {

inline void check_gm_param(WeierstrassEngine& eng, const BigComplex& omega) {
    if (eng.distance_to_lattice(omega) < eng.pole_tolerance())
        throw PoleError("omega lies on the lattice");
}

} // namespace detail

inline ProjectivePoint5 exp_ext(const ExtensionSpec& spec, const BigComplex& z1,
                                const BigComplex& z2, const PrecisionContext& ctx) {
    WeierstrassEngine eng(spec.base, ctx);
    if (eng.distance_to_lattice(z2) < eng.pole_tolerance())
        throw PoleError("wp(z2): z2 within pole tolerance of the lattice");

    BigComplex P = eng.wp(z2);
    BigComplex dP = eng.wp_prime(z2);
    BigComplex one(1, eng.working_prec());

    if (spec.kind == ExtensionSpec::Kind::Ga) {
        const BigComplex& t = spec.param;
        BigComplex f1 = z1 + t * eng.zeta(z2);
        BigComplex f2 = dP * f1 + 2 * (t * (P * P));
        BigComplex f3 = P * f1 + (t / 2) * dP;
        return ProjectivePoint5{{P, dP, one, f3, f2, f1}};
    }

    const BigComplex& om = spec.param;
    detail::check_gm_param(eng, om);
    BigComplex u = z2 - om;
    if (eng.distance_to_lattice(u) < eng.pole_tolerance())
        throw PoleError("f_w3: z2 congruent to omega modulo the lattice");
    BigComplex f1 = eng.sigma(u).pow_ui(3) * ((3 * (eng.zeta(om) * z2) + z1).exp()) /
                    (eng.sigma(z2).pow_ui(3) * eng.sigma(om).pow_ui(3));
    BigComplex f2 = eng.wp_prime(u) * f1;
    BigComplex f3 = eng.wp(u) * f1;
    return ProjectivePoint5{{P, dP, one, f3, f2, f1}};
}

/// The two kernel generators of exp_ext in C^2, one per basis vector.
inline std::array<std::pair<BigComplex, BigComplex>, 2> kernel_generators(
    const ExtensionSpec& spec, const PrecisionContext& ctx) {
    WeierstrassEngine eng(spec.base, ctx);
    mpfr_prec_t p = eng.working_prec();
    std::array<BigComplex, 2> lambda = {spec.base.lambda1(p), spec.base.lambda2(p)};
    std::array<BigComplex, 2> eta = {eng.eta1(), eng.eta2()};
    std::array<std::pair<BigComplex, BigComplex>, 2> out;
    if (spec.kind == ExtensionSpec::Kind::Ga) {
        for (int j = 0; j < 2; ++j)
            out[j] = {-(spec.param * eta[j]), lambda[j]};
    } else {
        detail::check_gm_param(eng, spec.param);
        BigComplex zom = eng.zeta(spec.param);
        for (int j = 0; j < 2; ++j)
            out[j] = {3 * (eta[j] * spec.param - zom * lambda[j]), lambda[j]};
    }
    return out;
}

/// Max projective distance between exp_ext at z and at z + generator.
inline BigFloat periodicity_residual(const ExtensionSpec& spec, const BigComplex& z1,
                                     const BigComplex& z2, const PrecisionContext& ctx) {
    auto gens = kernel_generators(spec, ctx);
    ProjectivePoint5 base = exp_ext(spec, z1, z2, ctx);
    BigFloat res(ctx.prec_bits());
    for (const auto& [x, lam] : gens) {
        ProjectivePoint5 shifted = exp_ext(spec, z1 + x, z2 + lam, ctx);
        BigFloat d = projective_distance(base, shifted);
        if (d > res) res = d;
    }
    return res;
}

} // namespace realdescent
