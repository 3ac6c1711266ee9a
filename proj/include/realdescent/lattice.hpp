#pragma once

#include <optional>
#include <utility>

#include "realdescent/exact.hpp"

namespace realdescent {

namespace detail {

// floor(x + 1/2) for exact input: numeric candidate, then exact bracket check
// x - t in [-1/2, 1/2).
inline mpz_class round_half_up_exact(const RealAlgebraic& x) {
    mpz_class t = x.to_big(128).round_to_mpz();
    RealAlgebraic half(make_rational(1, 2));
    for (int tries = 0; tries < 8; ++tries) {
        RealAlgebraic d = x - RealAlgebraic(Rational(t));
        if ((d + half).sign() >= 0 && (d - half).sign() < 0) return t;
        t += ((d + half).sign() < 0) ? -1 : 1;
    }
    throw PrecisionError("exact rounding did not stabilize");
}

} // namespace detail

/**
 * Oriented rank-2 lattice Z l1 + Z l2 in C, with Im(l2/l1) > 0 enforced at
 * construction (l2 is negated when needed). Carries an exact basis when
 * built from ExactComplex data, in which case all reduction decisions are
 * made exactly.
 */
class Lattice {
public:
    static Lattice from_exact(const ExactComplex& l1, const ExactComplex& l2,
                              std::optional<ExactComplex> source_tau = std::nullopt) {
        Lattice L;
        L.exact_ = true;
        RealField f = RealField::merged(l1.field(), l2.field());
        L.e1_ = l1.embedded_into(f);
        L.e2_ = l2.embedded_into(f);
        L.source_tau_ = std::move(source_tau);
        int s = (L.e2_ * conjugate(L.e1_)).im().sign();
        if (s == 0) throw DegenerateLatticeError("basis is R-linearly dependent");
        if (s < 0) L.e2_ = -L.e2_;
        return L;
    }

    // Z + tau Z; tau is replaced by -tau when Im tau < 0 (same lattice).
    static Lattice from_tau_exact(const ExactComplex& tau) {
        if (tau.is_real()) throw DegenerateLatticeError("tau is real");
        ExactComplex t = tau.im().sign() > 0 ? tau : -tau;
        return from_exact(ExactComplex(1L).embedded_into(t.field()), t, t);
    }

    static Lattice from_numeric(const BigComplex& l1, const BigComplex& l2) {
        Lattice L;
        L.exact_ = false;
        L.n1_ = l1;
        L.n2_ = l2;
        BigFloat s = (l2 * l1.conj()).im();
        BigFloat scale = l1.abs() * l2.abs();
        if (s.abs() <= scale.ldexp(-static_cast<long>(l1.prec()) + 8))
            throw DegenerateLatticeError("basis is numerically R-linearly dependent");
        if (s.sign() < 0) L.n2_ = -L.n2_;
        return L;
    }

    static Lattice from_tau_numeric(const BigComplex& tau) {
        BigComplex one(1, tau.prec());
        if (tau.im().sign() == 0) throw DegenerateLatticeError("tau is real");
        return from_numeric(one, tau.im().sign() > 0 ? tau : -tau);
    }

    bool is_exact() const { return exact_; }
    const ExactComplex& exact1() const { require_exact(); return e1_; }
    const ExactComplex& exact2() const { require_exact(); return e2_; }
    const std::optional<ExactComplex>& source_tau() const { return source_tau_; }

    BigComplex lambda1(mpfr_prec_t prec) const {
        if (exact_) {
            return BigComplex(e1_.re().to_big(prec), e1_.im().to_big(prec));
        }
        return n1_;
    }
    BigComplex lambda2(mpfr_prec_t prec) const {
        if (exact_) {
            return BigComplex(e2_.re().to_big(prec), e2_.im().to_big(prec));
        }
        return n2_;
    }

private:
    void require_exact() const {
        if (!exact_) throw DomainError("lattice has no exact basis");
    }

    bool exact_ = false;
    ExactComplex e1_, e2_;
    BigComplex n1_, n2_;
    std::optional<ExactComplex> source_tau_;
};

/**
 * Gauss reduction: same lattice, |l1| minimal, |Re(l2/l1)| <= 1/2 and
 * |l2/l1| >= 1, orientation preserved.
 */
inline Lattice reduce_basis(const Lattice& L) {
    if (L.is_exact()) {
        ExactComplex a = L.exact1(), b = L.exact2();
        for (int iter = 0; iter < 4096; ++iter) {
            RealAlgebraic n = abs_squared(a);
            RealAlgebraic x = (b * conjugate(a)).re() / n;
            mpz_class t = detail::round_half_up_exact(x);
            if (t != 0) b = b - ExactComplex(Rational(t)) * a;
            if ((abs_squared(b) - abs_squared(a)).sign() < 0) {
                ExactComplex tmp = a;
                a = b;
                b = -tmp; // swap keeps the orientation
            } else {
                return Lattice::from_exact(a, b, L.source_tau());
            }
        }
        throw PrecisionError("lattice reduction did not terminate");
    }
    mpfr_prec_t p = L.lambda1(64).prec() > L.lambda2(64).prec() ? L.lambda1(64).prec() : L.lambda2(64).prec();
    BigComplex a = L.lambda1(p), b = L.lambda2(p);
    for (int iter = 0; iter < 4096; ++iter) {
        BigFloat x = (b * a.conj()).re() / a.abs_sq();
        mpz_class t = x.round_to_mpz();
        if (t != 0) {
            BigFloat tf(p);
            mpfr_set_z(tf.raw(), t.get_mpz_t(), MPFR_RNDN);
            b = b - tf * a;
        }
        if (b.abs_sq() < a.abs_sq()) {
            BigComplex tmp = a;
            a = b;
            b = -tmp;
        } else {
            return Lattice::from_numeric(a, b);
        }
    }
    throw PrecisionError("lattice reduction did not terminate");
}

/// Basis conjugated entrywise, then re-oriented: the lattice of the
/// conjugate curve (invariants are the conjugated invariants).
inline Lattice conjugate_lattice(const Lattice& L) {
    if (L.is_exact()) {
        std::optional<ExactComplex> st;
        if (L.source_tau()) {
            ExactComplex c = -conjugate(*L.source_tau());
            st = c; // Im is preserved, so this stays in H
        }
        return Lattice::from_exact(conjugate(L.exact1()), conjugate(L.exact2()), st);
    }
    mpfr_prec_t p = L.lambda1(64).prec();
    return Lattice::from_numeric(L.lambda1(p).conj(), L.lambda2(p).conj());
}

} // namespace realdescent
