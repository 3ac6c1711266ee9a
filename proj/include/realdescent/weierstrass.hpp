#pragma once

#include <vector>

#include "realdescent/lattice.hpp"

namespace realdescent {

struct LatticeInvariants {
    BigComplex g2;
    BigComplex g3;
    BigComplex discriminant;
    BigComplex j;
    BigComplex eta1;
    BigComplex eta2;
};

/**
 * Evaluation engine for one (lattice, precision) pair.
 *
 * g2, g3 come from Eisenstein series in Lambert form on the reduced basis,
 * where the nome satisfies |q| <= e^{-pi sqrt3}; see the note at eisenstein_().
 * wp/zeta/sigma use the Laurent expansions about 0 after reducing z into the
 * centered fundamental cell, with argument halving until |z| <= 0.35|l1| and
 * duplication formulas on the way back up.
 */
class WeierstrassEngine {
public:
    WeierstrassEngine(const Lattice& lattice, const PrecisionContext& ctx)
        : ctx_(ctx), wp_(ctx.prec_bits() + 96) {
        Lattice red = reduce_basis(lattice);
        l1_ = red.lambda1(wp_);
        l2_ = red.lambda2(wp_);
        b1_ = lattice.lambda1(wp_);
        b2_ = lattice.lambda2(wp_);
        tail_ = ctx.series_tail_target();
        abs_l1_ = l1_.abs();
        eisenstein_();
        coeffs_.assign(2, BigComplex(wp_)); // c[0], c[1] unused
        coeffs_.push_back(g2_ / 20);
        coeffs_.push_back(g3_ / 28);
    }

    const BigComplex& g2() const { return g2_; }
    const BigComplex& g3() const { return g3_; }

    // Quasi-periods of the lattice's own (normalized) basis vectors.
    const BigComplex& eta1() { ensure_eta_(); return eta1_; }
    const BigComplex& eta2() { ensure_eta_(); return eta2_; }

    // eta(lambda) = 2 zeta(lambda/2). For lattice vectors the value is
    // assembled additively from the reduced-basis quasi-periods, so even
    // multiples (whose half-period lies on the lattice) are safe; other
    // arguments evaluate the zeta route directly.
    BigComplex quasi_period(const BigComplex& lambda) {
        auto [rem, m, n] = reduce_z_(lambda);
        if (rem.abs() < BigFloat::pow10(-ctx_.decimal_digits(), wp_) * abs_l1_ && (m != 0 || n != 0)) {
            ensure_eta_red_();
            return BigComplex(BigFloat(m, wp_), BigFloat(wp_)) * eta_red1_ +
                   BigComplex(BigFloat(n, wp_), BigFloat(wp_)) * eta_red2_;
        }
        return 2 * raw_(lambda / 2).z;
    }

    BigComplex wp(const BigComplex& z) {
        auto [z0, m, n] = reduce_z_(z);
        pole_check_(z0);
        return raw_(z0).p;
    }

    BigComplex wp_prime(const BigComplex& z) {
        auto [z0, m, n] = reduce_z_(z);
        pole_check_(z0);
        return raw_(z0).dp;
    }

    BigComplex zeta(const BigComplex& z) {
        auto [z0, m, n] = reduce_z_(z);
        pole_check_(z0);
        BigComplex v = raw_(z0).z;
        if (m != 0 || n != 0) {
            ensure_eta_red_();
            v += BigComplex(BigFloat(m, wp_), BigFloat(wp_)) * eta_red1_ +
                 BigComplex(BigFloat(n, wp_), BigFloat(wp_)) * eta_red2_;
        }
        return v;
    }

    BigComplex sigma(const BigComplex& z) {
        auto [z0, m, n] = reduce_z_(z);
        if (z0.is_zero()) return BigComplex(wp_); // sigma vanishes on the lattice
        BigComplex s = raw_(z0).s;
        if (m == 0 && n == 0) return s;
        ensure_eta_red_();
        // sigma(z0 + L) = eps * exp(eta(L)(z0 + L/2)) * sigma(z0),
        // eps = -1 unless L in 2*Lattice.
        BigComplex lam = BigComplex(BigFloat(m, wp_), BigFloat(wp_)) * l1_ +
                         BigComplex(BigFloat(n, wp_), BigFloat(wp_)) * l2_;
        BigComplex eta = BigComplex(BigFloat(m, wp_), BigFloat(wp_)) * eta_red1_ +
                         BigComplex(BigFloat(n, wp_), BigFloat(wp_)) * eta_red2_;
        BigComplex factor = (eta * (z0 + lam / 2)).exp();
        bool even = (m % 2 == 0) && (n % 2 == 0);
        if (!even) factor = -factor;
        return factor * s;
    }

    LatticeInvariants invariants() {
        ensure_eta_();
        BigComplex disc = g2_.pow_ui(3) - 27 * g3_ * g3_;
        BigFloat scale = g2_.abs_sq() * g2_.abs() + BigFloat(1, wp_);
        if (disc.abs() < tail_ * scale)
            throw DegenerateLatticeError("discriminant vanishes within tolerance");
        BigComplex j = 1728 * g2_.pow_ui(3) / disc;
        return LatticeInvariants{g2_, g3_, disc, j, eta1_, eta2_};
    }

    // |eta(a) l2 - eta(b) l1 - 2 pi i| for the given basis vectors (no
    // re-orientation), used both as control and as negative control.
    BigFloat legendre_residual_for(const BigComplex& a, const BigComplex& b) {
        BigComplex ea = quasi_period(a);
        BigComplex eb = quasi_period(b);
        BigComplex two_pi_i(BigFloat(wp_), 2 * BigFloat::pi(wp_));
        return (ea * b - eb * a - two_pi_i).abs();
    }

    BigFloat legendre_residual() { return legendre_residual_for(b1_, b2_); }

    mpfr_prec_t working_prec() const { return wp_; }
    const BigComplex& basis1() const { return b1_; }
    const BigComplex& basis2() const { return b2_; }
    const BigComplex& reduced1() const { return l1_; }
    const BigComplex& reduced2() const { return l2_; }

    // Distance from z to the nearest lattice point, after reduction.
    BigFloat distance_to_lattice(const BigComplex& z) {
        auto [z0, m, n] = reduce_z_(z);
        BigFloat best = z0.abs();
        for (int dm = -1; dm <= 1; ++dm)
            for (int dn = -1; dn <= 1; ++dn) {
                if (dm == 0 && dn == 0) continue;
                BigComplex corner = BigComplex(BigFloat(dm, wp_), BigFloat(wp_)) * l1_ +
                                    BigComplex(BigFloat(dn, wp_), BigFloat(wp_)) * l2_;
                BigFloat d = (z0 - corner).abs();
                if (d < best) best = d;
            }
        return best;
    }

    BigFloat pole_tolerance() const {
        return BigFloat::pow10(-(ctx_.decimal_digits() / 2), wp_) * abs_l1_;
    }

private:
    struct Values {
        BigComplex p, dp, z, s;
    };

    void eisenstein_() {
        // g2 = (4 pi^4/3) E4(q) / l1^4, g3 = (8 pi^6/27) E6(q) / l1^6 with
        // q = e^{2 pi i l2/l1}. On a reduced basis Im(l2/l1) >= sqrt3/2, so
        // |q| <= e^{-pi sqrt3} ~= 0.0043 and the Lambert sums gain two
        // digits per term. (Direct summation of the defining lattice sums
        // cannot reach the tail targets: the tail only decays like R^-2.)
        BigComplex tau = l2_ / l1_;
        BigFloat two_pi = 2 * BigFloat::pi(wp_);
        BigComplex q = BigComplex(-two_pi * tau.im(), two_pi * tau.re()).exp();
        BigComplex e4(1, wp_), e6(1, wp_);
        BigComplex qn(1, wp_);
        BigComplex one(1, wp_);
        BigFloat stop = tail_.ldexp(-30);
        for (long n = 1; n < 20000; ++n) {
            qn *= q;
            BigComplex base = qn / (one - qn);
            BigFloat n2(n * n, wp_);
            BigComplex t4 = (n2 * BigFloat(n, wp_)) * base;
            BigComplex t6 = (n2 * n2 * BigFloat(n, wp_)) * base;
            e4 += 240 * t4;
            e6 -= 504 * t6;
            if (n > 3 && t6.abs() < stop && t4.abs() < stop) break;
        }
        BigFloat pi = BigFloat::pi(wp_);
        BigFloat pi4 = pi * pi * pi * pi;
        BigComplex l1_4 = l1_.pow_ui(4);
        g2_ = (4 * pi4 / 3) * e4 / l1_4;
        g3_ = (8 * pi4 * pi * pi / 27) * e6 / (l1_4 * l1_ * l1_);
    }

    void ensure_eta_() {
        if (eta_ready_) return;
        eta1_ = quasi_period(b1_);
        eta2_ = quasi_period(b2_);
        eta_ready_ = true;
    }

    // Quasi-periods of the reduced basis via the half-period zeta values
    // directly (half-periods of basis vectors never lie on the lattice).
    void ensure_eta_red_() {
        if (eta_red_ready_) return;
        eta_red1_ = 2 * raw_(l1_ / 2).z;
        eta_red2_ = 2 * raw_(l2_ / 2).z;
        eta_red_ready_ = true;
    }

    // z = z0 + m l1 + n l2 with cell coordinates in [-1/2, 1/2).
    std::tuple<BigComplex, long, long> reduce_z_(const BigComplex& z) const {
        BigComplex w = z / l1_;
        BigComplex tau = l2_ / l1_;
        BigFloat b = w.im() / tau.im();
        BigFloat a = w.re() - b * tau.re();
        auto floor_half = [&](const BigFloat& x) {
            BigFloat t(x + BigFloat(0.5, wp_));
            mpfr_t f;
            mpfr_init2(f, wp_);
            mpfr_floor(f, t.raw());
            mpz_class out;
            mpfr_get_z(out.get_mpz_t(), f, MPFR_RNDN);
            mpfr_clear(f);
            return out;
        };
        mpz_class nz = floor_half(b);
        mpz_class mz = floor_half(a);
        if (!nz.fits_slong_p() || !mz.fits_slong_p())
            throw DomainError("z is astronomically far from the fundamental cell");
        long mm = mz.get_si(), nn = nz.get_si();
        BigComplex z0 = z - BigComplex(BigFloat(mm, wp_), BigFloat(wp_)) * l1_ -
                        BigComplex(BigFloat(nn, wp_), BigFloat(wp_)) * l2_;
        return {z0, mm, nn};
    }

    void pole_check_(const BigComplex& z0) {
        BigFloat best = z0.abs();
        for (int dm = -1; dm <= 1; ++dm)
            for (int dn = -1; dn <= 1; ++dn) {
                if (dm == 0 && dn == 0) continue;
                BigComplex corner = BigComplex(BigFloat(dm, wp_), BigFloat(wp_)) * l1_ +
                                    BigComplex(BigFloat(dn, wp_), BigFloat(wp_)) * l2_;
                BigFloat d = (z0 - corner).abs();
                if (d < best) best = d;
            }
        if (best < pole_tolerance()) throw PoleError("z within pole tolerance of a lattice point");
    }

    const BigComplex& coeff_(std::size_t k) {
        while (coeffs_.size() <= k) {
            std::size_t kk = coeffs_.size();
            BigComplex acc(wp_);
            for (std::size_t m = 2; m + 2 <= kk; ++m) acc += coeffs_[m] * coeffs_[kk - m];
            BigFloat denom(static_cast<long>((2 * kk + 1) * (kk - 3)), wp_);
            coeffs_.push_back((3 * acc) / denom);
        }
        return coeffs_[k];
    }

    // Laurent series evaluation at small w (|w| <= 0.35 |l1|) followed by
    // doubling back to the requested argument.
    Values raw_(const BigComplex& z) {
        BigFloat az = z.abs();
        if (az.is_zero()) throw PoleError("evaluation at the origin");
        long halvings = 0;
        BigFloat radius = BigFloat(0.35, wp_) * abs_l1_;
        BigFloat cur = az;
        while (cur > radius && halvings < 600) {
            cur = cur / 2;
            ++halvings;
        }
        BigComplex w = z.ldexp(-halvings);

        BigComplex w2 = w * w;
        BigComplex p = w.inverse() * w.inverse();    // 1/w^2
        BigComplex dp = -2 * (p * w.inverse());      // -2/w^3
        BigComplex zz = w.inverse();                 // 1/w
        BigComplex slog(wp_);                        // log(sigma/w)
        BigComplex pw = w2;                          // w^{2k-2} starting k=2
        BigFloat stop = tail_.ldexp(-14);
        int below = 0;
        for (std::size_t k = 2; k < 4000; ++k) {
            const BigComplex& c = coeff_(k);
            BigComplex term = c * pw;                // c_k w^{2k-2}
            p += term;
            dp += BigFloat(static_cast<long>(2 * k - 2), wp_) * (term / w);
            BigComplex tw = term * w;                // c_k w^{2k-1}
            zz -= tw / static_cast<long>(2 * k - 1);
            slog -= (tw * w) / static_cast<long>(2 * k * (2 * k - 1));
            pw *= w2;
            if (term.abs() < stop && tw.abs() < stop) {
                if (++below >= 2) break;
            } else {
                below = 0;
            }
            if (k + 1 == 4000) throw PrecisionError("Laurent series did not converge");
        }
        BigComplex s = w * slog.exp();

        for (long h = 0; h < halvings; ++h) {
            BigComplex ddp = 6 * (p * p) - g2_ / 2;      // wp''
            BigComplex dddp = 12 * (p * dp);             // wp'''
            BigComplex q = ddp / (2 * dp);
            BigComplex qprime = (dddp * dp - ddp * ddp) / (2 * (dp * dp));
            BigComplex p2 = -2 * p + q * q;
            BigComplex dp2 = -dp + q * qprime;
            BigComplex z2 = 2 * zz + q;
            BigComplex s2 = -(dp * (s.pow_ui(4)));
            p = p2;
            dp = dp2;
            zz = z2;
            s = s2;
        }
        return Values{p, dp, zz, s};
    }

    PrecisionContext ctx_;
    mpfr_prec_t wp_;
    BigComplex l1_, l2_; // reduced basis
    BigComplex b1_, b2_; // lattice's own basis (post-orientation)
    BigComplex g2_, g3_;
    BigComplex eta1_, eta2_;
    BigComplex eta_red1_, eta_red2_;
    bool eta_ready_ = false;
    bool eta_red_ready_ = false;
    std::vector<BigComplex> coeffs_;
    BigFloat tail_;
    BigFloat abs_l1_;
};

inline LatticeInvariants invariants(const Lattice& L, const PrecisionContext& ctx) {
    return WeierstrassEngine(L, ctx).invariants();
}

inline BigComplex wp(const BigComplex& z, const Lattice& L, const PrecisionContext& ctx) {
    return WeierstrassEngine(L, ctx).wp(z);
}

inline BigComplex wp_prime(const BigComplex& z, const Lattice& L, const PrecisionContext& ctx) {
    return WeierstrassEngine(L, ctx).wp_prime(z);
}

inline BigComplex zeta_w(const BigComplex& z, const Lattice& L, const PrecisionContext& ctx) {
    return WeierstrassEngine(L, ctx).zeta(z);
}

inline BigComplex sigma_w(const BigComplex& z, const Lattice& L, const PrecisionContext& ctx) {
    return WeierstrassEngine(L, ctx).sigma(z);
}

inline BigFloat legendre_residual(const Lattice& L, const PrecisionContext& ctx) {
    return WeierstrassEngine(L, ctx).legendre_residual();
}

} // namespace realdescent
