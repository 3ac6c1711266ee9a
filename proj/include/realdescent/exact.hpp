#pragma once

#include <optional>
#include <string>
#include <vector>

#include "realdescent/bigcomplex.hpp"
#include "realdescent/errors.hpp"
#include "realdescent/linalg.hpp"
#include "realdescent/realfield.hpp"

namespace realdescent {

/**
 * Exact complex number z = re + i*im with both parts in one conjugation-stable
 * real multiquadratic field. i is the distinguished imaginary unit and never
 * a radicand; every sqrt generator embeds as the positive real root.
 */
class ExactComplex {
public:
    ExactComplex() = default;

    ExactComplex(RealAlgebraic re, RealAlgebraic im) {
        RealField f = common_field(re, im);
        re_ = re.embedded_into(f);
        im_ = im.embedded_into(f);
    }

    explicit ExactComplex(const Rational& q) : re_(q), im_(Rational(0)) {}
    explicit ExactComplex(long n) : re_(n), im_(0) {}

    static ExactComplex i_unit() { return ExactComplex(RealAlgebraic(0L), RealAlgebraic(1L)); }

    const RealAlgebraic& re() const { return re_; }
    const RealAlgebraic& im() const { return im_; }
    const RealField& field() const { return re_.field(); }

    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
    bool is_real() const { return im_.is_zero(); }

    ExactComplex embedded_into(const RealField& f) const {
        return ExactComplex(re_.embedded_into(f), im_.embedded_into(f));
    }

    ExactComplex operator-() const { return ExactComplex(-re_, -im_); }

    friend ExactComplex operator+(const ExactComplex& a, const ExactComplex& b) {
        return ExactComplex(a.re_ + b.re_, a.im_ + b.im_);
    }
    friend ExactComplex operator-(const ExactComplex& a, const ExactComplex& b) {
        return ExactComplex(a.re_ - b.re_, a.im_ - b.im_);
    }
    friend ExactComplex operator*(const ExactComplex& a, const ExactComplex& b) {
        return ExactComplex(a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_);
    }
    friend ExactComplex operator*(const Rational& q, const ExactComplex& a) {
        return ExactComplex(q * a.re_, q * a.im_);
    }
    friend ExactComplex operator/(const ExactComplex& a, const ExactComplex& b) {
        if (b.is_zero()) throw DomainError("division by zero");
        RealAlgebraic n = b.re_ * b.re_ + b.im_ * b.im_;
        RealAlgebraic inv = n.inverse();
        ExactComplex num = a * b.conjugate_();
        return ExactComplex(num.re_ * inv, num.im_ * inv);
    }

    bool operator==(const ExactComplex& o) const { return re_ == o.re_ && im_ == o.im_; }
    bool operator!=(const ExactComplex& o) const { return !(*this == o); }

    BigComplex to_big(const PrecisionContext& ctx) const {
        mpfr_prec_t p = ctx.prec_bits();
        return BigComplex(re_.to_big(p), im_.to_big(p));
    }

    std::string str() const {
        return "(" + re_.str() + ") + (" + im_.str() + ")i";
    }

private:
    ExactComplex conjugate_() const { return ExactComplex(re_, -im_); }

    RealAlgebraic re_;
    RealAlgebraic im_;

    friend ExactComplex conjugate(const ExactComplex&);
};

/// Complex conjugation; involutive ring homomorphism on the stable field.
inline ExactComplex conjugate(const ExactComplex& z) { return z.conjugate_(); }

/// |z|^2 = re^2 + im^2, exact.
inline RealAlgebraic abs_squared(const ExactComplex& z) {
    return z.re() * z.re() + z.im() * z.im();
}

inline bool is_rational(const RealAlgebraic& x) { return x.is_rational(); }

/// Dimension over Q of the span of the given values (exact elimination).
inline std::size_t rank_over_Q(const std::vector<RealAlgebraic>& values) {
    if (values.empty()) return 0;
    const RealField& f = values[0].field();
    QMat m;
    for (const auto& v : values) {
        if (v.field() != f) throw FieldMismatchError("rank_over_Q: mixed fields");
        m.push_back(v.coords());
    }
    return linalg::rank(std::move(m));
}

/// r >= 0 with r^2 = x when x is the square of a rational, else nullopt.
inline std::optional<Rational> is_rational_square(const RealAlgebraic& x) {
    if (!x.is_rational()) return std::nullopt;
    Rational q = x.rational_part();
    if (q < 0) return std::nullopt;
    mpz_class num = q.get_num(), den = q.get_den();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
        return std::nullopt;
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    Rational r(rn, rd);
    r.canonicalize();
    return r;
}

/// Stack re/im coordinates of each value into one rational vector; the rank
/// of these joint vectors is the Q-dimension of the span inside C.
inline std::size_t rank_over_Q_joint(const std::vector<ExactComplex>& values) {
    if (values.empty()) return 0;
    RealField f = values[0].field();
    for (const auto& v : values) f = RealField::merged(f, v.field());
    QMat m;
    for (const auto& v : values) {
        ExactComplex w = v.embedded_into(f);
        QVec row = w.re().coords();
        const QVec& ic = w.im().coords();
        row.insert(row.end(), ic.begin(), ic.end());
        m.push_back(std::move(row));
    }
    return linalg::rank(std::move(m));
}

/**
 * Discriminant of the minimal quadratic of tau when {1, tau, tau^2} is
 * Q-linearly dependent (tau then generates an imaginary quadratic field),
 * nullopt when tau has degree > 2. tau must not be real.
 */
inline std::optional<mpz_class> is_quadratic_irrational(const ExactComplex& tau) {
    if (tau.is_real()) throw DomainError("is_quadratic_irrational: tau is real");
    ExactComplex tau2 = tau * tau;
    RealField f = RealField::merged(tau.field(), tau2.field());
    ExactComplex one = ExactComplex(1L).embedded_into(f);
    ExactComplex t1 = tau.embedded_into(f);
    ExactComplex t2 = tau2.embedded_into(f);
    // columns = the three numbers, rows = stacked re/im coordinates
    std::size_t d = f.dim();
    QMat m(2 * d, QVec(3, Rational(0)));
    const ExactComplex* zs[3] = {&one, &t1, &t2};
    for (std::size_t j = 0; j < 3; ++j) {
        for (std::size_t k = 0; k < d; ++k) {
            m[k][j] = zs[j]->re().coords()[k];
            m[d + k][j] = zs[j]->im().coords()[k];
        }
    }
    QMat ker = linalg::kernel(std::move(m), 3);
    if (ker.empty()) return std::nullopt;
    // kernel vector (c, b, a) for c*1 + b*tau + a*tau^2 = 0
    ZVec v = linalg::primitive(ker[0]);
    mpz_class a = v[2], b = v[1], c = v[0];
    if (a == 0) throw DomainError("degenerate quadratic for non-real tau");
    if (a < 0) { a = -a; b = -b; c = -c; }
    return b * b - 4 * a * c;
}

} // namespace realdescent
