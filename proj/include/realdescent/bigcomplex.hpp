#pragma once

#include <string>
#include <utility>

#include "realdescent/bigfloat.hpp"
#include "realdescent/errors.hpp"

namespace realdescent {

/**
 * Working-precision settings threaded explicitly through every numeric
 * evaluation. decimal_digits is the requested output accuracy; guard_digits
 * extra digits absorb rounding; series_tail_target is the absolute error
 * bound every series truncation must meet.
 */
class PrecisionContext {
public:
    explicit PrecisionContext(int decimal_digits, int guard_digits = 20,
                              long tail_exp10 = 0)
        : decimal_digits_(decimal_digits),
          guard_digits_(guard_digits),
          tail_exp10_(tail_exp10 != 0 ? tail_exp10 : -static_cast<long>(decimal_digits)) {
        if (decimal_digits_ < 15) throw DomainError("decimal_digits must be >= 15");
        if (guard_digits_ < 10) throw DomainError("guard_digits must be >= 10");
        if (tail_exp10_ >= 0) throw DomainError("series tail target must be < 1");
    }

    int decimal_digits() const { return decimal_digits_; }
    int guard_digits() const { return guard_digits_; }
    long tail_exp10() const { return tail_exp10_; }

    // Binary working precision: ceil((decimal+guard) * log2(10)).
    mpfr_prec_t prec_bits() const {
        return static_cast<mpfr_prec_t>((decimal_digits_ + guard_digits_) * 3.3219280948873623) + 1;
    }

    BigFloat series_tail_target() const { return BigFloat::pow10(tail_exp10_, prec_bits()); }

    PrecisionContext doubled() const {
        return PrecisionContext(2 * decimal_digits_, guard_digits_, 2 * tail_exp10_);
    }

private:
    int decimal_digits_;
    int guard_digits_;
    long tail_exp10_;
};

/// Complex number with arbitrary-precision parts. Operations that would
/// produce NaN or infinity throw instead of letting them escape.
class BigComplex {
public:
    BigComplex() = default;
    BigComplex(BigFloat re, BigFloat im) : re_(std::move(re)), im_(std::move(im)) {}
    explicit BigComplex(mpfr_prec_t prec) : re_(prec), im_(prec) {}
    BigComplex(long re, mpfr_prec_t prec) : re_(re, prec), im_(prec) {}

    static BigComplex i_unit(mpfr_prec_t prec) { return BigComplex(BigFloat(prec), BigFloat(1, prec)); }

    const BigFloat& re() const { return re_; }
    const BigFloat& im() const { return im_; }

    bool is_finite() const { return re_.is_finite() && im_.is_finite(); }
    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
    mpfr_prec_t prec() const { return re_.prec() > im_.prec() ? re_.prec() : im_.prec(); }

    BigComplex conj() const { return BigComplex(re_, -im_); }
    BigComplex operator-() const { return BigComplex(-re_, -im_); }

    friend BigComplex operator+(const BigComplex& a, const BigComplex& b) {
        return BigComplex(a.re_ + b.re_, a.im_ + b.im_);
    }
    friend BigComplex operator-(const BigComplex& a, const BigComplex& b) {
        return BigComplex(a.re_ - b.re_, a.im_ - b.im_);
    }
    friend BigComplex operator*(const BigComplex& a, const BigComplex& b) {
        return BigComplex(a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_);
    }
    friend BigComplex operator*(const BigFloat& a, const BigComplex& b) {
        return BigComplex(a * b.re_, a * b.im_);
    }
    friend BigComplex operator*(const BigComplex& a, const BigFloat& b) { return b * a; }
    friend BigComplex operator*(long a, const BigComplex& b) {
        return BigFloat(a, b.prec()) * b;
    }

    friend BigComplex operator/(const BigComplex& a, const BigComplex& b) {
        BigFloat d = b.abs_sq();
        if (d.is_zero()) throw DomainError("complex division by zero");
        BigComplex r((a.re_ * b.re_ + a.im_ * b.im_) / d, (a.im_ * b.re_ - a.re_ * b.im_) / d);
        r.check();
        return r;
    }
    friend BigComplex operator/(const BigComplex& a, long b) {
        BigFloat d(b, a.prec());
        return BigComplex(a.re_ / d, a.im_ / d);
    }
    friend BigComplex operator/(const BigComplex& a, const BigFloat& b) {
        return BigComplex(a.re_ / b, a.im_ / b);
    }

    BigComplex& operator+=(const BigComplex& o) { *this = *this + o; return *this; }
    BigComplex& operator-=(const BigComplex& o) { *this = *this - o; return *this; }
    BigComplex& operator*=(const BigComplex& o) { *this = *this * o; return *this; }
    BigComplex& operator/=(const BigComplex& o) { *this = *this / o; return *this; }

    BigFloat abs_sq() const { return re_ * re_ + im_ * im_; }

    BigFloat abs() const {
        BigFloat r(prec());
        mpfr_hypot(r.raw(), re_.raw(), im_.raw(), MPFR_RNDN);
        return r;
    }

    BigComplex inverse() const {
        BigComplex one(1, prec());
        return one / *this;
    }

    // e^z = e^x (cos y + i sin y)
    BigComplex exp() const {
        BigFloat ex = re_.exp();
        BigComplex r(ex * im_.cos(), ex * im_.sin());
        r.check();
        return r;
    }

    // principal branch
    BigComplex log() const {
        if (is_zero()) throw DomainError("log of zero");
        return BigComplex(abs().log(), BigFloat::atan2(im_, re_));
    }

    // principal n-th root
    BigComplex root(long n) const {
        return (log() / n).exp();
    }

    BigComplex pow_ui(unsigned long n) const {
        BigComplex acc(1, prec());
        BigComplex base = *this;
        while (n > 0) {
            if (n & 1) acc *= base;
            base *= base;
            n >>= 1;
        }
        return acc;
    }

    BigComplex ldexp(long e) const { return BigComplex(re_.ldexp(e), im_.ldexp(e)); }

    std::string str(int digits = 0) const {
        return re_.str(digits) + (im_.sign() < 0 ? " - " : " + ") + im_.abs().str(digits) + "i";
    }

private:
    void check() const {
        if (!is_finite()) throw DomainError("non-finite complex value");
    }

    BigFloat re_;
    BigFloat im_;
};

} // namespace realdescent
