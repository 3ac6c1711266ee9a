#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include "realdescent/errors.hpp"

namespace realdescent {

/**
 * Arbitrary-precision binary float, RAII wrapper over one mpfr_t.
 *
 * Every value carries its own precision; binary operations round to the
 * larger precision of the two operands (MPFR round-to-nearest).
 */
class BigFloat {
public:
    BigFloat() { mpfr_init2(v_, 64); mpfr_set_zero(v_, 1); }

    explicit BigFloat(mpfr_prec_t prec) {
        mpfr_init2(v_, clamp(prec));
        mpfr_set_zero(v_, 1);
    }

    BigFloat(int x, mpfr_prec_t prec) {
        mpfr_init2(v_, clamp(prec));
        mpfr_set_si(v_, x, MPFR_RNDN);
    }

    BigFloat(long x, mpfr_prec_t prec) {
        mpfr_init2(v_, clamp(prec));
        mpfr_set_si(v_, x, MPFR_RNDN);
    }

    BigFloat(double x, mpfr_prec_t prec) {
        mpfr_init2(v_, clamp(prec));
        mpfr_set_d(v_, x, MPFR_RNDN);
    }

    BigFloat(const mpq_class& q, mpfr_prec_t prec) {
        mpfr_init2(v_, clamp(prec));
        mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
    }

    BigFloat(const mpz_class& z, mpfr_prec_t prec) {
        mpfr_init2(v_, clamp(prec));
        mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN);
    }

    BigFloat(const BigFloat& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }

    BigFloat(BigFloat&& o) noexcept {
        mpfr_init2(v_, 64);
        mpfr_swap(v_, o.v_);
    }

    BigFloat& operator=(const BigFloat& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }

    BigFloat& operator=(BigFloat&& o) noexcept {
        if (this != &o) mpfr_swap(v_, o.v_);
        return *this;
    }

    ~BigFloat() { mpfr_clear(v_); }

    static BigFloat from_string(const std::string& s, mpfr_prec_t prec) {
        BigFloat r(prec);
        if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0)
            throw ParseError("not a decimal number: '" + s + "'");
        return r;
    }

    static BigFloat pi(mpfr_prec_t prec) {
        BigFloat r(prec);
        mpfr_const_pi(r.v_, MPFR_RNDN);
        return r;
    }

    // 10^e, exact exponent (e may be strongly negative).
    static BigFloat pow10(long e, mpfr_prec_t prec) {
        BigFloat r(prec);
        mpfr_set_si(r.v_, 10, MPFR_RNDN);
        mpfr_pow_si(r.v_, r.v_, e, MPFR_RNDN);
        return r;
    }

    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    const mpfr_t& raw() const { return v_; }
    mpfr_t& raw() { return v_; }

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    BigFloat operator-() const {
        BigFloat r(prec());
        mpfr_neg(r.v_, v_, MPFR_RNDN);
        return r;
    }

    friend BigFloat operator+(const BigFloat& a, const BigFloat& b) {
        BigFloat r(join(a, b));
        mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat operator-(const BigFloat& a, const BigFloat& b) {
        BigFloat r(join(a, b));
        mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat operator*(const BigFloat& a, const BigFloat& b) {
        BigFloat r(join(a, b));
        mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigFloat operator/(const BigFloat& a, const BigFloat& b) {
        BigFloat r(join(a, b));
        mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }

    BigFloat& operator+=(const BigFloat& o) { *this = *this + o; return *this; }
    BigFloat& operator-=(const BigFloat& o) { *this = *this - o; return *this; }
    BigFloat& operator*=(const BigFloat& o) { *this = *this * o; return *this; }
    BigFloat& operator/=(const BigFloat& o) { *this = *this / o; return *this; }

    friend BigFloat operator*(long a, const BigFloat& b) { return BigFloat(a, b.prec()) * b; }
    friend BigFloat operator*(const BigFloat& a, long b) { return a * BigFloat(b, a.prec()); }
    friend BigFloat operator/(const BigFloat& a, long b) { return a / BigFloat(b, a.prec()); }
    friend BigFloat operator+(const BigFloat& a, long b) { return a + BigFloat(b, a.prec()); }
    friend BigFloat operator-(const BigFloat& a, long b) { return a - BigFloat(b, a.prec()); }

    friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
    friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
    friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
    friend bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }
    friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) == 0; }

    BigFloat abs() const {
        BigFloat r(prec());
        mpfr_abs(r.v_, v_, MPFR_RNDN);
        return r;
    }

    BigFloat sqrt() const {
        BigFloat r(prec());
        mpfr_sqrt(r.v_, v_, MPFR_RNDN);
        return r;
    }

    BigFloat exp() const {
        BigFloat r(prec());
        mpfr_exp(r.v_, v_, MPFR_RNDN);
        return r;
    }

    BigFloat log() const {
        BigFloat r(prec());
        mpfr_log(r.v_, v_, MPFR_RNDN);
        return r;
    }

    BigFloat sin() const {
        BigFloat r(prec());
        mpfr_sin(r.v_, v_, MPFR_RNDN);
        return r;
    }

    BigFloat cos() const {
        BigFloat r(prec());
        mpfr_cos(r.v_, v_, MPFR_RNDN);
        return r;
    }

    static BigFloat atan2(const BigFloat& y, const BigFloat& x) {
        BigFloat r(y.prec() > x.prec() ? y.prec() : x.prec());
        mpfr_atan2(r.v_, y.v_, x.v_, MPFR_RNDN);
        return r;
    }

    // Nearest integer, ties away from zero.
    mpz_class round_to_mpz() const {
        mpfr_t t;
        mpfr_init2(t, prec());
        mpfr_round(t, v_);
        mpz_class z;
        mpfr_get_z(z.get_mpz_t(), t, MPFR_RNDN);
        mpfr_clear(t);
        return z;
    }

    long round_to_long() const {
        mpz_class z = round_to_mpz();
        if (!z.fits_slong_p()) throw DomainError("rounded value exceeds long range");
        return z.get_si();
    }

    // Multiply by 2^e (exact).
    BigFloat ldexp(long e) const {
        BigFloat r(*this);
        mpfr_mul_2si(r.v_, r.v_, e, MPFR_RNDN);
        return r;
    }

    std::string str(int digits = 0) const {
        if (digits <= 0) digits = static_cast<int>(std::floor(prec() * 0.30103)) - 1;
        if (digits < 2) digits = 2;
        char* s = nullptr;
        if (mpfr_asprintf(&s, "%.*Rg", digits, v_) < 0) return "?";
        std::string out(s);
        mpfr_free_str(s);
        return out;
    }

private:
    static mpfr_prec_t clamp(mpfr_prec_t p) { return p < MPFR_PREC_MIN ? MPFR_PREC_MIN : p; }
    static mpfr_prec_t join(const BigFloat& a, const BigFloat& b) {
        return a.prec() > b.prec() ? a.prec() : b.prec();
    }

    mpfr_t v_;
};

} // namespace realdescent
