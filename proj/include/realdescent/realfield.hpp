#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "realdescent/bigcomplex.hpp"
#include "realdescent/bigfloat.hpp"
#include "realdescent/errors.hpp"
#include "realdescent/linalg.hpp"

namespace realdescent {

using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw DomainError("zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

/**
 * Real multiquadratic field Q(sqrt(g1), ..., sqrt(gk)).
 *
 * Generators are distinct squarefree integers > 1 and must be independent
 * modulo squares, so the 2^k subset products of their square roots form a
 * Q-basis. Basis elements are indexed by bitmask in subset-lex order:
 * for generators [2,3] the basis is (1, sqrt2, sqrt3, sqrt6).
 */
class RealField {
public:
    RealField() = default;

    explicit RealField(std::vector<long> generators) : gens_(std::move(generators)) {
        std::sort(gens_.begin(), gens_.end());
        for (std::size_t i = 0; i < gens_.size(); ++i) {
            if (gens_[i] <= 1) throw DomainError("radicands must be > 1");
            if (i > 0 && gens_[i] == gens_[i - 1]) throw DomainError("duplicate radicand");
            if (!is_squarefree(gens_[i]))
                throw DomainError("radicand " + std::to_string(gens_[i]) + " is not squarefree");
        }
        if (gens_.size() > 20) throw DomainError("too many radicands");
        // Independence modulo squares: no nonempty subset product is a square.
        for (std::size_t mask = 1; mask < dim(); ++mask) {
            mpz_class p = radicand(mask);
            if (mpz_perfect_square_p(p.get_mpz_t()))
                throw DomainError("radicands are multiplicatively dependent");
        }
    }

    const std::vector<long>& generators() const { return gens_; }
    std::size_t dim() const { return std::size_t{1} << gens_.size(); }

    bool operator==(const RealField& o) const { return gens_ == o.gens_; }
    bool operator!=(const RealField& o) const { return gens_ != o.gens_; }

    // true when every generator of this field also generates `o`.
    bool subfield_of(const RealField& o) const {
        return std::includes(o.gens_.begin(), o.gens_.end(), gens_.begin(), gens_.end());
    }

    // Product of the generators selected by mask (the squared basis value).
    mpz_class radicand(std::size_t mask) const {
        mpz_class p = 1;
        for (std::size_t i = 0; i < gens_.size(); ++i)
            if (mask & (std::size_t{1} << i)) p *= gens_[i];
        return p;
    }

    // e_S * e_T = coeff * e_{S xor T} with coeff the product of shared radicands.
    mpz_class product_coeff(std::size_t s, std::size_t t) const { return radicand(s & t); }

    static RealField merged(const RealField& a, const RealField& b) {
        std::vector<long> g = a.gens_;
        for (long x : b.gens_)
            if (std::find(g.begin(), g.end(), x) == g.end()) g.push_back(x);
        return RealField(std::move(g));
    }

    // Index of o's basis element `mask` inside this field (o must be a subfield).
    std::size_t lift_mask(const RealField& o, std::size_t mask) const {
        std::size_t out = 0;
        for (std::size_t i = 0; i < o.gens_.size(); ++i) {
            if (!(mask & (std::size_t{1} << i))) continue;
            auto it = std::find(gens_.begin(), gens_.end(), o.gens_[i]);
            if (it == gens_.end()) throw FieldMismatchError("not a subfield");
            out |= std::size_t{1} << static_cast<std::size_t>(it - gens_.begin());
        }
        return out;
    }

    std::string str() const {
        std::string s = "Q(";
        for (std::size_t i = 0; i < gens_.size(); ++i) {
            if (i) s += ",";
            s += "sqrt" + std::to_string(gens_[i]);
        }
        return s + ")";
    }

private:
    static bool is_squarefree(long n) {
        for (long p = 2; p * p <= n; ++p)
            if (n % (p * p) == 0) return false;
        return true;
    }

    std::vector<long> gens_;
};

/// Element of a RealField: rational coordinates over the 2^k subset basis.
class RealAlgebraic {
public:
    RealAlgebraic() : field_(), coords_(1, Rational(0)) {}

    RealAlgebraic(RealField field, std::vector<Rational> coords)
        : field_(std::move(field)), coords_(std::move(coords)) {
        if (coords_.size() != field_.dim())
            throw DomainError("coordinate count does not match field dimension");
        for (auto& c : coords_) c.canonicalize();
    }

    explicit RealAlgebraic(const Rational& q) : field_(), coords_(1, q) {
        coords_[0].canonicalize();
    }
    explicit RealAlgebraic(long n) : field_(), coords_(1, Rational(n)) {}

    // q * sqrt(d) in Q(sqrt d); d must be squarefree > 1.
    static RealAlgebraic root_multiple(long d, const Rational& q) {
        RealField f({d});
        std::vector<Rational> c(2, Rational(0));
        c[1] = q;
        return RealAlgebraic(std::move(f), std::move(c));
    }

    const RealField& field() const { return field_; }
    const std::vector<Rational>& coords() const { return coords_; }

    bool is_zero() const {
        for (const auto& c : coords_)
            if (c != 0) return false;
        return true;
    }

    // true iff all non-unit basis coordinates vanish.
    bool is_rational() const {
        for (std::size_t i = 1; i < coords_.size(); ++i)
            if (coords_[i] != 0) return false;
        return true;
    }

    const Rational& rational_part() const { return coords_[0]; }

    RealAlgebraic embedded_into(const RealField& target) const {
        if (field_ == target) return *this;
        if (!field_.subfield_of(target)) throw FieldMismatchError("cannot embed into smaller field");
        std::vector<Rational> c(target.dim(), Rational(0));
        for (std::size_t m = 0; m < coords_.size(); ++m)
            if (coords_[m] != 0) c[target.lift_mask(field_, m)] = coords_[m];
        return RealAlgebraic(target, std::move(c));
    }

    friend RealField common_field(const RealAlgebraic& a, const RealAlgebraic& b) {
        if (a.field_ == b.field_) return a.field_;
        if (a.field_.subfield_of(b.field_)) return b.field_;
        if (b.field_.subfield_of(a.field_)) return a.field_;
        return RealField::merged(a.field_, b.field_);
    }

    RealAlgebraic operator-() const {
        std::vector<Rational> c = coords_;
        for (auto& q : c) q = -q;
        return RealAlgebraic(field_, std::move(c));
    }

    friend RealAlgebraic operator+(const RealAlgebraic& a, const RealAlgebraic& b) {
        RealField f = common_field(a, b);
        RealAlgebraic x = a.embedded_into(f), y = b.embedded_into(f);
        for (std::size_t i = 0; i < x.coords_.size(); ++i) x.coords_[i] += y.coords_[i];
        return x;
    }
    friend RealAlgebraic operator-(const RealAlgebraic& a, const RealAlgebraic& b) {
        return a + (-b);
    }
    friend RealAlgebraic operator*(const RealAlgebraic& a, const RealAlgebraic& b) {
        RealField f = common_field(a, b);
        RealAlgebraic x = a.embedded_into(f), y = b.embedded_into(f);
        std::vector<Rational> c(f.dim(), Rational(0));
        for (std::size_t s = 0; s < c.size(); ++s) {
            if (x.coords_[s] == 0) continue;
            for (std::size_t t = 0; t < c.size(); ++t) {
                if (y.coords_[t] == 0) continue;
                c[s ^ t] += x.coords_[s] * y.coords_[t] * Rational(f.product_coeff(s, t));
            }
        }
        return RealAlgebraic(f, std::move(c));
    }
    friend RealAlgebraic operator*(const Rational& q, const RealAlgebraic& a) {
        std::vector<Rational> c = a.coords_;
        for (auto& x : c) x *= q;
        return RealAlgebraic(a.field_, std::move(c));
    }

    // Multiplicative inverse via the multiplication-by-this matrix.
    RealAlgebraic inverse() const {
        if (is_zero()) throw DomainError("inverse of zero");
        std::size_t n = field_.dim();
        QMat m(n, QVec(n, Rational(0)));
        for (std::size_t s = 0; s < n; ++s) {
            if (coords_[s] == 0) continue;
            for (std::size_t t = 0; t < n; ++t)
                m[s ^ t][t] += coords_[s] * Rational(field_.product_coeff(s, t));
        }
        QVec rhs(n, Rational(0));
        rhs[0] = 1;
        QVec x;
        if (!linalg::solve(std::move(m), std::move(rhs), x))
            throw DomainError("element is a zero divisor (inconsistent field)");
        return RealAlgebraic(field_, std::move(x));
    }

    friend RealAlgebraic operator/(const RealAlgebraic& a, const RealAlgebraic& b) {
        return a * b.inverse();
    }

    bool operator==(const RealAlgebraic& o) const { return (*this - o).is_zero(); }
    bool operator!=(const RealAlgebraic& o) const { return !(*this == o); }

    BigFloat to_big(mpfr_prec_t prec) const {
        mpfr_prec_t wp = prec + 64;
        BigFloat acc(wp);
        for (std::size_t m = 0; m < coords_.size(); ++m) {
            if (coords_[m] == 0) continue;
            BigFloat term(coords_[m], wp);
            if (m != 0) term *= BigFloat(field_.radicand(m), wp).sqrt();
            acc += term;
        }
        BigFloat out(prec);
        mpfr_set(out.raw(), acc.raw(), MPFR_RNDN);
        return out;
    }

    // Rigorous sign via interval evaluation at increasing precision;
    // exact zero is decided from the coordinates.
    int sign() const {
        if (is_zero()) return 0;
        for (mpfr_prec_t p = 128; p <= 1 << 14; p *= 2) {
            BigFloat lo(p), hi(p), t(p);
            mpfr_set_zero(lo.raw(), 1);
            mpfr_set_zero(hi.raw(), 1);
            for (std::size_t m = 0; m < coords_.size(); ++m) {
                if (coords_[m] == 0) continue;
                // lower bound
                mpfr_set_q(t.raw(), coords_[m].get_mpq_t(), MPFR_RNDD);
                if (m != 0) {
                    BigFloat r(p);
                    mpfr_set_z(r.raw(), field_.radicand(m).get_mpz_t(), MPFR_RNDN);
                    mpfr_sqrt(r.raw(), r.raw(), coords_[m] > 0 ? MPFR_RNDD : MPFR_RNDU);
                    mpfr_mul(t.raw(), t.raw(), r.raw(), MPFR_RNDD);
                }
                mpfr_add(lo.raw(), lo.raw(), t.raw(), MPFR_RNDD);
                // upper bound
                mpfr_set_q(t.raw(), coords_[m].get_mpq_t(), MPFR_RNDU);
                if (m != 0) {
                    BigFloat r(p);
                    mpfr_set_z(r.raw(), field_.radicand(m).get_mpz_t(), MPFR_RNDN);
                    mpfr_sqrt(r.raw(), r.raw(), coords_[m] > 0 ? MPFR_RNDU : MPFR_RNDD);
                    mpfr_mul(t.raw(), t.raw(), r.raw(), MPFR_RNDU);
                }
                mpfr_add(hi.raw(), hi.raw(), t.raw(), MPFR_RNDU);
            }
            if (lo.sign() > 0) return 1;
            if (hi.sign() < 0) return -1;
        }
        throw PrecisionError("sign of algebraic number undecided at 16384 bits");
    }

    std::string str() const {
        std::string s;
        bool first = true;
        for (std::size_t m = 0; m < coords_.size(); ++m) {
            if (coords_[m] == 0) continue;
            Rational c = coords_[m];
            if (!first) s += (c < 0 ? " - " : " + ");
            else if (c < 0) s += "-";
            Rational a = abs(c);
            std::string coef = a.get_str();
            if (m == 0) s += coef;
            else s += (a == 1 ? "" : coef + "*") + "sqrt" + field_.radicand(m).get_str();
            first = false;
        }
        return first ? "0" : s;
    }

private:
    RealField field_;
    std::vector<Rational> coords_;
};

} // namespace realdescent
