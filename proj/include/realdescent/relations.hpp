#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "realdescent/weierstrass.hpp"

namespace realdescent {

// ---------------------------------------------------------------------------
// Exact integer LLL (integral Gram variant, delta = 99/100)
// ---------------------------------------------------------------------------

namespace lll {

/// In-place LLL reduction of the rows of `basis` with delta = 99/100,
/// exact integer arithmetic on the Gram data throughout.
inline void reduce(ZMat& basis) {
    const std::size_t n = basis.size();
    if (n < 2) return;

    auto dot = [&](std::size_t i, std::size_t j) {
        mpz_class s = 0;
        for (std::size_t k = 0; k < basis[i].size(); ++k) s += basis[i][k] * basis[j][k];
        return s;
    };

    std::vector<mpz_class> d(n + 1);
    ZMat lambda(n, ZVec(n, 0));
    d[0] = 1;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            mpz_class u = dot(i, j);
            for (std::size_t k = 0; k < j; ++k)
                u = (d[k + 1] * u - lambda[i][k] * lambda[j][k]) / d[k];
            if (j < i) lambda[i][j] = u;
            else d[i + 1] = u;
        }
        if (d[i + 1] == 0) throw DomainError("LLL input rows are linearly dependent");
    }

    auto redi = [&](std::size_t k, std::size_t l) {
        mpz_class two_l = 2 * lambda[k][l];
        if (mpz_cmpabs(two_l.get_mpz_t(), d[l + 1].get_mpz_t()) <= 0) return;
        // q = nearest integer to lambda/d
        mpz_class num = 2 * lambda[k][l] + d[l + 1];
        mpz_class den = 2 * d[l + 1];
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        for (std::size_t c = 0; c < basis[k].size(); ++c) basis[k][c] -= q * basis[l][c];
        lambda[k][l] -= q * d[l + 1];
        for (std::size_t c = 0; c < l; ++c) lambda[k][c] -= q * lambda[l][c];
    };

    auto swapi = [&](std::size_t k) {
        std::swap(basis[k], basis[k - 1]);
        for (std::size_t j = 0; j + 1 < k; ++j) std::swap(lambda[k][j], lambda[k - 1][j]);
        mpz_class lam = lambda[k][k - 1];
        mpz_class b = (d[k - 1] * d[k + 1] + lam * lam) / d[k];
        for (std::size_t i = k + 1; i < n; ++i) {
            mpz_class t = lambda[i][k];
            lambda[i][k] = (d[k + 1] * lambda[i][k - 1] - lam * t) / d[k];
            lambda[i][k - 1] = (b * t + lam * lambda[i][k]) / d[k + 1];
        }
        d[k] = b;
    };

    std::size_t k = 1;
    while (k < n) {
        redi(k, k - 1);
        mpz_class lhs = 100 * (d[k - 1] * d[k + 1] + lambda[k][k - 1] * lambda[k][k - 1]);
        mpz_class rhs = 99 * d[k] * d[k];
        if (lhs < rhs) {
            swapi(k);
            k = k > 1 ? k - 1 : 1;
        } else {
            for (std::size_t l = k - 1; l-- > 0;) redi(k, l);
            ++k;
        }
    }
}

} // namespace lll

// ---------------------------------------------------------------------------
// Integer-relation detection
// ---------------------------------------------------------------------------

struct RelationQuery {
    std::vector<BigComplex> values;
    long max_coeff = 100; // H
    PrecisionContext ctx = PrecisionContext(50);
};

struct RelationResult {
    bool found = false;
    ZVec coefficients;  // primitive, first nonzero entry positive
    BigFloat residual;  // |sum c_i x_i| at verification precision
    long max_coeff = 0;
    int precision_digits = 0;
};

/// |sum c_i x_i| evaluated at twice the context's working precision.
inline BigFloat verify_relation(const std::vector<BigComplex>& values, const ZVec& coeffs,
                                const PrecisionContext& ctx) {
    if (values.size() != coeffs.size()) throw DomainError("length mismatch");
    mpfr_prec_t p = 2 * ctx.prec_bits();
    BigComplex acc(p);
    for (std::size_t i = 0; i < values.size(); ++i)
        acc += BigComplex(BigFloat(coeffs[i], p), BigFloat(p)) * values[i];
    return acc.abs();
}

namespace detail {

struct RelationScan {
    std::vector<ZVec> verified; // independent verified relations
    ZMat reduced;               // full reduced lattice rows (coefficient part)
};

inline RelationScan scan_relations(const RelationQuery& q) {
    const std::size_t n = q.values.size();
    if (n < 2) throw DomainError("need at least two values");
    if (q.max_coeff < 1) throw DomainError("max_coeff must be >= 1");

    const long m_bits =
        static_cast<long>((q.ctx.decimal_digits() - q.ctx.guard_digits()) * 3.3219280948873623);
    const double needed = static_cast<double>(n) * std::log2(static_cast<double>(q.max_coeff) + 1.0) + 40;
    if (static_cast<double>(m_bits) < needed)
        throw PrecisionError("precision too low for the requested coefficient bound");

    // columns: identity block, then scaled real and imaginary parts
    ZMat rows(n);
    mpfr_prec_t wp = q.ctx.prec_bits();
    for (std::size_t i = 0; i < n; ++i) {
        rows[i].assign(n + 2, mpz_class(0));
        rows[i][i] = 1;
        rows[i][n] = q.values[i].re().ldexp(m_bits).round_to_mpz();
        rows[i][n + 1] = q.values[i].im().ldexp(m_bits).round_to_mpz();
    }
    lll::reduce(rows);

    // accept rows whose scaled remainder and coefficients are small and
    // which re-verify at doubled precision
    BigFloat max_abs(wp);
    for (const auto& v : q.values)
        if (v.abs() > max_abs) max_abs = v.abs();
    BigFloat threshold =
        BigFloat::pow10(-(q.ctx.decimal_digits() - q.ctx.guard_digits()) + 2, wp) *
        (BigFloat(1, wp) + max_abs);

    RelationScan out;
    out.reduced = rows;
    ZMat accepted;
    for (const auto& row : rows) {
        ZVec c(row.begin(), row.begin() + static_cast<long>(n));
        bool zero = true, small = true;
        for (const auto& z : c) {
            if (z != 0) zero = false;
            if (mpz_cmpabs_ui(z.get_mpz_t(), static_cast<unsigned long>(q.max_coeff)) > 0)
                small = false;
        }
        if (zero || !small) continue;
        if (verify_relation(q.values, c, q.ctx) > threshold) continue;
        ZMat trial = accepted;
        trial.push_back(c);
        if (linalg::zrank(trial) != trial.size()) continue; // dependent on found ones
        accepted.push_back(c);
        QVec cq;
        for (const auto& z : c) cq.emplace_back(z);
        ZVec prim = linalg::primitive(cq);
        linalg::normalize_sign(prim);
        out.verified.push_back(std::move(prim));
    }
    return out;
}

} // namespace detail

/**
 * Lattice-reduction relation search: build [I_n | round(2^m x_i)] with the
 * real and imaginary parts as separate scaled columns, LLL-reduce with
 * delta = 99/100, and re-verify every candidate at doubled precision before
 * reporting it. "Not found" always carries both bounds (H and precision)
 * and is never a statement of independence.
 */
inline RelationResult find_integer_relation(const RelationQuery& q) {
    auto scan = detail::scan_relations(q);
    RelationResult res;
    res.max_coeff = q.max_coeff;
    res.precision_digits = q.ctx.decimal_digits();
    if (scan.verified.empty()) return res;
    res.found = true;
    res.coefficients = scan.verified.front();
    res.residual = verify_relation(q.values, res.coefficients, q.ctx);
    return res;
}

// ---------------------------------------------------------------------------
// Masser probe
// ---------------------------------------------------------------------------

struct MasserReport {
    std::vector<ZVec> relations_full;    // among the ten-number list
    std::vector<ZVec> relations_periods; // among {Re l1, Im l1, Re l2, Im l2}
    std::size_t dim_full = 0;            // 10 - #relations_full
    std::size_t dim_periods = 0;         // 4 - #relations_periods
    bool masser_consistent = false;      // dim_full == 2 + 2*dim_periods
    long max_coeff = 0;
    int precision_digits = 0;
};

/**
 * Empirical probe of the real Masser relation: the Q-bar dimension of
 * {1, Re l1, Im l1, Re eta1, Im eta1, Re l2, Im l2, Re eta2, Im eta2, 2 pi}
 * equals 2 + 2 dim {Re l1, Im l1, Re l2, Im l2}. Dimensions here are
 * "count minus verified relations found up to H", a consistency check and
 * never a proof.
 */
inline MasserReport masser_probe(const Lattice& L, const PrecisionContext& ctx, long max_coeff) {
    WeierstrassEngine eng(L, ctx);
    mpfr_prec_t p = eng.working_prec();
    BigComplex l1 = L.lambda1(p), l2 = L.lambda2(p);
    BigComplex e1 = eng.eta1(), e2 = eng.eta2();
    BigFloat zero(p);
    auto re = [&](const BigComplex& z) { return BigComplex(z.re(), zero); };
    auto im = [&](const BigComplex& z) { return BigComplex(z.im(), zero); };

    RelationQuery full;
    full.ctx = ctx;
    full.max_coeff = max_coeff;
    full.values = {BigComplex(BigFloat(1, p), zero),
                   re(l1), im(l1), re(e1), im(e1),
                   re(l2), im(l2), re(e2), im(e2),
                   BigComplex(2 * BigFloat::pi(p), zero)};

    RelationQuery periods;
    periods.ctx = ctx;
    periods.max_coeff = max_coeff;
    periods.values = {re(l1), im(l1), re(l2), im(l2)};

    MasserReport rep;
    rep.max_coeff = max_coeff;
    rep.precision_digits = ctx.decimal_digits();
    rep.relations_full = detail::scan_relations(full).verified;
    rep.relations_periods = detail::scan_relations(periods).verified;
    rep.dim_full = full.values.size() - rep.relations_full.size();
    rep.dim_periods = periods.values.size() - rep.relations_periods.size();
    rep.masser_consistent = rep.dim_full == 2 + 2 * rep.dim_periods;
    return rep;
}

} // namespace realdescent
