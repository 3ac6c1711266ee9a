#pragma once

#include <gmpxx.h>

#include <vector>

namespace realdescent {

using QVec = std::vector<mpq_class>;
using QMat = std::vector<QVec>;
using ZVec = std::vector<mpz_class>;
using ZMat = std::vector<ZVec>;

namespace linalg {

// Row-reduce a copy of m, returning its rank.
inline std::size_t rank(QMat m) {
    std::size_t rows = m.size();
    if (rows == 0) return 0;
    std::size_t cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            mpq_class f = m[i][c] / m[r][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        ++r;
    }
    return r;
}

// Basis of the right kernel {x : m x = 0}.
inline QMat kernel(QMat m, std::size_t cols) {
    std::size_t rows = m.size();
    std::vector<long> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        mpq_class inv = 1 / m[r][c];
        for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            mpq_class f = m[i][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivot_col.push_back(static_cast<long>(c));
        ++r;
    }
    std::vector<bool> is_pivot(cols, false);
    for (long c : pivot_col) is_pivot[static_cast<std::size_t>(c)] = true;
    QMat basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        QVec v(cols, mpq_class(0));
        v[free] = 1;
        for (std::size_t k = 0; k < pivot_col.size(); ++k)
            v[static_cast<std::size_t>(pivot_col[k])] = -m[k][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

// Solve m x = b; returns false when inconsistent. For square nonsingular use.
inline bool solve(QMat m, QVec b, QVec& x) {
    std::size_t rows = m.size();
    std::size_t cols = rows == 0 ? 0 : m[0].size();
    std::vector<long> pivot_of_col(cols, -1);
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        std::swap(b[p], b[r]);
        mpq_class inv = 1 / m[r][c];
        for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
        b[r] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            mpq_class f = m[i][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
            b[i] -= f * b[r];
        }
        pivot_of_col[c] = static_cast<long>(r);
        ++r;
    }
    for (std::size_t i = r; i < rows; ++i)
        if (b[i] != 0) return false;
    x.assign(cols, mpq_class(0));
    for (std::size_t c = 0; c < cols; ++c)
        if (pivot_of_col[c] >= 0) x[c] = b[static_cast<std::size_t>(pivot_of_col[c])];
    return true;
}

// Scale a rational vector to a primitive integer vector (gcd 1), keeping direction.
inline ZVec primitive(const QVec& v) {
    mpz_class lcm = 1;
    for (const auto& q : v) {
        mpz_class den = q.get_den();
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), lcm.get_mpz_t(), den.get_mpz_t());
        lcm = lcm / g * den;
    }
    ZVec w(v.size());
    mpz_class content = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        mpq_class s = v[i] * mpq_class(lcm);
        w[i] = s.get_num();
        mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), w[i].get_mpz_t());
    }
    if (content > 1)
        for (auto& z : w) z /= content;
    return w;
}

// Sign-normalize: first nonzero entry positive.
inline void normalize_sign(ZVec& v) {
    for (const auto& z : v) {
        if (z == 0) continue;
        if (z < 0)
            for (auto& w : v) w = -w;
        return;
    }
}

// Integer rank of a set of integer vectors.
inline std::size_t zrank(const ZMat& m) {
    QMat q;
    for (const auto& row : m) {
        QVec r;
        r.reserve(row.size());
        for (const auto& z : row) r.emplace_back(z);
        q.push_back(std::move(r));
    }
    return rank(std::move(q));
}

// Basis of {x in Z^n : E x = 0} for an integer matrix E, by unimodular
// column reduction (column-style HNF): E U = [H | 0], kernel = last columns
// of U. Exact over Z, so the resulting lattice is saturated.
inline ZMat integer_kernel(ZMat e, std::size_t cols) {
    std::size_t rows = e.size();
    ZMat u(cols, ZVec(cols, 0));
    for (std::size_t i = 0; i < cols; ++i) u[i][i] = 1;

    auto col_op = [&](std::size_t dst, std::size_t src, const mpz_class& q) {
        for (std::size_t i = 0; i < rows; ++i) e[i][dst] -= q * e[i][src];
        for (std::size_t i = 0; i < cols; ++i) u[i][dst] -= q * u[i][src];
    };
    auto col_swap = [&](std::size_t a, std::size_t b) {
        for (std::size_t i = 0; i < rows; ++i) std::swap(e[i][a], e[i][b]);
        for (std::size_t i = 0; i < cols; ++i) std::swap(u[i][a], u[i][b]);
    };

    std::size_t rc = 0;
    for (std::size_t row = 0; row < rows && rc < cols; ++row) {
        while (true) {
            std::size_t best = cols;
            for (std::size_t c = rc; c < cols; ++c) {
                if (e[row][c] == 0) continue;
                if (best == cols || mpz_cmpabs(e[row][c].get_mpz_t(), e[row][best].get_mpz_t()) < 0)
                    best = c;
            }
            if (best == cols) break; // row already zero on free columns
            bool others = false;
            for (std::size_t c = rc; c < cols; ++c) {
                if (c == best || e[row][c] == 0) continue;
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), e[row][c].get_mpz_t(), e[row][best].get_mpz_t());
                col_op(c, best, q);
                if (e[row][c] != 0) others = true;
            }
            if (!others) {
                col_swap(rc, best);
                ++rc;
                break;
            }
        }
    }
    ZMat out;
    for (std::size_t c = rc; c < cols; ++c) {
        ZVec v(cols);
        for (std::size_t i = 0; i < cols; ++i) v[i] = u[i][c];
        out.push_back(std::move(v));
    }
    return out;
}

// Clear denominators of a rational matrix rowwise into primitive integer rows.
inline ZMat to_integer_rows(const QMat& m) {
    ZMat out;
    for (const auto& row : m) {
        bool nonzero = false;
        for (const auto& q : row)
            if (q != 0) { nonzero = true; break; }
        if (nonzero) out.push_back(primitive(row));
    }
    return out;
}

} // namespace linalg
} // namespace realdescent
