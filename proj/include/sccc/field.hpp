#pragma once

// Exact arithmetic over GF(2^m), m <= 16.

#include <cstdint>
#include <vector>

#include "sccc/errors.hpp"

namespace sccc {

using Symbol = std::uint16_t;

namespace detail {

// Degree of a GF(2) polynomial given as a bitmask, -1 for the zero polynomial.
inline int poly_degree(std::uint32_t p) {
    int d = -1;
    while (p) {
        ++d;
        p >>= 1;
    }
    return d;
}

// Remainder of a mod b, both GF(2) polynomials.
inline std::uint32_t poly_mod(std::uint32_t a, std::uint32_t b) {
    const int db = poly_degree(b);
    int da = poly_degree(a);
    while (da >= db) {
        a ^= b << (da - db);
        da = poly_degree(a);
    }
    return a;
}

inline bool poly_irreducible(std::uint32_t p, unsigned m) {
    if (poly_degree(p) != static_cast<int>(m)) return false;
    if (m == 0) return false;
    if ((p & 1u) == 0) return m == 1 && p == 2u; // x itself is degree 1, irreducible
    // Trial division by every polynomial of degree 1..m/2.
    for (unsigned d = 1; 2 * d <= m; ++d) {
        for (std::uint32_t q = (1u << d) + 1; q < (1u << (d + 1)); q += 2) {
            if (poly_mod(p, q) == 0) return false;
        }
    }
    return true;
}

} // namespace detail

class FieldSpec {
public:
    // Conventional irreducible polynomial per bit-width.
    static std::uint32_t default_polynomial(unsigned m) {
        static const std::uint32_t table[17] = {
            0,       0x3,    0x7,    0xB,    0x13,   0x25,   0x43,    0x89,
            0x11B,   0x211,  0x409,  0x805,  0x1053, 0x201B, 0x4443,  0x8003,
            0x1100B,
        };
        if (m < 1 || m > 16) throw BadPolynomial("field width must be in [1, 16]");
        return table[m];
    }

    explicit FieldSpec(unsigned m) : FieldSpec(m, default_polynomial(m)) {}

    FieldSpec(unsigned m, std::uint32_t poly) : m_(m), poly_(poly) {
        if (m < 1 || m > 16) throw BadPolynomial("field width must be in [1, 16]");
        if (!detail::poly_irreducible(poly, m))
            throw BadPolynomial("reduction polynomial is not irreducible of the stated degree");
        if (m_ <= 8) {
            const std::uint32_t n = order();
            mul_table_.resize(std::size_t(n) * n);
            for (std::uint32_t a = 0; a < n; ++a)
                for (std::uint32_t b = 0; b < n; ++b)
                    mul_table_[(a << m_) | b] = mul_slow(Symbol(a), Symbol(b));
            inv_table_.assign(n, 0);
            for (std::uint32_t a = 1; a < n; ++a)
                inv_table_[a] = pow_slow(Symbol(a), n - 2);
        }
    }

    unsigned width() const { return m_; }
    std::uint32_t order() const { return 1u << m_; }
    std::uint32_t polynomial() const { return poly_; }

    Symbol add(Symbol a, Symbol b) const { return a ^ b; }

    Symbol mul(Symbol a, Symbol b) const {
        if (!mul_table_.empty()) return mul_table_[(std::uint32_t(a) << m_) | b];
        return mul_slow(a, b);
    }

    Symbol inv(Symbol a) const {
        if (a == 0) throw ZeroInversion();
        if (!inv_table_.empty()) return inv_table_[a];
        return pow_slow(a, order() - 2);
    }

    Symbol pow(Symbol a, std::uint64_t e) const { return pow_slow(a, e); }

    bool operator==(const FieldSpec& o) const { return m_ == o.m_ && poly_ == o.poly_; }

private:
    Symbol mul_slow(Symbol a, Symbol b) const {
        // Carry-less multiply, then reduce by the field polynomial.
        std::uint32_t acc = 0;
        std::uint32_t x = a;
        std::uint32_t y = b;
        while (y) {
            if (y & 1u) acc ^= x;
            x <<= 1;
            y >>= 1;
        }
        return Symbol(detail::poly_mod(acc, poly_));
    }

    Symbol pow_slow(Symbol a, std::uint64_t e) const {
        Symbol r = 1;
        Symbol base = a;
        while (e) {
            if (e & 1u) r = mul_slow(r, base);
            base = mul_slow(base, base);
            e >>= 1;
        }
        return r;
    }

    unsigned m_;
    std::uint32_t poly_;
    std::vector<Symbol> mul_table_;
    std::vector<Symbol> inv_table_;
};

class FieldMatrix {
public:
    FieldMatrix() = default;
    FieldMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Symbol& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    Symbol at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    Symbol* row(std::size_t r) { return data_.data() + r * cols_; }
    const Symbol* row(std::size_t r) const { return data_.data() + r * cols_; }

    static FieldMatrix identity(std::size_t n) {
        FieldMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    bool operator==(const FieldMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Symbol> data_;
};

// g x g Cauchy matrix with generators x_i = i-1, y_j = g+j-1.  Every square
// submatrix of it is nonsingular.
inline FieldMatrix build_cauchy(std::size_t g, const FieldSpec& spec) {
    if (spec.order() < 2 * g)
        throw FieldTooSmall("need 2^m >= 2g distinct generator elements");
    FieldMatrix c(g, g);
    for (std::size_t i = 0; i < g; ++i)
        for (std::size_t j = 0; j < g; ++j)
            c.at(i, j) = spec.inv(Symbol(i) ^ Symbol(g + j));
    return c;
}

inline FieldMatrix mat_mul(const FieldMatrix& a, const FieldMatrix& b, const FieldSpec& spec) {
    if (a.cols() != b.rows()) throw ShapeMismatch("matrix product shape mismatch");
    FieldMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Symbol f = a.at(i, k);
            if (!f) continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                c.at(i, j) ^= spec.mul(f, b.at(k, j));
        }
    return c;
}

// Rank by Gaussian elimination with first-nonzero pivoting.
inline std::size_t mat_rank(FieldMatrix m, const FieldSpec& spec) {
    std::size_t rank = 0;
    for (std::size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
        std::size_t piv = rank;
        while (piv < m.rows() && m.at(piv, col) == 0) ++piv;
        if (piv == m.rows()) continue;
        if (piv != rank)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(piv, j), m.at(rank, j));
        const Symbol pinv = spec.inv(m.at(rank, col));
        for (std::size_t j = col; j < m.cols(); ++j) m.at(rank, j) = spec.mul(m.at(rank, j), pinv);
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == rank) continue;
            const Symbol f = m.at(r, col);
            if (!f) continue;
            for (std::size_t j = col; j < m.cols(); ++j)
                m.at(r, j) ^= spec.mul(f, m.at(rank, j));
        }
        ++rank;
    }
    return rank;
}

inline FieldMatrix mat_inverse(const FieldMatrix& mat, const FieldSpec& spec) {
    if (mat.rows() != mat.cols()) throw ShapeMismatch("only square matrices are invertible");
    const std::size_t n = mat.rows();
    FieldMatrix work = mat;
    FieldMatrix inv = FieldMatrix::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && work.at(piv, col) == 0) ++piv;
        if (piv == n) throw Singular();
        if (piv != col)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(work.at(piv, j), work.at(col, j));
                std::swap(inv.at(piv, j), inv.at(col, j));
            }
        const Symbol pinv = spec.inv(work.at(col, col));
        for (std::size_t j = 0; j < n; ++j) {
            work.at(col, j) = spec.mul(work.at(col, j), pinv);
            inv.at(col, j) = spec.mul(inv.at(col, j), pinv);
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const Symbol f = work.at(r, col);
            if (!f) continue;
            for (std::size_t j = 0; j < n; ++j) {
                work.at(r, j) ^= spec.mul(f, work.at(col, j));
                inv.at(r, j) ^= spec.mul(f, inv.at(col, j));
            }
        }
    }
    return inv;
}

// Rows/cols picked in the given index order.
inline FieldMatrix submatrix(const FieldMatrix& m, const std::vector<std::size_t>& row_idx,
                             const std::vector<std::size_t>& col_idx) {
    FieldMatrix s(row_idx.size(), col_idx.size());
    for (std::size_t i = 0; i < row_idx.size(); ++i)
        for (std::size_t j = 0; j < col_idx.size(); ++j) {
            if (row_idx[i] >= m.rows() || col_idx[j] >= m.cols())
                throw IndexOutOfRange("submatrix index out of range");
            s.at(i, j) = m.at(row_idx[i], col_idx[j]);
        }
    return s;
}

} // namespace sccc
