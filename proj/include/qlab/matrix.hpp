#pragma once

#include "qlab/errors.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace qlab {

/// Dense row-major matrix over an exact field K. Zero rows or columns are
/// allowed.
template <class K>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, K(0)) {}

    static Matrix zero(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }

    static Matrix identity(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = K(1);
        return m;
    }

    static Matrix from_rows(const std::vector<std::vector<K>>& rows, std::size_t cols)
    {
        Matrix m(rows.size(), cols);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != cols)
                throw Error(ErrorKind::ShapeMismatch, "ragged matrix rows");
            for (std::size_t c = 0; c < cols; ++c)
                m(r, c) = rows[r][c];
        }
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    K& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    const K& operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    bool is_zero() const
    {
        for (auto& x : a_)
            if (!(x == K(0)))
                return false;
        return true;
    }

    friend Matrix operator*(const Matrix& x, const Matrix& y)
    {
        if (x.cols_ != y.rows_)
            throw Error(ErrorKind::ShapeMismatch, "product of " + x.shape() + " and " + y.shape());
        Matrix z(x.rows_, y.cols_);
        for (std::size_t i = 0; i < x.rows_; ++i)
            for (std::size_t k = 0; k < x.cols_; ++k) {
                const K& xik = x(i, k);
                if (xik == K(0))
                    continue;
                for (std::size_t j = 0; j < y.cols_; ++j)
                    z(i, j) += xik * y(k, j);
            }
        return z;
    }

    friend Matrix operator+(Matrix x, const Matrix& y)
    {
        x.require_same_shape(y);
        for (std::size_t k = 0; k < x.a_.size(); ++k)
            x.a_[k] += y.a_[k];
        return x;
    }

    friend Matrix operator-(Matrix x, const Matrix& y)
    {
        x.require_same_shape(y);
        for (std::size_t k = 0; k < x.a_.size(); ++k)
            x.a_[k] -= y.a_[k];
        return x;
    }

    Matrix operator-() const
    {
        Matrix r = *this;
        for (auto& x : r.a_)
            x = -x;
        return r;
    }

    Matrix& operator+=(const Matrix& y) { return *this = *this + y; }

    Matrix transpose() const
    {
        Matrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                t(c, r) = (*this)(r, c);
        return t;
    }

    /// Copy of rows [r0, r0 + n).
    Matrix row_block(std::size_t r0, std::size_t n) const
    {
        Matrix m(n, cols_);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                m(r, c) = (*this)(r0 + r, c);
        return m;
    }

    /// Copy of columns [c0, c0 + n).
    Matrix col_block(std::size_t c0, std::size_t n) const
    {
        Matrix m(rows_, n);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < n; ++c)
                m(r, c) = (*this)(r, c0 + c);
        return m;
    }

    void set_block(std::size_t r0, std::size_t c0, const Matrix& b)
    {
        if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_)
            throw Error(ErrorKind::ShapeMismatch, "block does not fit");
        for (std::size_t r = 0; r < b.rows_; ++r)
            for (std::size_t c = 0; c < b.cols_; ++c)
                (*this)(r0 + r, c0 + c) = b(r, c);
    }

    std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    void require_same_shape(const Matrix& y) const
    {
        if (rows_ != y.rows_ || cols_ != y.cols_)
            throw Error(ErrorKind::ShapeMismatch, "sum of " + shape() + " and " + y.shape());
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<K> a_;
};

template <class K>
struct Echelon {
    Matrix<K> reduced;
    std::vector<std::size_t> pivots;

    std::size_t rank() const noexcept { return pivots.size(); }
};

/// Reduced row echelon form by Gauss-Jordan elimination.
template <class K>
Echelon<K> rref(Matrix<K> m)
{
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t sel = row;
        while (sel < m.rows() && m(sel, col) == K(0))
            ++sel;
        if (sel == m.rows())
            continue;
        if (sel != row)
            for (std::size_t c = 0; c < m.cols(); ++c)
                std::swap(m(sel, c), m(row, c));
        const K inv = K(1) / m(row, col);
        for (std::size_t c = 0; c < m.cols(); ++c)
            m(row, c) = m(row, c) * inv;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == row || m(r, col) == K(0))
                continue;
            const K f = m(r, col);
            for (std::size_t c = 0; c < m.cols(); ++c)
                m(r, c) -= f * m(row, c);
        }
        pivots.push_back(col);
        ++row;
    }
    return Echelon<K>{std::move(m), std::move(pivots)};
}

template <class K>
std::size_t rank(const Matrix<K>& m)
{
    return rref(m).rank();
}

/// A subspace given by the columns of `basis`, kept in reduced column echelon
/// form: basis^T is in reduced row echelon form, so row pivots[k] of the basis
/// is the k-th unit vector. Coordinates of a member are read off those rows.
template <class K>
struct Subspace {
    Matrix<K> basis;
    std::vector<std::size_t> pivots;

    std::size_t ambient() const noexcept { return basis.rows(); }
    std::size_t dim() const noexcept { return basis.cols(); }

    /// Coordinates of the columns of x (each assumed to lie in the subspace).
    Matrix<K> coordinates(const Matrix<K>& x) const
    {
        if (x.rows() != ambient())
            throw Error(ErrorKind::ShapeMismatch, "coordinates: ambient " + std::to_string(ambient()) +
                                                      " vs " + x.shape());
        Matrix<K> c(dim(), x.cols());
        for (std::size_t k = 0; k < pivots.size(); ++k)
            for (std::size_t j = 0; j < x.cols(); ++j)
                c(k, j) = x(pivots[k], j);
        return c;
    }

    bool contains_columns(const Matrix<K>& x) const
    {
        return basis * coordinates(x) == x;
    }
};

/// Canonical basis of the column span of m.
template <class K>
Subspace<K> column_span(const Matrix<K>& m)
{
    auto e = rref(m.transpose());
    Matrix<K> rows = e.reduced.row_block(0, e.rank());
    return Subspace<K>{rows.transpose(), e.pivots};
}

/// Canonical basis of ker m.
template <class K>
Subspace<K> kernel(const Matrix<K>& m)
{
    auto e = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : e.pivots)
        is_pivot[p] = true;
    std::vector<std::size_t> free;
    for (std::size_t c = 0; c < m.cols(); ++c)
        if (!is_pivot[c])
            free.push_back(c);
    Matrix<K> raw(m.cols(), free.size());
    for (std::size_t k = 0; k < free.size(); ++k) {
        raw(free[k], k) = K(1);
        for (std::size_t r = 0; r < e.pivots.size(); ++r)
            raw(e.pivots[r], k) = -e.reduced(r, free[k]);
    }
    return column_span(raw);
}

} // namespace qlab
