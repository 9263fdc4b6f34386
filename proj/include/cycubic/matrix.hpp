#pragma once

#include <initializer_list>
#include <optional>
#include <vector>

#include "cycubic/numbers.hpp"

namespace cycubic {

// Dense exact matrices. Conventions used throughout the library:
//   - a "vector" is a std::vector of coordinates in a stated basis;
//   - basis matrices hold one basis vector per row;
//   - isometries act on coordinate columns, x -> M x, with M^T G M = G.
template <typename S>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
    Matrix(std::initializer_list<std::initializer_list<S>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        a_.reserve(rows_ * cols_);
        for (const auto& r : init) {
            if (r.size() != cols_) throw std::invalid_argument("ragged matrix initializer");
            for (const auto& x : r) a_.push_back(x);
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = S(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    S& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const S& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    std::vector<S> row(std::size_t i) const {
        return std::vector<S>(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_);
    }
    std::vector<S> col(std::size_t j) const {
        std::vector<S> v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }
    void set_row(std::size_t i, const std::vector<S>& v) {
        for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = v[j];
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("matrix product shape mismatch");
        Matrix r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const S& x = (*this)(i, k);
                if (x == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += x * o(k, j);
            }
        return r;
    }

    Matrix operator+(const Matrix& o) const {
        Matrix r(rows_, cols_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
        return r;
    }
    Matrix operator-(const Matrix& o) const {
        Matrix r(rows_, cols_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
        return r;
    }
    Matrix operator-() const {
        Matrix r(rows_, cols_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = -a_[i];
        return r;
    }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    bool is_zero() const {
        for (const auto& x : a_)
            if (x != 0) return false;
        return true;
    }
    bool is_symmetric() const {
        if (rows_ != cols_) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i + 1; j < cols_; ++j)
                if ((*this)(i, j) != (*this)(j, i)) return false;
        return true;
    }

    // v treated as a column: returns M v.
    std::vector<S> apply(const std::vector<S>& v) const {
        if (v.size() != cols_) throw std::invalid_argument("apply: size mismatch");
        std::vector<S> r(rows_, S(0));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if ((*this)(i, j) != 0) r[i] += (*this)(i, j) * v[j];
        return r;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<S> a_;
};

using IntMatrix = Matrix<Int>;
using QMatrix = Matrix<Rat>;

QMatrix to_rational(const IntMatrix& m);
// Fails (nullopt) when the matrix has a non-integral entry.
std::optional<IntMatrix> to_integral(const QMatrix& m);

Int det(const IntMatrix& m);           // fraction-free (Bareiss)
Rat det(const QMatrix& m);
QMatrix inverse(const QMatrix& m);     // throws on singular input
QMatrix solve_right(const QMatrix& a, const QMatrix& b);  // X with A X = B

struct SnfResult {
    IntMatrix u, d, v;  // u * m * v = d, u and v unimodular, diagonal d with d1 | d2 | ...
};
SnfResult snf(const IntMatrix& m);

// Row-style Hermite normal form of the row span; returns the nonzero rows.
IntMatrix hnf_rows(const IntMatrix& m);

// Basis (rows) of the integer kernel {x : m x^T = 0}; always saturated.
IntMatrix kernel_int(const IntMatrix& m);
// Basis (rows) of the rational kernel of a rational matrix, scaled to integers.
IntMatrix kernel_rows(const QMatrix& m);

// Saturation of the row span: (Q-span of rows) intersected with Z^n.
IntMatrix saturate_rows(const IntMatrix& m);

std::size_t rank(const QMatrix& m);

}  // namespace cycubic
