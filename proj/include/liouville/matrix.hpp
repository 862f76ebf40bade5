#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "liouville/errors.hpp"
#include "liouville/jet.hpp"

namespace liouville {

namespace detail {

inline double zero_like(double) { return 0.0; }
inline double one_like(double) { return 1.0; }
inline double magnitude(double x) { return std::abs(x); }

inline Jet zero_like(const Jet& j) { return Jet(j.basepoint(), j.order()); }
inline Jet one_like(const Jet& j) { return Jet::constant(j.basepoint(), j.order(), 1.0); }
inline double magnitude(const Jet& j) { return std::abs(j.value()); }

}  // namespace detail

/// Dense row-major matrix over a commutative coefficient type (double or Jet).
template <typename T>
class Matrix {
  public:
    Matrix(int rows, int cols, const T& fill)
        : rows_(rows), cols_(cols), e_(static_cast<std::size_t>(rows) * cols, fill) {
        if (rows < 1 || cols < 1) throw Error(ErrorKind::dimension_mismatch, "matrix dimensions must be positive");
    }

    static Matrix identity(int n, const T& prototype) {
        Matrix m(n, n, detail::zero_like(prototype));
        for (int i = 0; i < n; ++i) m.at(i, i) = detail::one_like(prototype);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    T& at(int r, int c) { return e_[static_cast<std::size_t>(r) * cols_ + c]; }
    const T& at(int r, int c) const { return e_[static_cast<std::size_t>(r) * cols_ + c]; }

    std::vector<T> column(int c) const {
        std::vector<T> out;
        out.reserve(static_cast<std::size_t>(rows_));
        for (int r = 0; r < rows_; ++r) out.push_back(at(r, c));
        return out;
    }

    void set_column(int c, const std::vector<T>& v) {
        if (static_cast<int>(v.size()) != rows_)
            throw Error(ErrorKind::dimension_mismatch, "column length mismatch");
        for (int r = 0; r < rows_; ++r) at(r, c) = v[static_cast<std::size_t>(r)];
    }

    Matrix& operator+=(const Matrix& y) {
        check_same_shape(y);
        for (std::size_t i = 0; i < e_.size(); ++i) e_[i] += y.e_[i];
        return *this;
    }
    Matrix& operator-=(const Matrix& y) {
        check_same_shape(y);
        for (std::size_t i = 0; i < e_.size(); ++i) e_[i] -= y.e_[i];
        return *this;
    }
    Matrix& operator*=(double s) {
        for (auto& v : e_) v *= s;
        return *this;
    }

    friend Matrix operator+(Matrix x, const Matrix& y) { return x += y; }
    friend Matrix operator-(Matrix x, const Matrix& y) { return x -= y; }
    friend Matrix operator*(Matrix x, double s) { return x *= s; }
    friend Matrix operator*(double s, Matrix x) { return x *= s; }

    friend Matrix operator*(const Matrix& x, const Matrix& y) {
        if (x.cols_ != y.rows_) throw Error(ErrorKind::dimension_mismatch, "matrix product shape mismatch");
        Matrix r(x.rows_, y.cols_, detail::zero_like(x.e_[0]));
        for (int i = 0; i < x.rows_; ++i)
            for (int k = 0; k < x.cols_; ++k) {
                const T& xik = x.at(i, k);
                for (int j = 0; j < y.cols_; ++j) r.at(i, j) += xik * y.at(k, j);
            }
        return r;
    }

  private:
    void check_same_shape(const Matrix& y) const {
        if (rows_ != y.rows_ || cols_ != y.cols_)
            throw Error(ErrorKind::dimension_mismatch, "matrix shape mismatch");
    }

    int rows_, cols_;
    std::vector<T> e_;
};

using JetMatrix = Matrix<Jet>;

inline JetMatrix derivative(const JetMatrix& m) {
    JetMatrix r(m.rows(), m.cols(), differentiate(m.at(0, 0)));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r.at(i, j) = differentiate(m.at(i, j));
    return r;
}

inline JetMatrix truncated(const JetMatrix& m, int order) {
    JetMatrix r(m.rows(), m.cols(), m.at(0, 0).truncated(order));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r.at(i, j) = m.at(i, j).truncated(order);
    return r;
}

inline Matrix<double> values(const JetMatrix& m) {
    Matrix<double> r(m.rows(), m.cols(), 0.0);
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) r.at(i, j) = m.at(i, j).value();
    return r;
}

namespace detail {

template <typename T>
T det_cofactor(const Matrix<T>& m) {
    const int n = m.rows();
    if (n == 1) return m.at(0, 0);
    if (n == 2) return m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
    T acc = zero_like(m.at(0, 0));
    for (int j = 0; j < n; ++j) {
        Matrix<T> minor(n - 1, n - 1, zero_like(m.at(0, 0)));
        for (int r = 1; r < n; ++r) {
            int cc = 0;
            for (int c = 0; c < n; ++c) {
                if (c == j) continue;
                minor.at(r - 1, cc++) = m.at(r, c);
            }
        }
        T term = m.at(0, j) * det_cofactor(minor);
        if (j % 2 == 0)
            acc += term;
        else
            acc -= term;
    }
    return acc;
}

// Bareiss fraction-free elimination with pivoting on the entry of largest
// magnitude. Every division is exact in the coefficient ring; a pivot whose
// leading part vanishes is rejected rather than pseudo-divided.
template <typename T>
T det_bareiss(Matrix<T> m) {
    const int n = m.rows();
    T prev = one_like(m.at(0, 0));
    int sign = 1;
    for (int k = 0; k + 1 < n; ++k) {
        int pr = k, pc = k;
        double best = magnitude(m.at(k, k));
        for (int i = k; i < n; ++i)
            for (int j = k; j < n; ++j)
                if (magnitude(m.at(i, j)) > best) {
                    best = magnitude(m.at(i, j));
                    pr = i;
                    pc = j;
                }
        if (best == 0.0)
            throw Error(ErrorKind::domain_violation,
                        "elimination pivot has zero leading part");
        if (pr != k) {
            for (int j = 0; j < n; ++j) std::swap(m.at(pr, j), m.at(k, j));
            sign = -sign;
        }
        if (pc != k) {
            for (int i = 0; i < n; ++i) std::swap(m.at(i, pc), m.at(i, k));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                m.at(i, j) = (m.at(k, k) * m.at(i, j) - m.at(i, k) * m.at(k, j)) / prev;
        prev = m.at(k, k);
    }
    T d = m.at(n - 1, n - 1);
    return sign < 0 ? zero_like(d) - d : d;
}

}  // namespace detail

/// Determinant in the coefficient ring: cofactor expansion for n <= 4,
/// fraction-free elimination above.
template <typename T>
T det(const Matrix<T>& m) {
    if (m.rows() != m.cols()) throw Error(ErrorKind::non_square, "determinant of non-square matrix");
    if (m.rows() <= 4) return detail::det_cofactor(m);
    return detail::det_bareiss(m);
}

}  // namespace liouville
