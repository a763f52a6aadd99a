#pragma once

#include "mlrank/rational.hpp"

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace mlrank {

// Dense exact-rational vectors and matrices. Dimensions are checked on every
// operation; there is no implicit broadcasting.

class Vector {
  public:
    Vector() = default;
    explicit Vector(std::size_t n) : e_(n, Rational(0)) {}
    Vector(std::initializer_list<Rational> xs) : e_(xs) {}
    explicit Vector(std::vector<Rational> xs) : e_(std::move(xs)) {}

    std::size_t size() const { return e_.size(); }
    Rational& operator[](std::size_t i) { return e_[i]; }
    const Rational& operator[](std::size_t i) const { return e_[i]; }

    auto begin() const { return e_.begin(); }
    auto end() const { return e_.end(); }
    auto begin() { return e_.begin(); }
    auto end() { return e_.end(); }

    bool operator==(const Vector& o) const = default;

    bool is_zero() const {
        for (const auto& x : e_)
            if (x != 0) return false;
        return true;
    }

    const std::vector<Rational>& entries() const { return e_; }

  private:
    std::vector<Rational> e_;
};

inline void check_same_size(const Vector& a, const Vector& b, const char* what) {
    if (a.size() != b.size())
        throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

inline Rational dot(const Vector& a, const Vector& b) {
    check_same_size(a, b, "dot");
    Rational s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Vector operator+(const Vector& a, const Vector& b) {
    check_same_size(a, b, "operator+");
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vector operator-(const Vector& a, const Vector& b) {
    check_same_size(a, b, "operator-");
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vector operator*(const Rational& c, const Vector& a) {
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
    return r;
}

inline Vector operator-(const Vector& a) { return Rational(-1) * a; }

// Lexicographic order, used for canonical generator/row ordering.
inline bool lex_less(const Vector& a, const Vector& b) {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return a.size() < b.size();
}

class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), e_(rows * cols, Rational(0)) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static Matrix from_rows(const std::vector<Vector>& rows) {
        if (rows.empty()) return Matrix();
        Matrix m(rows.size(), rows[0].size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != m.cols_)
                throw std::invalid_argument("from_rows: ragged rows");
            for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const {
        return e_[i * cols_ + j];
    }

    Vector row(std::size_t i) const {
        Vector r(cols_);
        for (std::size_t j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
        return r;
    }

    bool operator==(const Matrix& o) const = default;

    bool is_zero() const {
        for (const auto& x : e_)
            if (x != 0) return false;
        return true;
    }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> e_;
};

inline Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul: dimension mismatch");
    Matrix r(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (a(i, k) == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += a(i, k) * b(k, j);
        }
    return r;
}

inline Vector operator*(const Matrix& a, const Vector& x) {
    if (a.cols() != x.size()) throw std::invalid_argument("matvec: dimension mismatch");
    Vector r(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Rational s(0);
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        r[i] = s;
    }
    return r;
}

inline Matrix operator-(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("matsub: dimension mismatch");
    Matrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) - b(i, j);
    return r;
}

// --- Exact Gaussian elimination -------------------------------------------

struct UniqueSolution {
    Vector x;
};
struct ParametricSolution {
    Vector particular;               // one solution
    std::vector<Vector> kernel;      // basis of the homogeneous solution space
};
struct Inconsistent {};

using GaussResult = std::variant<UniqueSolution, ParametricSolution, Inconsistent>;

// Reduced row echelon form of [M | v] in place; returns pivot column per row.
inline std::vector<std::size_t> rref(Matrix& m) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t sel = r;
        while (sel < m.rows() && m(sel, c) == 0) ++sel;
        if (sel == m.rows()) continue;
        for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(r, j), m(sel, j));
        Rational inv = 1 / m(r, c);
        for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c) == 0) continue;
            Rational f = m(i, c);
            for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline GaussResult gaussian_solve(const Matrix& M, const Vector& v) {
    if (M.rows() != v.size())
        throw std::invalid_argument("gaussian_solve: dimension mismatch");
    const std::size_t n = M.cols();
    Matrix aug(M.rows(), n + 1);
    for (std::size_t i = 0; i < M.rows(); ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = M(i, j);
        aug(i, n) = v[i];
    }
    auto pivots = rref(aug);
    for (std::size_t k = 0; k < pivots.size(); ++k)
        if (pivots[k] == n) return Inconsistent{};

    Vector particular(n);
    std::vector<bool> is_pivot(n, false);
    for (std::size_t k = 0; k < pivots.size(); ++k) {
        is_pivot[pivots[k]] = true;
        particular[pivots[k]] = aug(k, n);
    }
    std::vector<Vector> kernel;
    for (std::size_t c = 0; c < n; ++c) {
        if (is_pivot[c]) continue;
        Vector k(n);
        k[c] = 1;
        for (std::size_t r2 = 0; r2 < pivots.size(); ++r2) k[pivots[r2]] = -aug(r2, c);
        kernel.push_back(std::move(k));
    }
    if (kernel.empty()) return UniqueSolution{std::move(particular)};
    return ParametricSolution{std::move(particular), std::move(kernel)};
}

// Basis of { x : M x = 0 }.
inline std::vector<Vector> kernel_basis(const Matrix& M) {
    auto res = gaussian_solve(M, Vector(M.rows()));
    if (auto* p = std::get_if<ParametricSolution>(&res)) return p->kernel;
    return {};
}

}  // namespace mlrank
