#pragma once

#include "mlrank/constraint.hpp"
#include "mlrank/linalg.hpp"
#include "mlrank/rational.hpp"

#include <cstddef>
#include <vector>

namespace mlrank {

// Decides whether  C x = e  has an integer solution x, for integer C, e.
// Columns are reduced to echelon form by unimodular operations (Euclidean
// gcd steps), after which a greedy forward solve needs only exact
// divisibility checks.
inline bool integer_solvable(std::vector<std::vector<Integer>> c,
                             std::vector<Integer> e) {
    const std::size_t m = c.size();
    if (m == 0) return true;
    const std::size_t n = c[0].size();

    auto swap_cols = [&](std::size_t a, std::size_t b) {
        for (std::size_t i = 0; i < m; ++i) std::swap(c[i][a], c[i][b]);
    };
    auto addmul_col = [&](std::size_t dst, std::size_t src, const Integer& f) {
        for (std::size_t i = 0; i < m; ++i) c[i][dst] += f * c[i][src];
    };

    std::size_t r = 0;
    std::vector<long> pivot_col_of_row(m, -1);
    for (std::size_t i = 0; i < m && r < n; ++i) {
        // move a nonzero into column r, then gcd-eliminate to its right
        std::size_t nz = n;
        for (std::size_t j = r; j < n; ++j)
            if (c[i][j] != 0) {
                nz = j;
                break;
            }
        if (nz == n) continue;
        if (nz != r) swap_cols(r, nz);
        for (std::size_t j = r + 1; j < n; ++j) {
            while (c[i][j] != 0) {
                if (c[i][r] == 0 || abs(c[i][j]) < abs(c[i][r])) swap_cols(r, j);
                if (c[i][j] == 0) break;
                Integer q = c[i][j] / c[i][r];  // truncated division
                addmul_col(j, r, -q);
            }
        }
        pivot_col_of_row[i] = static_cast<long>(r);
        ++r;
    }

    // forward solve in row order; y need only exist, U never materialized
    std::vector<Integer> y(n, 0);
    for (std::size_t i = 0; i < m; ++i) {
        Integer acc = e[i];
        long p = pivot_col_of_row[i];
        for (std::size_t j = 0; j < n; ++j) {
            if (p >= 0 && j == static_cast<std::size_t>(p)) continue;
            if (c[i][j] != 0) acc -= c[i][j] * y[j];
        }
        if (p < 0) {
            if (acc != 0) return false;
            continue;
        }
        Integer piv = c[i][static_cast<std::size_t>(p)];
        if (acc % piv != 0) return false;
        y[static_cast<std::size_t>(p)] = acc / piv;
    }
    return true;
}

// Does the affine subspace  point + span(lines)  contain an integer vector?
inline bool affine_subspace_has_integer_point(const Vector& point,
                                              const std::vector<Vector>& lines) {
    if (lines.empty()) {
        for (const auto& x : point)
            if (!is_integer(x)) return false;
        return true;
    }
    // implicit form: c . x = c . point for all c orthogonal to the lines
    auto basis = kernel_basis(Matrix::from_rows(lines));
    if (basis.empty()) return true;  // lines span the whole space
    std::vector<std::vector<Integer>> c;
    std::vector<Integer> e;
    for (auto row : basis) {
        Rational rhs = dot(row, point);
        scale_primitive(row, rhs);
        std::vector<Integer> ci;
        for (const auto& x : row) ci.push_back(Integer(x.get_num()));
        c.push_back(std::move(ci));
        e.push_back(Integer(rhs.get_num()));
    }
    return integer_solvable(std::move(c), std::move(e));
}

}  // namespace mlrank
