#pragma once

#include "mlrank/constraint.hpp"
#include "mlrank/linalg.hpp"
#include "mlrank/rational.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace mlrank {

enum class Sense { Max, Min };

struct LPResult {
    enum class Status { Optimal, Unbounded, Infeasible };
    Status status;
    Vector point;    // optimal point (original variables), when Optimal
    Rational value;  // objective value at point, when Optimal

    bool optimal() const { return status == Status::Optimal; }
    bool unbounded() const { return status == Status::Unbounded; }
    bool infeasible() const { return status == Status::Infeasible; }
};

namespace detail {

// Two-phase primal simplex on the standard-form tableau, Bland's rule
// throughout. All arithmetic exact, so degenerate pivoting cannot cycle and
// the reported status is a certificate-grade answer.
//
// Free variables x are split as x = u - v with u, v >= 0; every <= row gets a
// slack. Rows are sign-normalized to nonnegative right-hand sides before
// phase 1 artificials are introduced.
class Simplex {
  public:
    Simplex(const std::vector<LinearConstraint>& rows, std::size_t n) : n_(n) {
        for (const auto& r : rows) {
            if (r.coeffs.size() != n_)
                throw std::invalid_argument("lp_solve: constraint dimension mismatch");
            if (r.rel == Relation::Lt)
                throw std::invalid_argument("lp_solve: strict row not allowed");
        }
        m_ = rows.size();
        num_slack_ = 0;
        for (const auto& r : rows)
            if (r.rel == Relation::Le) ++num_slack_;
        cols_ = 2 * n_ + num_slack_ + m_;  // u, v, slacks, artificials
        tab_.assign(m_, std::vector<Rational>(cols_ + 1, Rational(0)));
        basis_.assign(m_, 0);

        std::size_t slack_at = 2 * n_;
        for (std::size_t i = 0; i < m_; ++i) {
            const auto& r = rows[i];
            bool flip = r.rhs < 0;
            Rational s = flip ? Rational(-1) : Rational(1);
            for (std::size_t j = 0; j < n_; ++j) {
                tab_[i][j] = s * r.coeffs[j];
                tab_[i][n_ + j] = -s * r.coeffs[j];
            }
            tab_[i][cols_] = s * r.rhs;
            std::size_t art = 2 * n_ + num_slack_ + i;
            if (r.rel == Relation::Le) {
                tab_[i][slack_at] = s;
                if (!flip) {
                    basis_[i] = slack_at;  // slack usable as initial basis
                } else {
                    tab_[i][art] = 1;
                    basis_[i] = art;
                    has_artificial_ = true;
                }
                ++slack_at;
            } else {
                tab_[i][art] = 1;
                basis_[i] = art;
                has_artificial_ = true;
            }
        }
    }

    // Returns false iff infeasible.
    bool phase1() {
        if (!has_artificial_) return true;
        std::vector<Rational> cost(cols_, Rational(0));
        for (std::size_t j = first_artificial(); j < cols_; ++j) cost[j] = -1;
        run(cost);
        Rational v(0);
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] >= first_artificial()) v += tab_[i][cols_];
        if (v != 0) return false;
        // Drive remaining zero-level artificials out of the basis.
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < first_artificial()) continue;
            std::size_t piv = cols_;
            for (std::size_t j = 0; j < first_artificial(); ++j)
                if (tab_[i][j] != 0) {
                    piv = j;
                    break;
                }
            if (piv == cols_) {
                dead_row_[i] = true;  // redundant row
            } else {
                pivot(i, piv);
            }
        }
        artificial_banned_ = true;
        return true;
    }

    // Maximizes obj over the feasible region; returns false iff unbounded.
    bool phase2(const Vector& obj) {
        std::vector<Rational> cost(cols_, Rational(0));
        for (std::size_t j = 0; j < n_; ++j) {
            cost[j] = obj[j];
            cost[n_ + j] = -obj[j];
        }
        return run(cost);
    }

    Vector extract_point() const {
        Vector x(n_);
        for (std::size_t i = 0; i < m_; ++i) {
            if (dead_row_[i]) continue;
            std::size_t b = basis_[i];
            if (b < n_)
                x[b] += tab_[i][cols_];
            else if (b < 2 * n_)
                x[b - n_] -= tab_[i][cols_];
        }
        return x;
    }

  private:
    std::size_t first_artificial() const { return 2 * n_ + num_slack_; }

    std::size_t column_limit() const {
        return artificial_banned_ ? first_artificial() : cols_;
    }

    void pivot(std::size_t row, std::size_t col) {
        Rational inv = 1 / tab_[row][col];
        for (auto& x : tab_[row]) x *= inv;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == row || tab_[i][col] == 0) continue;
            Rational f = tab_[i][col];
            for (std::size_t j = 0; j <= cols_; ++j) tab_[i][j] -= f * tab_[row][j];
        }
        basis_[row] = col;
    }

    // Bland: entering = lowest-index column with positive reduced cost,
    // leaving = lowest-index basic variable among minimum-ratio rows.
    bool run(const std::vector<Rational>& cost) {
        if (dead_row_.size() != m_) dead_row_.assign(m_, false);
        for (;;) {
            // reduced costs recomputed from scratch: z_j - c_j
            std::size_t enter = cols_;
            for (std::size_t j = 0; j < column_limit(); ++j) {
                Rational zj(0);
                bool basic = false;
                for (std::size_t i = 0; i < m_; ++i) {
                    if (dead_row_[i]) continue;
                    if (basis_[i] == j) {
                        basic = true;
                        break;
                    }
                    if (cost[basis_[i]] != 0 && tab_[i][j] != 0)
                        zj += cost[basis_[i]] * tab_[i][j];
                }
                if (basic) continue;
                if (cost[j] - zj > 0) {
                    enter = j;
                    break;
                }
            }
            if (enter == cols_) return true;  // optimal
            std::size_t leave = m_;
            Rational best;
            for (std::size_t i = 0; i < m_; ++i) {
                if (dead_row_[i] || tab_[i][enter] <= 0) continue;
                Rational ratio = tab_[i][cols_] / tab_[i][enter];
                if (leave == m_ || ratio < best ||
                    (ratio == best && basis_[i] < basis_[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == m_) return false;  // unbounded
            pivot(leave, enter);
        }
    }

    std::size_t n_, m_, num_slack_ = 0, cols_;
    std::vector<std::vector<Rational>> tab_;
    std::vector<std::size_t> basis_;
    std::vector<bool> dead_row_;
    bool has_artificial_ = false;
    bool artificial_banned_ = false;
};

}  // namespace detail

inline LPResult lp_solve(const std::vector<LinearConstraint>& rows,
                         const Vector& objective, Sense sense) {
    const std::size_t n = objective.size();
    detail::Simplex s(rows, n);
    if (!s.phase1()) return {LPResult::Status::Infeasible, {}, {}};
    Vector obj = sense == Sense::Max ? objective : -objective;
    if (!s.phase2(obj)) return {LPResult::Status::Unbounded, {}, {}};
    Vector x = s.extract_point();
    return {LPResult::Status::Optimal, x, dot(objective, x)};
}

inline bool feasible(const std::vector<LinearConstraint>& rows, std::size_t n) {
    detail::Simplex s(rows, n);
    return s.phase1();
}

inline std::optional<Vector> feasible_point(const std::vector<LinearConstraint>& rows,
                                            std::size_t n) {
    auto r = lp_solve(rows, Vector(n), Sense::Max);
    if (!r.optimal()) return std::nullopt;
    return r.point;
}

// Decides satisfiability of a mixed strict/non-strict system: one shared
// slack eps is added to every strict row, maximized under eps <= 1, and the
// system is strictly satisfiable iff the optimum is positive.
inline bool strict_feasible(const std::vector<LinearConstraint>& rows, std::size_t n) {
    std::vector<LinearConstraint> ext;
    ext.reserve(rows.size() + 1);
    for (const auto& r : rows) {
        if (r.coeffs.size() != n)
            throw std::invalid_argument("strict_feasible: dimension mismatch");
        Vector a(n + 1);
        for (std::size_t j = 0; j < n; ++j) a[j] = r.coeffs[j];
        if (r.rel == Relation::Lt) a[n] = 1;
        ext.push_back({std::move(a), r.rhs, r.rel == Relation::Eq ? Relation::Eq : Relation::Le});
    }
    Vector cap(n + 1);
    cap[n] = 1;
    ext.push_back(le(cap, Rational(1)));
    Vector obj(n + 1);
    obj[n] = 1;
    auto res = lp_solve(ext, obj, Sense::Max);
    return res.optimal() && res.value > 0;
}

}  // namespace mlrank
