#pragma once

#include "mlrank/polyhedron.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mlrank {

// while (B x <= b) do A x + A' x' <= c, with = rows allowed on either side.
// Guard rows live in dimension n, update rows in dimension 2n.
struct SLCLoop {
    std::vector<std::string> vars;
    std::vector<LinearConstraint> guard;
    std::vector<LinearConstraint> update;

    std::size_t n() const { return vars.size(); }
};

// The set of transitions (x, x') of a loop, as a polyhedron in 2n dimensions.
// Keeps a provenance link to the loop it was built from, when there is one;
// relation composition produces provenance-free values.
struct TransitionPoly {
    std::size_t n = 0;
    Polyhedron poly{0};
    std::optional<SLCLoop> loop;
};

// x' = U x + c
struct AffineUpdate {
    Matrix u;
    Vector c;
};

inline TransitionPoly build_transition_polyhedron(const SLCLoop& l) {
    const std::size_t n = l.n();
    std::vector<LinearConstraint> rows;
    for (const auto& g : l.guard) {
        if (g.coeffs.size() != n)
            throw std::invalid_argument("guard row dimension mismatch");
        Vector a(2 * n);
        for (std::size_t j = 0; j < n; ++j) a[j] = g.coeffs[j];
        rows.push_back({std::move(a), g.rhs, g.rel});
    }
    for (const auto& u : l.update) {
        if (u.coeffs.size() != 2 * n)
            throw std::invalid_argument("update row dimension mismatch");
        rows.push_back(u);
    }
    return {n, Polyhedron(2 * n, std::move(rows)), l};
}

// T^0: { (x, x') : x' = x }, empty guard.
inline TransitionPoly identity_relation(std::size_t n) {
    std::vector<LinearConstraint> rows;
    for (std::size_t i = 0; i < n; ++i) {
        Vector a(2 * n);
        a[i] = -1;
        a[n + i] = 1;
        rows.push_back(eq(std::move(a), rat(0)));
    }
    return {n, Polyhedron(2 * n, std::move(rows)), std::nullopt};
}

// { (x, z) : exists y. (x, y) in S and (y, z) in T }
inline TransitionPoly compose(const TransitionPoly& s, const TransitionPoly& t) {
    if (s.n != t.n) throw std::invalid_argument("compose: dimension mismatch");
    const std::size_t n = s.n;
    std::vector<LinearConstraint> rows;
    auto widen = [&](const LinearConstraint& r, std::size_t lo_block, std::size_t hi_block) {
        Vector a(3 * n);
        for (std::size_t j = 0; j < n; ++j) {
            a[lo_block * n + j] = r.coeffs[j];
            a[hi_block * n + j] = r.coeffs[n + j];
        }
        return LinearConstraint{std::move(a), r.rhs, r.rel};
    };
    for (const auto& r : s.poly.ineqs()) rows.push_back(widen(r, 0, 1));
    for (const auto& r : s.poly.eqs()) rows.push_back(widen(r, 0, 1));
    for (const auto& r : t.poly.ineqs()) rows.push_back(widen(r, 1, 2));
    for (const auto& r : t.poly.eqs()) rows.push_back(widen(r, 1, 2));
    Polyhedron joint(3 * n, std::move(rows));
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < n; ++j) keep.push_back(j);
    for (std::size_t j = 2 * n; j < 3 * n; ++j) keep.push_back(j);
    return {n, project(joint, keep), std::nullopt};
}

inline TransitionPoly power(const TransitionPoly& t, unsigned k) {
    TransitionPoly acc = identity_relation(t.n);
    for (unsigned i = 0; i < k; ++i) acc = compose(acc, t);
    return acc;
}

// States admitting runs of length at least k: proj_x(T^k).
inline Polyhedron pre(const TransitionPoly& t, unsigned k) {
    if (k < 1) throw std::invalid_argument("pre: k must be positive");
    TransitionPoly tk = power(t, k);
    std::vector<std::size_t> xs;
    for (std::size_t j = 0; j < t.n; ++j) xs.push_back(j);
    return project(tk.poly, xs);
}

inline Polyhedron proj_x(const TransitionPoly& t) {
    std::vector<std::size_t> xs;
    for (std::size_t j = 0; j < t.n; ++j) xs.push_back(j);
    return project(t.poly, xs);
}

inline Polyhedron proj_xp(const TransitionPoly& t) {
    std::vector<std::size_t> xs;
    for (std::size_t j = t.n; j < 2 * t.n; ++j) xs.push_back(j);
    return project(t.poly, xs);
}

// Displacement polyhedron: the change of variables y = x' - x. A row
// u.x + v.x' <= c becomes (u+v).x + v.y <= c, so the block matrix
// (B 0; A A') turns into (B 0; A+A' A') with the same right-hand side.
// No projection is involved; the map (x, x') -> (x, y) is a bijection.
inline Polyhedron displacement(const TransitionPoly& q) {
    const std::size_t n = q.n;
    std::vector<LinearConstraint> rows;
    auto shift = [&](const LinearConstraint& r) {
        Vector a(2 * n);
        for (std::size_t j = 0; j < n; ++j) {
            a[j] = r.coeffs[j] + r.coeffs[n + j];
            a[n + j] = r.coeffs[n + j];
        }
        return LinearConstraint{std::move(a), r.rhs, r.rel};
    };
    for (const auto& r : q.poly.ineqs()) rows.push_back(shift(r));
    for (const auto& r : q.poly.eqs()) rows.push_back(shift(r));
    return Polyhedron(2 * n, std::move(rows));
}

// Enabled states used for validating an extracted update: the loop guard when
// provenance is known, otherwise proj_x(Q).
inline Polyhedron guard_polyhedron(const TransitionPoly& q) {
    if (q.loop) return Polyhedron(q.n, q.loop->guard);
    return proj_x(q);
}

// Detects a deterministic affine update x' = U x + c. Only equality rows are
// consulted: they must pin every primed variable to a linear form over x, and
// substituting the form back must keep every row of Q valid over the guard.
inline std::optional<AffineUpdate> extract_affine_update(const TransitionPoly& q) {
    const std::size_t n = q.n;
    const auto& eqs = q.poly.eqs();
    if (eqs.empty()) return std::nullopt;

    // columns ordered (x', x, rhs) so the RREF pivots land on the x' block
    Matrix m(eqs.size(), 2 * n + 1);
    for (std::size_t i = 0; i < eqs.size(); ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m(i, j) = eqs[i].coeffs[n + j];
            m(i, n + j) = eqs[i].coeffs[j];
        }
        m(i, 2 * n) = eqs[i].rhs;
    }
    auto pivots = rref(m);
    if (pivots.size() < n) return std::nullopt;
    for (std::size_t k = 0; k < n; ++k)
        if (pivots[k] != k) return std::nullopt;

    Matrix u(n, n);
    Vector c(n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) u(k, j) = -m(k, n + j);
        c[k] = m(k, 2 * n);
    }

    // substitute x' = Ux + c into every row; all must hold on the guard
    Polyhedron g = guard_polyhedron(q);
    auto substituted_valid = [&](const LinearConstraint& r) {
        Vector a(n);
        Rational b = r.rhs;
        for (std::size_t j = 0; j < n; ++j) a[j] = r.coeffs[j];
        for (std::size_t i = 0; i < n; ++i) {
            if (r.coeffs[n + i] == 0) continue;
            for (std::size_t j = 0; j < n; ++j) a[j] += r.coeffs[n + i] * u(i, j);
            b -= r.coeffs[n + i] * c[i];
        }
        if (!valid_over(g, a, b)) return false;
        if (r.rel == Relation::Eq && !valid_over(g, -a, -b)) return false;
        return true;
    };
    for (const auto& r : q.poly.ineqs())
        if (!substituted_valid(r)) return std::nullopt;
    for (const auto& r : q.poly.eqs())
        if (!substituted_valid(r)) return std::nullopt;
    return AffineUpdate{std::move(u), std::move(c)};
}

}  // namespace mlrank
