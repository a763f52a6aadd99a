#pragma once

#include "mlrank/engine.hpp"
#include "mlrank/verdict.hpp"

#include <optional>
#include <vector>

namespace mlrank {

// Stacked displacement system over (x, y_0, ..., y_k):
//   D(x, y_0) <= c''  and  D(y_{i-1}, y_i) <= 0  for i = 1..k.
// All blocks share the displacement matrix of q; depth-bounded existence
// questions reduce to plain LP feasibility of this system.
struct StackedSystem {
    std::size_t n = 0;
    unsigned k = 0;
    Polyhedron system{0};
};

inline StackedSystem build_stacked(const TransitionPoly& q, unsigned k) {
    const std::size_t n = q.n;
    const std::size_t dim = n * (k + 2);
    Polyhedron disp = displacement(q);
    std::vector<LinearConstraint> rows;
    auto place = [&](const LinearConstraint& r, std::size_t lo, std::size_t hi, bool homog) {
        Vector a(dim);
        for (std::size_t j = 0; j < n; ++j) {
            a[lo * n + j] = r.coeffs[j];
            a[hi * n + j] = r.coeffs[n + j];
        }
        rows.push_back({std::move(a), homog ? rat(0) : r.rhs, r.rel});
    };
    for (const auto& r : disp.ineqs()) place(r, 0, 1, false);
    for (const auto& r : disp.eqs()) place(r, 0, 1, false);
    for (unsigned i = 1; i <= k; ++i) {
        for (const auto& r : disp.ineqs()) place(r, i, i + 1, true);
        for (const auto& r : disp.eqs()) place(r, i, i + 1, true);
    }
    return {n, k, Polyhedron(dim, std::move(rows))};
}

// Existence of a depth-d multiphase witness, decided by one LP feasibility
// check on the stacked system. No projection, no generator enumeration.
inline bool depth_decision(const TransitionPoly& q, unsigned d) {
    return is_empty(build_stacked(q, d).system);
}

// Least depth in 0..d_max admitting a witness; the linear scan doubles as a
// feasibility profile for diagnostics.
inline std::optional<unsigned> min_depth(const TransitionPoly& q, unsigned d_max) {
    for (unsigned d = 0; d <= d_max; ++d)
        if (depth_decision(q, d)) return d;
    return std::nullopt;
}

inline std::vector<bool> depth_profile(const TransitionPoly& q, unsigned d_max) {
    std::vector<bool> out;
    for (unsigned d = 0; d <= d_max; ++d) out.push_back(depth_decision(q, d));
    return out;
}

namespace detail {

inline bool recession_cone_is_origin(const Polyhedron& p) {
    Polyhedron cone = recession_cone(p);
    for (std::size_t j = 0; j < p.dim(); ++j) {
        Vector unit(p.dim());
        unit[j] = 1;
        for (Sense s : {Sense::Max, Sense::Min}) {
            auto r = optimize(cone, unit, s);
            if (!r.optimal() || r.value != 0) return false;
        }
    }
    return true;
}

}  // namespace detail

// Fast path for bounded transition polyhedra: such a loop is nonterminating
// iff it has a fixpoint transition, and terminating iff it has a depth-1
// witness. Returns nothing when q is unbounded.
inline std::optional<Verdict> bounded_loop_analyze(const TransitionPoly& q) {
    if (is_empty(q.poly)) {
        Verdict v;
        v.kind = VerdictKind::Mlrf;
        v.mlrf = Mlrf{};
        return v;
    }
    if (!detail::recession_cone_is_origin(q.poly)) return std::nullopt;

    Polyhedron fix = intersect(q.poly, identity_relation(q.n).poly);
    if (auto p = some_point(fix)) {
        Verdict v;
        v.kind = VerdictKind::Nonterminating;
        v.recurrent = RecurrentSet{fix, project(fix, [&] {
                                       std::vector<std::size_t> xs;
                                       for (std::size_t j = 0; j < q.n; ++j) xs.push_back(j);
                                       return xs;
                                   }())};
        Vector x(q.n);
        for (std::size_t j = 0; j < q.n; ++j) x[j] = (*p)[j];
        v.fixpoint = std::move(x);
        return v;
    }
    Verdict v;
    v.kind = VerdictKind::Mlrf;
    v.mlrf = synthesize_nested(q, 1);
    return v;
}

// For deterministic affine updates: when (U - I) is nilpotent the iteration
// is guaranteed to settle within the nilpotency index. The index of an n x n
// nilpotent matrix never exceeds n.
inline std::optional<unsigned> nilpotency_certificate(const TransitionPoly& q) {
    auto update = extract_affine_update(q);
    if (!update) return std::nullopt;
    const std::size_t n = q.n;
    Matrix m = update->u - Matrix::identity(n);
    Matrix p = m;
    for (unsigned k = 1; k <= n; ++k) {
        if (p.is_zero()) return k;
        p = p * m;
    }
    return std::nullopt;
}

}  // namespace mlrank
