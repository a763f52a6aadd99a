#pragma once

#include "mlrank/verdict.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

namespace mlrank {

// One application of the transition-elimination operator: conjoin
// a.x - a.x' <= 0 for every generator (a, b) of the nonnegative-function cone
// of the enabled states. Transitions strictly decreasing some nonnegative
// function disappear. Precondition: q nonempty.
//
// `skip` holds coefficient vectors whose rows were conjoined by earlier
// iterations; re-adding them cannot change the set.
inline TransitionPoly f_step_with(const TransitionPoly& q,
                                  const std::vector<AffineFunc>& gens,
                                  const std::vector<Vector>* skip = nullptr) {
    const std::size_t n = q.n;
    std::vector<LinearConstraint> rows = q.poly.constraints();
    for (const auto& g : gens) {
        if (g.coeffs.is_zero()) continue;  // constant functions eliminate nothing
        Vector key = primitive_direction(g.coeffs);
        if (skip && std::find(skip->begin(), skip->end(), key) != skip->end()) continue;
        Vector row(2 * n);
        for (std::size_t j = 0; j < n; ++j) {
            row[j] = g.coeffs[j];
            row[n + j] = -g.coeffs[j];
        }
        rows.push_back(le(std::move(row), rat(0)));
    }
    return {n, remove_redundant(Polyhedron(2 * n, std::move(rows))), q.loop};
}

inline TransitionPoly f_step(const TransitionPoly& q) {
    if (is_empty(q.poly)) throw std::logic_error("f_step: empty input");
    return f_step_with(q, nonneg_cone(q.poly, q.n));
}

inline TransitionPoly f_iterate(const TransitionPoly& q, unsigned k) {
    TransitionPoly cur = q;
    for (unsigned i = 0; i < k; ++i) {
        if (is_empty(cur.poly)) return cur;
        cur = f_step(cur);
    }
    return cur;
}

// --- nested synthesis -----------------------------------------------------------

namespace detail {

// Farkas encoding of "g(x'') . x'' + h >= 0 over q" with g, h affine in the
// template unknowns; appends the multiplier block and the coupling rows.
struct NestedLP {
    explicit NestedLP(const TransitionPoly& q, std::size_t d)
        : q_(q), n_(q.n), d_(d), m_in_(q.poly.ineqs().size()), m_eq_(q.poly.eqs().size()) {
        total_ = d_ * (n_ + 1) + (d_ + 1) * (m_in_ + m_eq_);
    }

    std::size_t a_at(std::size_t i, std::size_t j) const { return i * (n_ + 1) + j; }
    std::size_t b_at(std::size_t i) const { return i * (n_ + 1) + n_; }
    std::size_t lambda_at(std::size_t group, std::size_t r) const {
        return d_ * (n_ + 1) + group * (m_in_ + m_eq_) + r;
    }

    // condition: sum_i coef_x[i] * a_i . x + sum_i coef_xp[i] * a_i . x'
    //            + (affine constants) >= 0 over q, via multiplier group g
    void add_validity(std::size_t group, const std::vector<Rational>& coef_x,
                      const std::vector<Rational>& coef_xp,
                      const std::vector<Rational>& coef_b, const Rational& h0) {
        const auto& in = q_.poly.ineqs();
        const auto& eqs = q_.poly.eqs();
        for (std::size_t j = 0; j < 2 * n_; ++j) {
            Vector row(total_);
            for (std::size_t i = 0; i < d_; ++i) {
                if (j < n_ && coef_x[i] != 0) row[a_at(i, j)] += coef_x[i];
                if (j >= n_ && coef_xp[i] != 0) row[a_at(i, j - n_)] += coef_xp[i];
            }
            for (std::size_t r = 0; r < m_in_; ++r) row[lambda_at(group, r)] = in[r].coeffs[j];
            for (std::size_t s = 0; s < m_eq_; ++s)
                row[lambda_at(group, m_in_ + s)] = eqs[s].coeffs[j];
            rows_.push_back(eq(std::move(row), rat(0)));
        }
        {
            Vector row(total_);
            for (std::size_t r = 0; r < m_in_; ++r) row[lambda_at(group, r)] = in[r].rhs;
            for (std::size_t s = 0; s < m_eq_; ++s) row[lambda_at(group, m_in_ + s)] = eqs[s].rhs;
            for (std::size_t i = 0; i < d_; ++i)
                if (coef_b[i] != 0) row[b_at(i)] -= coef_b[i];
            rows_.push_back(le(std::move(row), h0));
        }
        for (std::size_t r = 0; r < m_in_; ++r) {
            Vector row(total_);
            row[lambda_at(group, r)] = -1;
            rows_.push_back(le(std::move(row), rat(0)));
        }
    }

    std::optional<Mlrf> solve() {
        auto point = feasible_point(rows_, total_);
        if (!point) return std::nullopt;
        Mlrf out;
        for (std::size_t i = 0; i < d_; ++i) {
            Vector a(n_);
            for (std::size_t j = 0; j < n_; ++j) a[j] = (*point)[a_at(i, j)];
            out.components.push_back({std::move(a), (*point)[b_at(i)]});
        }
        return out;
    }

    const TransitionPoly& q_;
    std::size_t n_, d_, m_in_, m_eq_, total_;
    std::vector<LinearConstraint> rows_;
};

}  // namespace detail

// Nested template at depth d over the original q:
//   delta(rho_1) >= 1 on q
//   delta(rho_i) + rho_{i-1}(x) >= 1 on q     (2 <= i <= d)
//   rho_d(x) >= 0 on proj_x(q)
// One feasibility LP over the Farkas multipliers. Returns nothing when the
// template is infeasible (q has no nested witness at this depth).
inline std::optional<Mlrf> try_synthesize_nested(const TransitionPoly& q, std::size_t d) {
    if (d == 0) {
        if (!is_empty(q.poly)) return std::nullopt;
        return Mlrf{};
    }
    if (is_empty(q.poly)) return Mlrf{};  // any tuple ranks the empty set; keep it short
    detail::NestedLP lp(q, d);
    std::vector<Rational> zero(d, rat(0));
    for (std::size_t i = 0; i < d; ++i) {
        // delta(rho_i) + rho_{i-1} - 1 >= 0   (rho_0 = 0)
        auto cx = zero, cxp = zero, cb = zero;
        cx[i] = 1;
        cxp[i] = -1;
        if (i > 0) {
            cx[i - 1] += 1;
            cb[i - 1] = 1;
        }
        lp.add_validity(i, cx, cxp, cb, rat(-1));
    }
    {
        // rho_d(x) >= 0 over the enabled states
        auto cx = zero, cxp = zero, cb = zero;
        cx[d - 1] = 1;
        cb[d - 1] = 1;
        lp.add_validity(d, cx, cxp, cb, rat(0));
    }
    return lp.solve();
}

// Depth d is expected to be attainable (the optimal depth reported by the
// iteration); failure indicates a bug upstream.
inline Mlrf synthesize_nested(const TransitionPoly& q, std::size_t d) {
    auto m = try_synthesize_nested(q, d);
    if (!m)
        throw std::logic_error(
            "synthesize_nested: template LP infeasible at the reported depth");
    return *m;
}

// --- the main iteration ----------------------------------------------------------

inline Verdict find_mlrf(const TransitionPoly& q, const Limits& limits = {}) {
    limits.validate();
    Verdict v;
    TransitionPoly cur = q;
    std::vector<Vector> used;
    int i = 0;
    for (;;) {
        if (is_empty(cur.poly)) {
            v.kind = VerdictKind::Mlrf;
            v.mlrf = synthesize_nested(q, static_cast<std::size_t>(i));
            v.iterations = i;
            return v;
        }
        if (limits.depth_bound && i >= *limits.depth_bound) {
            v.kind = VerdictKind::Unknown;
            v.reason = UnknownReason::DepthBound;
            v.iterations = i;
            return v;
        }
        if (i >= limits.max_iterations) {
            v.kind = VerdictKind::Unknown;
            v.reason = UnknownReason::IterationCap;
            v.iterations = i;
            return v;
        }
        auto gens = nonneg_cone(cur.poly, cur.n);
        TransitionPoly next = f_step_with(cur, gens, &used);
        v.trace.push_back({i + 1, gens.size(), next.poly.row_count()});
        if (set_equals(next.poly, cur.poly)) {
            v.kind = VerdictKind::Nonterminating;
            v.recurrent = RecurrentSet{cur.poly, proj_x(cur)};
            v.iterations = i + 1;
            // surface a fixpoint witness when one exists
            auto fix = intersect(cur.poly, identity_relation(cur.n).poly);
            if (auto p = some_point(fix)) {
                Vector x(cur.n);
                for (std::size_t j = 0; j < cur.n; ++j) x[j] = (*p)[j];
                v.fixpoint = std::move(x);
            }
            return v;
        }
        for (const auto& g : gens)
            if (!g.coeffs.is_zero()) {
                Vector key = primitive_direction(g.coeffs);
                if (std::find(used.begin(), used.end(), key) == used.end())
                    used.push_back(std::move(key));
            }
        cur = std::move(next);
        ++i;
    }
}

// --- conic strengthening -----------------------------------------------------------

// Given rho_1..rho_k with (i)  x in P -> rho_1 > 0 or ... or rho_{k-1} > 0
//                                        or rho_k >= 0
// and                     (ii) not (x in P -> rho_1 > 0 or ... or rho_{k-1} > 0),
// produces mu >= 0 with  sum mu_i rho_i + rho_k >= 0 on P.
struct ConicStrengthenResult {
    enum class Status { Ok, HypothesisIFailed, HypothesisIIFailed };
    Status status = Status::Ok;
    std::vector<Rational> mu;
    bool ok() const { return status == Status::Ok; }
};

inline ConicStrengthenResult conic_strengthen(const Polyhedron& p,
                                              const std::vector<AffineFunc>& rho) {
    if (rho.empty()) throw std::invalid_argument("conic_strengthen: needs rho_k");
    const std::size_t k = rho.size();
    const std::size_t n = p.dim();

    std::vector<LinearConstraint> base = p.constraints();
    for (std::size_t i = 0; i + 1 < k; ++i)
        base.push_back(le(rho[i].coeffs, -rho[i].constant));  // rho_i <= 0
    {
        auto with_strict = base;
        with_strict.push_back(lt(rho[k - 1].coeffs, -rho[k - 1].constant));  // rho_k < 0
        if (strict_feasible(with_strict, n))
            return {ConicStrengthenResult::Status::HypothesisIFailed, {}};
    }
    if (!feasible(base, n)) return {ConicStrengthenResult::Status::HypothesisIIFailed, {}};
    if (k == 1) return {ConicStrengthenResult::Status::Ok, {}};

    // unknowns: mu_1..mu_{k-1} >= 0, then multipliers for validity over p
    const auto& in = p.ineqs();
    const auto& eqs = p.eqs();
    const std::size_t m_in = in.size(), m_eq = eqs.size();
    const std::size_t total = (k - 1) + m_in + m_eq;
    std::vector<LinearConstraint> rows;
    for (std::size_t j = 0; j < n; ++j) {
        Vector row(total);
        for (std::size_t i = 0; i + 1 < k; ++i) row[i] = rho[i].coeffs[j];
        for (std::size_t r = 0; r < m_in; ++r) row[k - 1 + r] = in[r].coeffs[j];
        for (std::size_t s = 0; s < m_eq; ++s) row[k - 1 + m_in + s] = eqs[s].coeffs[j];
        rows.push_back(eq(std::move(row), -rho[k - 1].coeffs[j]));
    }
    {
        Vector row(total);
        for (std::size_t i = 0; i + 1 < k; ++i) row[i] = -rho[i].constant;
        for (std::size_t r = 0; r < m_in; ++r) row[k - 1 + r] = in[r].rhs;
        for (std::size_t s = 0; s < m_eq; ++s) row[k - 1 + m_in + s] = eqs[s].rhs;
        rows.push_back(le(std::move(row), rho[k - 1].constant));
    }
    for (std::size_t i = 0; i + 1 < k; ++i) {
        Vector row(total);
        row[i] = -1;
        rows.push_back(le(std::move(row), rat(0)));
    }
    for (std::size_t r = 0; r < m_in; ++r) {
        Vector row(total);
        row[k - 1 + r] = -1;
        rows.push_back(le(std::move(row), rat(0)));
    }
    auto point = feasible_point(rows, total);
    if (!point)
        throw std::logic_error("conic_strengthen: multiplier LP infeasible under valid hypotheses");
    ConicStrengthenResult out;
    for (std::size_t i = 0; i + 1 < k; ++i) out.mu.push_back((*point)[i]);

    // LP-verify the certificate before handing it out
    Vector g = rho[k - 1].coeffs;
    Rational h = rho[k - 1].constant;
    for (std::size_t i = 0; i + 1 < k; ++i) {
        g = g + out.mu[i] * rho[i].coeffs;
        h += out.mu[i] * rho[i].constant;
    }
    auto check = optimize(p, g, Sense::Min);
    if (!(check.optimal() && check.value + h >= 0))
        throw std::logic_error("conic_strengthen: produced certificate fails verification");
    return out;
}

// --- membership in the bounded-lookahead LRF class ------------------------------------

// Does q, restricted to states that still admit runs of length >= b, have a
// linear ranking function? Returns the LRF of the restricted loop.
inline std::optional<AffineFunc> dellrf_membership(const TransitionPoly& q, unsigned b) {
    if (b < 1) throw std::invalid_argument("dellrf_membership: b must be positive");
    Polyhedron reach = pre(q, b);
    std::vector<LinearConstraint> rows = q.poly.constraints();
    for (const auto& r : reach.ineqs()) {
        Vector a(2 * q.n);
        for (std::size_t j = 0; j < q.n; ++j) a[j] = r.coeffs[j];
        rows.push_back(le(std::move(a), r.rhs));
    }
    for (const auto& r : reach.eqs()) {
        Vector a(2 * q.n);
        for (std::size_t j = 0; j < q.n; ++j) a[j] = r.coeffs[j];
        rows.push_back(eq(std::move(a), r.rhs));
    }
    TransitionPoly restricted{q.n, Polyhedron(2 * q.n, std::move(rows)), q.loop};
    if (is_empty(restricted.poly)) {
        // no state survives b steps; any nonnegative constant ranks it
        return AffineFunc{Vector(q.n), rat(1)};
    }
    auto m = try_synthesize_nested(restricted, 1);
    if (!m) return std::nullopt;
    return m->components[0];
}

// --- integer reasoning ------------------------------------------------------------------

// Branch and bound over exact LPs; the budget caps explored nodes, and an
// exhausted budget means "not established", never "absent".
inline std::optional<Vector> find_integer_point(const Polyhedron& s, int budget = 256) {
    struct Node {
        std::vector<LinearConstraint> rows;
    };
    std::vector<Node> stack{{s.constraints()}};
    int used = 0;
    while (!stack.empty() && used < budget) {
        ++used;
        Node node = std::move(stack.back());
        stack.pop_back();
        auto p = feasible_point(node.rows, s.dim());
        if (!p) continue;
        std::size_t frac = s.dim();
        for (std::size_t j = 0; j < s.dim(); ++j)
            if (!is_integer((*p)[j])) {
                frac = j;
                break;
            }
        if (frac == s.dim()) return p;
        Rational lo{floor_int((*p)[frac])};
        Rational hi{ceil_int((*p)[frac])};
        Vector unit(s.dim());
        unit[frac] = 1;
        Node left{node.rows}, right{std::move(node.rows)};
        left.rows.push_back(le(unit, lo));
        right.rows.push_back(ge(unit, hi));
        stack.push_back(std::move(right));
        stack.push_back(std::move(left));
    }
    return std::nullopt;
}

// Integer-mode analysis. Sound rather than complete: only integral transition
// polyhedra are analyzed (their integer hull is themselves), and a recurrent
// set proves integer nontermination only with an integer affine update and an
// integer transition inside the set.
inline Verdict analyze_integer(const TransitionPoly& q, const Limits& limits = {}) {
    if (!is_integral(q.poly)) {
        Verdict v;
        v.kind = VerdictKind::Unknown;
        v.reason = UnknownReason::IntegerHullRequired;
        return v;
    }
    Verdict v = find_mlrf(q, limits);
    if (v.kind != VerdictKind::Nonterminating) return v;

    auto update = extract_affine_update(q);
    bool integer_update = update.has_value();
    if (integer_update) {
        for (std::size_t i = 0; i < q.n && integer_update; ++i) {
            if (!is_integer(update->c[i])) integer_update = false;
            for (std::size_t j = 0; j < q.n && integer_update; ++j)
                if (!is_integer(update->u(i, j))) integer_update = false;
        }
    }
    std::optional<Vector> witness;
    if (integer_update) witness = find_integer_point(v.recurrent->transitions);
    if (!integer_update || !witness) {
        Verdict down;
        down.kind = VerdictKind::Unknown;
        down.reason = UnknownReason::RationalRecurrence;
        down.iterations = v.iterations;
        down.trace = std::move(v.trace);
        return down;
    }
    v.integer_witness = std::move(witness);
    return v;
}

}  // namespace mlrank
