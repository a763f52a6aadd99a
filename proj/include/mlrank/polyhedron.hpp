#pragma once

#include "mlrank/constraint.hpp"
#include "mlrank/double_description.hpp"
#include "mlrank/lattice.hpp"
#include "mlrank/linalg.hpp"
#include "mlrank/lp.hpp"

#include <algorithm>
#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <vector>

namespace mlrank {

// rho(x) = coeffs . x + constant
struct AffineFunc {
    Vector coeffs;
    Rational constant;

    Rational operator()(const Vector& x) const { return dot(coeffs, x) + constant; }
    bool operator==(const AffineFunc& o) const = default;
};

// Generator representation: P = convhull(vertices) + cone(rays).
// No vertices means the empty polyhedron, regardless of rays.
struct GeneratorRep {
    std::size_t dim = 0;
    std::vector<Vector> vertices;
    std::vector<Vector> rays;
};

namespace detail {

// Internal generator form keeping the lineality space separate: the points
// are representatives of the minimal faces, reduced modulo the lines.
struct ConeForm {
    std::vector<Vector> points;
    std::vector<Vector> rays;
    std::vector<Vector> lines;
    bool empty() const { return points.empty(); }
};

}  // namespace detail

// A rational convex polyhedron in constraint form: a . x <= b rows plus
// e . x = d rows, kept separately. Immutable after construction; the
// generator representation is computed lazily, once, and shared by copies.
class Polyhedron {
  public:
    explicit Polyhedron(std::size_t dim) : dim_(dim) {}

    Polyhedron(std::size_t dim, std::vector<LinearConstraint> rows) : dim_(dim) {
        for (auto& r : rows) add_row(std::move(r));
        normalize();
    }

    static Polyhedron full_space(std::size_t dim) { return Polyhedron(dim); }

    static Polyhedron empty(std::size_t dim) {
        Polyhedron p(dim);
        p.ineqs_.push_back(le(Vector(dim), rat(-1)));
        return p;
    }

    std::size_t dim() const { return dim_; }
    const std::vector<LinearConstraint>& ineqs() const { return ineqs_; }
    const std::vector<LinearConstraint>& eqs() const { return eqs_; }

    std::vector<LinearConstraint> constraints() const {
        std::vector<LinearConstraint> all = ineqs_;
        all.insert(all.end(), eqs_.begin(), eqs_.end());
        return all;
    }

    std::size_t row_count() const { return ineqs_.size() + eqs_.size(); }

    bool contains(const Vector& x) const {
        for (const auto& r : ineqs_)
            if (!satisfies(r, x)) return false;
        for (const auto& r : eqs_)
            if (!satisfies(r, x)) return false;
        return true;
    }

    const detail::ConeForm& cone_form() const {
        std::call_once(cache_->once, [&] { cache_->form = compute_cone_form(); });
        return cache_->form;
    }

  private:
    void add_row(LinearConstraint r) {
        if (r.coeffs.size() != dim_)
            throw std::invalid_argument("polyhedron row dimension mismatch");
        if (r.rel == Relation::Lt)
            throw std::invalid_argument("polyhedron rows must be closed");
        r = canonical(std::move(r));
        if (r.coeffs.is_zero()) {
            bool vacuous = r.rel == Relation::Le ? r.rhs >= 0 : r.rhs == 0;
            if (vacuous) return;
            // trivially false row: canonical empty form
            ineqs_.assign(1, le(Vector(dim_), rat(-1)));
            eqs_.clear();
            inconsistent_ = true;
            return;
        }
        if (inconsistent_) return;
        (r.rel == Relation::Eq ? eqs_ : ineqs_).push_back(std::move(r));
    }

    void normalize() {
        auto dedupe = [](std::vector<LinearConstraint>& rows) {
            std::sort(rows.begin(), rows.end(),
                      [](const LinearConstraint& a, const LinearConstraint& b) {
                          if (a.coeffs != b.coeffs) return lex_less(a.coeffs, b.coeffs);
                          return a.rhs < b.rhs;
                      });
            rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
        };
        dedupe(ineqs_);
        dedupe(eqs_);
    }

    detail::ConeForm compute_cone_form() const {
        // homogenize: lift a.x <= b to a.x - b*x0 <= 0 with x0 >= 0
        std::vector<Vector> le_rows, eq_rows;
        auto lift = [&](const LinearConstraint& r) {
            Vector v(dim_ + 1);
            for (std::size_t j = 0; j < dim_; ++j) v[j] = r.coeffs[j];
            v[dim_] = -r.rhs;
            return v;
        };
        for (const auto& r : ineqs_) le_rows.push_back(lift(r));
        for (const auto& r : eqs_) eq_rows.push_back(lift(r));
        Vector x0(dim_ + 1);
        x0[dim_] = -1;
        le_rows.push_back(std::move(x0));

        ConeGenerators cg = dd_cone(dim_ + 1, le_rows, eq_rows);
        detail::ConeForm out;
        for (const auto& l : cg.lines) {
            Vector v(dim_);
            for (std::size_t j = 0; j < dim_; ++j) v[j] = l[j];
            out.lines.push_back(std::move(v));  // lines always have x0 = 0
        }
        for (const auto& r : cg.rays) {
            Vector v(dim_);
            if (r[dim_] > 0) {
                for (std::size_t j = 0; j < dim_; ++j) v[j] = r[j] / r[dim_];
                out.points.push_back(std::move(v));
            } else {
                for (std::size_t j = 0; j < dim_; ++j) v[j] = r[j];
                out.rays.push_back(std::move(v));
            }
        }
        if (out.points.empty()) return detail::ConeForm{};  // empty polyhedron
        std::sort(out.points.begin(), out.points.end(), lex_less);
        std::sort(out.rays.begin(), out.rays.end(), lex_less);
        return out;
    }

    struct Cache {
        std::once_flag once;
        detail::ConeForm form;
    };

    std::size_t dim_;
    std::vector<LinearConstraint> ineqs_;
    std::vector<LinearConstraint> eqs_;
    bool inconsistent_ = false;
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

// --- basic predicates -------------------------------------------------------

inline bool is_empty(const Polyhedron& p) {
    return !feasible(p.constraints(), p.dim());
}

inline std::optional<Vector> some_point(const Polyhedron& p) {
    return feasible_point(p.constraints(), p.dim());
}

// max (or min) of a linear form over p
inline LPResult optimize(const Polyhedron& p, const Vector& objective, Sense sense) {
    return lp_solve(p.constraints(), objective, sense);
}

// Is  a . x <= b  satisfied by every point of p?
inline bool valid_over(const Polyhedron& p, const Vector& a, const Rational& b) {
    auto r = optimize(p, a, Sense::Max);
    if (r.infeasible()) return true;
    return r.optimal() && r.value <= b;
}

inline Polyhedron intersect(const Polyhedron& p, const Polyhedron& q) {
    if (p.dim() != q.dim()) throw std::invalid_argument("intersect: dimension mismatch");
    auto rows = p.constraints();
    auto qr = q.constraints();
    rows.insert(rows.end(), qr.begin(), qr.end());
    return Polyhedron(p.dim(), std::move(rows));
}

// includes(p, q): does p contain q?
inline bool includes(const Polyhedron& p, const Polyhedron& q) {
    if (p.dim() != q.dim()) throw std::invalid_argument("includes: dimension mismatch");
    if (is_empty(q)) return true;
    for (const auto& r : p.ineqs())
        if (!valid_over(q, r.coeffs, r.rhs)) return false;
    for (const auto& r : p.eqs()) {
        if (!valid_over(q, r.coeffs, r.rhs)) return false;
        if (!valid_over(q, -r.coeffs, -r.rhs)) return false;
    }
    return true;
}

inline bool set_equals(const Polyhedron& p, const Polyhedron& q) {
    return includes(p, q) && includes(q, p);
}

// --- redundancy removal ------------------------------------------------------

inline Polyhedron remove_redundant(const Polyhedron& p) {
    if (is_empty(p)) return Polyhedron::empty(p.dim());

    std::vector<LinearConstraint> kept = p.ineqs();
    std::vector<LinearConstraint> raw_eqs = p.eqs();

    // opposite inequality pairs are really equalities
    for (std::size_t i = 0; i < kept.size();) {
        bool merged = false;
        for (std::size_t j = i + 1; j < kept.size(); ++j) {
            if (kept[j].coeffs == -kept[i].coeffs && kept[j].rhs == -kept[i].rhs) {
                raw_eqs.push_back(canonical(eq(kept[i].coeffs, kept[i].rhs)));
                kept.erase(kept.begin() + j);
                kept.erase(kept.begin() + i);
                merged = true;
                break;
            }
        }
        if (!merged) ++i;
    }

    // linearly independent equalities via RREF of [E | d]
    std::vector<LinearConstraint> eqs;
    if (!raw_eqs.empty()) {
        Matrix aug(raw_eqs.size(), p.dim() + 1);
        for (std::size_t i = 0; i < raw_eqs.size(); ++i) {
            for (std::size_t j = 0; j < p.dim(); ++j) aug(i, j) = raw_eqs[i].coeffs[j];
            aug(i, p.dim()) = raw_eqs[i].rhs;
        }
        auto pivots = rref(aug);
        for (std::size_t k = 0; k < pivots.size(); ++k) {
            Vector a(p.dim());
            for (std::size_t j = 0; j < p.dim(); ++j) a[j] = aug(k, j);
            eqs.push_back(eq(std::move(a), aug(k, p.dim())));
        }
    }

    // inequality rows implied by the rest go away
    for (std::size_t i = 0; i < kept.size();) {
        std::vector<LinearConstraint> others = eqs;
        for (std::size_t j = 0; j < kept.size(); ++j)
            if (j != i) others.push_back(kept[j]);
        auto r = lp_solve(others, kept[i].coeffs, Sense::Max);
        bool redundant = r.optimal() && r.value <= kept[i].rhs;
        if (redundant)
            kept.erase(kept.begin() + i);
        else
            ++i;
    }
    // an equality can still be forced by the inequalities around it
    for (std::size_t i = 0; i < eqs.size();) {
        std::vector<LinearConstraint> others = kept;
        for (std::size_t j = 0; j < eqs.size(); ++j)
            if (j != i) others.push_back(eqs[j]);
        auto hi = lp_solve(others, eqs[i].coeffs, Sense::Max);
        auto lo = lp_solve(others, eqs[i].coeffs, Sense::Min);
        bool redundant = hi.optimal() && hi.value <= eqs[i].rhs && lo.optimal() &&
                         lo.value >= eqs[i].rhs;
        if (redundant)
            eqs.erase(eqs.begin() + i);
        else
            ++i;
    }
    std::vector<LinearConstraint> rows = std::move(kept);
    rows.insert(rows.end(), eqs.begin(), eqs.end());
    return Polyhedron(p.dim(), std::move(rows));
}

// --- projection and cones ----------------------------------------------------

// { y : A y <= 0 } with every right-hand side zeroed.
inline Polyhedron recession_cone(const Polyhedron& p) {
    std::vector<LinearConstraint> rows;
    for (const auto& r : p.ineqs()) rows.push_back(le(r.coeffs, rat(0)));
    for (const auto& r : p.eqs()) rows.push_back(eq(r.coeffs, rat(0)));
    return Polyhedron(p.dim(), std::move(rows));
}

// Exact projection onto the listed coordinates (strictly increasing indices).
// Equalities eliminate variables by substitution; the rest is Fourier-Motzkin
// with LP redundancy removal after each eliminated variable.
inline Polyhedron project(const Polyhedron& p, const std::vector<std::size_t>& coords) {
    for (std::size_t k = 0; k < coords.size(); ++k) {
        if (coords[k] >= p.dim()) throw std::invalid_argument("project: bad coordinate");
        if (k > 0 && coords[k] <= coords[k - 1])
            throw std::invalid_argument("project: coordinates must be increasing");
    }
    auto restrict_rows = [&](const std::vector<LinearConstraint>& rows) {
        std::vector<LinearConstraint> out;
        for (const auto& r : rows) {
            Vector a(coords.size());
            for (std::size_t k = 0; k < coords.size(); ++k) a[k] = r.coeffs[coords[k]];
            out.push_back({std::move(a), r.rhs, r.rel});
        }
        return out;
    };
    if (is_empty(p)) return Polyhedron::empty(coords.size());

    std::vector<bool> keep(p.dim(), false);
    for (auto c : coords) keep[c] = true;
    std::vector<std::size_t> elim;
    for (std::size_t j = 0; j < p.dim(); ++j)
        if (!keep[j]) elim.push_back(j);

    std::vector<LinearConstraint> ineqs = p.ineqs();
    std::vector<LinearConstraint> eqs = p.eqs();

    auto substitute = [&](std::size_t k, const LinearConstraint& src) {
        // src: e . x = d with e[k] != 0, used to eliminate x_k everywhere
        for (auto* rows : {&ineqs, &eqs})
            for (auto& r : *rows) {
                if (r.coeffs[k] == 0) continue;
                Rational f = r.coeffs[k] / src.coeffs[k];
                for (std::size_t j = 0; j < r.coeffs.size(); ++j)
                    r.coeffs[j] -= f * src.coeffs[j];
                r.rhs -= f * src.rhs;
            }
    };

    while (!elim.empty()) {
        // equality substitution first
        bool substituted = false;
        for (std::size_t ei = 0; ei < eqs.size() && !substituted; ++ei) {
            for (std::size_t ki = 0; ki < elim.size(); ++ki) {
                std::size_t k = elim[ki];
                if (eqs[ei].coeffs[k] == 0) continue;
                LinearConstraint src = eqs[ei];
                eqs.erase(eqs.begin() + ei);
                substitute(k, src);
                elim.erase(elim.begin() + ki);
                substituted = true;
                break;
            }
        }
        if (substituted) continue;

        // Fourier-Motzkin on the cheapest variable
        std::size_t best_ki = 0;
        std::size_t best_cost = SIZE_MAX;
        for (std::size_t ki = 0; ki < elim.size(); ++ki) {
            std::size_t pos = 0, neg = 0;
            for (const auto& r : ineqs) {
                if (r.coeffs[elim[ki]] > 0) ++pos;
                if (r.coeffs[elim[ki]] < 0) ++neg;
            }
            std::size_t cost = pos * neg;
            if (cost < best_cost) {
                best_cost = cost;
                best_ki = ki;
            }
        }
        std::size_t k = elim[best_ki];
        elim.erase(elim.begin() + best_ki);

        std::vector<LinearConstraint> next;
        std::vector<const LinearConstraint*> pos, neg;
        for (const auto& r : ineqs) {
            if (r.coeffs[k] > 0)
                pos.push_back(&r);
            else if (r.coeffs[k] < 0)
                neg.push_back(&r);
            else
                next.push_back(r);
        }
        for (const auto* pr : pos)
            for (const auto* nr : neg) {
                Rational cp = pr->coeffs[k], cn = nr->coeffs[k];
                Vector a = (-cn) * pr->coeffs + cp * nr->coeffs;
                Rational b = (-cn) * pr->rhs + cp * nr->rhs;
                next.push_back(canonical(le(std::move(a), std::move(b))));
            }
        // LP redundancy removal keeps the blowup in check
        next.insert(next.end(), eqs.begin(), eqs.end());
        Polyhedron inter = remove_redundant(Polyhedron(p.dim(), std::move(next)));
        ineqs = inter.ineqs();
        eqs = inter.eqs();
    }

    std::vector<LinearConstraint> rows = restrict_rows(ineqs);
    auto eq_rows = restrict_rows(eqs);
    rows.insert(rows.end(), eq_rows.begin(), eq_rows.end());
    return remove_redundant(Polyhedron(coords.size(), std::move(rows)));
}

// --- generator representation -------------------------------------------------

inline GeneratorRep generators(const Polyhedron& p) {
    const auto& cf = p.cone_form();
    GeneratorRep g;
    g.dim = p.dim();
    if (cf.empty()) return g;
    g.vertices = cf.points;
    g.rays = cf.rays;
    for (const auto& l : cf.lines) {
        g.rays.push_back(l);
        g.rays.push_back(-l);
    }
    std::sort(g.rays.begin(), g.rays.end(), lex_less);
    return g;
}

inline Polyhedron from_generators(const GeneratorRep& g) {
    if (g.vertices.empty()) return Polyhedron::empty(g.dim);
    // polar trick: facets of P are the generators of the cone
    // { (a, a0) : a.v_i + a0 <= 0, a.r_j <= 0 }
    std::vector<Vector> le_rows;
    for (const auto& v : g.vertices) {
        Vector row(g.dim + 1);
        for (std::size_t j = 0; j < g.dim; ++j) row[j] = v[j];
        row[g.dim] = 1;
        le_rows.push_back(std::move(row));
    }
    for (const auto& r : g.rays) {
        Vector row(g.dim + 1);
        for (std::size_t j = 0; j < g.dim; ++j) row[j] = r[j];
        le_rows.push_back(std::move(row));
    }
    ConeGenerators polar = dd_cone(g.dim + 1, le_rows, {});
    std::vector<LinearConstraint> rows;
    auto to_row = [&](const Vector& v, Relation rel) {
        Vector a(g.dim);
        for (std::size_t j = 0; j < g.dim; ++j) a[j] = v[j];
        rows.push_back({std::move(a), -v[g.dim], rel});
    };
    for (const auto& r : polar.rays) to_row(r, Relation::Le);
    for (const auto& l : polar.lines) to_row(l, Relation::Eq);
    return Polyhedron(g.dim, std::move(rows));
}

// Every minimal face carries an integer point iff the polyhedron equals its
// integer hull. For pointed polyhedra this is just integrality of vertices.
inline bool is_integral(const Polyhedron& p) {
    const auto& cf = p.cone_form();
    for (const auto& pt : cf.points)
        if (!affine_subspace_has_integer_point(pt, cf.lines)) return false;
    return true;
}

// --- cone membership ----------------------------------------------------------

// LP membership of v in cone(gens).
inline bool in_cone(const Vector& v, const std::vector<Vector>& gens) {
    const std::size_t k = gens.size();
    std::vector<LinearConstraint> rows;
    for (std::size_t j = 0; j < v.size(); ++j) {
        Vector a(k);
        for (std::size_t i = 0; i < k; ++i) a[i] = gens[i][j];
        rows.push_back(eq(std::move(a), v[j]));
    }
    for (std::size_t i = 0; i < k; ++i) {
        Vector a(k);
        a[i] = -1;
        rows.push_back(le(std::move(a), rat(0)));
    }
    return feasible(rows, k);
}

inline bool cone_equal(const std::vector<Vector>& a, const std::vector<Vector>& b) {
    for (const auto& v : a)
        if (!in_cone(v, b)) return false;
    for (const auto& v : b)
        if (!in_cone(v, a)) return false;
    return true;
}

// Drops generators that are conic combinations of the others.
inline std::vector<Vector> prune_conic_redundant(std::vector<Vector> gens) {
    for (std::size_t i = 0; i < gens.size();) {
        std::vector<Vector> others;
        for (std::size_t j = 0; j < gens.size(); ++j)
            if (j != i) others.push_back(gens[j]);
        if (in_cone(gens[i], others))
            gens.erase(gens.begin() + i);
        else
            ++i;
    }
    return gens;
}

// --- the nonnegative-functions cone -------------------------------------------

// Generators of N(proj_x(q)) = { (a, b) : a.x + b >= 0 on proj_x(q) }, for the
// projection onto the first nx coordinates. Farkas: (a, b) is in the cone iff
// lambda A = (-a, 0), lambda c <= b for some lambda >= 0 (free multipliers on
// equality rows). The generators are computed on that multiplier cone and
// projected to the (a, b) coordinates; no projection of q is ever computed.
// Precondition: q nonempty.
inline std::vector<AffineFunc> nonneg_cone(const Polyhedron& q, std::size_t nx) {
    if (nx > q.dim()) throw std::invalid_argument("nonneg_cone: bad split");
    const auto& in = q.ineqs();
    const auto& eqn = q.eqs();
    const std::size_t m_in = in.size(), m_eq = eqn.size();
    const std::size_t d = m_in + m_eq + nx + 1;  // lambda, nu, a, b
    const std::size_t a_at = m_in + m_eq;
    const std::size_t b_at = a_at + nx;

    std::vector<Vector> eq_rows, le_rows;
    for (std::size_t j = 0; j < q.dim(); ++j) {
        Vector row(d);
        for (std::size_t r = 0; r < m_in; ++r) row[r] = in[r].coeffs[j];
        for (std::size_t s = 0; s < m_eq; ++s) row[m_in + s] = eqn[s].coeffs[j];
        if (j < nx) row[a_at + j] = 1;
        eq_rows.push_back(std::move(row));
    }
    {
        Vector row(d);
        for (std::size_t r = 0; r < m_in; ++r) row[r] = in[r].rhs;
        for (std::size_t s = 0; s < m_eq; ++s) row[m_in + s] = eqn[s].rhs;
        row[b_at] = -1;
        le_rows.push_back(std::move(row));
    }
    for (std::size_t r = 0; r < m_in; ++r) {
        Vector row(d);
        row[r] = -1;
        le_rows.push_back(std::move(row));
    }

    ConeGenerators cg = dd_cone(d, le_rows, eq_rows);
    std::vector<Vector> gens;
    auto take = [&](const Vector& g) {
        Vector ab(nx + 1);
        for (std::size_t j = 0; j <= nx; ++j) ab[j] = g[a_at + j];
        if (ab.is_zero()) return;
        gens.push_back(primitive_direction(std::move(ab)));
    };
    for (const auto& r : cg.rays) take(r);
    for (const auto& l : cg.lines) {
        take(l);
        take(-l);
    }
    std::sort(gens.begin(), gens.end(), lex_less);
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    gens = prune_conic_redundant(std::move(gens));

    std::vector<AffineFunc> out;
    for (auto& g : gens) {
        Vector a(nx);
        for (std::size_t j = 0; j < nx; ++j) a[j] = g[j];
        out.push_back({std::move(a), g[nx]});
    }
    return out;
}

inline std::vector<AffineFunc> nonneg_cone(const Polyhedron& q) {
    if (q.dim() % 2 != 0)
        throw std::invalid_argument("nonneg_cone: default split needs even dimension");
    return nonneg_cone(q, q.dim() / 2);
}

}  // namespace mlrank
