#pragma once

#include "mlrank/constraint.hpp"
#include "mlrank/linalg.hpp"

#include <algorithm>
#include <cstdint>
#include <cstddef>
#include <vector>

namespace mlrank {

// Generators of a polyhedral cone: cone = lin(lines) + cone(rays).
struct ConeGenerators {
    std::vector<Vector> lines;
    std::vector<Vector> rays;
};

namespace detail {

class Bitset {
  public:
    explicit Bitset(std::size_t n = 0) : n_(n), w_((n + 63) / 64, 0) {}
    void set(std::size_t i) { w_[i / 64] |= std::uint64_t(1) << (i % 64); }
    bool test(std::size_t i) const {
        return (w_[i / 64] >> (i % 64)) & 1;
    }
    Bitset operator&(const Bitset& o) const {
        Bitset r(n_);
        for (std::size_t k = 0; k < w_.size(); ++k) r.w_[k] = w_[k] & o.w_[k];
        return r;
    }
    bool subset_of(const Bitset& o) const {
        for (std::size_t k = 0; k < w_.size(); ++k)
            if (w_[k] & ~o.w_[k]) return false;
        return true;
    }

  private:
    std::size_t n_;
    std::vector<std::uint64_t> w_;
};

struct DDRay {
    Vector v;
    Bitset tight;  // processed constraints satisfied with equality
};

// Zeroes the pivot coordinates of v against an RREF line basis.
inline void reduce_mod_lines(Vector& v, const std::vector<Vector>& rref_lines,
                             const std::vector<std::size_t>& pivots) {
    for (std::size_t k = 0; k < rref_lines.size(); ++k) {
        Rational f = v[pivots[k]];
        if (f == 0) continue;
        for (std::size_t j = 0; j < v.size(); ++j) v[j] -= f * rref_lines[k][j];
    }
}

}  // namespace detail

// Double description: generators of { x : le_rows . x <= 0, eq_rows . x = 0 }.
// Lines carry the lineality space; rays are extreme modulo it. Output is
// canonical: lines in RREF basis (primitive, sign-normalized), rays reduced
// modulo the lineality space, primitive-scaled, lexicographically sorted.
inline ConeGenerators dd_cone(std::size_t dim, const std::vector<Vector>& le_rows,
                              const std::vector<Vector>& eq_rows) {
    using detail::Bitset;
    using detail::DDRay;

    const std::size_t total = le_rows.size() + eq_rows.size();
    std::vector<Vector> lines;
    lines.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        Vector e(dim);
        e[i] = 1;
        lines.push_back(std::move(e));
    }
    std::vector<DDRay> rays;

    std::size_t t = 0;
    auto process = [&](const Vector& a, bool is_eq) {
        // Case 1: some lineality direction leaves the hyperplane.
        std::size_t l0 = lines.size();
        for (std::size_t i = 0; i < lines.size(); ++i)
            if (dot(a, lines[i]) != 0) {
                l0 = i;
                break;
            }
        if (l0 != lines.size()) {
            Vector pivot = lines[l0];
            Rational d0 = dot(a, pivot);
            lines.erase(lines.begin() + l0);
            for (auto& l : lines) {
                Rational dl = dot(a, l);
                if (dl != 0) l = l - (dl / d0) * pivot;
            }
            for (auto& r : rays) {
                Rational dr = dot(a, r.v);
                if (dr != 0) r.v = primitive_direction(r.v - (dr / d0) * pivot);
                r.tight.set(t);
            }
            if (!is_eq) {
                // keep the pivot direction as a ray on the feasible side
                if (d0 > 0) pivot = -pivot;
                Bitset tight(total);
                for (std::size_t k = 0; k < t; ++k) tight.set(k);
                rays.push_back({primitive_direction(pivot), std::move(tight)});
            }
            ++t;
            return;
        }
        // Case 2: plain double-description cut.
        std::vector<std::size_t> pos, neg;
        std::vector<Rational> val(rays.size());
        for (std::size_t i = 0; i < rays.size(); ++i) {
            val[i] = dot(a, rays[i].v);
            if (val[i] > 0)
                pos.push_back(i);
            else if (val[i] < 0)
                neg.push_back(i);
            else
                rays[i].tight.set(t);
        }
        if (pos.empty() && (is_eq ? neg.empty() : true)) {
            ++t;
            return;  // constraint already satisfied by the whole cone
        }
        std::vector<DDRay> next;
        for (std::size_t i = 0; i < rays.size(); ++i) {
            if (val[i] == 0) next.push_back(rays[i]);
            if (val[i] < 0 && !is_eq) next.push_back(rays[i]);
        }
        for (std::size_t p : pos)
            for (std::size_t q : neg) {
                Bitset z = rays[p].tight & rays[q].tight;
                bool adjacent = true;
                for (std::size_t r = 0; r < rays.size(); ++r) {
                    if (r == p || r == q) continue;
                    if (z.subset_of(rays[r].tight)) {
                        adjacent = false;
                        break;
                    }
                }
                if (!adjacent) continue;
                Vector v = primitive_direction(val[p] * rays[q].v - val[q] * rays[p].v);
                if (v.is_zero()) continue;
                z.set(t);
                next.push_back({std::move(v), std::move(z)});
            }
        // dedupe identical directions
        std::vector<DDRay> dedup;
        for (auto& r : next) {
            bool seen = false;
            for (const auto& d : dedup)
                if (d.v == r.v) {
                    seen = true;
                    break;
                }
            if (!seen) dedup.push_back(std::move(r));
        }
        rays = std::move(dedup);
        ++t;
    };

    for (const auto& a : eq_rows) process(a, true);
    for (const auto& a : le_rows) process(a, false);

    // canonical form
    ConeGenerators out;
    if (!lines.empty()) {
        Matrix lm = Matrix::from_rows(lines);
        auto pivots = rref(lm);
        std::vector<Vector> rref_rows;
        for (std::size_t i = 0; i < pivots.size(); ++i) rref_rows.push_back(lm.row(i));
        for (auto& r : rays) {
            detail::reduce_mod_lines(r.v, rref_rows, pivots);
            r.v = primitive_direction(r.v);
        }
        for (const auto& row : rref_rows) out.lines.push_back(primitive_direction(row));
    }
    for (auto& r : rays)
        if (!r.v.is_zero()) out.rays.push_back(std::move(r.v));
    std::sort(out.rays.begin(), out.rays.end(), lex_less);
    out.rays.erase(std::unique(out.rays.begin(), out.rays.end()), out.rays.end());
    std::sort(out.lines.begin(), out.lines.end(), lex_less);
    return out;
}

}  // namespace mlrank
