#pragma once

#include "mlrank/linalg.hpp"
#include "mlrank/rational.hpp"

#include <vector>

namespace mlrank {

// One linear constraint  coeffs . x  (rel)  rhs.
// Ge/Gt inputs are normalized to Le/Lt at construction sites.
enum class Relation { Le, Eq, Lt };

struct LinearConstraint {
    Vector coeffs;
    Rational rhs;
    Relation rel = Relation::Le;

    bool operator==(const LinearConstraint& o) const = default;
};

inline LinearConstraint le(Vector a, Rational b) {
    return {std::move(a), std::move(b), Relation::Le};
}
inline LinearConstraint eq(Vector a, Rational b) {
    return {std::move(a), std::move(b), Relation::Eq};
}
inline LinearConstraint lt(Vector a, Rational b) {
    return {std::move(a), std::move(b), Relation::Lt};
}
// a . x >= b  stored as  -a . x <= -b.
inline LinearConstraint ge(const Vector& a, const Rational& b) {
    return {-a, -b, Relation::Le};
}

inline bool satisfies(const LinearConstraint& c, const Vector& x) {
    Rational v = dot(c.coeffs, x);
    switch (c.rel) {
        case Relation::Le: return v <= c.rhs;
        case Relation::Eq: return v == c.rhs;
        case Relation::Lt: return v < c.rhs;
    }
    return false;
}

// Scales to coprime integer entries over (coeffs, rhs). Positive scaling only,
// so the constraint is unchanged as a set.
inline void scale_primitive(Vector& coeffs, Rational& rhs) {
    Integer l(1);
    for (const auto& c : coeffs) l = lcm(l, Integer(c.get_den()));
    l = lcm(l, Integer(rhs.get_den()));
    Rational f{l};
    for (auto& c : coeffs) c *= f;
    rhs *= f;
    Integer g(0);
    for (const auto& c : coeffs) g = gcd(g, Integer(c.get_num()));
    g = gcd(g, Integer(rhs.get_num()));
    if (g > 1) {
        Rational d = Rational(1) / Rational(g);
        for (auto& c : coeffs) c *= d;
        rhs *= d;
    }
}

inline LinearConstraint canonical(LinearConstraint c) {
    scale_primitive(c.coeffs, c.rhs);
    if (c.rel == Relation::Eq) {
        // sign-normalize: first nonzero coefficient positive
        for (std::size_t i = 0; i < c.coeffs.size(); ++i) {
            if (c.coeffs[i] == 0) continue;
            if (c.coeffs[i] < 0) {
                c.coeffs = -c.coeffs;
                c.rhs = -c.rhs;
            }
            break;
        }
    }
    return c;
}

// Scales a direction vector to coprime integer coordinates (sign preserved).
inline Vector primitive_direction(Vector v) {
    Rational dummy(0);
    scale_primitive(v, dummy);
    return v;
}

}  // namespace mlrank
