#include "mlrank/parser.hpp"
#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace mlrank;

namespace {

TransitionPoly from_text(const char* text) {
    return build_transition_polyhedron(parse_loop(text).loop);
}

const char* kLoop1 = R"(
vars: x1 x2 x3
guard:
  x1 >= -x3
update:
  x1' = x1 + x2, x2' = x2 + x3, x3' = x3 - 1
)";

const char* kLoop7 = R"(
vars: x1 x2
guard:
  x1 - x2 >= 1
update:
  x1' = -x1 + x2, x2' = x2
)";

// semantic displacement: proj_{x,y}(Q and x' = x + y)
Polyhedron displacement_by_projection(const TransitionPoly& q) {
    const std::size_t n = q.n;
    std::vector<LinearConstraint> rows;
    // coordinates (x, y, x')
    auto widen = [&](const LinearConstraint& r) {
        Vector a(3 * n);
        for (std::size_t j = 0; j < n; ++j) {
            a[j] = r.coeffs[j];
            a[2 * n + j] = r.coeffs[n + j];
        }
        return LinearConstraint{std::move(a), r.rhs, r.rel};
    };
    for (const auto& r : q.poly.ineqs()) rows.push_back(widen(r));
    for (const auto& r : q.poly.eqs()) rows.push_back(widen(r));
    for (std::size_t i = 0; i < n; ++i) {
        Vector a(3 * n);
        a[i] = 1;
        a[n + i] = 1;
        a[2 * n + i] = -1;  // x_i + y_i - x'_i = 0
        rows.push_back(eq(std::move(a), rat(0)));
    }
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < 2 * n; ++j) keep.push_back(j);
    return project(Polyhedron(3 * n, std::move(rows)), keep);
}

}  // namespace

TEST_CASE("transition polyhedron of the three-phase loop") {
    auto q = from_text(kLoop1);
    CHECK(q.n == 3);
    Polyhedron expect(
        6, {ge(Vector{rat(1), rat(0), rat(1), rat(0), rat(0), rat(0)}, rat(0)),
            eq(Vector{rat(-1), rat(-1), rat(0), rat(1), rat(0), rat(0)}, rat(0)),
            eq(Vector{rat(0), rat(-1), rat(-1), rat(0), rat(1), rat(0)}, rat(0)),
            eq(Vector{rat(0), rat(0), rat(-1), rat(0), rat(0), rat(1)}, rat(-1))});
    CHECK(set_equals(q.poly, expect));
}

TEST_CASE("transition polyhedron of the reflecting loop") {
    auto q = from_text(kLoop7);
    Polyhedron expect(4, {ge(Vector{rat(1), rat(-1), rat(0), rat(0)}, rat(1)),
                          eq(Vector{rat(1), rat(-1), rat(1), rat(0)}, rat(0)),
                          eq(Vector{rat(0), rat(1), rat(0), rat(-1)}, rat(0))});
    CHECK(set_equals(q.poly, expect));
}

TEST_CASE("trivially false guard gives an empty transition polyhedron") {
    auto q = from_text("vars: x\nguard:\n 0 <= -1\nupdate:\n x' = x\n");
    CHECK(is_empty(q.poly));
}

TEST_CASE("compose with identity and empty") {
    auto q = from_text(kLoop1);
    CHECK(set_equals(compose(q, identity_relation(3)).poly, q.poly));
    CHECK(set_equals(compose(identity_relation(3), q).poly, q.poly));

    TransitionPoly none{3, Polyhedron::empty(6), std::nullopt};
    CHECK(is_empty(compose(q, none).poly));
}

TEST_CASE("compose tracks two steps of the update") {
    auto q = from_text(kLoop1);
    auto q2 = compose(q, q);
    // x3'' = x3 - 2 holds on the composition
    Vector row(6);
    row[2] = 1;
    row[5] = -1;
    CHECK(valid_over(q2.poly, row, rat(2)));
    CHECK(valid_over(q2.poly, -row, rat(-2)));
    // a concrete two-step trace: (0,0,2) -> (0,2,1) -> (2,3,0)
    CHECK(q2.poly.contains(Vector{rat(0), rat(0), rat(2), rat(2), rat(3), rat(0)}));
}

TEST_CASE("power basics") {
    auto q = from_text(kLoop1);
    CHECK(set_equals(power(q, 1).poly, q.poly));
    CHECK(set_equals(power(q, 0).poly, identity_relation(3).poly));
    TransitionPoly none{2, Polyhedron::empty(4), std::nullopt};
    CHECK(is_empty(power(none, 2).poly));
}

TEST_CASE("power is additive on small exponents") {
    for (const char* text : {kLoop1, kLoop7}) {
        auto q = from_text(text);
        for (unsigned a = 0; a <= 2; ++a)
            for (unsigned b = 0; a + b <= 3; ++b) {
                auto lhs = power(q, a + b);
                auto rhs = compose(power(q, a), power(q, b));
                INFO("a=" << a << " b=" << b);
                REQUIRE(set_equals(lhs.poly, rhs.poly));
            }
    }
}

TEST_CASE("pre basics") {
    auto q = from_text(kLoop7);
    CHECK(set_equals(pre(q, 1), proj_x(q)));
    TransitionPoly none{1, Polyhedron::empty(2), std::nullopt};
    CHECK(is_empty(pre(none, 1)));
}

TEST_CASE("displacement of the three-phase loop") {
    auto q = from_text(kLoop1);
    Polyhedron r = displacement(q);
    // R = {x1 >= -x3, y1 = x2, y2 = x3, y3 = -1}
    Polyhedron expect(
        6, {ge(Vector{rat(1), rat(0), rat(1), rat(0), rat(0), rat(0)}, rat(0)),
            eq(Vector{rat(0), rat(-1), rat(0), rat(1), rat(0), rat(0)}, rat(0)),
            eq(Vector{rat(0), rat(0), rat(-1), rat(0), rat(1), rat(0)}, rat(0)),
            eq(Vector{rat(0), rat(0), rat(0), rat(0), rat(0), rat(1)}, rat(-1))});
    CHECK(set_equals(r, expect));
    CHECK(set_equals(r, displacement_by_projection(q)));
}

TEST_CASE("displacement of an identity-update loop") {
    auto q = from_text("vars: x\nguard:\n x >= 0\nupdate:\n x' = x\n");
    Polyhedron expect(2, {ge(Vector{rat(1), rat(0)}, rat(0)),
                          eq(Vector{rat(0), rat(1)}, rat(0))});
    CHECK(set_equals(displacement(q), expect));
}

TEST_CASE("displacement agrees with the projection construction") {
    for (const char* text : {kLoop1, kLoop7}) {
        auto q = from_text(text);
        CHECK(set_equals(displacement(q), displacement_by_projection(q)));
        // proj_x is preserved by the change of variables
        std::vector<std::size_t> xs;
        for (std::size_t j = 0; j < q.n; ++j) xs.push_back(j);
        CHECK(set_equals(project(displacement(q), xs), proj_x(q)));
    }
}

TEST_CASE("extract_affine_update on deterministic loops") {
    auto u7 = extract_affine_update(from_text(kLoop7));
    REQUIRE(u7.has_value());
    Matrix expect_u(2, 2);
    expect_u(0, 0) = -1;
    expect_u(0, 1) = 1;
    expect_u(1, 1) = 1;
    CHECK(u7->u == expect_u);
    CHECK(u7->c == Vector{rat(0), rat(0)});

    // x1' = 3x1 - 2, x2' = 2x2
    auto q11 = from_text("vars: x1 x2\nguard:\n x1 + x2 >= 3\nupdate:\n x1' = 3x1 - 2, x2' = 2x2\n");
    auto u11 = extract_affine_update(q11);
    REQUIRE(u11.has_value());
    Matrix e(2, 2);
    e(0, 0) = 3;
    e(1, 1) = 2;
    CHECK(u11->u == e);
    CHECK(u11->c == Vector{rat(-2), rat(0)});
}

TEST_CASE("extract_affine_update rejects nondeterministic updates") {
    auto q = from_text("vars: x1\nguard:\n x1 >= 0\nupdate:\n x1' <= x1\n");
    CHECK_FALSE(extract_affine_update(q).has_value());
    // pinned by equality but cut by an extra inequality: not a total function
    auto q2 = from_text("vars: x1\nguard:\n x1 >= 0\nupdate:\n x1' = x1 - 1, x1' >= 2\n");
    CHECK_FALSE(extract_affine_update(q2).has_value());
}

TEST_CASE("extracted update maps enabled states into Q") {
    for (const char* text : {kLoop1, kLoop7}) {
        auto q = from_text(text);
        auto up = extract_affine_update(q);
        REQUIRE(up.has_value());
        Polyhedron g = guard_polyhedron(q);
        auto x0 = some_point(g);
        REQUIRE(x0.has_value());
        Vector xp = up->u * *x0 + up->c;
        Vector both(2 * q.n);
        for (std::size_t j = 0; j < q.n; ++j) {
            both[j] = (*x0)[j];
            both[q.n + j] = xp[j];
        }
        CHECK(q.poly.contains(both));
    }
}
