#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace mlrank;
using mlrank::testing::Gen;

namespace {

// generator-based projection: drop coordinates of vertices and rays
Polyhedron project_via_generators(const Polyhedron& p, const std::vector<std::size_t>& coords) {
    GeneratorRep g = generators(p);
    GeneratorRep out;
    out.dim = coords.size();
    auto take = [&](const Vector& v) {
        Vector w(coords.size());
        for (std::size_t k = 0; k < coords.size(); ++k) w[k] = v[coords[k]];
        return w;
    };
    for (const auto& v : g.vertices) out.vertices.push_back(take(v));
    for (const auto& r : g.rays) {
        Vector w = take(r);
        if (!w.is_zero()) out.rays.push_back(std::move(w));
    }
    return from_generators(out);
}

}  // namespace

TEST_CASE("H to V round trip on random polyhedra") {
    Gen gen(0xA11CE);
    for (int i = 0; i < 220; ++i) {
        std::size_t dim = static_cast<std::size_t>(gen.integer(1, 4));
        Polyhedron p = gen.polyhedron(dim, 6);
        Polyhedron back = from_generators(generators(p));
        INFO("case " << i << " dim " << dim);
        REQUIRE(set_equals(back, p));
    }
}

TEST_CASE("projection commutes with recession cone") {
    // proj_x(ccone(P)) = ccone(proj_x(P))
    Gen gen(0xB0B);
    int done = 0;
    for (int i = 0; done < 220 && i < 4000; ++i) {
        std::size_t nx = static_cast<std::size_t>(gen.integer(1, 2));
        std::size_t ny = static_cast<std::size_t>(gen.integer(1, 2));
        Polyhedron p = gen.polyhedron(nx + ny, 6);
        if (is_empty(p)) continue;  // recession directions are defined for nonempty sets
        ++done;
        std::vector<std::size_t> xs;
        for (std::size_t j = 0; j < nx; ++j) xs.push_back(j);
        Polyhedron lhs = project(recession_cone(p), xs);
        Polyhedron rhs = recession_cone(project(p, xs));
        INFO("case " << i);
        REQUIRE(set_equals(lhs, rhs));
    }
    CHECK(done == 220);
}

TEST_CASE("FM projection agrees with generator-based projection") {
    Gen gen(0xC0DE);
    for (int i = 0; i < 220; ++i) {
        std::size_t dim = static_cast<std::size_t>(gen.integer(2, 4));
        Polyhedron p = gen.polyhedron(dim, 6);
        std::size_t keep = static_cast<std::size_t>(gen.integer(1, static_cast<long>(dim - 1)));
        std::vector<std::size_t> coords;
        for (std::size_t j = 0; j < keep; ++j) coords.push_back(j);
        Polyhedron a = project(p, coords);
        Polyhedron b = project_via_generators(p, coords);
        INFO("case " << i);
        REQUIRE(set_equals(a, b));
    }
}

TEST_CASE("remove_redundant preserves the set") {
    Gen gen(0xDEAD);
    for (int i = 0; i < 220; ++i) {
        std::size_t dim = static_cast<std::size_t>(gen.integer(1, 3));
        Polyhedron p = gen.polyhedron(dim, 7);
        Polyhedron r = remove_redundant(p);
        INFO("case " << i);
        REQUIRE(set_equals(p, r));
        CHECK(r.row_count() <= p.row_count() + r.eqs().size());
    }
}

TEST_CASE("lp optimum matches vertex enumeration on bounded systems") {
    Gen gen(0xFEED);
    int done = 0;
    for (int i = 0; done < 200 && i < 2000; ++i) {
        std::size_t dim = static_cast<std::size_t>(gen.integer(2, 3));
        Polyhedron p = gen.polyhedron(dim, 5, false);
        // bound it with a box so the optimum sits at a vertex
        std::vector<LinearConstraint> rows = p.constraints();
        for (std::size_t j = 0; j < dim; ++j) {
            Vector u(dim), l(dim);
            u[j] = 1;
            l[j] = 1;
            rows.push_back(le(u, rat(4)));
            rows.push_back(ge(l, rat(-4)));
        }
        Polyhedron boxed(dim, rows);
        if (is_empty(boxed)) continue;
        ++done;
        Vector obj = gen.vector(dim);
        auto r = optimize(boxed, obj, Sense::Max);
        REQUIRE(r.optimal());
        auto g = generators(boxed);
        REQUIRE(!g.vertices.empty());
        Rational best = dot(obj, g.vertices[0]);
        for (const auto& v : g.vertices) best = std::max(best, dot(obj, v));
        INFO("case " << i);
        REQUIRE(best == r.value);
    }
    CHECK(done == 200);
}
