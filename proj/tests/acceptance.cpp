// Acceptance suite: one pass/fail line per criterion, exact arithmetic
// throughout (zero tolerance). Exit code 0 iff every criterion holds.

#include "mlrank/analyze.hpp"
#include "test_support.hpp"

#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace mlrank;
using mlrank::testing::Gen;
using mlrank::testing::load_loop;

namespace {

int failures = 0;

void criterion(int number, const std::string& title, const std::function<void()>& body) {
    try {
        body();
        std::cout << "PASS  criterion " << number << ": " << title << "\n";
    } catch (const std::exception& e) {
        ++failures;
        std::cout << "FAIL  criterion " << number << ": " << title << " -- " << e.what()
                  << "\n";
    }
}

void require(bool cond, const std::string& what) {
    if (!cond) throw std::runtime_error(what);
}

std::vector<Vector> as_vectors(const std::vector<AffineFunc>& fs) {
    std::vector<Vector> out;
    for (const auto& f : fs) {
        Vector v(f.coeffs.size() + 1);
        for (std::size_t i = 0; i < f.coeffs.size(); ++i) v[i] = f.coeffs[i];
        v[f.coeffs.size()] = f.constant;
        out.push_back(std::move(v));
    }
    return out;
}

Polyhedron states_of(const VerdictDocument& doc) { return doc.verdict.recurrent->states; }

}  // namespace

int main() {
    // 1. three-phase loop: depth exactly 3; hand witness and synthesized
    //    witness both pass the checker
    criterion(1, "three-phase loop has optimal depth 3 with checkable witnesses", [] {
        auto q = load_loop("three_phase");
        VerdictDocument doc = analyze(q, {});
        require(doc.verdict.kind == VerdictKind::Mlrf, "expected a ranking verdict");
        require(doc.verdict.mlrf->depth() == 3, "expected depth exactly 3");
        Mlrf hand{{{Vector{rat(0), rat(0), rat(1)}, rat(1)},
                   {Vector{rat(0), rat(1), rat(0)}, rat(1)},
                   {Vector{rat(1), rat(0), rat(1)}, rat(1)}}};
        require(check_mlrf(q, hand).ok, "hand-built witness rejected");
        require(check_mlrf(q, *doc.verdict.mlrf).ok, "synthesized witness rejected");
        require(doc.mlrf_checked.value_or(false), "checker flag missing");
    });

    // 2. nonnegative-function cone of the three-phase loop
    criterion(2, "nonnegative cone of the three-phase loop has the expected generators", [] {
        auto q = load_loop("three_phase");
        auto gens = as_vectors(nonneg_cone(q.poly, q.n));
        std::vector<Vector> expect = {Vector{rat(1), rat(0), rat(1), rat(0)},
                                      Vector{rat(0), rat(0), rat(0), rat(1)}};
        require(cone_equal(gens, expect), "cone differs from the expected generators");
    });

    // 3. reflecting loop: recurrent set after 3 iterations
    criterion(3, "reflecting loop is nonterminating after 3 iterations", [] {
        auto q = load_loop("reflect");
        VerdictDocument doc = analyze(q, {});
        require(doc.verdict.kind == VerdictKind::Nonterminating, "expected nontermination");
        require(doc.verdict.iterations == 3, "expected exactly 3 iterations");
        Polyhedron expect(2, {le(Vector{rat(1), rat(0)}, rat(-1)),
                              eq(Vector{rat(2), rat(-1)}, rat(0))});
        require(set_equals(states_of(doc), expect), "recurrent states differ");
        require(check_recurrent(doc.verdict.recurrent->transitions), "recurrence check failed");
        require(check_monotonic_recurrent(doc.verdict.recurrent->transitions),
                "monotonic check failed");
    });

    // 4. drifting variant: recurrent set without any fixpoint
    criterion(4, "drifting reflection yields the expected recurrent states", [] {
        auto q = load_loop("reflect_dec");
        VerdictDocument doc = analyze(q, {});
        require(doc.verdict.kind == VerdictKind::Nonterminating, "expected nontermination");
        Polyhedron expect(2, {le(Vector{rat(0), rat(2)}, rat(-3)),
                              eq(Vector{rat(4), rat(-2)}, rat(1))});
        require(set_equals(states_of(doc), expect), "recurrent states differ");
    });

    // 5. unit reflection: stabilizes at the midpoint after exactly 2 steps
    criterion(5, "unit reflection stabilizes at x = 1/2 after exactly 2 iterations", [] {
        auto q = load_loop("unit_reflect");
        Polyhedron midpoint(2, {eq(Vector{rat(2), rat(0)}, rat(1)),
                                eq(Vector{rat(0), rat(2)}, rat(1))});
        auto q1 = f_step(q);
        auto q2 = f_step(q1);
        require(!set_equals(q1.poly, midpoint), "stabilized too early");
        require(set_equals(q2.poly, midpoint), "second step missed the midpoint");
        require(set_equals(f_step(q2).poly, q2.poly), "midpoint is not stable");
        VerdictDocument doc = analyze(q, {});
        require(doc.verdict.kind == VerdictKind::Nonterminating, "expected nontermination");
        require(set_equals(doc.verdict.recurrent->transitions, midpoint),
                "verdict carries a different set");
        // the full reflection set is recurrent but not a fixpoint of the step
        Polyhedron larger(2, {ge(Vector{rat(1), rat(0)}, rat(0)),
                              le(Vector{rat(1), rat(0)}, rat(1)),
                              eq(Vector{rat(1), rat(1)}, rat(1))});
        require(check_recurrent(larger), "larger set should be recurrent");
        require(!check_monotonic_recurrent(larger), "larger set must not be monotonic");
    });

    // 6. incomparable growth: unknown under a depth bound of 25, with the
    //    predicted iterates and cones
    criterion(6, "incomparable growth stays unknown; iterates follow the doubling law", [] {
        auto q = load_loop("double_vs_triple");
        Limits limits;
        limits.depth_bound = 25;
        limits.max_iterations = 50;
        VerdictDocument doc = analyze(q, {Mode::Rational, EngineChoice::FStep, limits});
        require(doc.verdict.kind == VerdictKind::Unknown, "expected unknown");
        require(doc.verdict.reason == UnknownReason::DepthBound, "expected the depth bound");

        TransitionPoly cur = q;
        Rational two_i(1);
        for (int i = 1; i <= 8; ++i) {
            cur = f_step(cur);
            two_i *= 2;
            Polyhedron expect(4, {ge(Vector{rat(1), -two_i, rat(0), rat(0)}, rat(0)),
                                  ge(Vector{rat(0), rat(1), rat(0), rat(0)}, rat(1)),
                                  eq(Vector{rat(2), rat(0), rat(-1), rat(0)}, rat(0)),
                                  eq(Vector{rat(0), rat(3), rat(0), rat(-1)}, rat(0))});
            std::ostringstream what;
            what << "iterate " << i << " differs";
            require(set_equals(cur.poly, expect), what.str());
            auto gens = as_vectors(nonneg_cone(cur.poly, cur.n));
            std::vector<Vector> cone_expect = {Vector{rat(0), rat(1), rat(-1)},
                                               Vector{rat(1), -two_i, rat(0)},
                                               Vector{rat(0), rat(0), rat(1)}};
            what.str("");
            what << "cone at iterate " << i << " differs";
            require(cone_equal(gens, cone_expect), what.str());
        }
    });

    // 7. relay loop: three-step lookahead restriction is linearly ranked
    criterion(7, "relay loop: lookahead restriction has an LRF and depth is 3", [] {
        auto q = load_loop("relay");
        Polyhedron pre3 = pre(q, 3);
        Polyhedron expect(4, {ge(Vector{rat(0), rat(-1), rat(0), rat(1)}, rat(1)),
                              ge(Vector{rat(0), rat(0), rat(-1), rat(1)}, rat(1)),
                              ge(Vector{rat(-1), rat(0), rat(0), rat(1)}, rat(0))});
        require(set_equals(pre3, expect), "three-step lookahead set differs");
        require(dellrf_membership(q, 3).has_value(), "membership at lookahead 3 fails");

        // the classic witness for the restricted loop passes the depth-1 check
        std::vector<LinearConstraint> rows = q.poly.constraints();
        for (const auto& r : pre3.ineqs()) {
            Vector a(2 * q.n);
            for (std::size_t j = 0; j < q.n; ++j) a[j] = r.coeffs[j];
            rows.push_back(le(std::move(a), r.rhs));
        }
        TransitionPoly restricted{q.n, Polyhedron(2 * q.n, std::move(rows)), std::nullopt};
        Mlrf rho{{{Vector{rat(-1), rat(-1), rat(-1), rat(3)}, rat(1)}}};
        require(check_mlrf(restricted, rho).ok, "restricted depth-1 check fails");

        VerdictDocument doc = analyze(q, {});
        require(doc.verdict.kind == VerdictKind::Mlrf, "expected a ranking verdict");
        require(doc.verdict.mlrf->depth() == 3, "expected depth exactly 3");
    });

    // 8. cross-pipeline oracle: the LP-only depth decision agrees with the
    //    elimination iteration on every corpus loop and depth
    criterion(8, "depth decisions agree across both engines on the whole corpus", [] {
        const char* names[] = {"three_phase",      "reflect",     "reflect_dec",
                               "unit_reflect",     "double_vs_triple", "geometric_shift",
                               "three_halves",     "relay",       "bounded_reflect",
                               "bounded_countdown"};
        for (const char* name : names) {
            auto q = load_loop(name);
            TransitionPoly cur = q;
            for (unsigned d = 0; d <= 5; ++d) {
                bool via_f = is_empty(cur.poly);
                bool via_lp = depth_decision(q, d);
                if (via_f != via_lp) {
                    std::ostringstream what;
                    what << name << " disagrees at depth " << d;
                    throw std::runtime_error(what.str());
                }
                if (!via_f) cur = f_step(cur);
            }
        }
    });

    // 9. bounded fast path
    criterion(9, "bounded loops: fixpoint at 1/2 or a depth-1 witness", [] {
        VerdictDocument flip = analyze(load_loop("bounded_reflect"), {});
        require(flip.verdict.kind == VerdictKind::Nonterminating, "expected nontermination");
        require(flip.verdict.fixpoint.has_value(), "expected a fixpoint witness");
        require(*flip.verdict.fixpoint == Vector{rat(1, 2)}, "fixpoint should be 1/2");

        auto down = load_loop("bounded_countdown");
        VerdictDocument dv = analyze(down, {});
        require(dv.verdict.kind == VerdictKind::Mlrf, "expected a ranking verdict");
        require(dv.verdict.mlrf->depth() == 1, "expected depth exactly 1");
        require(check_mlrf(down, *dv.verdict.mlrf).ok, "depth-1 witness rejected");
    });

    // 10. integer mode
    criterion(10, "integer mode: fractional scaling downgraded, reflection kept", [] {
        auto q13 = load_loop("three_halves");
        VerdictDocument rational = analyze(q13, {});
        require(rational.verdict.kind == VerdictKind::Nonterminating,
                "rational analysis should find a recurrent set");
        require(set_equals(rational.verdict.recurrent->transitions, q13.poly),
                "recurrent set should be the whole transition polyhedron");
        VerdictDocument integer = analyze(q13, {Mode::Integer, EngineChoice::Both, {}});
        require(integer.verdict.kind == VerdictKind::Unknown, "integer verdict should be unknown");
        require(integer.verdict.reason == UnknownReason::RationalRecurrence,
                "expected the non-integer-coefficient reason");

        auto q7 = load_loop("reflect");
        VerdictDocument v7 = analyze(q7, {Mode::Integer, EngineChoice::Both, {}});
        require(v7.verdict.kind == VerdictKind::Nonterminating, "expected nontermination");
        require(v7.verdict.integer_witness.has_value(), "expected an integer witness");
        const Vector& w = *v7.verdict.integer_witness;
        require(v7.verdict.recurrent->transitions.contains(w), "witness outside the set");
        for (const auto& c : w)
            require(is_integer(c), "witness has a fractional coordinate");
        require(v7.verdict.recurrent->transitions.contains(
                    Vector{rat(-1), rat(-2), rat(-1), rat(-2)}),
                "the classic fixpoint (-1,-2) is missing from the set");
    });

    // 11. randomized polyhedral property suites, 200+ seeded cases each
    criterion(11, "polyhedral property suites (5 x 200 randomized cases)", [] {
        {
            Gen gen(0xA11CE);
            for (int i = 0; i < 200; ++i) {
                std::size_t dim = static_cast<std::size_t>(gen.integer(1, 4));
                Polyhedron p = gen.polyhedron(dim, 6);
                if (!set_equals(from_generators(generators(p)), p))
                    throw std::runtime_error("H/V round trip failed");
            }
        }
        {
            Gen gen(0xB0B);
            int done = 0;
            for (int i = 0; done < 200 && i < 4000; ++i) {
                std::size_t nx = static_cast<std::size_t>(gen.integer(1, 2));
                std::size_t ny = static_cast<std::size_t>(gen.integer(1, 2));
                Polyhedron p = gen.polyhedron(nx + ny, 6);
                if (is_empty(p)) continue;
                ++done;
                std::vector<std::size_t> xs;
                for (std::size_t j = 0; j < nx; ++j) xs.push_back(j);
                if (!set_equals(project(recession_cone(p), xs), recession_cone(project(p, xs))))
                    throw std::runtime_error("projection/recession-cone commutation failed");
            }
            require(done == 200, "not enough nonempty samples");
        }
        {
            Gen gen(0xC0DE);
            for (int i = 0; i < 200; ++i) {
                std::size_t dim = static_cast<std::size_t>(gen.integer(2, 4));
                Polyhedron p = gen.polyhedron(dim, 6);
                std::size_t keep =
                    static_cast<std::size_t>(gen.integer(1, static_cast<long>(dim - 1)));
                std::vector<std::size_t> coords;
                for (std::size_t j = 0; j < keep; ++j) coords.push_back(j);
                GeneratorRep g = generators(p);
                GeneratorRep dropped;
                dropped.dim = coords.size();
                for (const auto& v : g.vertices) {
                    Vector w(coords.size());
                    for (std::size_t k = 0; k < coords.size(); ++k) w[k] = v[coords[k]];
                    dropped.vertices.push_back(std::move(w));
                }
                for (const auto& r : g.rays) {
                    Vector w(coords.size());
                    for (std::size_t k = 0; k < coords.size(); ++k) w[k] = r[coords[k]];
                    if (!w.is_zero()) dropped.rays.push_back(std::move(w));
                }
                if (!set_equals(project(p, coords), from_generators(dropped)))
                    throw std::runtime_error("FM vs generator projection disagree");
            }
        }
        {
            Gen gen(0xDEAD);
            for (int i = 0; i < 200; ++i) {
                std::size_t dim = static_cast<std::size_t>(gen.integer(1, 3));
                Polyhedron p = gen.polyhedron(dim, 7);
                if (!set_equals(p, remove_redundant(p)))
                    throw std::runtime_error("remove_redundant changed the set");
            }
        }
        {
            Gen gen(0x5EED);
            int done = 0;
            for (int i = 0; done < 200 && i < 4000; ++i) {
                std::size_t n = static_cast<std::size_t>(gen.integer(1, 2));
                Polyhedron q = gen.polyhedron(2 * n, 5);
                if (is_empty(q)) continue;
                ++done;
                std::vector<std::size_t> xs;
                for (std::size_t j = 0; j < n; ++j) xs.push_back(j);
                Polyhedron proj = project(q, xs);
                auto gens = nonneg_cone(q, n);
                for (const auto& f : gens) {
                    auto r = optimize(proj, f.coeffs, Sense::Min);
                    if (!r.optimal() || r.value + f.constant < 0)
                        throw std::runtime_error("nonneg generator not nonnegative");
                }
                auto gen_vectors = as_vectors(gens);
                std::vector<Vector> direct;
                for (const auto& r : proj.ineqs()) {
                    Vector v(n + 1);
                    for (std::size_t j = 0; j < n; ++j) v[j] = -r.coeffs[j];
                    v[n] = r.rhs;
                    direct.push_back(std::move(v));
                }
                for (const auto& r : proj.eqs()) {
                    Vector v(n + 1);
                    for (std::size_t j = 0; j < n; ++j) v[j] = -r.coeffs[j];
                    v[n] = r.rhs;
                    direct.push_back(v);
                    direct.push_back(-v);
                }
                Vector c(n + 1);
                c[n] = 1;
                direct.push_back(std::move(c));
                for (int trial = 0; trial < 3; ++trial) {
                    Vector combo(n + 1);
                    for (const auto& d : direct) combo = combo + rat(gen.integer(0, 3)) * d;
                    if (!in_cone(combo, gen_vectors))
                        throw std::runtime_error("valid combination outside the returned cone");
                }
            }
            require(done == 200, "not enough nonempty samples");
        }
    });

    // 12. every witness emitted across the corpus re-verifies independently
    criterion(12, "all emitted witnesses re-verify with zero failures", [] {
        const char* names[] = {"three_phase",      "reflect",     "reflect_dec",
                               "unit_reflect",     "double_vs_triple", "geometric_shift",
                               "three_halves",     "relay",       "bounded_reflect",
                               "bounded_countdown"};
        int witnesses = 0;
        for (const char* name : names) {
            auto q = load_loop(name);
            for (Mode mode : {Mode::Rational, Mode::Integer}) {
                VerdictDocument doc = analyze(q, {mode, EngineChoice::Both, {}});
                if (doc.verdict.kind == VerdictKind::Unknown) continue;
                ++witnesses;
                auto fails = verify_document(q, doc);
                if (!fails.empty())
                    throw std::runtime_error(std::string(name) + ": " + fails.front());
                if (doc.verdict.kind == VerdictKind::Mlrf && !doc.mlrf_checked.value_or(false))
                    throw std::runtime_error(std::string(name) + ": checker flag not set");
                if (doc.verdict.kind == VerdictKind::Nonterminating &&
                    !doc.recurrent_checked.value_or(false))
                    throw std::runtime_error(std::string(name) + ": checker flag not set");
            }
        }
        require(witnesses >= 12, "corpus produced too few witnesses");
    });

    if (failures == 0) {
        std::cout << "acceptance: all 12 criteria passed\n";
        return 0;
    }
    std::cout << "acceptance: " << failures << " criteria FAILED\n";
    return 1;
}
