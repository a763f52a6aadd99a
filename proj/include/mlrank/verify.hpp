#pragma once

#include "mlrank/engine.hpp"
#include "mlrank/verdict.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mlrank {

// Checker verdicts carry the first failing phase for diagnosis.
struct MlrfCheck {
    bool ok = false;
    int failing_phase = 0;  // 1-based; 0 when ok; depth+1 for a nonempty residual
    std::string message;
};

// Phase-by-phase check of the multiphase criterion:
//   T_1 = Q;  phase i requires delta(rho_i) >= 1 over T_i;
//   T_{i+1} = T_i and rho_i(x) < 0   (transitions with rho_i(x) >= 0 are
//   ranked at phase i);  accept iff T_{d+1} is infeasible.
// All queries are mixed strict/non-strict satisfiability checks.
inline MlrfCheck check_mlrf(const TransitionPoly& q, const Mlrf& tau) {
    const std::size_t n = q.n;
    for (const auto& c : tau.components)
        if (c.coeffs.size() != n)
            throw std::invalid_argument("check_mlrf: component dimension mismatch");

    std::vector<LinearConstraint> rows = q.poly.constraints();
    for (std::size_t i = 0; i < tau.depth(); ++i) {
        const auto& rho = tau.components[i];
        {
            auto probe = rows;
            Vector delta(2 * n);
            for (std::size_t j = 0; j < n; ++j) {
                delta[j] = rho.coeffs[j];
                delta[n + j] = -rho.coeffs[j];
            }
            probe.push_back(lt(std::move(delta), rat(1)));  // delta(rho_i) < 1 ?
            if (strict_feasible(probe, 2 * n)) {
                return {false, static_cast<int>(i + 1),
                        "phase " + std::to_string(i + 1) +
                            " does not decrease by 1 on its residual transitions"};
            }
        }
        Vector state(2 * n);
        for (std::size_t j = 0; j < n; ++j) state[j] = rho.coeffs[j];
        rows.push_back(lt(std::move(state), -rho.constant));  // rho_i(x) < 0
    }
    if (strict_feasible(rows, 2 * n)) {
        return {false, static_cast<int>(tau.depth() + 1),
                "transitions remain after the last phase"};
    }
    return {true, 0, ""};
}

// proj_x'(S) subseteq proj_x(S), decided exactly.
inline bool check_recurrent(const Polyhedron& s) {
    if (s.dim() % 2 != 0) throw std::invalid_argument("check_recurrent: odd dimension");
    const std::size_t n = s.dim() / 2;
    TransitionPoly t{n, s, std::nullopt};
    return includes(proj_x(t), proj_xp(t));
}

// Fixpoints of the elimination operator; these are the recurrent sets the
// iteration can stabilize on.
inline bool check_monotonic_recurrent(const Polyhedron& s) {
    if (s.dim() % 2 != 0)
        throw std::invalid_argument("check_monotonic_recurrent: odd dimension");
    if (is_empty(s)) return true;
    const std::size_t n = s.dim() / 2;
    TransitionPoly t{n, s, std::nullopt};
    return set_equals(f_step(t).poly, s);
}

struct SimResult {
    std::vector<Vector> states;
    bool guard_stopped = false;            // trace ended because the guard failed
    std::optional<bool> stayed_inside;     // when a state set was supplied
};

// Concrete execution for deterministic loops; steps from x0 under the
// extracted affine update until the guard fails or the budget runs out.
inline SimResult simulate(const TransitionPoly& q, const Vector& x0, int steps,
                          const std::optional<Polyhedron>& within = std::nullopt) {
    if (x0.size() != q.n) throw std::invalid_argument("simulate: bad start dimension");
    auto update = extract_affine_update(q);
    if (!update) throw std::invalid_argument("simulate: loop update is not deterministic affine");
    Polyhedron guard = guard_polyhedron(q);

    SimResult out;
    out.states.push_back(x0);
    for (int k = 0; k < steps; ++k) {
        const Vector& cur = out.states.back();
        if (!guard.contains(cur)) {
            out.guard_stopped = true;
            break;
        }
        out.states.push_back(update->u * cur + update->c);
    }
    if (within) {
        bool inside = true;
        for (const auto& s : out.states)
            if (!within->contains(s)) {
                inside = false;
                break;
            }
        out.stayed_inside = inside;
    }
    return out;
}

}  // namespace mlrank
