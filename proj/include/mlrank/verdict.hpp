#pragma once

#include "mlrank/loop.hpp"
#include "mlrank/polyhedron.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mlrank {

// Ordered tuple <rho_1, ..., rho_d>; depth 0 (empty tuple) ranks the empty set.
struct Mlrf {
    std::vector<AffineFunc> components;
    std::size_t depth() const { return components.size(); }
};

// S subseteq Q with proj_x'(S) subseteq proj_x(S); witnesses nontermination.
struct RecurrentSet {
    Polyhedron transitions{0};  // over 2n
    Polyhedron states{0};       // proj_x(transitions)
};

enum class VerdictKind { Mlrf, Nonterminating, Unknown };

enum class UnknownReason {
    DepthBound,
    IterationCap,
    IntegerHullRequired,
    RationalRecurrence,  // recurrent set found, integer nontermination not established
};

inline std::string describe(UnknownReason r) {
    switch (r) {
        case UnknownReason::DepthBound: return "depth-bound";
        case UnknownReason::IterationCap: return "iteration-cap";
        case UnknownReason::IntegerHullRequired: return "integer hull required";
        case UnknownReason::RationalRecurrence:
            return "rational recurrent set; integer nontermination not established";
    }
    return "unknown";
}

struct IterationStat {
    int iteration = 0;          // 1-based index of the f_step application
    std::size_t generators = 0;  // generators of the nonnegative cone this round
    std::size_t rows = 0;        // constraint rows after the step
};

struct Limits {
    std::optional<int> depth_bound = 10;
    int max_iterations = 50;

    void validate() const {
        if (max_iterations <= 0) throw std::invalid_argument("max_iterations must be positive");
        if (depth_bound) {
            if (*depth_bound <= 0) throw std::invalid_argument("depth_bound must be positive");
            if (*depth_bound > max_iterations)
                throw std::invalid_argument("depth_bound must not exceed max_iterations");
        }
    }
};

struct Verdict {
    VerdictKind kind = VerdictKind::Unknown;
    std::optional<Mlrf> mlrf;                 // kind == Mlrf
    std::optional<RecurrentSet> recurrent;    // kind == Nonterminating
    std::optional<Vector> fixpoint;           // state with a self-transition, when found
    std::optional<Vector> integer_witness;    // integer transition in the recurrent set
    std::optional<UnknownReason> reason;      // kind == Unknown
    int iterations = 0;                       // f_step applications performed
    std::vector<IterationStat> trace;
};

}  // namespace mlrank
