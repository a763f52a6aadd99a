#pragma once

#include "mlrank/displacement_engine.hpp"
#include "mlrank/engine.hpp"
#include "mlrank/json_io.hpp"
#include "mlrank/verify.hpp"

#include <stdexcept>
#include <string>

namespace mlrank {

enum class Mode { Rational, Integer };
enum class EngineChoice { FStep, Displacement, Both };

struct AnalyzeOptions {
    Mode mode = Mode::Rational;
    EngineChoice engine = EngineChoice::Both;
    Limits limits;
};

inline std::string engine_name(EngineChoice e) {
    switch (e) {
        case EngineChoice::FStep: return "f-step";
        case EngineChoice::Displacement: return "displacement";
        case EngineChoice::Both: return "both";
    }
    return "both";
}

inline std::string mode_name(Mode m) {
    return m == Mode::Rational ? "rational" : "integer";
}

namespace detail {

// The two engines must agree on depth-bounded existence; a mismatch is a bug,
// never a verdict.
inline void cross_check(const TransitionPoly& q, const Verdict& v, const Limits& limits) {
    switch (v.kind) {
        case VerdictKind::Mlrf: {
            unsigned d = static_cast<unsigned>(v.mlrf->depth());
            if (!depth_decision(q, d))
                throw std::logic_error("engine mismatch: depth accepted only by the iteration");
            if (d > 0 && depth_decision(q, d - 1))
                throw std::logic_error("engine mismatch: reported depth is not minimal");
            break;
        }
        case VerdictKind::Nonterminating:
            if (depth_decision(q, static_cast<unsigned>(v.iterations)))
                throw std::logic_error("engine mismatch: witness depth exists for a recurrent loop");
            break;
        case VerdictKind::Unknown:
            if (v.reason == UnknownReason::DepthBound && limits.depth_bound &&
                depth_decision(q, static_cast<unsigned>(*limits.depth_bound)))
                throw std::logic_error("engine mismatch: depth bound reported but witness exists");
            break;
    }
}

// Lemma-gated transfer of a rational recurrent set to integer semantics.
inline Verdict integer_filter(const TransitionPoly& q, Verdict v) {
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

}  // namespace detail

// Full pipeline: bounded fast path, then the selected engine(s), then the
// integer gate when requested. Every emitted witness is re-verified by the
// independent checkers; the confirmation flags land in the document.
inline VerdictDocument analyze(const TransitionPoly& q, const AnalyzeOptions& opts) {
    opts.limits.validate();
    VerdictDocument doc;
    if (q.loop) doc.vars = q.loop->vars;
    doc.mode = mode_name(opts.mode);
    doc.engine = engine_name(opts.engine);
    doc.limits = opts.limits;

    if (opts.mode == Mode::Integer && !is_integral(q.poly)) {
        doc.verdict.kind = VerdictKind::Unknown;
        doc.verdict.reason = UnknownReason::IntegerHullRequired;
        return doc;
    }

    Verdict v;
    if (auto fast = bounded_loop_analyze(q)) {
        v = std::move(*fast);
        if (opts.engine != EngineChoice::FStep) detail::cross_check(q, v, opts.limits);
    } else {
        switch (opts.engine) {
            case EngineChoice::FStep:
                v = find_mlrf(q, opts.limits);
                break;
            case EngineChoice::Displacement: {
                unsigned bound = static_cast<unsigned>(
                    opts.limits.depth_bound.value_or(opts.limits.max_iterations));
                if (auto d = min_depth(q, bound)) {
                    v.kind = VerdictKind::Mlrf;
                    v.mlrf = synthesize_nested(q, *d);
                    v.iterations = static_cast<int>(*d);
                } else {
                    v.kind = VerdictKind::Unknown;
                    v.reason = UnknownReason::DepthBound;
                    v.iterations = static_cast<int>(bound);
                }
                break;
            }
            case EngineChoice::Both:
                v = find_mlrf(q, opts.limits);
                detail::cross_check(q, v, opts.limits);
                break;
        }
    }

    if (opts.mode == Mode::Integer) v = detail::integer_filter(q, std::move(v));

    // independent confirmation of whatever is being handed out
    if (v.kind == VerdictKind::Mlrf) {
        doc.mlrf_checked = check_mlrf(q, *v.mlrf).ok;
        if (!*doc.mlrf_checked)
            throw std::logic_error("emitted multiphase witness failed verification");
    }
    if (v.kind == VerdictKind::Nonterminating) {
        doc.recurrent_checked = includes(q.poly, v.recurrent->transitions) &&
                                check_recurrent(v.recurrent->transitions) &&
                                set_equals(v.recurrent->states,
                                           proj_x({q.n, v.recurrent->transitions, std::nullopt}));
        doc.monotonic_checked = check_monotonic_recurrent(v.recurrent->transitions);
        if (!*doc.recurrent_checked || !*doc.monotonic_checked)
            throw std::logic_error("emitted recurrent set failed verification");
    }
    doc.verdict = std::move(v);
    return doc;
}

// Witness re-verification for externally supplied documents (the CLI verify
// surface). Returns a list of failures; empty means the document checks out.
inline std::vector<std::string> verify_document(const TransitionPoly& q,
                                                const VerdictDocument& doc) {
    std::vector<std::string> failures;
    const Verdict& v = doc.verdict;
    switch (v.kind) {
        case VerdictKind::Mlrf: {
            if (!v.mlrf) {
                failures.push_back("document claims MLRF but carries no witness");
                break;
            }
            auto res = check_mlrf(q, *v.mlrf);
            if (!res.ok)
                failures.push_back("multiphase witness rejected: " + res.message);
            break;
        }
        case VerdictKind::Nonterminating: {
            if (!v.recurrent) {
                failures.push_back("document claims nontermination but carries no witness");
                break;
            }
            const Polyhedron& s = v.recurrent->transitions;
            if (s.dim() != 2 * q.n) {
                failures.push_back("recurrent set dimension mismatch");
                break;
            }
            if (is_empty(s)) failures.push_back("recurrent set is empty");
            if (!includes(q.poly, s))
                failures.push_back("recurrent set is not contained in the loop's transitions");
            if (!check_recurrent(s)) failures.push_back("projection inclusion fails");
            if (!set_equals(v.recurrent->states, proj_x({q.n, s, std::nullopt})))
                failures.push_back("stated recurrent states do not match the projection");
            if (doc.monotonic_checked && *doc.monotonic_checked && !check_monotonic_recurrent(s))
                failures.push_back("claimed monotonic recurrence fails");
            if (v.fixpoint) {
                Vector both(2 * q.n);
                for (std::size_t j = 0; j < q.n; ++j) {
                    both[j] = (*v.fixpoint)[j];
                    both[q.n + j] = (*v.fixpoint)[j];
                }
                if (!q.poly.contains(both)) failures.push_back("stated fixpoint is not a transition");
            }
            if (v.integer_witness) {
                if (!s.contains(*v.integer_witness))
                    failures.push_back("integer witness is outside the recurrent set");
                for (const auto& c : *v.integer_witness)
                    if (!is_integer(c)) {
                        failures.push_back("integer witness has a fractional coordinate");
                        break;
                    }
            }
            break;
        }
        case VerdictKind::Unknown:
            break;  // nothing to check
    }
    return failures;
}

}  // namespace mlrank
