#pragma once

#include "mlrank/verdict.hpp"
#include "mlrank/version.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace mlrank {

using Json = nlohmann::json;

// Rationals travel as "p/q" strings; nothing in a document is ever rounded.

inline Json rational_to_json(const Rational& r) { return to_string(r); }

inline Rational rational_from_json(const Json& j) {
    return parse_rational(j.get<std::string>());
}

inline Json vector_to_json(const Vector& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(rational_to_json(x));
    return a;
}

inline Vector vector_from_json(const Json& j) {
    std::vector<Rational> xs;
    for (const auto& e : j) xs.push_back(rational_from_json(e));
    return Vector(std::move(xs));
}

inline Json affine_to_json(const AffineFunc& f) {
    return Json{{"coeffs", vector_to_json(f.coeffs)}, {"const", rational_to_json(f.constant)}};
}

inline AffineFunc affine_from_json(const Json& j) {
    return {vector_from_json(j.at("coeffs")), rational_from_json(j.at("const"))};
}

inline Json polyhedron_to_json(const Polyhedron& p) {
    Json ineqs = Json::array(), eqs = Json::array();
    for (const auto& r : p.ineqs())
        ineqs.push_back({{"coeffs", vector_to_json(r.coeffs)}, {"rhs", rational_to_json(r.rhs)}});
    for (const auto& r : p.eqs())
        eqs.push_back({{"coeffs", vector_to_json(r.coeffs)}, {"rhs", rational_to_json(r.rhs)}});
    return Json{{"dim", p.dim()}, {"ineqs", std::move(ineqs)}, {"eqs", std::move(eqs)}};
}

inline Polyhedron polyhedron_from_json(const Json& j) {
    std::size_t dim = j.at("dim").get<std::size_t>();
    std::vector<LinearConstraint> rows;
    for (const auto& r : j.at("ineqs"))
        rows.push_back(le(vector_from_json(r.at("coeffs")), rational_from_json(r.at("rhs"))));
    for (const auto& r : j.at("eqs"))
        rows.push_back(eq(vector_from_json(r.at("coeffs")), rational_from_json(r.at("rhs"))));
    return Polyhedron(dim, std::move(rows));
}

inline std::string verdict_name(VerdictKind k) {
    switch (k) {
        case VerdictKind::Mlrf: return "MLRF";
        case VerdictKind::Nonterminating: return "NONTERMINATING";
        case VerdictKind::Unknown: return "UNKNOWN";
    }
    return "UNKNOWN";
}

// The self-contained analysis report: verdict, witness payload, diagnostics,
// and checker confirmations. Round-trips losslessly.
struct VerdictDocument {
    std::vector<std::string> vars;
    std::string mode = "rational";
    std::string engine = "both";
    Limits limits;
    Verdict verdict;
    std::optional<bool> mlrf_checked;
    std::optional<bool> recurrent_checked;
    std::optional<bool> monotonic_checked;
};

inline Json document_to_json(const VerdictDocument& doc) {
    Json j;
    j["schema"] = kVerdictSchema;
    j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    j["vars"] = doc.vars;
    j["mode"] = doc.mode;
    j["engine"] = doc.engine;
    j["limits"] = {{"max_iterations", doc.limits.max_iterations}};
    if (doc.limits.depth_bound)
        j["limits"]["depth_bound"] = *doc.limits.depth_bound;
    else
        j["limits"]["depth_bound"] = nullptr;

    const Verdict& v = doc.verdict;
    j["verdict"] = verdict_name(v.kind);
    j["iterations"] = v.iterations;
    if (v.kind == VerdictKind::Mlrf) {
        j["depth"] = v.mlrf->depth();
        Json comps = Json::array();
        for (const auto& c : v.mlrf->components) comps.push_back(affine_to_json(c));
        j["mlrf"] = std::move(comps);
    }
    if (v.kind == VerdictKind::Nonterminating) {
        j["recurrent_transitions"] = polyhedron_to_json(v.recurrent->transitions);
        j["recurrent_states"] = polyhedron_to_json(v.recurrent->states);
    }
    if (v.fixpoint) j["fixpoint"] = vector_to_json(*v.fixpoint);
    if (v.integer_witness) j["integer_witness"] = vector_to_json(*v.integer_witness);
    if (v.kind == VerdictKind::Unknown && v.reason) j["unknown_reason"] = describe(*v.reason);
    if (!v.trace.empty()) {
        Json t = Json::array();
        for (const auto& s : v.trace)
            t.push_back({{"iteration", s.iteration},
                         {"generators", s.generators},
                         {"rows", s.rows}});
        j["iteration_trace"] = std::move(t);
    }
    Json checks = Json::object();
    if (doc.mlrf_checked) checks["mlrf"] = *doc.mlrf_checked;
    if (doc.recurrent_checked) checks["recurrent"] = *doc.recurrent_checked;
    if (doc.monotonic_checked) checks["monotonic"] = *doc.monotonic_checked;
    j["checks"] = std::move(checks);
    return j;
}

inline VerdictDocument document_from_json(const Json& j) {
    if (!j.contains("schema") || j.at("schema").get<std::string>() != kVerdictSchema)
        throw std::invalid_argument("unsupported verdict document schema");
    VerdictDocument doc;
    if (j.contains("vars")) doc.vars = j.at("vars").get<std::vector<std::string>>();
    if (j.contains("mode")) doc.mode = j.at("mode").get<std::string>();
    if (j.contains("engine")) doc.engine = j.at("engine").get<std::string>();
    if (j.contains("limits")) {
        const auto& l = j.at("limits");
        doc.limits.max_iterations = l.at("max_iterations").get<int>();
        if (l.contains("depth_bound") && !l.at("depth_bound").is_null())
            doc.limits.depth_bound = l.at("depth_bound").get<int>();
        else
            doc.limits.depth_bound = std::nullopt;
    }
    const std::string kind = j.at("verdict").get<std::string>();
    Verdict& v = doc.verdict;
    if (j.contains("iterations")) v.iterations = j.at("iterations").get<int>();
    if (kind == "MLRF") {
        v.kind = VerdictKind::Mlrf;
        Mlrf m;
        for (const auto& c : j.at("mlrf")) m.components.push_back(affine_from_json(c));
        v.mlrf = std::move(m);
    } else if (kind == "NONTERMINATING") {
        v.kind = VerdictKind::Nonterminating;
        v.recurrent = RecurrentSet{polyhedron_from_json(j.at("recurrent_transitions")),
                                   polyhedron_from_json(j.at("recurrent_states"))};
    } else {
        v.kind = VerdictKind::Unknown;
    }
    if (j.contains("fixpoint")) v.fixpoint = vector_from_json(j.at("fixpoint"));
    if (j.contains("integer_witness"))
        v.integer_witness = vector_from_json(j.at("integer_witness"));
    if (j.contains("iteration_trace")) {
        for (const auto& t : j.at("iteration_trace"))
            v.trace.push_back({t.at("iteration").get<int>(),
                               t.at("generators").get<std::size_t>(),
                               t.at("rows").get<std::size_t>()});
    }
    if (j.contains("checks")) {
        const auto& c = j.at("checks");
        if (c.contains("mlrf")) doc.mlrf_checked = c.at("mlrf").get<bool>();
        if (c.contains("recurrent")) doc.recurrent_checked = c.at("recurrent").get<bool>();
        if (c.contains("monotonic")) doc.monotonic_checked = c.at("monotonic").get<bool>();
    }
    return doc;
}

}  // namespace mlrank
