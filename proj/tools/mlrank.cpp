// Command-line surface: analyze loops, profile witness depths, test
// bounded-lookahead membership, verify witness documents, simulate runs.
//
// Exit codes: 0 = witness found / verification passed, 1 = nonterminating,
//             2 = unknown / verification failed, 3 = input error.

#include "mlrank/analyze.hpp"
#include "mlrank/parser.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace mlrank;

namespace {

constexpr int kExitWitness = 0;
constexpr int kExitNonterminating = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitInputError = 3;

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string format_affine(const AffineFunc& f, const std::vector<std::string>& vars) {
    std::ostringstream os;
    bool first = true;
    for (std::size_t j = 0; j < f.coeffs.size(); ++j) {
        if (f.coeffs[j] == 0) continue;
        Rational c = f.coeffs[j];
        if (first) {
            if (c < 0) os << "-";
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        Rational ac = abs(c);
        if (ac != 1) os << to_string(ac) << " ";
        os << (j < vars.size() ? vars[j] : "v" + std::to_string(j));
    }
    if (f.constant != 0 || first) {
        if (first)
            os << to_string(f.constant);
        else
            os << (f.constant < 0 ? " - " : " + ") << to_string(abs(f.constant));
    }
    return os.str();
}

std::string format_row(const LinearConstraint& r, const std::vector<std::string>& names) {
    std::ostringstream os;
    os << format_affine({r.coeffs, rat(0)}, names);
    os << (r.rel == Relation::Eq ? " = " : " <= ") << to_string(r.rhs);
    return os.str();
}

std::string format_vector(const Vector& v) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ", ";
        os << to_string(v[i]);
    }
    os << ")";
    return os.str();
}

void print_human(std::ostream& os, const std::string& name, const VerdictDocument& doc) {
    const Verdict& v = doc.verdict;
    const auto& vars = doc.vars;
    switch (v.kind) {
        case VerdictKind::Mlrf: {
            os << name << ": MLRF of depth " << v.mlrf->depth() << "\n";
            for (std::size_t i = 0; i < v.mlrf->depth(); ++i)
                os << "  rho_" << (i + 1) << "(x) = "
                   << format_affine(v.mlrf->components[i], vars) << "\n";
            os << "  iterations: " << v.iterations
               << "; checker: " << (doc.mlrf_checked.value_or(false) ? "passed" : "failed")
               << "\n";
            break;
        }
        case VerdictKind::Nonterminating: {
            os << name << ": NONTERMINATING (recurrent set after " << v.iterations
               << " iterations)\n";
            os << "  recurrent states:\n";
            for (const auto& r : v.recurrent->states.ineqs())
                os << "    " << format_row(r, vars) << "\n";
            for (const auto& r : v.recurrent->states.eqs())
                os << "    " << format_row(r, vars) << "\n";
            if (v.fixpoint) os << "  fixpoint: " << format_vector(*v.fixpoint) << "\n";
            if (v.integer_witness)
                os << "  integer transition: " << format_vector(*v.integer_witness) << "\n";
            os << "  checker: "
               << (doc.recurrent_checked.value_or(false) ? "passed" : "failed")
               << (doc.monotonic_checked.value_or(false) ? " (monotonic)" : "") << "\n";
            break;
        }
        case VerdictKind::Unknown: {
            os << name << ": UNKNOWN";
            if (v.reason) os << " (" << describe(*v.reason) << ")";
            os << "\n  iterations: " << v.iterations << "\n";
            break;
        }
    }
}

int exit_code_for(const Verdict& v) {
    switch (v.kind) {
        case VerdictKind::Mlrf: return kExitWitness;
        case VerdictKind::Nonterminating: return kExitNonterminating;
        case VerdictKind::Unknown: return kExitUnknown;
    }
    return kExitUnknown;
}

struct CommonFlags {
    std::string mode = "rational";
    std::string engine = "both";
    int depth_bound = 10;
    int max_iters = 50;
    bool no_depth_bound = false;
    bool json = false;
    unsigned seed = 0;  // reserved for the property-test harness
    bool depth_bound_set = false;
    bool max_iters_set = false;
    bool mode_set = false;
};

AnalyzeOptions make_options(const CommonFlags& flags, const LoopFile& file) {
    AnalyzeOptions opts;
    std::string mode = flags.mode_set ? flags.mode : file.mode.value_or(flags.mode);
    opts.mode = mode == "integer" ? Mode::Integer : Mode::Rational;
    if (flags.engine == "f-step")
        opts.engine = EngineChoice::FStep;
    else if (flags.engine == "displacement")
        opts.engine = EngineChoice::Displacement;
    else
        opts.engine = EngineChoice::Both;
    int depth = flags.depth_bound_set ? flags.depth_bound
                                      : file.depth_bound.value_or(flags.depth_bound);
    int iters = flags.max_iters_set ? flags.max_iters : file.max_iters.value_or(flags.max_iters);
    opts.limits.max_iterations = std::max(iters, depth);
    opts.limits.depth_bound = flags.no_depth_bound ? std::nullopt : std::optional<int>(depth);
    return opts;
}

int run_analyze(const std::vector<std::string>& paths, const CommonFlags& flags) {
    std::vector<fs::path> files;
    for (const auto& p : paths) {
        fs::path path(p);
        if (fs::is_directory(path)) {
            for (const auto& e : fs::directory_iterator(path))
                if (e.path().extension() == ".slc") files.push_back(e.path());
        } else {
            files.push_back(path);
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        std::cerr << "error: no input loops\n";
        return kExitInputError;
    }
    int worst = kExitWitness;
    for (const auto& f : files) {
        LoopFile lf = parse_loop(slurp(f));
        auto q = build_transition_polyhedron(lf.loop);
        VerdictDocument doc = analyze(q, make_options(flags, lf));
        if (flags.json) {
            Json j = document_to_json(doc);
            j["file"] = f.filename().string();
            std::cout << j.dump() << "\n";
        } else {
            print_human(std::cout, f.filename().string(), doc);
        }
        worst = std::max(worst, exit_code_for(doc.verdict));
    }
    return worst;
}

int run_depth(const std::string& path, unsigned max_depth, bool json) {
    LoopFile lf = parse_loop(slurp(path));
    auto q = build_transition_polyhedron(lf.loop);
    auto profile = depth_profile(q, max_depth);
    auto depth = min_depth(q, max_depth);
    if (json) {
        Json j;
        j["file"] = fs::path(path).filename().string();
        j["profile"] = Json::array();
        for (unsigned d = 0; d < profile.size(); ++d)
            j["profile"].push_back({{"depth", d}, {"witness_exists", (bool)profile[d]}});
        j["min_depth"] = depth ? Json(*depth) : Json(nullptr);
        std::cout << j.dump() << "\n";
    } else {
        for (unsigned d = 0; d < profile.size(); ++d)
            std::cout << "depth " << d << ": " << (profile[d] ? "witness exists" : "no witness")
                      << "\n";
        if (depth)
            std::cout << "minimal depth: " << *depth << "\n";
        else
            std::cout << "no witness up to depth " << max_depth << "\n";
    }
    return depth ? kExitWitness : kExitUnknown;
}

int run_dellrf(const std::string& path, unsigned bound, bool json) {
    LoopFile lf = parse_loop(slurp(path));
    auto q = build_transition_polyhedron(lf.loop);
    auto lrf = dellrf_membership(q, bound);
    if (json) {
        Json j;
        j["file"] = fs::path(path).filename().string();
        j["bound"] = bound;
        j["member"] = lrf.has_value();
        if (lrf) j["lrf"] = affine_to_json(*lrf);
        std::cout << j.dump() << "\n";
    } else if (lrf) {
        std::cout << "member of the depth-" << bound << " lookahead class; restricted LRF: "
                  << format_affine(*lrf, lf.loop.vars) << "\n";
    } else {
        std::cout << "not a member at lookahead " << bound << "\n";
    }
    return lrf ? kExitWitness : kExitUnknown;
}

int run_verify(const std::string& loop_path, const std::string& doc_path, bool json) {
    LoopFile lf = parse_loop(slurp(loop_path));
    auto q = build_transition_polyhedron(lf.loop);
    VerdictDocument doc = document_from_json(Json::parse(slurp(doc_path)));
    auto failures = verify_document(q, doc);
    if (json) {
        Json j;
        j["verified"] = failures.empty();
        j["failures"] = failures;
        std::cout << j.dump() << "\n";
    } else if (failures.empty()) {
        std::cout << "verification passed (" << verdict_name(doc.verdict.kind) << ")\n";
    } else {
        for (const auto& f : failures) std::cout << "verification failed: " << f << "\n";
    }
    return failures.empty() ? kExitWitness : kExitUnknown;
}

int run_simulate(const std::string& loop_path, const std::string& from, int steps,
                 const std::string& witness_path, bool json) {
    LoopFile lf = parse_loop(slurp(loop_path));
    auto q = build_transition_polyhedron(lf.loop);
    Vector x0(q.n);
    {
        std::stringstream ss(from);
        std::string item;
        std::size_t i = 0;
        while (std::getline(ss, item, ',')) {
            if (i >= q.n) throw std::runtime_error("too many start coordinates");
            x0[i++] = parse_rational(item);
        }
        if (i != q.n) throw std::runtime_error("expected " + std::to_string(q.n) + " coordinates");
    }
    std::optional<Polyhedron> within;
    if (!witness_path.empty()) {
        VerdictDocument doc = document_from_json(Json::parse(slurp(witness_path)));
        if (doc.verdict.recurrent) within = doc.verdict.recurrent->states;
    }
    auto sim = simulate(q, x0, steps, within);
    if (json) {
        Json j;
        j["states"] = Json::array();
        for (const auto& s : sim.states) j["states"].push_back(vector_to_json(s));
        j["guard_stopped"] = sim.guard_stopped;
        if (sim.stayed_inside) j["stayed_inside"] = *sim.stayed_inside;
        std::cout << j.dump() << "\n";
    } else {
        for (std::size_t k = 0; k < sim.states.size(); ++k)
            std::cout << "step " << k << ": " << format_vector(sim.states[k]) << "\n";
        if (sim.guard_stopped) std::cout << "guard failed; run terminated\n";
        if (sim.stayed_inside)
            std::cout << "trace " << (*sim.stayed_inside ? "stayed inside" : "left")
                      << " the witness state set\n";
    }
    return kExitWitness;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multiphase ranking functions and recurrent sets for linear-constraint loops"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::vector<std::string> analyze_paths;
    auto* analyze_cmd = app.add_subcommand("analyze", "analyze loop files or directories");
    analyze_cmd->add_option("paths", analyze_paths, "loop files (.slc) or directories")
        ->required();
    auto* mode_opt =
        analyze_cmd->add_option("--mode", flags.mode, "rational or integer semantics")
            ->check(CLI::IsMember({"rational", "integer"}));
    analyze_cmd->add_option("--engine", flags.engine, "f-step, displacement, or both")
        ->check(CLI::IsMember({"f-step", "displacement", "both"}));
    auto* db_opt = analyze_cmd->add_option("--depth-bound", flags.depth_bound,
                                           "maximum witness depth (default 10)");
    auto* mi_opt = analyze_cmd->add_option("--max-iters", flags.max_iters,
                                           "iteration cap (default 50)");
    analyze_cmd->add_flag("--no-depth-bound", flags.no_depth_bound,
                          "disable the depth bound (iteration cap still applies)");
    analyze_cmd->add_flag("--json", flags.json, "emit one JSON document per loop");
    analyze_cmd->add_option("--seed", flags.seed, "random seed (property-test harness only)");

    std::string depth_path;
    unsigned depth_max = 10;
    bool depth_json = false;
    auto* depth_cmd = app.add_subcommand("depth", "feasibility profile per depth");
    depth_cmd->add_option("loop", depth_path, "loop file")->required();
    depth_cmd->add_option("--max-depth", depth_max, "largest depth probed (default 10)");
    depth_cmd->add_flag("--json", depth_json, "JSON output");

    std::string dellrf_path;
    unsigned dellrf_bound = 1;
    bool dellrf_json = false;
    auto* dellrf_cmd =
        app.add_subcommand("dellrf", "membership in the bounded-lookahead LRF class");
    dellrf_cmd->add_option("loop", dellrf_path, "loop file")->required();
    dellrf_cmd->add_option("--bound", dellrf_bound, "lookahead length b")->required();
    dellrf_cmd->add_flag("--json", dellrf_json, "JSON output");

    std::string verify_loop, verify_doc;
    bool verify_json = false;
    auto* verify_cmd = app.add_subcommand("verify", "check a witness document against a loop");
    verify_cmd->add_option("loop", verify_loop, "loop file")->required();
    verify_cmd->add_option("witness", verify_doc, "verdict document (JSON)")->required();
    verify_cmd->add_flag("--json", verify_json, "JSON output");

    std::string sim_path, sim_from, sim_witness;
    int sim_steps = 10;
    bool sim_json = false;
    auto* sim_cmd = app.add_subcommand("simulate", "run a deterministic loop from a state");
    sim_cmd->add_option("loop", sim_path, "loop file")->required();
    sim_cmd->add_option("--from", sim_from, "start state, comma-separated rationals")->required();
    sim_cmd->add_option("--steps", sim_steps, "number of steps (default 10)");
    sim_cmd->add_option("--witness", sim_witness, "verdict document with recurrent states");
    sim_cmd->add_flag("--json", sim_json, "JSON output");

    try {
        app.parse(argc, argv);
        flags.mode_set = mode_opt->count() > 0;
        flags.depth_bound_set = db_opt->count() > 0;
        flags.max_iters_set = mi_opt->count() > 0;
        if (analyze_cmd->parsed()) return run_analyze(analyze_paths, flags);
        if (depth_cmd->parsed()) return run_depth(depth_path, depth_max, depth_json);
        if (dellrf_cmd->parsed()) return run_dellrf(dellrf_path, dellrf_bound, dellrf_json);
        if (verify_cmd->parsed()) return run_verify(verify_loop, verify_doc, verify_json);
        if (sim_cmd->parsed())
            return run_simulate(sim_path, sim_from, sim_steps, sim_witness, sim_json);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitInputError;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
