#include "rankc/cli.hpp"

#include <chrono>
#include <filesystem>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rankc/common.hpp"
#include "rankc/field.hpp"
#include "rankc/minrank.hpp"
#include "rankc/ranklab.hpp"
#include "rankc/serialize.hpp"
#include "rankc/syslang.hpp"
#include "rankc/tensorize.hpp"

namespace rankc {

namespace {

using nlohmann::json;

constexpr int code(ExitStatus s) { return static_cast<int>(s); }

json elems_array(const std::vector<FieldElem>& v, const Field& F) {
    json out = json::array();
    for (const auto& e : v) out.push_back(elem_to_json(e, F));
    return out;
}

FieldSpec parse_field_flag(const std::string& name) {
    try {
        return FieldSpec::parse(name);
    } catch (const InputError& e) {
        throw UsageError(e.what());
    }
}

// Files embed their field; a --field flag must agree with it.
void check_field_flag(const std::string& flag, const FieldSpec& embedded,
                      const std::string& what) {
    if (flag.empty()) return;
    if (parse_field_flag(flag) != embedded)
        throw UsageError("--field " + flag + " does not match the " + what + "'s field " +
                         embedded.name());
}

std::int64_t lap(std::chrono::steady_clock::time_point& t0) {
    auto t1 = std::chrono::steady_clock::now();
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    t0 = t1;
    return ms;
}

std::string artifact_path(const std::string& out_dir, const std::string& name) {
    std::filesystem::create_directories(out_dir);
    return (std::filesystem::path(out_dir) / name).string();
}

json witness_to_json(const std::vector<std::string>& names, const std::vector<FieldElem>& vals,
                     const Field& F) {
    json out = json::array();
    for (std::size_t i = 0; i < names.size(); ++i)
        out.push_back(json::array({names[i], elem_to_json(vals[i], F)}));
    return out;
}

std::string witness_to_text(const std::vector<std::string>& names,
                            const std::vector<FieldElem>& vals, const Field& F) {
    std::ostringstream ss;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) ss << ' ';
        ss << names[i] << '=' << F.to_string(vals[i]);
    }
    return ss.str();
}

void emit_report(std::ostream& out, bool as_json, const json& report,
                 const std::vector<std::string>& text_lines) {
    if (as_json) {
        out << dump_json(report);
    } else {
        for (const auto& line : text_lines) out << line << '\n';
    }
}

struct CompileArgs {
    std::string source, field, out_dir = ".", emit = "system,matrix,tensor,bundle";
    bool as_json = false;
};

int cmd_compile(const CompileArgs& a, std::ostream& out) {
    Field F(parse_field_flag(a.field));
    std::set<std::string> emit;
    {
        std::stringstream ss(a.emit);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item != "system" && item != "matrix" && item != "tensor" && item != "bundle")
                throw UsageError("unknown emit target '" + item + "'");
            emit.insert(item);
        }
    }

    json stages = json::array();
    std::vector<std::string> text;
    auto t0 = std::chrono::steady_clock::now();

    PolyFormula f = parse_source(read_text_file(a.source));
    if (f.equations.empty()) throw InputError("source contains no equations");
    stages.push_back({{"name", "parse"},
                      {"equations", f.equations.size()},
                      {"variables", f.variables.size()},
                      {"ms", lap(t0)}});
    text.push_back("parse: " + std::to_string(f.equations.size()) + " equations, " +
                   std::to_string(f.variables.size()) + " variables");

    QuadraticSystem quad = quadratize(f);
    stages.push_back({{"name", "quadratize"},
                      {"equations", quad.equations.size()},
                      {"variables", quad.variables.size()},
                      {"ms", lap(t0)}});
    text.push_back("quadratize: " + std::to_string(quad.equations.size()) + " equations, " +
                   std::to_string(quad.variables.size()) + " variables");

    QuadraticSystem norm = normalize(quad);
    if (!check_assumptions(norm).ok)
        throw InternalError("normalized system fails its assumption check");
    stages.push_back({{"name", "normalize"},
                      {"equations", norm.equations.size()},
                      {"variables", norm.variables.size()},
                      {"ms", lap(t0)}});
    text.push_back("normalize: " + std::to_string(norm.equations.size()) + " equations, " +
                   std::to_string(norm.variables.size()) + " variables");

    SymbolicMatrix M = build_matrix(norm);
    verify_observation(M);
    stages.push_back({{"name", "build-matrix"},
                      {"m", M.m()},
                      {"dim", M.dim()},
                      {"copy_variables", M.copy_vars.size()},
                      {"ms", lap(t0)}});
    text.push_back("matrix: " + std::to_string(M.dim()) + "x" + std::to_string(M.dim()) + ", " +
                   std::to_string(M.copy_vars.size()) + " copy variables");

    TensorBundle B = build_tensor(M, F);
    check_slice_independence(B, F);
    stages.push_back({{"name", "build-tensor"},
                      {"m", B.m},
                      {"n", B.slice_vars.size()},
                      {"dims", json::array({B.tensor.d1, B.tensor.d2, B.tensor.d3})},
                      {"rank_target", B.rank_target},
                      {"ms", lap(t0)}});
    text.push_back("tensor: " + std::to_string(B.tensor.d1) + "x" + std::to_string(B.tensor.d2) +
                   "x" + std::to_string(B.tensor.d3) +
                   ", rank target " + std::to_string(B.rank_target));

    json artifacts = json::object();
    auto emit_file = [&](const std::string& name, const json& payload) {
        std::string path = artifact_path(a.out_dir, name + ".json");
        write_text_file(path, dump_json(payload));
        artifacts[name] = path;
        text.push_back("wrote " + path);
    };
    if (emit.count("system")) emit_file("system", system_to_json(norm));
    if (emit.count("matrix")) emit_file("matrix", symbolic_matrix_to_json(M));
    if (emit.count("tensor")) emit_file("tensor", tensor_to_json(B.tensor, F));
    if (emit.count("bundle")) emit_file("bundle", bundle_to_json(B));

    json report{{"command", "compile"},
                {"field", F.spec().name()},
                {"stages", std::move(stages)},
                {"artifacts", std::move(artifacts)},
                {"status", "ok"}};
    emit_report(out, a.as_json, report, text);
    return code(ExitStatus::Success);
}

struct MinrankArgs {
    std::string matrix, field, mode = "full", system;
    std::uint64_t budget = kDefaultEnumBudget;
    unsigned workers = 1;
    bool as_json = false;
};

int cmd_minrank(const MinrankArgs& a, std::ostream& out) {
    Field F(parse_field_flag(a.field));
    SymbolicMatrix M = symbolic_matrix_from_json(parse_json(read_text_file(a.matrix)));
    if (!a.system.empty()) {
        QuadraticSystem s = system_from_json(parse_json(read_text_file(a.system)));
        if (!(s == M.system))
            throw InputError("the system file does not match the matrix's embedded system");
    }
    std::vector<std::string> names = M.all_vars();

    if (a.mode == "full") {
        MinrankResult r = minrank_bruteforce(M, F, a.budget, a.workers);
        json report{{"command", "minrank"},
                    {"mode", "full"},
                    {"field", F.spec().name()},
                    {"minrank", r.minrank},
                    {"floor", 2 * M.m()},
                    {"witness", witness_to_json(names, r.witness, F)},
                    {"tried", r.tried},
                    {"status", "ok"}};
        emit_report(out, a.as_json, report,
                    {"minrank " + std::to_string(r.minrank) + " (floor " +
                         std::to_string(2 * M.m()) + ", tried " + std::to_string(r.tried) + ")",
                     "witness: " + witness_to_text(names, r.witness, F)});
        return code(ExitStatus::Success);
    }
    if (a.mode != "witness") throw UsageError("--mode must be full or witness");

    WitnessSearchResult r = minrank_witness_search(M, F, a.budget);
    json report{{"command", "minrank"},
                {"mode", "witness"},
                {"field", F.spec().name()},
                {"found", r.found},
                {"tried", r.tried}};
    if (r.found) {
        report["rank"] = r.rank;
        report["witness"] = witness_to_json(names, r.witness, F);
        report["status"] = "ok";
        emit_report(out, a.as_json, report,
                    {"witness found, rank " + std::to_string(r.rank),
                     "witness: " + witness_to_text(names, r.witness, F)});
        return code(ExitStatus::Success);
    }
    report["status"] = "refuted";
    emit_report(out, a.as_json, report,
                {"no witness: the system has no solution over " + F.spec().name()});
    return code(ExitStatus::PropertyRefuted);
}

struct RankArgs {
    std::string tensor, field, out_dir = ".";
    std::size_t leq = 0;
    std::uint64_t budget = kDefaultNodeBudget;
    unsigned workers = 1;
    bool as_json = false;
};

int cmd_rank(const RankArgs& a, std::ostream& out) {
    auto [T, spec] = tensor_from_json(parse_json(read_text_file(a.tensor)));
    check_field_flag(a.field, spec, "tensor");
    Field F(spec);

    RankSearchResult r = tensor_rank_leq(T, a.leq, F, a.budget, a.workers);
    json report{{"command", "rank"},
                {"field", spec.name()},
                {"r", a.leq},
                {"verdict", r.feasible ? "yes" : "no"},
                {"nodes", r.nodes}};
    if (r.feasible) {
        std::string path = artifact_path(a.out_dir, "certificate.json");
        write_text_file(path, dump_json(expansion_to_json(r.certificate, F, tensor_digest(T, F))));
        report["certificate"] = path;
        report["terms"] = r.certificate.terms.size();
        report["status"] = "ok";
        emit_report(out, a.as_json, report,
                    {"rank <= " + std::to_string(a.leq) + ": yes (" +
                         std::to_string(r.certificate.terms.size()) + " terms, " +
                         std::to_string(r.nodes) + " nodes)",
                     "wrote " + path});
        return code(ExitStatus::Success);
    }
    report["status"] = "refuted";
    emit_report(out, a.as_json, report,
                {"rank <= " + std::to_string(a.leq) + ": no (" + std::to_string(r.nodes) +
                 " nodes)"});
    return code(ExitStatus::PropertyRefuted);
}

struct CertifyArgs {
    std::string tensor, expansion, field;
    bool as_json = false;
};

int cmd_certify(const CertifyArgs& a, std::ostream& out) {
    auto [T, spec] = tensor_from_json(parse_json(read_text_file(a.tensor)));
    LoadedExpansion E = expansion_from_json(parse_json(read_text_file(a.expansion)));
    check_field_flag(a.field, spec, "tensor");
    if (!(E.field == spec))
        throw UsageError("expansion field " + E.field.name() + " does not match tensor field " +
                         spec.name());
    Field F(spec);

    bool digest_ok = E.target_digest == tensor_digest(T, F);
    bool verified = digest_ok && verify_expansion(T, E.expansion, F);
    json report{{"command", "certify"},
                {"field", spec.name()},
                {"terms", E.expansion.terms.size()},
                {"digest_match", digest_ok},
                {"verified", verified},
                {"status", verified ? "ok" : "refuted"}};
    std::string line = verified            ? "certificate verified (" +
                                      std::to_string(E.expansion.terms.size()) + " terms)"
                       : digest_ok         ? "certificate rejected: terms do not sum to the tensor"
                                           : "certificate rejected: digest does not match the tensor";
    emit_report(out, a.as_json, report, {line});
    return code(verified ? ExitStatus::Success : ExitStatus::PropertyRefuted);
}

struct RealizeArgs {
    std::string tensor, slices, field;
    std::size_t r = 0;
    bool as_json = false;
};

int cmd_realize(const RealizeArgs& a, std::ostream& out) {
    auto [T, tspec] = tensor_from_json(parse_json(read_text_file(a.tensor)));
    LoadedSlices S = slices_from_json(parse_json(read_text_file(a.slices)));
    check_field_flag(a.field, tspec, "tensor");
    if (!(S.field == tspec))
        throw UsageError("slice family field " + S.field.name() + " does not match tensor field " +
                         tspec.name());
    Field F(tspec);

    AffineSolutionSpace sol = realization_space(T, S.slices, a.r, F);
    json report{{"command", "realize"},
                {"field", tspec.name()},
                {"r", a.r},
                {"empty", sol.empty},
                {"ambient", sol.ambient}};
    if (sol.empty) {
        report["status"] = "refuted";
        emit_report(out, a.as_json, report,
                    {"realization space is empty: no w vectors complete the family"});
        return code(ExitStatus::PropertyRefuted);
    }
    report["dimension"] = sol.basis.size();
    report["solution"] = solution_to_json(sol, F);
    report["status"] = "ok";
    emit_report(out, a.as_json, report,
                {"realization space is nonempty: dimension " + std::to_string(sol.basis.size()) +
                 " in ambient " + std::to_string(sol.ambient)});
    return code(ExitStatus::Success);
}

struct Eig0Args {
    std::string tensor, field;
    std::uint64_t budget = kDefaultEnumBudget;
    bool as_json = false;
};

int cmd_eig0(const Eig0Args& a, std::ostream& out) {
    auto [T, spec] = tensor_from_json(parse_json(read_text_file(a.tensor)));
    check_field_flag(a.field, spec, "tensor");
    Field F(spec);

    Eig0Result r = eig0(T, F, a.budget);
    json report{{"command", "eig0"},
                {"field", spec.name()},
                {"exists", r.exists},
                {"tried", r.tried}};
    if (spec.kind == FieldKind::GFp && spec.p == 2)
        report["note"] = "characteristic two: the solvability bridge needs odd characteristic";
    if (r.exists) {
        report["x"] = elems_array(r.x, F);
        report["status"] = "ok";
        std::ostringstream ss;
        ss << "eigenvalue zero: x = (";
        for (std::size_t i = 0; i < r.x.size(); ++i) {
            if (i) ss << ", ";
            ss << F.to_string(r.x[i]);
        }
        ss << ") after " << r.tried << " candidates";
        emit_report(out, a.as_json, report, {ss.str()});
        return code(ExitStatus::Success);
    }
    report["status"] = "refuted";
    emit_report(out, a.as_json, report,
                {"no zero eigenvalue (" + std::to_string(r.tried) + " candidates)"});
    return code(ExitStatus::PropertyRefuted);
}

struct AbsorbArgs {
    std::string tensor, expansion, field, out_dir = ".";
    std::vector<std::size_t> indices;
    bool as_json = false;
};

int cmd_absorb(const AbsorbArgs& a, std::ostream& out) {
    auto [T, spec] = tensor_from_json(parse_json(read_text_file(a.tensor)));
    LoadedExpansion E = expansion_from_json(parse_json(read_text_file(a.expansion)));
    check_field_flag(a.field, spec, "tensor");
    if (!(E.field == spec))
        throw UsageError("expansion field " + E.field.name() + " does not match tensor field " +
                         spec.name());
    Field F(spec);
    if (E.target_digest != tensor_digest(T, F))
        throw InputError("expansion digest does not match the tensor");

    Expansion result = a.indices.size() == 1 ? absorb_slice(T, E.expansion, a.indices[0], F)
                                             : absorb_slices(T, E.expansion, a.indices, F);
    std::string path = artifact_path(a.out_dir, "absorbed.json");
    write_text_file(path, dump_json(expansion_to_json(result, F, E.target_digest)));

    json report{{"command", "absorb"},
                {"field", spec.name()},
                {"indices", a.indices},
                {"terms", result.terms.size()},
                {"output", path},
                {"status", "ok"}};
    emit_report(out, a.as_json, report,
                {"absorbed " + std::to_string(a.indices.size()) + " slice(s), wrote " + path});
    return code(ExitStatus::Success);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact minrank and tensor rank laboratory"};
    app.name("rankc");

    CompileArgs ca;
    CLI::App* compile = app.add_subcommand("compile", "source to system, matrix, and tensor");
    compile->add_option("source", ca.source, "equation source file")->required();
    compile->add_option("--field", ca.field, "target field: gf<p>, q, qsqrt<d>")->required();
    compile->add_option("--out", ca.out_dir, "artifact directory");
    compile->add_option("--emit", ca.emit, "comma list from system,matrix,tensor,bundle");
    compile->add_flag("--json", ca.as_json, "machine-readable report");

    MinrankArgs ma;
    CLI::App* minrank = app.add_subcommand("minrank", "exact minimum rank of a symbolic matrix");
    minrank->add_option("matrix", ma.matrix, "matrix file")->required();
    minrank->add_option("--field", ma.field, "field: gf<p>")->required();
    minrank->add_option("--mode", ma.mode, "full or witness");
    minrank->add_option("--system", ma.system, "cross-check against this system file");
    minrank->add_option("--budget", ma.budget, "assignment budget");
    minrank->add_option("--workers", ma.workers, "parallel workers");
    minrank->add_flag("--json", ma.as_json, "machine-readable report");

    RankArgs ra;
    CLI::App* rank = app.add_subcommand("rank", "decide tensor rank <= r");
    rank->add_option("tensor", ra.tensor, "tensor file")->required();
    rank->add_option("--leq", ra.leq, "rank bound r")->required();
    rank->add_option("--field", ra.field, "must match the tensor's field");
    rank->add_option("--out", ra.out_dir, "certificate directory");
    rank->add_option("--budget", ra.budget, "search node budget");
    rank->add_option("--workers", ra.workers, "parallel workers");
    rank->add_flag("--json", ra.as_json, "machine-readable report");

    CertifyArgs fa;
    CLI::App* certify = app.add_subcommand("certify", "verify an expansion against a tensor");
    certify->add_option("tensor", fa.tensor, "tensor file")->required();
    certify->add_option("expansion", fa.expansion, "expansion file")->required();
    certify->add_option("--field", fa.field, "must match the tensor's field");
    certify->add_flag("--json", fa.as_json, "machine-readable report");

    RealizeArgs ea;
    CLI::App* realize = app.add_subcommand("realize", "solve for w vectors over a slice family");
    realize->add_option("tensor", ea.tensor, "tensor file")->required();
    realize->add_option("slices", ea.slices, "slice family file")->required();
    realize->add_option("-r,--rank", ea.r, "family size r")->required();
    realize->add_option("--field", ea.field, "must match the tensor's field");
    realize->add_flag("--json", ea.as_json, "machine-readable report");

    Eig0Args ga;
    CLI::App* eig = app.add_subcommand("eig0", "zero-eigenvector search on a cubical tensor");
    eig->add_option("tensor", ga.tensor, "tensor file")->required();
    eig->add_option("--field", ga.field, "must match the tensor's field");
    eig->add_option("--budget", ga.budget, "candidate budget");
    eig->add_flag("--json", ga.as_json, "machine-readable report");

    AbsorbArgs ba;
    CLI::App* absorb = app.add_subcommand("absorb", "pin rank-one frontal slices in an expansion");
    absorb->add_option("tensor", ba.tensor, "tensor file")->required();
    absorb->add_option("expansion", ba.expansion, "expansion file")->required();
    absorb->add_option("indices", ba.indices, "frontal slice indices (0-based, as stored)")
        ->required()
        ->expected(-1);
    absorb->add_option("--field", ba.field, "must match the tensor's field");
    absorb->add_option("--out", ba.out_dir, "output directory");
    absorb->add_flag("--json", ba.as_json, "machine-readable report");

    app.require_subcommand(1);

    std::vector<const char*> argv;
    argv.push_back("rankc");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::Success& e) {
        out << app.help();
        return code(ExitStatus::Success);
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return code(ExitStatus::Usage);
    }

    try {
        if (compile->parsed()) return cmd_compile(ca, out);
        if (minrank->parsed()) return cmd_minrank(ma, out);
        if (rank->parsed()) return cmd_rank(ra, out);
        if (certify->parsed()) return cmd_certify(fa, out);
        if (realize->parsed()) return cmd_realize(ea, out);
        if (eig->parsed()) return cmd_eig0(ga, out);
        if (absorb->parsed()) return cmd_absorb(ba, out);
        throw UsageError("no command given");
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return code(ExitStatus::Usage);
    } catch (const BudgetError& e) {
        err << "budget exceeded: " << e.what() << '\n';
        return code(ExitStatus::BudgetExceeded);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return code(ExitStatus::MalformedInput);
    } catch (const InternalError& e) {
        err << "internal error: " << e.what() << '\n';
        return code(ExitStatus::MalformedInput);
    }
}

}  // namespace rankc
