#include "rankc/serialize.hpp"

#include <fstream>
#include <sstream>

#include "rankc/common.hpp"

namespace rankc {

namespace {

using nlohmann::json;

[[noreturn]] void malformed(const std::string& what) { throw InputError(what); }

// Canonicality by re-serialization: the parsed value's canonical spelling
// must be the input. Rejects unreduced fractions, negative denominators,
// leading zeros, and stray whitespace in one place.
mpz_class parse_canonical_mpz(const std::string& s) {
    mpz_class z;
    try {
        z = mpz_class(s);
    } catch (const std::invalid_argument&) {
        malformed("not an integer: '" + s + "'");
    }
    if (z.get_str() != s) malformed("non-canonical integer: '" + s + "'");
    return z;
}

mpq_class parse_canonical_mpq(const std::string& s) {
    std::size_t slash = s.find('/');
    mpz_class num, den;
    try {
        num = mpz_class(s.substr(0, slash));
        den = slash == std::string::npos ? mpz_class(1) : mpz_class(s.substr(slash + 1));
    } catch (const std::invalid_argument&) {
        malformed("not a rational: '" + s + "'");
    }
    if (den == 0) malformed("zero denominator: '" + s + "'");
    mpq_class q(num, den);
    q.canonicalize();
    if (q.get_str() != s) malformed("non-canonical rational: '" + s + "'");
    return q;
}

json mpz_to_json(const mpz_class& z) {
    if (z.fits_slong_p()) return static_cast<std::int64_t>(z.get_si());
    return z.get_str();
}

mpz_class mpz_from_json(const json& j) {
    if (j.is_number_unsigned()) return mpz_class(std::to_string(j.get<std::uint64_t>()));
    if (j.is_number_integer()) return mpz_class(std::to_string(j.get<std::int64_t>()));
    if (j.is_string()) return parse_canonical_mpz(j.get<std::string>());
    malformed("expected an integer, got " + j.dump());
}

std::vector<FieldElem> elems_from_json(const json& j, const Field& F) {
    if (!j.is_array()) malformed("expected an array of field elements");
    std::vector<FieldElem> out;
    out.reserve(j.size());
    for (const auto& e : j) out.push_back(elem_from_json(e, F));
    return out;
}

json elems_to_json(const std::vector<FieldElem>& v, const Field& F) {
    json out = json::array();
    for (const auto& e : v) out.push_back(elem_to_json(e, F));
    return out;
}

}  // namespace

json field_to_json(const FieldSpec& spec) {
    json j;
    switch (spec.kind) {
        case FieldKind::GFp:
            j["kind"] = "gfp";
            j["p"] = spec.p;
            break;
        case FieldKind::Q:
            j["kind"] = "q";
            break;
        case FieldKind::QSqrt:
            j["kind"] = "qsqrt";
            j["d"] = spec.d;
            break;
    }
    return j;
}

FieldSpec field_from_json(const json& j) {
    FieldSpec spec;
    try {
        std::string kind = j.at("kind").get<std::string>();
        if (kind == "gfp") {
            spec = FieldSpec::gf(j.at("p").get<std::uint32_t>());
        } else if (kind == "q") {
            spec = FieldSpec::q();
        } else if (kind == "qsqrt") {
            spec = FieldSpec::qsqrt(j.at("d").get<std::uint32_t>());
        } else {
            malformed("unknown field kind '" + kind + "'");
        }
    } catch (const json::exception& e) {
        malformed(std::string("malformed field object: ") + e.what());
    }
    Field{spec};  // validates the modulus or radicand
    return spec;
}

json elem_to_json(const FieldElem& x, const Field& F) {
    switch (F.kind()) {
        case FieldKind::GFp:
            return std::get<std::uint64_t>(x);
        case FieldKind::Q:
            return std::get<mpq_class>(x).get_str();
        case FieldKind::QSqrt: {
            const QuadVal& q = std::get<QuadVal>(x);
            return json::array({q.a.get_str(), q.b.get_str()});
        }
    }
    throw InternalError("unhandled field kind");
}

FieldElem elem_from_json(const json& j, const Field& F) {
    switch (F.kind()) {
        case FieldKind::GFp: {
            if (!j.is_number_unsigned() && !j.is_number_integer())
                malformed("finite field entries must be integers, got " + j.dump());
            if (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0)
                malformed("non-canonical residue " + j.dump());
            std::uint64_t v = j.get<std::uint64_t>();
            if (v >= F.p()) malformed("non-canonical residue " + std::to_string(v));
            return FieldElem{v};
        }
        case FieldKind::Q: {
            if (!j.is_string()) malformed("rational entries must be strings, got " + j.dump());
            return FieldElem{parse_canonical_mpq(j.get<std::string>())};
        }
        case FieldKind::QSqrt: {
            if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_string())
                malformed("quadratic field entries must be pairs of strings, got " + j.dump());
            return FieldElem{QuadVal{parse_canonical_mpq(j[0].get<std::string>()),
                                     parse_canonical_mpq(j[1].get<std::string>())}};
        }
    }
    throw InternalError("unhandled field kind");
}

json matrix_to_json(const ConcreteMatrix& M, const Field& F) {
    json j;
    j["rows"] = M.rows;
    j["cols"] = M.cols;
    j["field"] = field_to_json(F.spec());
    j["entries"] = elems_to_json(M.entries, F);
    return j;
}

std::pair<ConcreteMatrix, FieldSpec> matrix_from_json(const json& j) {
    try {
        FieldSpec spec = field_from_json(j.at("field"));
        Field F(spec);
        ConcreteMatrix M;
        M.rows = j.at("rows").get<std::size_t>();
        M.cols = j.at("cols").get<std::size_t>();
        M.entries = elems_from_json(j.at("entries"), F);
        if (M.entries.size() != M.rows * M.cols)
            malformed("matrix has " + std::to_string(M.entries.size()) + " entries, expected " +
                      std::to_string(M.rows * M.cols));
        return {std::move(M), spec};
    } catch (const json::exception& e) {
        malformed(std::string("malformed matrix: ") + e.what());
    }
}

json system_to_json(const QuadraticSystem& s) {
    json eqs = json::array();
    for (const auto& e : s.equations) {
        json r;
        r["c"] = e.c;
        switch (e.kind) {
            case EqKind::Add:
                r["kind"] = "ADD";
                r["a"] = e.a;
                r["b"] = e.b;
                break;
            case EqKind::Mul:
                r["kind"] = "MUL";
                r["a"] = e.a;
                r["b"] = e.b;
                break;
            case EqKind::Copy:
                r["kind"] = "COPY";
                r["a"] = e.a;
                break;
            case EqKind::Const:
                r["kind"] = "CONST";
                r["k"] = mpz_to_json(e.k);
                break;
        }
        eqs.push_back(std::move(r));
    }
    json j;
    j["variables"] = s.variables;
    j["equations"] = std::move(eqs);
    return j;
}

QuadraticSystem system_from_json(const json& j) {
    QuadraticSystem s;
    try {
        s.variables = j.at("variables").get<std::vector<std::string>>();
        for (const auto& r : j.at("equations")) {
            std::string kind = r.at("kind").get<std::string>();
            std::string c = r.at("c").get<std::string>();
            if (kind == "ADD")
                s.equations.push_back(QuadEquation::add(c, r.at("a").get<std::string>(),
                                                        r.at("b").get<std::string>()));
            else if (kind == "MUL")
                s.equations.push_back(QuadEquation::mul(c, r.at("a").get<std::string>(),
                                                        r.at("b").get<std::string>()));
            else if (kind == "COPY")
                s.equations.push_back(QuadEquation::copy(c, r.at("a").get<std::string>()));
            else if (kind == "CONST")
                s.equations.push_back(QuadEquation::constant(c, mpz_from_json(r.at("k"))));
            else
                malformed("unknown equation kind '" + kind + "'");
        }
    } catch (const json::exception& e) {
        malformed(std::string("malformed system: ") + e.what());
    }
    validate_system(s);
    return s;
}

json symbolic_matrix_to_json(const SymbolicMatrix& M) {
    json entries = json::array();
    for (const auto& e : M.entries) {
        json cell;
        cell["const"] = mpz_to_json(e.c);
        json terms = json::object();
        for (const auto& [v, k] : e.terms) terms[v] = mpz_to_json(k);
        cell["terms"] = std::move(terms);
        entries.push_back(std::move(cell));
    }
    json occ = json::object();
    for (const auto& [v, cells] : M.occurrences) {
        json rows = json::array(), cols = json::array();
        for (const auto& c : cells) {
            rows.push_back(c.row);
            cols.push_back(c.col);
        }
        occ[v] = json{{"rows", std::move(rows)}, {"cols", std::move(cols)}};
    }
    json j;
    j["m"] = M.m();
    j["dim"] = M.dim();
    j["variables"] = M.system.variables;
    j["copy_variables"] = M.copy_vars;
    j["entries"] = std::move(entries);
    j["occurrences"] = std::move(occ);
    j["system"] = system_to_json(M.system);
    return j;
}

SymbolicMatrix symbolic_matrix_from_json(const json& j) {
    QuadraticSystem s;
    try {
        s = system_from_json(j.at("system"));
    } catch (const json::exception& e) {
        malformed(std::string("malformed matrix file: ") + e.what());
    }
    SymbolicMatrix M = build_matrix(s);
    if (symbolic_matrix_to_json(M) != j)
        malformed("matrix file does not match the matrix built from its system");
    return M;
}

json tensor_to_json(const Tensor& T, const Field& F) {
    json j;
    j["dims"] = json::array({T.d1, T.d2, T.d3});
    j["field"] = field_to_json(F.spec());
    j["entries"] = elems_to_json(T.entries, F);
    return j;
}

std::pair<Tensor, FieldSpec> tensor_from_json(const json& j) {
    try {
        FieldSpec spec = field_from_json(j.at("field"));
        Field F(spec);
        const json& dims = j.at("dims");
        if (!dims.is_array() || dims.size() != 3) malformed("dims must be a three-element array");
        Tensor T;
        T.d1 = dims[0].get<std::size_t>();
        T.d2 = dims[1].get<std::size_t>();
        T.d3 = dims[2].get<std::size_t>();
        T.entries = elems_from_json(j.at("entries"), F);
        if (T.entries.size() != T.d1 * T.d2 * T.d3)
            malformed("tensor has " + std::to_string(T.entries.size()) + " entries, expected " +
                      std::to_string(T.d1 * T.d2 * T.d3));
        return {std::move(T), spec};
    } catch (const json::exception& e) {
        malformed(std::string("malformed tensor: ") + e.what());
    }
}

json bundle_to_json(const TensorBundle& B) {
    json j;
    j["m"] = B.m;
    j["n"] = B.slice_vars.size();
    j["rank_target"] = B.rank_target;
    j["slice_vars"] = B.slice_vars;
    return j;
}

BundleMeta bundle_from_json(const json& j) {
    BundleMeta b;
    try {
        b.m = j.at("m").get<std::size_t>();
        b.n = j.at("n").get<std::size_t>();
        b.rank_target = j.at("rank_target").get<std::size_t>();
        b.slice_vars = j.at("slice_vars").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        malformed(std::string("malformed bundle: ") + e.what());
    }
    if (b.slice_vars.size() != b.n) malformed("bundle variable count does not match n");
    if (b.rank_target != 2 * b.m + b.n) malformed("bundle rank target does not equal 2m + n");
    return b;
}

json expansion_to_json(const Expansion& E, const Field& F, std::uint64_t target_digest) {
    json terms = json::array();
    for (const auto& t : E.terms)
        terms.push_back(json{{"u", elems_to_json(t.u, F)},
                             {"v", elems_to_json(t.v, F)},
                             {"w", elems_to_json(t.w, F)}});
    json j;
    j["field"] = field_to_json(F.spec());
    j["target_digest"] = digest_to_string(target_digest);
    j["terms"] = std::move(terms);
    return j;
}

LoadedExpansion expansion_from_json(const json& j) {
    LoadedExpansion out;
    try {
        out.field = field_from_json(j.at("field"));
        Field F(out.field);
        std::string digest = j.at("target_digest").get<std::string>();
        if (digest.size() != 16 ||
            digest.find_first_not_of("0123456789abcdef") != std::string::npos)
            malformed("digest must be 16 lowercase hex digits");
        out.target_digest = std::stoull(digest, nullptr, 16);
        for (const auto& t : j.at("terms")) {
            RankOneTerm term;
            term.u = elems_from_json(t.at("u"), F);
            term.v = elems_from_json(t.at("v"), F);
            term.w = elems_from_json(t.at("w"), F);
            out.expansion.terms.push_back(std::move(term));
        }
    } catch (const json::exception& e) {
        malformed(std::string("malformed expansion: ") + e.what());
    } catch (const std::invalid_argument&) {
        malformed("digest must be 16 hex digits");
    }
    return out;
}

json slices_to_json(const std::vector<ConcreteMatrix>& S, const Field& F) {
    json slices = json::array();
    for (const auto& M : S) slices.push_back(elems_to_json(M.entries, F));
    json j;
    j["field"] = field_to_json(F.spec());
    j["rows"] = S.empty() ? 0 : S[0].rows;
    j["cols"] = S.empty() ? 0 : S[0].cols;
    j["slices"] = std::move(slices);
    return j;
}

LoadedSlices slices_from_json(const json& j) {
    LoadedSlices out;
    try {
        out.field = field_from_json(j.at("field"));
        Field F(out.field);
        std::size_t rows = j.at("rows").get<std::size_t>();
        std::size_t cols = j.at("cols").get<std::size_t>();
        for (const auto& s : j.at("slices")) {
            ConcreteMatrix M;
            M.rows = rows;
            M.cols = cols;
            M.entries = elems_from_json(s, F);
            if (M.entries.size() != rows * cols)
                malformed("slice entry count does not match the declared shape");
            if (matrix_rank(M, F) > 1)
                malformed("slice " + std::to_string(out.slices.size()) +
                          " has rank above one");
            out.slices.push_back(std::move(M));
        }
    } catch (const json::exception& e) {
        malformed(std::string("malformed slice family: ") + e.what());
    }
    return out;
}

json solution_to_json(const AffineSolutionSpace& S, const Field& F) {
    json j;
    j["ambient"] = S.ambient;
    j["empty"] = S.empty;
    j["particular"] = elems_to_json(S.particular, F);
    json basis = json::array();
    for (const auto& b : S.basis) basis.push_back(elems_to_json(b, F));
    j["basis"] = std::move(basis);
    return j;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t tensor_digest(const Tensor& T, const Field& F) {
    return fnv1a64(tensor_to_json(T, F).dump());
}

std::string digest_to_string(std::uint64_t digest) {
    static const char* hex = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = hex[digest & 0xf];
        digest >>= 4;
    }
    return s;
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

nlohmann::json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        malformed(std::string("malformed JSON: ") + e.what());
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw InputError("cannot read file '" + path + "'");
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write file '" + path + "'");
    out << content;
    out.flush();
    if (!out) throw InputError("cannot write file '" + path + "'");
}

}  // namespace rankc
