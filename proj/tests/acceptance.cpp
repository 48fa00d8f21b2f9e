// Acceptance gate: one line per criterion, nonzero exit if any fail.
// Wall-clock limits are fixed here so a performance regression fails the
// gate instead of silently slowing down.

#include <algorithm>
#include <array>
#include <chrono>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rankc/field.hpp"
#include "rankc/minrank.hpp"
#include "rankc/ranklab.hpp"
#include "rankc/syslang.hpp"
#include "rankc/tensorize.hpp"
#include "testutil.hpp"

using namespace rankc;

namespace {

constexpr double kLimitGolden = 1.0;
constexpr double kLimitWitness = 1.0;
constexpr double kLimitFullEnum = 300.0;
constexpr double kLimitExpansions = 5.0;
constexpr double kLimitEquivalence = 120.0;
constexpr double kLimitTinyTensor = 30.0;
constexpr double kLimitAbsorption = 60.0;
constexpr double kLimitExhaustive = 120.0;
constexpr double kLimitRealization = 60.0;
constexpr double kLimitEigenvalue = 60.0;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

std::string fmt_s(double s) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(2) << s << " s";
    return ss.str();
}

struct Outcome {
    bool pass = true;
    std::string detail;
};

int g_failures = 0;

template <typename Fn>
void run(int criterion, Fn&& fn) {
    Outcome o;
    try {
        o = fn();
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("exception: ") + e.what();
    }
    std::cout << "criterion " << criterion << ": " << (o.pass ? "PASS" : "FAIL");
    if (!o.detail.empty()) std::cout << " (" << o.detail << ")";
    std::cout << std::endl;
    if (!o.pass) ++g_failures;
}

QuadraticSystem separation_system() {
    QuadraticSystem s;
    s.variables = {"u", "x", "y"};
    s.equations = {QuadEquation::mul("u", "x", "y"), QuadEquation::copy("y", "x"),
                   QuadEquation::constant("u", 2)};
    return s;
}

// sigma over all_vars order with every copy set to its base value.
std::vector<FieldElem> with_copies(const SymbolicMatrix& M, const std::vector<FieldElem>& base) {
    std::vector<FieldElem> sigma = base;
    for (const auto& cv : M.copy_vars) {
        std::string root = cv.substr(0, cv.find('@'));
        for (std::size_t i = 0; i < M.system.variables.size(); ++i)
            if (M.system.variables[i] == root) sigma.push_back(base[i]);
    }
    return sigma;
}

FieldElem gauss_det(ConcreteMatrix A, const Field& F) {
    FieldElem det = F.one();
    std::size_t n = A.rows;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && F.is_zero(A.at(piv, c))) ++piv;
        if (piv == n) return F.zero();
        if (piv != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(A.at(piv, j), A.at(c, j));
            det = F.neg(det);
        }
        det = F.mul(det, A.at(c, c));
        FieldElem inv = F.inv(A.at(c, c));
        for (std::size_t r = c + 1; r < n; ++r) {
            if (F.is_zero(A.at(r, c))) continue;
            FieldElem f = F.mul(A.at(r, c), inv);
            for (std::size_t j = c; j < n; ++j)
                A.at(r, j) = F.sub(A.at(r, j), F.mul(f, A.at(c, j)));
        }
    }
    return det;
}

ConcreteMatrix square_submatrix(const ConcreteMatrix& A, const std::vector<std::size_t>& keep,
                                const Field& F) {
    ConcreteMatrix S(keep.size(), keep.size(), F);
    for (std::size_t i = 0; i < keep.size(); ++i)
        for (std::size_t j = 0; j < keep.size(); ++j) S.at(i, j) = A.at(keep[i], keep[j]);
    return S;
}

std::vector<ConcreteMatrix> matrix_parts(const Expansion& E, const Field& F) {
    std::vector<ConcreteMatrix> S;
    for (const RankOneTerm& t : E.terms) {
        ConcreteMatrix R(t.u.size(), t.v.size(), F);
        for (std::size_t i = 0; i < t.u.size(); ++i)
            for (std::size_t j = 0; j < t.v.size(); ++j) R.at(i, j) = F.mul(t.u[i], t.v[j]);
        S.push_back(std::move(R));
    }
    return S;
}

// Random expansion whose slice H[i] is carried by exactly one term, making
// it rank one by construction.
struct AbsorbFixture {
    Tensor T{0, 0, 1, Field{FieldSpec::gf(2)}};
    Expansion E;
};

AbsorbFixture make_absorb_fixture(const Field& F, std::mt19937_64& rng,
                                  const std::vector<std::size_t>& pinned, std::size_t extra_terms,
                                  std::size_t d1, std::size_t d2, std::size_t d3) {
    Expansion E;
    auto nonzero_vec = [&](std::size_t n) {
        std::vector<FieldElem> v;
        do {
            v = testutil::rand_vector(n, F, rng);
        } while (std::all_of(v.begin(), v.end(), [&](const FieldElem& e) { return F.is_zero(e); }));
        return v;
    };
    for (std::size_t i = 0; i < pinned.size(); ++i) {
        RankOneTerm t;
        t.u.assign(d1, F.zero());
        t.u[i] = F.one();
        t.v = nonzero_vec(d2);
        t.w = testutil::rand_vector(d3, F, rng);
        for (std::size_t j = 0; j < pinned.size(); ++j)
            t.w[pinned[j]] =
                (i == j) ? F.from_int(1 + static_cast<long>(rng() % (F.p() - 1))) : F.zero();
        E.terms.push_back(std::move(t));
    }
    for (std::size_t i = 0; i < extra_terms; ++i) {
        RankOneTerm t;
        t.u = nonzero_vec(d1);
        t.v = nonzero_vec(d2);
        t.w = testutil::rand_vector(d3, F, rng);
        for (std::size_t k : pinned) t.w[k] = F.zero();
        E.terms.push_back(std::move(t));
    }
    std::shuffle(E.terms.begin(), E.terms.end(), rng);
    AbsorbFixture fx;
    fx.E = std::move(E);
    fx.T = testutil::sum_of_terms(fx.E, d1, d2, d3, F);
    return fx;
}

// Shared between criteria 3, 4, and 10.
std::vector<QuadraticSystem> g_suite_systems;
std::vector<SymbolicMatrix> g_suite_matrices;

// ------------------------------------------------------------------
// 1: the compiled worked example reproduces the reference 9x9 matrix
// entry-for-entry except position (9,7), where the construction yields 1.

Outcome criterion1() {
    Timer timer;
    auto C = [](long k) { return AffineExpr::constant(k); };
    auto V = [](const char* n) { return AffineExpr::var(n); };
    auto D = [](const char* n, const char* cp) {
        return AffineExpr::var(n).minus(AffineExpr::var(cp));
    };
    const AffineExpr Z = C(0), I = C(1);
    const std::array<std::array<AffineExpr, 9>, 9> printed = {{
        {I, Z, V("u"), Z, Z, Z, Z, Z, D("u", "u@1")},
        {Z, I, V("x"), Z, Z, D("x", "x@1"), Z, Z, Z},
        {C(-1), V("y"), Z, Z, Z, D("y", "y@1"), Z, Z, Z},
        {Z, Z, D("x", "x@2"), I, Z, V("x"), Z, Z, Z},
        {Z, Z, Z, Z, I, Z, Z, Z, Z},
        {Z, D("y", "y@2"), Z, I, I, V("y"), Z, Z, Z},
        {Z, Z, Z, Z, Z, Z, I, Z, C(2)},
        {Z, Z, Z, Z, Z, Z, Z, I, Z},
        {Z, Z, D("u", "u@2"), Z, Z, Z, Z, I, V("u")},
    }};

    PolyFormula f = parse_source("eq u = x*y;\neq y = x;\neq u = 2;\n");
    QuadraticSystem s = normalize(quadratize(f));
    if (!(s == separation_system())) return {false, "pipeline did not reproduce the system"};
    SymbolicMatrix M = build_matrix(s);
    if (M.dim() != 9) return {false, "matrix is not 9x9"};

    std::vector<std::pair<std::size_t, std::size_t>> diffs;
    for (std::size_t i = 0; i < 9; ++i)
        for (std::size_t j = 0; j < 9; ++j)
            if (!(M.at(i, j) == printed[i][j])) diffs.emplace_back(i, j);
    if (diffs != std::vector<std::pair<std::size_t, std::size_t>>{{8, 6}})
        return {false, std::to_string(diffs.size()) + " entries differ from the reference matrix"};
    if (!(M.at(8, 6) == C(1)))
        return {false, "construction entry at (9,7) is not the expected 1"};

    verify_observation(M);

    double t = timer.seconds();
    if (t > kLimitGolden) return {false, "took " + fmt_s(t) + ", limit " + fmt_s(kLimitGolden)};
    return {true, "one documented diff at (9,7), " + fmt_s(t)};
}

// ------------------------------------------------------------------
// 2: minrank of the worked example separates GF(7) from GF(5), and the
// rank-target expansion exists over GF(7) and exactly over Q(sqrt(2)).

Outcome criterion2() {
    SymbolicMatrix M = build_matrix(separation_system());

    Timer t_witness;
    Field F7{FieldSpec::gf(7)};
    WitnessSearchResult w7 = minrank_witness_search(M, F7, 1'000'000);
    double tw = t_witness.seconds();
    if (!w7.found || w7.rank != 6)
        return {false, "GF(7) witness search did not reach rank 6"};
    if (tw > kLimitWitness)
        return {false, "GF(7) witness took " + fmt_s(tw) + ", limit " + fmt_s(kLimitWitness)};

    Timer t_full;
    Field F5{FieldSpec::gf(5)};
    MinrankResult r5 = minrank_bruteforce(M, F5, std::uint64_t(2'000'000), 4);
    double tf = t_full.seconds();
    if (tf > kLimitFullEnum)
        return {false, "GF(5) enumeration took " + fmt_s(tf) + ", limit " + fmt_s(kLimitFullEnum)};

    TensorBundle B = build_tensor(M, F7);
    if (B.tensor.d1 != 9 || B.tensor.d2 != 9 || B.tensor.d3 != 10 || B.rank_target != 15)
        return {false, "bundle is not 9x9x10 with rank target 15"};

    Timer t_exp;
    std::vector<FieldElem> base7{F7.from_int(2), F7.from_int(3), F7.from_int(3)};
    Expansion E7 = expansion_from_assignment(B, with_copies(M, base7), F7);
    bool ok7 = E7.terms.size() == 15 && verify_expansion(B.tensor, E7, F7);

    Field FQ{FieldSpec::qsqrt(2)};
    TensorBundle BQ = build_tensor(M, FQ);
    FieldElem rt = normalize_elem(RawElem{0, 1, 1, 1}, FQ);
    std::vector<FieldElem> baseq{FQ.from_int(2), rt, rt};
    Expansion EQ = expansion_from_assignment(BQ, with_copies(M, baseq), FQ);
    bool okq = EQ.terms.size() == 15 && verify_expansion(BQ.tensor, EQ, FQ);
    double te = t_exp.seconds();

    if (!ok7) return {false, "no verified 15-term expansion over GF(7)"};
    if (!okq) return {false, "no verified 15-term expansion over Q(sqrt(2))"};
    if (te > kLimitExpansions)
        return {false, "expansions took " + fmt_s(te) + ", limit " + fmt_s(kLimitExpansions)};

    // The separating value: full enumeration over GF(5) must give 7.
    if (r5.minrank != 7)
        return {false, "GF(5) full enumeration gives minrank " + std::to_string(r5.minrank) +
                           ", required 7 (tried " + std::to_string(r5.tried) + ")"};
    return {true, "GF(7) rank 6 in " + fmt_s(tw) + ", GF(5) minrank 7 in " + fmt_s(tf) +
                      ", expansions in " + fmt_s(te)};
}

// ------------------------------------------------------------------
// 3: on random normalized systems, brute-force solvability over GF(2) and
// GF(3) coincides with minrank hitting the 2m floor, and never dips below.

Outcome criterion3() {
    Timer timer;
    std::mt19937_64 rng(20260814);
    const std::size_t kSystems = 200;
    std::size_t solvable_count = 0;

    g_suite_systems.clear();
    g_suite_matrices.clear();
    while (g_suite_systems.size() < kSystems) {
        QuadraticSystem s = testutil::random_normalized_system(rng);
        SymbolicMatrix M = build_matrix(s);
        std::size_t m = M.m();
        if (m == 0 || m > 3 || s.variables.size() > 4) continue;

        for (std::uint32_t p : {2u, 3u}) {
            Field F{FieldSpec::gf(p)};
            bool solvable = solve_bruteforce(s, F, 1'000'000).found;
            MinrankResult r = minrank_bruteforce(M, F, 100'000'000);
            if (r.minrank < 2 * m)
                return {false, "minrank " + std::to_string(r.minrank) + " below floor " +
                                   std::to_string(2 * m) + " over gf" + std::to_string(p)};
            if (solvable != (r.minrank == 2 * m))
                return {false, "solvability and minrank floor disagree over gf" +
                                   std::to_string(p)};
            if (solvable) ++solvable_count;
        }
        g_suite_systems.push_back(std::move(s));
        g_suite_matrices.push_back(std::move(M));
    }

    double t = timer.seconds();
    if (t > kLimitEquivalence)
        return {false, "took " + fmt_s(t) + ", limit " + fmt_s(kLimitEquivalence)};
    return {true, std::to_string(kSystems) + " systems x 2 fields, " +
                      std::to_string(solvable_count) + " solvable cases, " + fmt_s(t)};
}

// ------------------------------------------------------------------
// 4: bordered submatrix determinant equals the block determinant: keep the
// non-multiple-of-3 rows and columns plus row/column 3l, evaluate anywhere.

Outcome criterion4() {
    Timer timer;
    if (g_suite_matrices.empty()) return {false, "criterion 3 produced no matrices"};
    std::mt19937_64 rng(414243);
    std::uint64_t checked = 0;

    for (const SymbolicMatrix& M : g_suite_matrices) {
        std::size_t m = M.m();
        std::size_t nv = M.all_vars().size();
        for (std::uint32_t p : {2u, 3u}) {
            Field F{FieldSpec::gf(p)};
            for (int trial = 0; trial < 500; ++trial) {
                std::vector<FieldElem> sigma;
                sigma.reserve(nv);
                for (std::size_t i = 0; i < nv; ++i)
                    sigma.push_back(testutil::rand_elem(F, rng));
                ConcreteMatrix A = evaluate_matrix(M, sigma, F);
                for (std::size_t l = 0; l < m; ++l) {
                    std::vector<std::size_t> keep;
                    for (std::size_t i = 0; i < 3 * m; ++i)
                        if (i % 3 != 2 || i == 3 * l + 2) keep.push_back(i);
                    FieldElem bordered = gauss_det(square_submatrix(A, keep, F), F);
                    FieldElem block =
                        gauss_det(square_submatrix(A, {3 * l, 3 * l + 1, 3 * l + 2}, F), F);
                    if (!F.eq(bordered, block))
                        return {false, "determinants disagree over gf" + std::to_string(p)};
                    ++checked;
                }
            }
        }
    }
    return {true, std::to_string(checked) + " exact determinant pairs, " + fmt_s(timer.seconds())};
}

// ------------------------------------------------------------------
// 5: the one-equation tensor over GF(3): yes at the rank target with a
// re-verified certificate, and the r=2 verdict matches a dumb enumerator.

Outcome criterion5() {
    Timer timer;
    Field F{FieldSpec::gf(3)};
    QuadraticSystem s = normalize(quadratize(parse_source("eq c = 2;\n")));
    TensorBundle B = build_tensor(build_matrix(s), F);
    if (B.rank_target != 3) return {false, "rank target is not 3"};

    RankSearchResult r3 = tensor_rank_leq(B.tensor, 3, F);
    if (!r3.feasible) return {false, "rank <= 3 refuted"};
    if (!verify_expansion(B.tensor, r3.certificate, F))
        return {false, "certificate failed re-verification"};

    bool lib2 = tensor_rank_leq(B.tensor, 2, F).feasible;
    bool dumb2 = testutil::dumb_rank_leq(B.tensor, 2, F);
    if (lib2 != dumb2) return {false, "r=2 verdict disagrees with the dumb enumerator"};

    double t = timer.seconds();
    if (t > kLimitTinyTensor)
        return {false, "took " + fmt_s(t) + ", limit " + fmt_s(kLimitTinyTensor)};
    return {true, "rank 3 certificate with " + std::to_string(r3.certificate.terms.size()) +
                      " terms, r=2 refuted both ways, " + fmt_s(t)};
}

// ------------------------------------------------------------------
// 6: absorption pins rank-one frontal slices: output verifies, keeps its
// length, and after the pin each slice is carried by its own term only.

Outcome criterion6() {
    Timer timer;
    Field F{FieldSpec::gf(5)};
    std::mt19937_64 rng(606162);

    auto dims = [&] {
        return std::array<std::size_t, 3>{2 + rng() % 3, 2 + rng() % 3, 2 + rng() % 4};
    };

    for (int i = 0; i < 500; ++i) {
        auto [d1, d2, d3] = dims();
        std::size_t k = rng() % d3;
        AbsorbFixture fx = make_absorb_fixture(F, rng, {k}, rng() % 4, d1, d2, d3);
        Expansion out = absorb_slice(fx.T, fx.E, k, F);
        if (out.terms.size() != fx.E.terms.size()) return {false, "single pin changed length"};
        if (!verify_expansion(fx.T, out, F)) return {false, "single pin output does not verify"};
        if (F.is_zero(out.terms[0].w[k])) return {false, "pinned term does not carry its slice"};
        for (std::size_t l = 1; l < out.terms.size(); ++l)
            if (!F.is_zero(out.terms[l].w[k])) return {false, "slice not pinned exclusively"};
    }

    for (int i = 0; i < 200; ++i) {
        auto [d1, d2, d3] = dims();
        std::size_t k1 = rng() % d3;
        std::size_t k2 = (k1 + 1 + rng() % (d3 - 1)) % d3;
        std::vector<std::size_t> H{k1, k2};
        AbsorbFixture fx = make_absorb_fixture(F, rng, H, rng() % 4, d1, d2, d3);
        Expansion out = absorb_slices(fx.T, fx.E, H, F);
        if (out.terms.size() != fx.E.terms.size()) return {false, "double pin changed length"};
        if (!verify_expansion(fx.T, out, F)) return {false, "double pin output does not verify"};
        for (std::size_t a = 0; a < H.size(); ++a) {
            if (F.is_zero(out.terms[a].w[H[a]]))
                return {false, "pinned term does not carry its slice"};
            for (std::size_t l = 0; l < out.terms.size(); ++l)
                if (l != a && !F.is_zero(out.terms[l].w[H[a]]))
                    return {false, "slice not pinned exclusively"};
        }
    }

    double t = timer.seconds();
    if (t > kLimitAbsorption)
        return {false, "took " + fmt_s(t) + ", limit " + fmt_s(kLimitAbsorption)};
    return {true, "500 single and 200 double absorptions, " + fmt_s(t)};
}

// ------------------------------------------------------------------
// 7: every 2x2x2 tensor over GF(2), every r in 0..4: the search agrees
// with a dumb enumerator and with an independent rank table.

Outcome criterion7() {
    Timer timer;
    Field F{FieldSpec::gf(2)};
    std::array<int, 256> table = testutil::gf2_rank_table();

    for (int b = 0; b < 256; ++b) {
        Tensor T = testutil::tensor_of_byte(b, F);
        for (std::size_t r = 0; r <= 4; ++r) {
            bool lib = tensor_rank_leq(T, r, F).feasible;
            bool dumb = testutil::dumb_rank_leq(T, r, F);
            bool expected = table[b] <= static_cast<int>(r);
            if (lib != dumb || lib != expected)
                return {false, "disagreement at tensor " + std::to_string(b) + ", r = " +
                                   std::to_string(r)};
        }
    }

    double t = timer.seconds();
    if (t > kLimitExhaustive)
        return {false, "took " + fmt_s(t) + ", limit " + fmt_s(kLimitExhaustive)};
    return {true, "256 tensors x 5 bounds, " + fmt_s(t)};
}

// ------------------------------------------------------------------
// 8: realization spaces are nonempty, contain the constructing point, and
// have the predicted dimension; the worked-example family over GF(7)
// recovers -sigma(x) at the constants coordinate.

Outcome criterion8() {
    Timer timer;
    Field F{FieldSpec::gf(3)};
    std::mt19937_64 rng(808182);

    auto nonzero_vec = [&](std::size_t n, const Field& G) {
        std::vector<FieldElem> v;
        do {
            v = testutil::rand_vector(n, G, rng);
        } while (std::all_of(v.begin(), v.end(), [&](const FieldElem& e) { return G.is_zero(e); }));
        return v;
    };

    for (int trial = 0; trial < 100; ++trial) {
        std::size_t d1 = 2 + rng() % 3, d2 = 2 + rng() % 3, d3 = 2 + rng() % 3;
        std::size_t r = 1 + rng() % 4;

        std::vector<ConcreteMatrix> S;
        std::vector<std::vector<FieldElem>> w;
        Tensor T(d1, d2, d3, F);
        for (std::size_t l = 0; l < r; ++l) {
            std::vector<FieldElem> u = nonzero_vec(d1, F), v = nonzero_vec(d2, F);
            ConcreteMatrix R(d1, d2, F);
            for (std::size_t i = 0; i < d1; ++i)
                for (std::size_t j = 0; j < d2; ++j) R.at(i, j) = F.mul(u[i], v[j]);
            std::vector<FieldElem> wl = testutil::rand_vector(d3, F, rng);
            for (std::size_t i = 0; i < d1; ++i)
                for (std::size_t j = 0; j < d2; ++j)
                    for (std::size_t k = 0; k < d3; ++k)
                        T.at(i, j, k) = F.add(T.at(i, j, k), F.mul(R.at(i, j), wl[k]));
            S.push_back(std::move(R));
            w.push_back(std::move(wl));
        }

        AffineSolutionSpace sol = realization_space(T, S, r, F);
        if (sol.empty) return {false, "realization space empty on a constructed instance"};

        // Constructing point membership: residual against the particular
        // point must lie in the basis span.
        std::vector<FieldElem> z;
        for (const auto& wl : w)
            for (const FieldElem& e : wl) z.push_back(e);
        bool contained;
        if (sol.basis.empty()) {
            contained = true;
            for (std::size_t i = 0; i < sol.ambient; ++i)
                contained = contained && F.eq(z[i], sol.particular[i]);
        } else {
            ConcreteMatrix span(sol.ambient, sol.basis.size() + 1, F);
            ConcreteMatrix span_only(sol.ambient, sol.basis.size(), F);
            for (std::size_t c = 0; c < sol.basis.size(); ++c)
                for (std::size_t i = 0; i < sol.ambient; ++i) {
                    span.at(i, c) = sol.basis[c][i];
                    span_only.at(i, c) = sol.basis[c][i];
                }
            for (std::size_t i = 0; i < sol.ambient; ++i)
                span.at(i, sol.basis.size()) = F.sub(z[i], sol.particular[i]);
            contained = matrix_rank(span, F) == matrix_rank(span_only, F);
        }
        if (!contained) return {false, "constructing point is outside the realization space"};

        // Dimension = unknowns minus the rank of the assembled linear system.
        ConcreteMatrix coeff(d1 * d2 * d3, r * d3, F);
        for (std::size_t l = 0; l < r; ++l)
            for (std::size_t i = 0; i < d1; ++i)
                for (std::size_t j = 0; j < d2; ++j)
                    for (std::size_t k = 0; k < d3; ++k)
                        coeff.at((i * d2 + j) * d3 + k, l * d3 + k) = S[l].at(i, j);
        if (sol.basis.size() != r * d3 - matrix_rank(coeff, F))
            return {false, "basis dimension does not match unknowns minus system rank"};
    }

    // Worked-example family over GF(7): slices of the verified expansion,
    // solved back for w, must reproduce -sigma(x) at the constants slot.
    Field F7{FieldSpec::gf(7)};
    SymbolicMatrix M = build_matrix(separation_system());
    TensorBundle B = build_tensor(M, F7);
    std::vector<FieldElem> sigma =
        with_copies(M, {F7.from_int(2), F7.from_int(3), F7.from_int(3)});
    Expansion E = expansion_from_assignment(B, sigma, F7);
    AffineSolutionSpace sol = realization_space(B.tensor, matrix_parts(E, F7), 15, F7);
    if (sol.empty) return {false, "worked-example realization space is empty"};
    if (!sol.basis.empty()) return {false, "worked-example realization space is not a point"};
    std::size_t d3 = B.tensor.d3;
    for (std::size_t l = 0; l < 9; ++l)
        if (!F7.eq(sol.particular[l * d3 + (d3 - 1)], F7.neg(sigma[l])))
            return {false, "recovered w does not reproduce -sigma at the constants slot"};

    double t = timer.seconds();
    if (t > kLimitRealization)
        return {false, "took " + fmt_s(t) + ", limit " + fmt_s(kLimitRealization)};
    return {true, "100 random families and the worked-example family, " + fmt_s(t)};
}

// ------------------------------------------------------------------
// 9: on random homogeneous quadratic families, the zero-eigenvector search
// agrees with direct brute-force solvability.

Outcome criterion9() {
    Timer timer;
    std::mt19937_64 rng(909192);

    for (std::uint32_t p : {3u, 5u}) {
        Field F{FieldSpec::gf(p)};
        for (int trial = 0; trial < 100; ++trial) {
            std::size_t n = 1 + rng() % 4;
            std::size_t nforms = 1 + rng() % n;
            std::vector<ConcreteMatrix> forms;
            for (std::size_t f = 0; f < nforms; ++f) {
                ConcreteMatrix Q(n, n, F);
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = i; j < n; ++j) Q.at(i, j) = testutil::rand_elem(F, rng);
                forms.push_back(std::move(Q));
            }

            std::uint64_t total = 1;
            for (std::size_t i = 0; i < n; ++i) total *= p;
            bool direct = false;
            for (std::uint64_t code = 1; code < total && !direct; ++code) {
                std::uint64_t c = code;
                std::vector<FieldElem> x;
                for (std::size_t i = 0; i < n; ++i) {
                    x.push_back(F.from_int(static_cast<long>(c % p)));
                    c /= p;
                }
                bool all_zero = true;
                for (const ConcreteMatrix& Q : forms) {
                    FieldElem acc = F.zero();
                    for (std::size_t i = 0; i < n; ++i)
                        for (std::size_t j = i; j < n; ++j)
                            acc = F.add(acc, F.mul(Q.at(i, j), F.mul(x[i], x[j])));
                    if (!F.is_zero(acc)) {
                        all_zero = false;
                        break;
                    }
                }
                direct = all_zero;
            }

            Tensor T = tensor_from_homogeneous(forms, F);
            Eig0Result r = eig0(T, F);
            if (r.exists != direct)
                return {false, "eig0 disagrees with brute force over gf" + std::to_string(p)};
        }
    }

    double t = timer.seconds();
    if (t > kLimitEigenvalue)
        return {false, "took " + fmt_s(t) + ", limit " + fmt_s(kLimitEigenvalue)};
    return {true, "100 families over each of gf3 and gf5, " + fmt_s(t)};
}

// ------------------------------------------------------------------
// 10: slice independence holds for every matrix built in criteria 1-3.

Outcome criterion10() {
    Timer timer;
    if (g_suite_matrices.empty()) return {false, "criterion 3 produced no matrices"};
    std::size_t checked = 0;

    SymbolicMatrix M = build_matrix(separation_system());
    for (std::uint32_t p : {5u, 7u}) {
        Field F{FieldSpec::gf(p)};
        check_slice_independence(build_tensor(M, F), F);
        ++checked;
    }
    Field FQ{FieldSpec::qsqrt(2)};
    check_slice_independence(build_tensor(M, FQ), FQ);
    ++checked;

    for (const SymbolicMatrix& S : g_suite_matrices) {
        for (std::uint32_t p : {2u, 3u}) {
            Field F{FieldSpec::gf(p)};
            check_slice_independence(build_tensor(S, F), F);
            ++checked;
        }
    }
    return {true, std::to_string(checked) + " bundles checked, " + fmt_s(timer.seconds())};
}

}  // namespace

int main() {
    run(1, criterion1);
    run(2, criterion2);
    run(3, criterion3);
    run(4, criterion4);
    run(5, criterion5);
    run(6, criterion6);
    run(7, criterion7);
    run(8, criterion8);
    run(9, criterion9);
    run(10, criterion10);
    if (g_failures > 0) {
        std::cout << g_failures << " criterion(s) failed" << std::endl;
        return 1;
    }
    std::cout << "all criteria passed" << std::endl;
    return 0;
}
