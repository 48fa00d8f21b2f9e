#include "rankc/minrank.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <mutex>
#include <set>
#include <thread>

namespace rankc {

AffineExpr AffineExpr::constant(mpz_class k) {
    AffineExpr e;
    e.c = std::move(k);
    return e;
}

AffineExpr AffineExpr::var(const std::string& name) {
    AffineExpr e;
    e.terms.emplace(name, mpz_class(1));
    return e;
}

AffineExpr AffineExpr::plus(const AffineExpr& o) const {
    AffineExpr r = *this;
    r.c += o.c;
    for (const auto& [v, k] : o.terms) {
        auto it = r.terms.find(v);
        if (it == r.terms.end()) {
            r.terms.emplace(v, k);
        } else {
            it->second += k;
            if (sgn(it->second) == 0) r.terms.erase(it);
        }
    }
    return r;
}

AffineExpr AffineExpr::minus(const AffineExpr& o) const {
    AffineExpr n;
    n.c = -o.c;
    for (const auto& [v, k] : o.terms) n.terms.emplace(v, mpz_class(-k));
    return plus(n);
}

FieldElem eval_affine(const AffineExpr& e, const std::map<std::string, FieldElem>& sigma,
                      const Field& F) {
    FieldElem acc = F.from_mpz(e.c);
    for (const auto& [v, k] : e.terms) {
        auto it = sigma.find(v);
        if (it == sigma.end()) throw InputError("assignment lacks variable '" + v + "'");
        acc = F.add(acc, F.mul(F.from_mpz(k), it->second));
    }
    return acc;
}

// ---------------------------------------------------------------------------
// construction

std::array<AffineExpr, 9> build_block(const QuadEquation& e) {
    auto k = [](long v) { return AffineExpr::constant(mpz_class(v)); };
    auto v = [](const std::string& name) { return AffineExpr::var(name); };
    switch (e.kind) {
        case EqKind::Add:
            return {k(1), k(0), v(e.a), k(0), k(1), v(e.b), k(1), k(1), v(e.c)};
        case EqKind::Copy:
            return {k(1), k(0), v(e.a), k(0), k(1), k(0), k(1), k(1), v(e.c)};
        case EqKind::Const:
            return {k(1), k(0), AffineExpr::constant(e.k), k(0), k(1), k(0), k(1), k(1), v(e.c)};
        case EqKind::Mul:
            return {k(1), k(0), v(e.c), k(0), k(1), v(e.a), k(-1), v(e.b), k(0)};
    }
    throw InternalError("unknown equation kind");
}

namespace {

// Occurrence cells of an equation's variables inside its own block, listed
// in row order: (row, col, variable).
std::vector<std::tuple<std::size_t, std::size_t, std::string>> block_occurrences(
    const QuadEquation& e) {
    switch (e.kind) {
        case EqKind::Add: return {{0, 2, e.a}, {1, 2, e.b}, {2, 2, e.c}};
        case EqKind::Copy: return {{0, 2, e.a}, {2, 2, e.c}};
        case EqKind::Const: return {{2, 2, e.c}};
        case EqKind::Mul: return {{0, 2, e.c}, {1, 2, e.a}, {2, 1, e.b}};
    }
    throw InternalError("unknown equation kind");
}

std::string copy_name(const std::string& base, std::size_t j) {
    return base + "@" + std::to_string(j);
}

}  // namespace

std::vector<std::string> SymbolicMatrix::all_vars() const {
    std::vector<std::string> vs = system.variables;
    vs.insert(vs.end(), copy_vars.begin(), copy_vars.end());
    return vs;
}

SymbolicMatrix build_matrix(const QuadraticSystem& s) {
    validate_system(s);
    for (const auto& v : s.variables)
        if (v.find('@') != std::string::npos)
            throw InputError("variable '" + v + "' uses '@', reserved for matrix copies");
    for (std::size_t i = 0; i < s.equations.size(); ++i) {
        auto vs = equation_vars(s.equations[i]);
        if (std::set<std::string>(vs.begin(), vs.end()).size() != vs.size())
            throw InputError("equation #" + std::to_string(i + 1) +
                             " repeats a variable; normalize the system first");
    }

    SymbolicMatrix M;
    M.system = s;
    std::size_t dim = 3 * s.equations.size();
    M.entries.assign(dim * dim, AffineExpr{});

    for (std::size_t i = 0; i < s.equations.size(); ++i) {
        auto block = build_block(s.equations[i]);
        for (std::size_t r = 0; r < 3; ++r)
            for (std::size_t c = 0; c < 3; ++c) M.at(3 * i + r, 3 * i + c) = block[3 * r + c];
        for (const auto& [r, c, v] : block_occurrences(s.equations[i]))
            M.occurrences[v].push_back({3 * i + r, 3 * i + c});
    }

    for (const auto& v : s.variables) {
        auto it = M.occurrences.find(v);
        if (it == M.occurrences.end() || it->second.size() < 2) continue;
        const auto& occ = it->second;
        for (std::size_t j = 0; j < occ.size(); ++j) {
            std::string cj = copy_name(v, j + 1);
            M.copy_vars.push_back(cj);
            for (std::size_t k = 0; k < occ.size(); ++k) {
                if (k == j) continue;
                M.at(occ[j].row, occ[k].col) =
                    AffineExpr::var(v).minus(AffineExpr::var(cj));
            }
        }
    }
    return M;
}

// ---------------------------------------------------------------------------
// observation checks

namespace {

Polynomial affine_to_poly(const AffineExpr& e) {
    Polynomial p = Polynomial::constant(e.c);
    for (const auto& [v, k] : e.terms)
        p = p.add(Polynomial::constant(k).mul(Polynomial::variable(v)));
    return p;
}

Polynomial defect_poly(const QuadEquation& e) {
    Polynomial c = Polynomial::variable(e.c);
    switch (e.kind) {
        case EqKind::Add:
            return c.sub(Polynomial::variable(e.a)).sub(Polynomial::variable(e.b));
        case EqKind::Mul:
            return c.sub(Polynomial::variable(e.a).mul(Polynomial::variable(e.b)));
        case EqKind::Copy:
            return c.sub(Polynomial::variable(e.a));
        case EqKind::Const:
            return c.sub(Polynomial::constant(e.k));
    }
    throw InternalError("unknown equation kind");
}

// Collapse u@j -> u.
AffineExpr collapse_copies(const AffineExpr& e) {
    AffineExpr r = AffineExpr::constant(e.c);
    for (const auto& [v, k] : e.terms) {
        auto pos = v.rfind('@');
        std::string base = pos == std::string::npos ? v : v.substr(0, pos);
        AffineExpr t;
        t.terms.emplace(base, k);
        r = r.plus(t);
    }
    return r;
}

}  // namespace

void verify_observation(const SymbolicMatrix& M) {
    const std::size_t m = M.m(), dim = M.dim();
    if (M.entries.size() != dim * dim) throw InternalError("matrix shape mismatch");

    // Part 1: copy collapse leaves the block diagonal only, with the
    // equation templates on it.
    for (std::size_t i = 0; i < m; ++i) {
        auto block = build_block(M.system.equations[i]);
        for (std::size_t r = 0; r < dim; ++r) {
            for (std::size_t c = 0; c < dim; ++c) {
                if (r / 3 == i && c / 3 == i) {
                    if (!(M.at(r, c) == block[3 * (r % 3) + (c % 3)]))
                        throw InternalError("diagonal block deviates from its template");
                } else if (r / 3 == i && !collapse_copies(M.at(r, c)).is_zero()) {
                    throw InternalError("off-diagonal entry survives copy collapse");
                }
            }
        }
    }

    // Part 2: block determinant = defect of the equation.
    for (std::size_t i = 0; i < m; ++i) {
        auto block = build_block(M.system.equations[i]);
        auto p = [&](std::size_t r, std::size_t c) { return affine_to_poly(block[3 * r + c]); };
        Polynomial det = p(0, 0).mul(p(1, 1).mul(p(2, 2)).sub(p(1, 2).mul(p(2, 1))))
                             .sub(p(0, 1).mul(p(1, 0).mul(p(2, 2)).sub(p(1, 2).mul(p(2, 0)))))
                             .add(p(0, 2).mul(p(1, 0).mul(p(2, 1)).sub(p(1, 1).mul(p(2, 0)))));
        if (!(det.terms == defect_poly(M.system.equations[i]).terms))
            throw InternalError("block determinant is not the equation defect");
    }

    // Part 3: rows/cols 3i, 3i+1 hold an identity pattern, giving every
    // evaluation a 2m x 2m identity submatrix and hence rank >= 2m.
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t r = 0; r < 2; ++r)
                for (std::size_t c = 0; c < 2; ++c) {
                    long want = (i == j && r == c) ? 1 : 0;
                    if (!(M.at(3 * i + r, 3 * j + c) == AffineExpr::constant(want)))
                        throw InternalError("identity submatrix structure violated");
                }

    // Part 4: off-diagonal entries are exactly u - u@j at (R_u[j], C_u[k]).
    std::map<std::pair<std::size_t, std::size_t>, AffineExpr> expected;
    for (const auto& [v, occ] : M.occurrences) {
        if (occ.size() < 2) continue;
        for (std::size_t j = 0; j < occ.size(); ++j)
            for (std::size_t k = 0; k < occ.size(); ++k) {
                if (k == j) continue;
                expected[{occ[j].row, occ[k].col}] =
                    AffineExpr::var(v).minus(AffineExpr::var(copy_name(v, j + 1)));
            }
    }
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) {
            if (r / 3 == c / 3) continue;
            auto it = expected.find({r, c});
            const AffineExpr want = it == expected.end() ? AffineExpr{} : it->second;
            if (!(M.at(r, c) == want))
                throw InternalError("off-diagonal entry deviates from occurrence layout");
        }
}

ConcreteMatrix evaluate_matrix(const SymbolicMatrix& M, const std::vector<FieldElem>& sigma,
                               const Field& F) {
    auto vars = M.all_vars();
    if (sigma.size() != vars.size())
        throw InputError("assignment length does not match matrix variable count");
    std::map<std::string, FieldElem> env;
    for (std::size_t i = 0; i < vars.size(); ++i) env.emplace(vars[i], sigma[i]);
    ConcreteMatrix out(M.dim(), M.dim(), F);
    for (std::size_t r = 0; r < M.dim(); ++r)
        for (std::size_t c = 0; c < M.dim(); ++c) out.at(r, c) = eval_affine(M.at(r, c), env, F);
    return out;
}

// ---------------------------------------------------------------------------
// exhaustive minrank

namespace {

// Residue-level form of the symbolic matrix for tight enumeration loops.
struct CompiledMatrix {
    std::size_t dim = 0;
    struct Term {
        std::uint32_t var;
        std::uint64_t coeff;
    };
    std::vector<std::uint64_t> base;
    std::vector<std::vector<Term>> terms;

    void evaluate(const std::vector<std::uint64_t>& vals, std::vector<std::uint64_t>& out,
                  const Field& F) const {
        out = base;
        for (std::size_t cell = 0; cell < terms.size(); ++cell)
            for (const auto& t : terms[cell])
                out[cell] = F.mod_add(out[cell], F.mod_mul(t.coeff, vals[t.var]));
    }
};

CompiledMatrix compile_matrix(const SymbolicMatrix& M, const Field& F) {
    auto vars = M.all_vars();
    std::map<std::string, std::uint32_t> idx;
    for (std::size_t i = 0; i < vars.size(); ++i) idx[vars[i]] = static_cast<std::uint32_t>(i);
    CompiledMatrix cm;
    cm.dim = M.dim();
    cm.base.resize(cm.dim * cm.dim);
    cm.terms.resize(cm.dim * cm.dim);
    for (std::size_t cell = 0; cell < M.entries.size(); ++cell) {
        const AffineExpr& e = M.entries[cell];
        cm.base[cell] = std::get<0>(F.from_mpz(e.c));
        for (const auto& [v, k] : e.terms) {
            std::uint64_t coeff = std::get<0>(F.from_mpz(k));
            if (coeff) cm.terms[cell].push_back({idx.at(v), coeff});
        }
    }
    return cm;
}

std::size_t rank_mod(std::vector<std::uint64_t>& m, std::size_t dim, const Field& F) {
    std::size_t rank = 0;
    for (std::size_t col = 0; col < dim && rank < dim; ++col) {
        std::size_t piv = rank;
        while (piv < dim && m[piv * dim + col] == 0) ++piv;
        if (piv == dim) continue;
        if (piv != rank)
            for (std::size_t j = col; j < dim; ++j) std::swap(m[rank * dim + j], m[piv * dim + j]);
        std::uint64_t inv = F.mod_inv(m[rank * dim + col]);
        for (std::size_t i = rank + 1; i < dim; ++i) {
            std::uint64_t f = F.mod_mul(m[i * dim + col], inv);
            if (f == 0) continue;
            for (std::size_t j = col; j < dim; ++j)
                m[i * dim + j] = F.mod_sub(m[i * dim + j], F.mod_mul(f, m[rank * dim + j]));
        }
        ++rank;
    }
    return rank;
}

// Is the part-3 identity structure present? When it is, 2m is a sound floor
// for early termination even on hand-loaded matrices.
bool has_identity_structure(const SymbolicMatrix& M) {
    for (std::size_t i = 0; i < M.m(); ++i)
        for (std::size_t j = 0; j < M.m(); ++j)
            for (std::size_t r = 0; r < 2; ++r)
                for (std::size_t c = 0; c < 2; ++c) {
                    long want = (i == j && r == c) ? 1 : 0;
                    if (!(M.at(3 * i + r, 3 * j + c) == AffineExpr::constant(want))) return false;
                }
    return true;
}

std::uint64_t checked_pow(std::uint64_t p, std::size_t n, std::uint64_t budget,
                          const std::string& what) {
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (total > budget / p)
            throw BudgetError(what + " space " + std::to_string(p) + "^" + std::to_string(n) +
                              " exceeds budget " + std::to_string(budget));
        total *= p;
    }
    if (total > budget)
        throw BudgetError(what + " space exceeds budget " + std::to_string(budget));
    return total;
}

}  // namespace

MinrankResult minrank_bruteforce(const SymbolicMatrix& M, const Field& F, std::uint64_t budget,
                                 unsigned workers) {
    if (F.kind() != FieldKind::GFp)
        throw UsageError("exhaustive minrank requires a finite field, got " + F.spec().name());
    const std::size_t n = M.all_vars().size();
    const std::uint64_t p = F.p();
    checked_pow(p, n, budget, "assignment");

    const std::size_t floor = has_identity_structure(M) ? 2 * M.m() : 0;
    const CompiledMatrix cm = compile_matrix(M, F);

    MinrankResult res;
    if (n == 0) {
        std::vector<std::uint64_t> vals, buf;
        cm.evaluate(vals, buf, F);
        res.minrank = rank_mod(buf, cm.dim, F);
        res.tried = 1;
        return res;
    }

    struct Best {
        std::size_t rank;
        std::vector<std::uint64_t> vals;
        std::uint64_t tried = 0;
    };
    const unsigned W = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(p)));

    auto sweep = [&](unsigned w) {
        Best best{cm.dim + 1, {}, 0};
        std::vector<std::uint64_t> vals(n, 0), buf;
        for (std::uint64_t lead = w; lead < p && best.rank > floor; lead += W) {
            vals[0] = lead;
            std::fill(vals.begin() + 1, vals.end(), 0);
            for (;;) {
                cm.evaluate(vals, buf, F);
                ++best.tried;
                std::size_t r = rank_mod(buf, cm.dim, F);
                if (r < best.rank) {
                    best.rank = r;
                    best.vals = vals;
                    if (r == floor) break;
                }
                std::size_t j = n;
                while (j > 1) {
                    if (++vals[j - 1] < p) break;
                    vals[j - 1] = 0;
                    --j;
                }
                if (j == 1) break;
            }
        }
        return best;
    };

    std::vector<Best> bests;
    if (W == 1) {
        bests.push_back(sweep(0));
    } else {
        bests.resize(W, Best{cm.dim + 1, {}, 0});
        std::vector<std::thread> threads;
        threads.reserve(W);
        for (unsigned w = 0; w < W; ++w)
            threads.emplace_back([&, w] { bests[w] = sweep(w); });
        for (auto& t : threads) t.join();
    }

    Best merged{cm.dim + 1, {}, 0};
    for (const auto& b : bests) {
        merged.tried += b.tried;
        if (b.rank < merged.rank || (b.rank == merged.rank && !b.vals.empty() &&
                                     (merged.vals.empty() || b.vals < merged.vals)))
            merged = Best{b.rank, b.vals, merged.tried};
    }
    res.minrank = merged.rank;
    res.tried = merged.tried;
    res.witness.reserve(n);
    for (std::uint64_t v : merged.vals) res.witness.push_back(FieldElem(std::in_place_index<0>, v));
    return res;
}

WitnessSearchResult minrank_witness_search(const SymbolicMatrix& M, const Field& F,
                                           std::uint64_t budget) {
    SolveResult sol = solve_bruteforce(M.system, F, budget);
    WitnessSearchResult out;
    out.tried = sol.tried;
    if (!sol.found) return out;
    out.found = true;

    std::map<std::string, FieldElem> env;
    for (std::size_t i = 0; i < M.system.variables.size(); ++i)
        env.emplace(M.system.variables[i], sol.witness[i]);
    out.witness = sol.witness;
    for (const auto& cv : M.copy_vars) {
        std::string base = cv.substr(0, cv.rfind('@'));
        out.witness.push_back(env.at(base));
    }
    out.rank = matrix_rank(evaluate_matrix(M, out.witness, F), F);
    if (out.rank != 2 * M.m())
        throw InternalError("solution extension did not evaluate to rank 2m");
    return out;
}

}  // namespace rankc
