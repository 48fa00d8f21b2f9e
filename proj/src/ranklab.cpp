#include "rankc/ranklab.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <utility>

#include "rankc/common.hpp"

namespace rankc {

namespace {

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b, std::uint64_t cap) {
    if (a == 0 || b == 0) return 0;
    if (a > cap / b) return cap + 1;
    return a * b;
}

// 1 + p + ... + p^(d-1): canonical vectors (first nonzero coordinate one).
std::uint64_t count_canonical(std::size_t d, std::uint64_t p, std::uint64_t cap) {
    std::uint64_t total = 0, pw = 1;
    for (std::size_t i = 0; i < d; ++i) {
        if (total > cap - std::min(cap, pw)) return cap + 1;
        total += pw;
        if (total > cap) return cap + 1;
        pw = sat_mul(pw, p, cap);
        if (pw > cap && i + 1 < d) return cap + 1;
    }
    return total;
}

std::uint64_t count_nonzero(std::size_t d, std::uint64_t p, std::uint64_t cap) {
    std::uint64_t pw = 1;
    for (std::size_t i = 0; i < d; ++i) {
        pw = sat_mul(pw, p, cap);
        if (pw > cap) return cap + 1;
    }
    return pw - 1;
}

// Lexicographically ascending vectors in [0,p)^d with first nonzero one,
// flattened row-major.
std::vector<std::uint64_t> canonical_table(std::size_t d, std::uint64_t p) {
    std::vector<std::uint64_t> tab;
    std::vector<std::uint64_t> x(d, 0);
    for (std::size_t lead = d; lead-- > 0;) {
        std::fill(x.begin(), x.end(), 0);
        x[lead] = 1;
        for (;;) {
            tab.insert(tab.end(), x.begin(), x.end());
            std::size_t j = d;
            while (j > lead + 1) {
                if (++x[j - 1] < p) break;
                x[j - 1] = 0;
                --j;
            }
            if (j == lead + 1) break;
        }
    }
    return tab;
}

std::vector<std::uint64_t> nonzero_table(std::size_t d, std::uint64_t p) {
    std::vector<std::uint64_t> tab;
    std::vector<std::uint64_t> x(d, 0);
    for (;;) {
        std::size_t j = d;
        while (j > 0) {
            if (++x[j - 1] < p) break;
            x[j - 1] = 0;
            --j;
        }
        if (j == 0) break;
        tab.insert(tab.end(), x.begin(), x.end());
    }
    return tab;
}

// Rank of an nr x nc residue matrix, destroying `rows`.
std::size_t residue_rank(std::vector<std::uint64_t>& rows, std::size_t nr, std::size_t nc,
                         const Field& F) {
    std::size_t rank = 0;
    for (std::size_t col = 0; col < nc && rank < nr; ++col) {
        std::size_t piv = nr;
        for (std::size_t r = rank; r < nr; ++r)
            if (rows[r * nc + col] != 0) {
                piv = r;
                break;
            }
        if (piv == nr) continue;
        if (piv != rank)
            for (std::size_t c = col; c < nc; ++c)
                std::swap(rows[piv * nc + c], rows[rank * nc + c]);
        std::uint64_t inv = F.mod_inv(rows[rank * nc + col]);
        for (std::size_t r = rank + 1; r < nr; ++r) {
            std::uint64_t f = rows[r * nc + col];
            if (f == 0) continue;
            std::uint64_t factor = F.mod_mul(f, inv);
            for (std::size_t c = col; c < nc; ++c)
                rows[r * nc + c] =
                    F.mod_sub(rows[r * nc + c], F.mod_mul(factor, rows[rank * nc + c]));
        }
        ++rank;
    }
    return rank;
}

struct SearchShared {
    std::atomic<std::size_t> next_root{0};
    std::atomic<std::size_t> best_root{std::numeric_limits<std::size_t>::max()};
    std::atomic<std::uint64_t> nodes{0};
    std::atomic<bool> abort{false};
    std::mutex mu;
    std::vector<std::size_t> best_path;
    std::exception_ptr error;
};

struct RankSearch {
    std::size_t d1, d2, d3;
    const Field& F;
    std::vector<std::uint64_t> U, V, W;
    std::size_t nu, nv, nw, total;
    std::vector<std::uint64_t> res0;
    std::size_t r;
    std::uint64_t budget;
    SearchShared* shared;

    void count_node() const {
        std::uint64_t n = shared->nodes.fetch_add(1, std::memory_order_relaxed) + 1;
        if (n > budget) {
            shared->abort.store(true, std::memory_order_relaxed);
            throw BudgetError("rank search exceeded the node budget");
        }
    }

    void apply(std::vector<std::uint64_t>& res, std::size_t t, bool subtract) const {
        const std::uint64_t* u = &U[(t / (nv * nw)) * d1];
        const std::uint64_t* v = &V[((t / nw) % nv) * d2];
        const std::uint64_t* w = &W[(t % nw) * d3];
        for (std::size_t i = 0; i < d1; ++i) {
            if (u[i] == 0) continue;
            for (std::size_t j = 0; j < d2; ++j) {
                if (v[j] == 0) continue;
                std::uint64_t uv = F.mod_mul(u[i], v[j]);
                for (std::size_t k = 0; k < d3; ++k) {
                    if (w[k] == 0) continue;
                    std::uint64_t& cell = res[(i * d2 + j) * d3 + k];
                    std::uint64_t val = F.mod_mul(uv, w[k]);
                    cell = subtract ? F.mod_sub(cell, val) : F.mod_add(cell, val);
                }
            }
        }
    }

    // A rank-one term lowers each mode unfolding's rank by at most one, so a
    // residual with some unfolding rank above `remaining` is unreachable.
    bool prune(const std::vector<std::uint64_t>& res, std::size_t remaining) const {
        if (remaining >= std::max({d1, d2, d3})) return false;
        if (d1 > remaining) {
            std::vector<std::uint64_t> m = res;  // mode 1 shares the layout
            if (residue_rank(m, d1, d2 * d3, F) > remaining) return true;
        }
        if (d2 > remaining) {
            std::vector<std::uint64_t> m(d2 * d1 * d3);
            for (std::size_t i = 0; i < d1; ++i)
                for (std::size_t j = 0; j < d2; ++j)
                    for (std::size_t k = 0; k < d3; ++k)
                        m[j * (d1 * d3) + i * d3 + k] = res[(i * d2 + j) * d3 + k];
            if (residue_rank(m, d2, d1 * d3, F) > remaining) return true;
        }
        if (d3 > remaining) {
            std::vector<std::uint64_t> m(d3 * d1 * d2);
            for (std::size_t i = 0; i < d1; ++i)
                for (std::size_t j = 0; j < d2; ++j)
                    for (std::size_t k = 0; k < d3; ++k)
                        m[k * (d1 * d2) + i * d2 + j] = res[(i * d2 + j) * d3 + k];
            if (residue_rank(m, d3, d1 * d2, F) > remaining) return true;
        }
        return false;
    }

    bool dfs(std::vector<std::uint64_t>& res, std::size_t next, std::size_t remaining,
             std::size_t my_root, std::vector<std::size_t>& path) const {
        if (shared->abort.load(std::memory_order_relaxed)) return false;
        if (std::all_of(res.begin(), res.end(), [](std::uint64_t x) { return x == 0; }))
            return true;
        if (remaining == 0) return false;
        if (shared->best_root.load(std::memory_order_relaxed) < my_root) return false;
        if (prune(res, remaining)) return false;
        for (std::size_t t = next; t < total; ++t) {
            count_node();
            apply(res, t, true);
            path.push_back(t);
            if (dfs(res, t + 1, remaining - 1, my_root, path)) return true;
            path.pop_back();
            apply(res, t, false);
        }
        return false;
    }

    void run_worker() const {
        std::vector<std::size_t> path;
        try {
            for (;;) {
                std::size_t root = shared->next_root.fetch_add(1);
                if (root >= total) break;
                if (root >= shared->best_root.load()) break;
                if (shared->abort.load(std::memory_order_relaxed)) break;
                count_node();
                std::vector<std::uint64_t> res = res0;
                apply(res, root, true);
                path.assign(1, root);
                if (dfs(res, root + 1, r - 1, root, path)) {
                    std::lock_guard<std::mutex> g(shared->mu);
                    if (root < shared->best_root.load()) {
                        shared->best_root.store(root);
                        shared->best_path = path;
                    }
                    break;
                }
            }
        } catch (...) {
            std::lock_guard<std::mutex> g(shared->mu);
            if (!shared->error) shared->error = std::current_exception();
            shared->abort.store(true);
        }
    }
};

// Shared body of absorb_slice and absorb_slices: the first `pinned` terms
// belong to earlier steps and may only have their w vectors adjusted.
Expansion absorb_step(const Tensor& T, const Expansion& E, std::size_t k, std::size_t pinned,
                      const Field& F) {
    if (k >= T.d3) throw InputError("slice index out of range");
    if (!verify_expansion(T, E, F)) throw InputError("expansion does not sum to the tensor");

    ConcreteMatrix M = slice(T, k, F);
    auto factor = rank_one_factor(M, F);  // InputError when rank(M) >= 2
    if (!factor) return E;                // zero slice, nothing to pin

    std::size_t pivot = E.terms.size();
    for (std::size_t i = pinned; i < E.terms.size(); ++i)
        if (!F.is_zero(E.terms[i].w[k])) {
            pivot = i;
            break;
        }
    if (pivot == E.terms.size())
        throw InputError("the slice is carried only by already pinned terms");

    // w' is the pivot's w scaled to coordinate one at k. Replacing the
    // pivot's matrix part by M (x) w' and subtracting w_i[k] * w' from every
    // other term keeps the sum: the slice identity M = sum_i w_i[k] u_i v_i
    // makes the corrections telescope back to the pivot's term.
    FieldElem ilam = F.inv(E.terms[pivot].w[k]);
    std::vector<FieldElem> wp(T.d3);
    for (std::size_t c = 0; c < T.d3; ++c) wp[c] = F.mul(E.terms[pivot].w[c], ilam);

    Expansion out;
    out.terms.reserve(E.terms.size());
    for (std::size_t i = 0; i < pinned; ++i) out.terms.push_back(E.terms[i]);
    out.terms.push_back({factor->first, factor->second, wp});
    for (std::size_t i = pinned; i < E.terms.size(); ++i) {
        if (i == pivot) continue;
        out.terms.push_back(E.terms[i]);
    }
    for (std::size_t i = 0; i < out.terms.size(); ++i) {
        if (i == pinned) continue;
        RankOneTerm& t = out.terms[i];
        if (F.is_zero(t.w[k])) continue;
        FieldElem c = t.w[k];
        for (std::size_t x = 0; x < T.d3; ++x) t.w[x] = F.sub(t.w[x], F.mul(c, wp[x]));
    }

    if (out.terms.size() != E.terms.size())
        throw InternalError("absorption changed the expansion length");
    if (!verify_expansion(T, out, F))
        throw InternalError("absorption changed the represented tensor");
    return out;
}

}  // namespace

RankSearchResult tensor_rank_leq(const Tensor& T, std::size_t r, const Field& F,
                                 std::uint64_t node_budget, unsigned workers) {
    if (F.kind() != FieldKind::GFp)
        throw UsageError("tensor rank search requires a finite field");

    RankSearch s{T.d1, T.d2, T.d3, F, {}, {}, {}, 0, 0, 0, 0, {}, r, 0, nullptr};
    s.res0.resize(T.entries.size());
    for (std::size_t i = 0; i < T.entries.size(); ++i)
        s.res0[i] = std::get<std::uint64_t>(T.entries[i]);

    RankSearchResult result;
    if (std::all_of(s.res0.begin(), s.res0.end(), [](std::uint64_t x) { return x == 0; })) {
        result.feasible = true;
        return result;
    }
    if (r == 0) return result;

    // A rank-one term lowers each unfolding's rank by at most one, so an
    // unfolding rank above r refutes before any term is enumerated. Without
    // this the search would walk the whole root level to learn the same.
    if (s.prune(s.res0, r)) return result;

    const std::uint64_t cap =
        std::min(node_budget, std::numeric_limits<std::uint64_t>::max() - 1);
    const std::uint64_t p = F.p();
    std::uint64_t cu = count_canonical(T.d1, p, cap);
    std::uint64_t cv = count_canonical(T.d2, p, cap);
    std::uint64_t cw = count_nonzero(T.d3, p, cap);
    std::uint64_t tot = sat_mul(sat_mul(cu, cv, cap), cw, cap);
    std::uint64_t store = sat_mul(cu, T.d1, cap);
    store = std::min(cap + 1, store + sat_mul(cv, T.d2, cap));
    store = std::min(cap + 1, store + sat_mul(cw, T.d3, cap));
    if (tot > cap || store > cap)
        throw BudgetError("rank search candidate table exceeds the node budget");

    s.U = canonical_table(T.d1, p);
    s.V = canonical_table(T.d2, p);
    s.W = nonzero_table(T.d3, p);
    s.nu = cu;
    s.nv = cv;
    s.nw = cw;
    s.total = static_cast<std::size_t>(tot);
    s.budget = node_budget;

    SearchShared shared;
    s.shared = &shared;
    unsigned W = std::max(1u, workers);
    if (W == 1) {
        s.run_worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < W; ++i) pool.emplace_back([&s] { s.run_worker(); });
        for (auto& th : pool) th.join();
    }
    if (shared.error) std::rethrow_exception(shared.error);

    result.nodes = shared.nodes.load();
    if (shared.best_root.load() == std::numeric_limits<std::size_t>::max()) return result;

    for (std::size_t t : shared.best_path) {
        RankOneTerm term;
        const std::uint64_t* u = &s.U[(t / (s.nv * s.nw)) * T.d1];
        const std::uint64_t* v = &s.V[((t / s.nw) % s.nv) * T.d2];
        const std::uint64_t* w = &s.W[(t % s.nw) * T.d3];
        for (std::size_t i = 0; i < T.d1; ++i) term.u.push_back(FieldElem{u[i]});
        for (std::size_t j = 0; j < T.d2; ++j) term.v.push_back(FieldElem{v[j]});
        for (std::size_t k = 0; k < T.d3; ++k) term.w.push_back(FieldElem{w[k]});
        result.certificate.terms.push_back(std::move(term));
    }
    if (!verify_expansion(T, result.certificate, F))
        throw InternalError("rank search produced an invalid certificate");
    result.feasible = true;
    return result;
}

Expansion absorb_slice(const Tensor& T, const Expansion& E, std::size_t k1, const Field& F) {
    return absorb_step(T, E, k1, 0, F);
}

Expansion absorb_slices(const Tensor& T, const Expansion& E, const std::vector<std::size_t>& H,
                        const Field& F) {
    ConcreteMatrix stacked(H.size(), T.d1 * T.d2, F);
    for (std::size_t i = 0; i < H.size(); ++i) {
        if (H[i] >= T.d3) throw InputError("slice index out of range");
        ConcreteMatrix s = slice(T, H[i], F);
        if (matrix_rank(s, F) != 1) throw InputError("every pinned slice must have rank one");
        for (std::size_t cell = 0; cell < s.entries.size(); ++cell)
            stacked.at(i, cell) = s.entries[cell];
    }
    if (matrix_rank(stacked, F) != H.size())
        throw InputError("pinned slices must be linearly independent");

    Expansion cur = E;
    for (std::size_t i = 0; i < H.size(); ++i) cur = absorb_step(T, cur, H[i], i, F);
    return cur;
}

AffineSolutionSpace realization_space(const Tensor& T, const std::vector<ConcreteMatrix>& S,
                                      std::size_t r, const Field& F) {
    if (S.size() != r) throw UsageError("rank bound must equal the family size");
    for (const auto& M : S)
        if (M.rows != T.d1 || M.cols != T.d2)
            throw InputError("family slice shape does not match the tensor");

    const std::size_t cells = T.d1 * T.d2;
    ConcreteMatrix coeffs(cells, r, F);
    for (std::size_t l = 0; l < r; ++l)
        for (std::size_t cell = 0; cell < cells; ++cell) coeffs.at(cell, l) = S[l].entries[cell];

    AffineSolutionSpace out;
    out.ambient = r * T.d3;
    out.particular.assign(out.ambient, F.zero());
    for (std::size_t k = 0; k < T.d3; ++k) {
        std::vector<FieldElem> rhs(cells, F.zero());
        for (std::size_t i = 0; i < T.d1; ++i)
            for (std::size_t j = 0; j < T.d2; ++j) rhs[i * T.d2 + j] = T.at(i, j, k);
        AffineSolutionSpace sol = solve_affine(coeffs, rhs, F);
        if (sol.empty) {
            out.empty = true;
            out.particular.clear();
            out.basis.clear();
            return out;
        }
        for (std::size_t l = 0; l < r; ++l) out.particular[l * T.d3 + k] = sol.particular[l];
        for (const auto& b : sol.basis) {
            std::vector<FieldElem> v(out.ambient, F.zero());
            for (std::size_t l = 0; l < r; ++l) v[l * T.d3 + k] = b[l];
            out.basis.push_back(std::move(v));
        }
    }
    out.empty = false;
    return out;
}

Eig0Result eig0(const Tensor& T, const Field& F, std::uint64_t budget) {
    if (T.d1 != T.d2 || T.d2 != T.d3) throw InputError("eig0 requires a cubical tensor");
    if (F.kind() != FieldKind::GFp) throw UsageError("eig0 requires a finite field");

    Eig0Result out;
    const std::size_t d = T.d1;
    if (d == 0) return out;

    const std::uint64_t p = F.p();
    if (count_canonical(d, p, budget) > budget)
        throw BudgetError("eig0 candidate count exceeds the enumeration budget");

    std::vector<std::uint64_t> t(T.entries.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = std::get<std::uint64_t>(T.entries[i]);

    std::vector<std::uint64_t> x(d, 0);
    for (std::size_t lead = 0; lead < d; ++lead) {
        std::fill(x.begin(), x.end(), 0);
        x[lead] = 1;
        for (;;) {
            ++out.tried;
            bool ok = true;
            for (std::size_t k = 0; k < T.d3 && ok; ++k) {
                std::uint64_t sum = 0;
                for (std::size_t i = lead; i < d; ++i) {
                    if (x[i] == 0) continue;
                    for (std::size_t j = lead; j < d; ++j) {
                        if (x[j] == 0) continue;
                        std::uint64_t c = t[(i * d + j) * T.d3 + k];
                        if (c == 0) continue;
                        sum = F.mod_add(sum, F.mod_mul(c, F.mod_mul(x[i], x[j])));
                    }
                }
                ok = sum == 0;
            }
            if (ok) {
                out.exists = true;
                out.x.reserve(d);
                for (std::size_t i = 0; i < d; ++i) out.x.push_back(FieldElem{x[i]});
                return out;
            }
            std::size_t j = d;
            while (j > lead + 1) {
                if (++x[j - 1] < p) break;
                x[j - 1] = 0;
                --j;
            }
            if (j == lead + 1) break;
        }
    }
    return out;
}

Tensor tensor_from_homogeneous(const std::vector<ConcreteMatrix>& forms, const Field& F) {
    if (forms.empty()) throw InputError("at least one form is required");
    const std::size_t n = forms[0].rows;
    if (forms.size() > n) throw InputError("more forms than variables");
    for (const auto& M : forms) {
        if (M.rows != n || M.cols != n) throw InputError("forms must share one square shape");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (!F.is_zero(M.at(i, j))) throw InputError("forms must be upper triangular");
    }

    const bool char2 = F.kind() == FieldKind::GFp && F.p() == 2;
    Tensor T(n, n, n, F);
    for (std::size_t k = 0; k < forms.size(); ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                const FieldElem& c = forms[k].at(i, j);
                if (F.is_zero(c)) continue;
                if (i == j) {
                    T.at(i, i, k) = c;
                } else if (char2) {
                    T.at(i, j, k) = c;
                } else {
                    FieldElem half = F.div(c, F.from_int(2));
                    T.at(i, j, k) = half;
                    T.at(j, i, k) = half;
                }
            }
    return T;
}

}  // namespace rankc
