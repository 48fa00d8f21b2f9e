#include "rankc/tensorize.hpp"

namespace rankc {

TensorBundle build_tensor(const SymbolicMatrix& M, const Field& F) {
    TensorBundle B;
    B.m = M.m();
    B.slice_vars = M.all_vars();
    const std::size_t n = B.slice_vars.size();
    const std::size_t dim = M.dim();
    B.rank_target = 2 * B.m + n;
    B.tensor = Tensor(dim, dim, n + 1, F);

    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i) idx[B.slice_vars[i]] = i;

    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) {
            const AffineExpr& e = M.at(r, c);
            B.tensor.at(r, c, n) = F.from_mpz(e.c);
            for (const auto& [v, k] : e.terms) B.tensor.at(r, c, idx.at(v)) = F.from_mpz(k);
        }
    return B;
}

ConcreteMatrix slice(const Tensor& T, std::size_t k, const Field& F) {
    if (k >= T.d3) throw InputError("slice index " + std::to_string(k) + " out of range");
    ConcreteMatrix out(T.d1, T.d2, F);
    for (std::size_t i = 0; i < T.d1; ++i)
        for (std::size_t j = 0; j < T.d2; ++j) out.at(i, j) = T.at(i, j, k);
    return out;
}

ConcreteMatrix slice(const Tensor& T, int mode, std::size_t index, const Field& F) {
    if (mode == 3) return slice(T, index, F);
    if (mode == 1) {
        if (index >= T.d1) throw InputError("slice index " + std::to_string(index) + " out of range");
        ConcreteMatrix out(T.d2, T.d3, F);
        for (std::size_t j = 0; j < T.d2; ++j)
            for (std::size_t k = 0; k < T.d3; ++k) out.at(j, k) = T.at(index, j, k);
        return out;
    }
    if (mode == 2) {
        if (index >= T.d2) throw InputError("slice index " + std::to_string(index) + " out of range");
        ConcreteMatrix out(T.d1, T.d3, F);
        for (std::size_t i = 0; i < T.d1; ++i)
            for (std::size_t k = 0; k < T.d3; ++k) out.at(i, k) = T.at(i, index, k);
        return out;
    }
    throw InputError("slice mode must be 1, 2, or 3");
}

void check_slice_independence(const TensorBundle& B, const Field& F) {
    const std::size_t n = B.slice_vars.size();
    if (B.tensor.d3 != n + 1) throw InternalError("bundle depth does not match slice count");
    ConcreteMatrix stacked(n, B.tensor.d1 * B.tensor.d2, F);
    for (std::size_t x = 0; x < n; ++x) {
        ConcreteMatrix s = slice(B.tensor, x, F);
        if (matrix_rank(s, F) != 1)
            throw InternalError("variable slice '" + B.slice_vars[x] + "' is not rank one");
        for (std::size_t cell = 0; cell < s.entries.size(); ++cell)
            stacked.at(x, cell) = s.entries[cell];
    }
    if (n > 0 && matrix_rank(stacked, F) != n)
        throw InternalError("variable slices are linearly dependent");
}

std::optional<std::pair<std::vector<FieldElem>, std::vector<FieldElem>>> rank_one_factor(
    const ConcreteMatrix& M, const Field& F) {
    std::size_t r0 = M.rows, c0 = M.cols;
    for (std::size_t r = 0; r < M.rows && r0 == M.rows; ++r)
        for (std::size_t c = 0; c < M.cols; ++c)
            if (!F.is_zero(M.at(r, c))) {
                r0 = r;
                c0 = c;
                break;
            }
    if (r0 == M.rows) return std::nullopt;

    FieldElem inv = F.inv(M.at(r0, c0));
    std::vector<FieldElem> g(M.rows, F.zero()), h(M.cols, F.zero());
    for (std::size_t r = 0; r < M.rows; ++r) g[r] = F.mul(M.at(r, c0), inv);
    for (std::size_t c = 0; c < M.cols; ++c) h[c] = M.at(r0, c);
    for (std::size_t r = 0; r < M.rows; ++r)
        for (std::size_t c = 0; c < M.cols; ++c)
            if (!F.eq(M.at(r, c), F.mul(g[r], h[c])))
                throw InputError("matrix does not have rank one");
    return std::make_pair(std::move(g), std::move(h));
}

std::vector<std::pair<std::vector<FieldElem>, std::vector<FieldElem>>> rank_peel(
    ConcreteMatrix A, const Field& F) {
    std::vector<std::pair<std::vector<FieldElem>, std::vector<FieldElem>>> out;
    for (;;) {
        std::size_t r0 = A.rows, c0 = A.cols;
        for (std::size_t r = 0; r < A.rows && r0 == A.rows; ++r)
            for (std::size_t c = 0; c < A.cols; ++c)
                if (!F.is_zero(A.at(r, c))) {
                    r0 = r;
                    c0 = c;
                    break;
                }
        if (r0 == A.rows) break;
        FieldElem inv = F.inv(A.at(r0, c0));
        std::vector<FieldElem> g(A.rows, F.zero()), h(A.cols, F.zero());
        for (std::size_t r = 0; r < A.rows; ++r) g[r] = F.mul(A.at(r, c0), inv);
        for (std::size_t c = 0; c < A.cols; ++c) h[c] = A.at(r0, c);
        for (std::size_t r = 0; r < A.rows; ++r)
            for (std::size_t c = 0; c < A.cols; ++c)
                A.at(r, c) = F.sub(A.at(r, c), F.mul(g[r], h[c]));
        out.emplace_back(std::move(g), std::move(h));
    }
    return out;
}

Expansion expansion_from_assignment(const TensorBundle& B, const std::vector<FieldElem>& sigma,
                                    const Field& F) {
    const std::size_t n = B.slice_vars.size();
    if (sigma.size() != n) throw InputError("assignment length does not match slice count");

    Expansion E;
    for (std::size_t x = 0; x < n; ++x) {
        auto f = rank_one_factor(slice(B.tensor, x, F), F);
        if (!f) throw InputError("variable slice '" + B.slice_vars[x] + "' is zero");
        std::vector<FieldElem> w(n + 1, F.zero());
        w[x] = F.one();
        w[n] = F.neg(sigma[x]);
        E.terms.push_back({std::move(f->first), std::move(f->second), std::move(w)});
    }

    // sigma(A) = constants slice + sum sigma(x) * variable slice x.
    ConcreteMatrix A = slice(B.tensor, n, F);
    for (std::size_t x = 0; x < n; ++x) {
        ConcreteMatrix s = slice(B.tensor, x, F);
        for (std::size_t cell = 0; cell < A.entries.size(); ++cell)
            A.entries[cell] = F.add(A.entries[cell], F.mul(sigma[x], s.entries[cell]));
    }

    auto peel = rank_peel(std::move(A), F);
    if (peel.size() > 2 * B.m)
        throw InputError("assignment evaluates to rank " + std::to_string(peel.size()) +
                         ", above the floor " + std::to_string(2 * B.m));
    for (auto& [g, h] : peel) {
        std::vector<FieldElem> w(n + 1, F.zero());
        w[n] = F.one();
        E.terms.push_back({std::move(g), std::move(h), std::move(w)});
    }

    if (!verify_expansion(B.tensor, E, F))
        throw InternalError("constructed expansion does not reproduce the tensor");
    return E;
}

bool verify_expansion(const Tensor& T, const Expansion& E, const Field& F) {
    for (const auto& t : E.terms)
        if (t.u.size() != T.d1 || t.v.size() != T.d2 || t.w.size() != T.d3)
            throw InputError("expansion term shape does not match tensor dimensions");
    Tensor sum(T.d1, T.d2, T.d3, F);
    for (const auto& t : E.terms)
        for (std::size_t i = 0; i < T.d1; ++i) {
            if (F.is_zero(t.u[i])) continue;
            for (std::size_t j = 0; j < T.d2; ++j) {
                FieldElem uv = F.mul(t.u[i], t.v[j]);
                if (F.is_zero(uv)) continue;
                for (std::size_t k = 0; k < T.d3; ++k)
                    sum.at(i, j, k) = F.add(sum.at(i, j, k), F.mul(uv, t.w[k]));
            }
        }
    for (std::size_t cell = 0; cell < T.entries.size(); ++cell)
        if (!F.eq(sum.entries[cell], T.entries[cell])) return false;
    return true;
}

}  // namespace rankc
