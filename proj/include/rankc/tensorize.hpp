#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "rankc/field.hpp"
#include "rankc/minrank.hpp"

namespace rankc {

// Dense order-3 tensor, entry (i,j,k) at ((i*d2)+j)*d3+k.
struct Tensor {
    std::size_t d1 = 0, d2 = 0, d3 = 0;
    std::vector<FieldElem> entries;

    Tensor() = default;
    Tensor(std::size_t a, std::size_t b, std::size_t c, const Field& F)
        : d1(a), d2(b), d3(c), entries(a * b * c, F.zero()) {}

    FieldElem& at(std::size_t i, std::size_t j, std::size_t k) {
        return entries[(i * d2 + j) * d3 + k];
    }
    const FieldElem& at(std::size_t i, std::size_t j, std::size_t k) const {
        return entries[(i * d2 + j) * d3 + k];
    }
};

// Tensor view of a symbolic matrix: slice k < n is the coefficient matrix of
// the k-th variable (all_vars order), slice n collects the constant parts.
// sigma(A) = slices[n] + sum sigma(x) * slices[x].
struct TensorBundle {
    Tensor tensor;
    std::vector<std::string> slice_vars;
    std::size_t m = 0;
    std::size_t rank_target = 0;  // 2m + n
};

TensorBundle build_tensor(const SymbolicMatrix& M, const Field& F);

// Frontal slice k: the d1 x d2 matrix T[.,.,k].
ConcreteMatrix slice(const Tensor& T, std::size_t k, const Field& F);

// General slice with one mode in {1,2,3} fixed at `index`: mode 1 gives a
// d2 x d3 matrix, mode 2 a d1 x d3 matrix, mode 3 the frontal slice.
ConcreteMatrix slice(const Tensor& T, int mode, std::size_t index, const Field& F);

// Audits the bundle invariants: every variable slice has rank exactly one
// and the n variable slices are linearly independent. InternalError on
// failure (unreachable for build_tensor output).
void check_slice_independence(const TensorBundle& B, const Field& F);

struct RankOneTerm {
    std::vector<FieldElem> u, v, w;
    bool operator==(const RankOneTerm&) const = default;
};

struct Expansion {
    std::vector<RankOneTerm> terms;
    bool operator==(const Expansion&) const = default;
};

// g * h^T == M when M has rank one; nullopt for the zero matrix; InputError
// when rank exceeds one. The first nonzero row is h, scaled so the pivot
// column of g is one.
std::optional<std::pair<std::vector<FieldElem>, std::vector<FieldElem>>> rank_one_factor(
    const ConcreteMatrix& M, const Field& F);

// Deterministic rank-revealing peel: repeatedly split off g*h^T pivoted at
// the first nonzero cell in row-major order. Returns rank(M) factor pairs
// summing to M.
std::vector<std::pair<std::vector<FieldElem>, std::vector<FieldElem>>> rank_peel(
    ConcreteMatrix M, const Field& F);

// Rank-one expansion of the bundle tensor with n + rank(sigma(A)) terms:
// each variable slice A_x paired with w_x = e_x - sigma(x) e_n, then a
// deterministic rank-revealing peel of sigma(A) paired with e_n. InputError
// when the evaluated rank exceeds 2m; meets the 2m + n target exactly when
// sigma attains that floor.
Expansion expansion_from_assignment(const TensorBundle& B, const std::vector<FieldElem>& sigma,
                                    const Field& F);

bool verify_expansion(const Tensor& T, const Expansion& E, const Field& F);

}  // namespace rankc
