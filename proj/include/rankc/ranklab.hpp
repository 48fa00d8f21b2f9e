#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rankc/field.hpp"
#include "rankc/tensorize.hpp"

namespace rankc {

inline constexpr std::uint64_t kDefaultNodeBudget = 100000000;
inline constexpr std::uint64_t kDefaultEnumBudget = std::uint64_t(1) << 28;

struct RankSearchResult {
    bool feasible = false;
    Expansion certificate;  // lexicographically least, meaningful when feasible
    std::uint64_t nodes = 0;
};

// Does T admit an expansion with at most r rank-one terms? Complete search
// over canonical terms (u and v scaled so their first nonzero coordinate is
// one, w any nonzero vector) in strictly increasing term order; repeats are
// collapsible, so the restriction loses nothing. Prunes a branch when some
// mode unfolding of the residual has rank above the remaining term count.
// Finite fields only (UsageError). BudgetError when the candidate table or
// the visited node count exceeds node_budget. Workers split the first-term
// candidates; the certificate is independent of the worker count.
RankSearchResult tensor_rank_leq(const Tensor& T, std::size_t r, const Field& F,
                                 std::uint64_t node_budget = kDefaultNodeBudget,
                                 unsigned workers = 1);

// Pins the rank-one frontal slice M = T[.,.,k1] as the first term: the
// least term with nonzero w[k1] is replaced by the factorization of M
// (paired with that term's w scaled to coordinate one at k1) and moved to
// the front, and every other term's w loses its k1 component. Length and
// the represented tensor are preserved (re-verified); a zero slice is a
// no-op. InputError when E does not sum to T or the slice has rank two.
Expansion absorb_slice(const Tensor& T, const Expansion& E, std::size_t k1, const Field& F);

// Iterated absorption: afterwards term i factors the frontal slice H[i],
// for every i. The slices must each have rank one and be linearly
// independent (InputError), which guarantees step i finds a carrier
// outside the i terms already pinned.
Expansion absorb_slices(const Tensor& T, const Expansion& E, const std::vector<std::size_t>& H,
                        const Field& F);

// Solution set of T = sum_l S[l] (x) w_l in the unknowns w_1..w_r over
// F^{d3}, flattened as w_l[k] at index l*d3 + k. The bound r must equal the
// family size (UsageError otherwise); it is part of the interface because a
// realization is a rank-r expansion with prescribed matrix parts.
AffineSolutionSpace realization_space(const Tensor& T, const std::vector<ConcreteMatrix>& S,
                                      std::size_t r, const Field& F);

struct Eig0Result {
    bool exists = false;
    std::vector<FieldElem> x;
    std::uint64_t tried = 0;
};

// First nonzero x (canonical: leading coordinate one, enumerated with the
// leading position ascending, then remaining coordinates in lexicographic
// order) with sum_{i,j} T[i][j][k] x_i x_j = 0 for every k. Requires a
// cubical tensor and a finite field; BudgetError when the number of
// canonical candidates exceeds budget. The zero tensor yields e1.
Eig0Result eig0(const Tensor& T, const Field& F, std::uint64_t budget = kDefaultEnumBudget);

// Cubical n x n x n tensor T with sum_{i,j} T[i][j][k] x_i x_j equal to the
// k-th form; slices past the last form are zero. Forms are given as
// upper-triangular coefficient matrices on x_i x_j (i <= j) and there may
// be at most n of them. Off-diagonal coefficients split in half across
// (i,j) and (j,i); in characteristic two the whole coefficient stays at
// (i,j), which is why the solvability bridge is stated for odd p only.
Tensor tensor_from_homogeneous(const std::vector<ConcreteMatrix>& forms, const Field& F);

}  // namespace rankc
