#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "rankc/field.hpp"
#include "rankc/syslang.hpp"

namespace rankc {

// Integer-coefficient affine form over named variables.
struct AffineExpr {
    mpz_class c = 0;
    std::map<std::string, mpz_class> terms;

    static AffineExpr constant(mpz_class k);
    static AffineExpr var(const std::string& name);
    AffineExpr plus(const AffineExpr& o) const;
    AffineExpr minus(const AffineExpr& o) const;
    bool is_zero() const { return sgn(c) == 0 && terms.empty(); }
    bool operator==(const AffineExpr&) const = default;
};

FieldElem eval_affine(const AffineExpr& e, const std::map<std::string, FieldElem>& sigma,
                      const Field& F);

// Cell of the matrix holding one occurrence of a variable (0-based).
struct Occurrence {
    std::size_t row = 0, col = 0;
    bool operator==(const Occurrence&) const = default;
};

// 3m x 3m symbolic matrix: one 3x3 template block per equation on the
// diagonal, plus u - u@j at (R_u[j], C_u[k]) for every pair j != k of
// occurrences of u, where R_u/C_u list occurrence cells in row order.
// Carries its source system so observation checks and witness search can
// reconstruct context.
struct SymbolicMatrix {
    QuadraticSystem system;
    std::vector<std::string> copy_vars;  // "u@1", "u@2", ... grouped by variable
    std::vector<AffineExpr> entries;     // (3m)^2, row-major
    std::map<std::string, std::vector<Occurrence>> occurrences;

    std::size_t m() const { return system.equations.size(); }
    std::size_t dim() const { return 3 * m(); }
    const AffineExpr& at(std::size_t r, std::size_t c) const { return entries[r * dim() + c]; }
    AffineExpr& at(std::size_t r, std::size_t c) { return entries[r * dim() + c]; }

    // Base variables then copies; the assignment order used everywhere.
    std::vector<std::string> all_vars() const;
};

// 3x3 template block for one equation. Row-major; block(r, c) = block[3r+c].
std::array<AffineExpr, 9> build_block(const QuadEquation& e);

SymbolicMatrix build_matrix(const QuadraticSystem& s);

// Structural audit of a built matrix:
//  1. collapsing every copy onto its base variable leaves a block-diagonal
//     matrix whose blocks are the equation templates,
//  2. each block's symbolic determinant is the equation's defect
//     (c-a-b, c-a*b, c-a, or c-K),
//  3. rows and columns 3i-2, 3i-1 carry a fixed identity structure, so every
//     evaluation has rank >= 2m,
//  4. off-diagonal entries are exactly u - u@j at (R_u[j], C_u[k]), j != k.
// InternalError on any failure (unreachable for build_matrix output).
void verify_observation(const SymbolicMatrix& M);

// sigma is ordered like all_vars(): base variables first, then copies.
ConcreteMatrix evaluate_matrix(const SymbolicMatrix& M, const std::vector<FieldElem>& sigma,
                               const Field& F);

struct MinrankResult {
    std::size_t minrank = 0;
    std::vector<FieldElem> witness;  // lexicographically least attaining minrank
    std::uint64_t tried = 0;
};

// Exhaustive minimum rank over all assignments in all_vars() order (first
// variable most significant). UsageError for infinite fields; BudgetError if
// p^n exceeds budget. Workers partition the leading variable's residues;
// the result is independent of the worker count.
MinrankResult minrank_bruteforce(const SymbolicMatrix& M, const Field& F, std::uint64_t budget,
                                 unsigned workers = 1);

struct WitnessSearchResult {
    bool found = false;       // is the source system solvable?
    std::size_t rank = 0;     // rank at the extended witness
    std::vector<FieldElem> witness;
    std::uint64_t tried = 0;
};

// Solves the source system exhaustively, extends the witness with u@j := u,
// and evaluates the rank there (2m exactly when found; InternalError if not,
// since a solution must collapse every block to rank 2).
WitnessSearchResult minrank_witness_search(const SymbolicMatrix& M, const Field& F,
                                           std::uint64_t budget);

}  // namespace rankc
