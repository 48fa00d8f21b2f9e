#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "rankc/field.hpp"

namespace rankc {

// Product of variable powers; the empty monomial is the constant 1.
struct Monomial {
    std::map<std::string, unsigned> exps;
    auto operator<=>(const Monomial&) const = default;
};

// Integer-coefficient polynomial in canonical form: zero coefficients are
// absent, keys are unique. The map order fixes a deterministic term order.
struct Polynomial {
    std::map<Monomial, mpz_class> terms;

    static Polynomial constant(const mpz_class& k);
    static Polynomial variable(const std::string& name);
    Polynomial add(const Polynomial& o) const;
    Polynomial sub(const Polynomial& o) const;
    Polynomial mul(const Polynomial& o) const;
    Polynomial pow(unsigned e) const;
    bool is_zero() const { return terms.empty(); }
};

struct PolyEquation {
    Polynomial lhs, rhs;
};

// Parsed source: equations plus every mentioned variable in first-mention
// order (variables survive even if algebra cancels them from all terms).
struct PolyFormula {
    std::vector<std::string> variables;
    std::vector<PolyEquation> equations;
};

// Surface syntax: lines of `eq <poly> = <poly> ;` with + - * ^ ( ),
// integer literals, identifiers [A-Za-z_][A-Za-z0-9_]*, and # comments.
// InputError with line:col on lexical or syntax errors.
PolyFormula parse_source(const std::string& text);

enum class EqKind { Add, Mul, Copy, Const };

// One constraint over variables: Add c=a+b, Mul c=a*b, Copy c=a, Const c=k.
struct QuadEquation {
    EqKind kind = EqKind::Const;
    std::string c, a, b;
    mpz_class k = 0;

    static QuadEquation add(std::string c, std::string a, std::string b);
    static QuadEquation mul(std::string c, std::string a, std::string b);
    static QuadEquation copy(std::string c, std::string a);
    static QuadEquation constant(std::string c, mpz_class k);
    bool operator==(const QuadEquation&) const = default;
};

struct QuadraticSystem {
    // Original variables first, introduced ones after, in introduction order.
    std::vector<std::string> variables;
    std::vector<QuadEquation> equations;
    bool operator==(const QuadraticSystem&) const = default;
};

// Variables of e in slot order c, a, b (present slots only).
std::vector<std::string> equation_vars(const QuadEquation& e);

// Structural sanity: declared variables unique, every referenced variable
// declared. InputError otherwise. All system consumers call this.
void validate_system(const QuadraticSystem& s);

// Equisolvable quadratic system for a polynomial formula: every solution of
// f extends uniquely to the introduced variables and vice versa. Introduced
// names contain '#', which the surface syntax cannot produce.
QuadraticSystem quadratize(const PolyFormula& f);

// Repairs assumption violations by introducing copy variables, passes in
// order A1 (no repeated variable inside an equation), A2 (no cross-coupled
// pair), A3 (a Mul's right factor occurs exactly twice, the other occurrence
// as the target of a Copy). Output always passes check_assumptions; growth
// is bounded by out_eqs <= 3*in_eqs and out_vars <= in_vars + 2*in_eqs.
QuadraticSystem normalize(const QuadraticSystem& s);

struct AssumptionViolation {
    int assumption = 0;  // 1, 2, or 3
    std::size_t eq = 0;
    std::optional<std::size_t> partner;  // A2: the coupled equation
    std::string detail;
};

struct AssumptionReport {
    bool ok = true;
    std::vector<AssumptionViolation> violations;
};

// A1: a variable repeats inside one equation.
// A2: a cross-coupled pair: e_i = Mul(w,a,b) where, in one partner equation,
//     a sits in a third-column slot (any slot except a Mul's right factor)
//     and b sits in a third-row slot (target of Add/Copy/Const, or right
//     factor of a Mul). The squaring idiom {Mul(w,u,v), Copy(v,u)} that the
//     normalizer itself produces is accepted. Slot classes mirror the block
//     templates in minrank; a test pins that correspondence.
// A3: a Mul's right factor must occur exactly twice, the other occurrence
//     as the target of a Copy.
AssumptionReport check_assumptions(const QuadraticSystem& s);

// Does sigma satisfy every equation? sigma[i] is the value of variables[i].
bool eval_system(const QuadraticSystem& s, const std::vector<FieldElem>& sigma, const Field& F);

// Direct evaluation of the source-level formula, mainly for cross-checks.
bool eval_formula(const PolyFormula& f, const std::vector<FieldElem>& sigma, const Field& F);

struct SolveResult {
    bool found = false;
    std::vector<FieldElem> witness;  // lexicographically least, variables order
    std::uint64_t tried = 0;
};

// Exhaustive search over GF(p)^n in lexicographic order (first variable most
// significant), stopping at the first satisfying assignment. UsageError for
// infinite fields; BudgetError if p^n exceeds budget before enumerating.
SolveResult solve_bruteforce(const QuadraticSystem& s, const Field& F, std::uint64_t budget);

}  // namespace rankc
