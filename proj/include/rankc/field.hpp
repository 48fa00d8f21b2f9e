#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "rankc/common.hpp"

namespace rankc {

enum class FieldKind { GFp, Q, QSqrt };

// Description of a supported field: GF(p) for prime p < 2^31, the rationals,
// or a real quadratic extension Q(sqrt(d)) with d >= 2 square-free.
struct FieldSpec {
    FieldKind kind = FieldKind::Q;
    std::uint32_t p = 0;
    std::uint32_t d = 0;

    static FieldSpec gf(std::uint32_t p) { return {FieldKind::GFp, p, 0}; }
    static FieldSpec q() { return {FieldKind::Q, 0, 0}; }
    static FieldSpec qsqrt(std::uint32_t d) { return {FieldKind::QSqrt, 0, d}; }

    bool operator==(const FieldSpec&) const = default;

    // "gf7", "q", "qsqrt2"; also the accepted CLI spelling.
    std::string name() const;
    static FieldSpec parse(const std::string& name);
};

bool is_prime_u32(std::uint32_t n);
bool is_square_free_u32(std::uint32_t n);

// Element of Q(sqrt(d)): a + b*sqrt(d), both components canonical rationals.
struct QuadVal {
    mpq_class a, b;
    bool operator==(const QuadVal&) const = default;
};

// Canonical field element. GF(p) residues live in [0, p) as the uint64
// alternative; rationals are reduced with positive denominator (mpq_class
// canonical form); QSqrt pairs keep both components canonical.
using FieldElem = std::variant<std::uint64_t, mpq_class, QuadVal>;

// Unvalidated element description: (n1/d1) + (n2/d2)*sqrt(d). The second
// component must be absent (0/1) outside QSqrt; GF(p) requires d1 == 1.
struct RawElem {
    mpz_class n1 = 0, d1 = 1, n2 = 0, d2 = 1;

    RawElem() = default;
    RawElem(long v) : n1(v) {}
    RawElem(mpz_class n) : n1(std::move(n)) {}
    RawElem(mpz_class n, mpz_class d) : n1(std::move(n)), d1(std::move(d)) {}
    RawElem(mpz_class an, mpz_class ad, mpz_class bn, mpz_class bd)
        : n1(std::move(an)), d1(std::move(ad)), n2(std::move(bn)), d2(std::move(bd)) {}
};

// Arithmetic context for one FieldSpec. Construction validates the spec
// (primality of p, square-freeness of d); every element passed to an
// operation must belong to this field's alternative of FieldElem.
class Field {
public:
    explicit Field(FieldSpec spec);

    const FieldSpec& spec() const { return spec_; }
    FieldKind kind() const { return spec_.kind; }

    FieldElem zero() const;
    FieldElem one() const;
    FieldElem from_int(long v) const;
    FieldElem from_mpz(const mpz_class& v) const;

    bool is_zero(const FieldElem& x) const;
    bool eq(const FieldElem& x, const FieldElem& y) const;

    FieldElem add(const FieldElem& x, const FieldElem& y) const;
    FieldElem sub(const FieldElem& x, const FieldElem& y) const;
    FieldElem mul(const FieldElem& x, const FieldElem& y) const;
    FieldElem neg(const FieldElem& x) const;
    FieldElem inv(const FieldElem& x) const;  // InputError on zero
    FieldElem div(const FieldElem& x, const FieldElem& y) const;

    // Human-readable form: "3", "-1/2", "1/2-1/2*sqrt(2)".
    std::string to_string(const FieldElem& x) const;

    // Residue arithmetic used by the GF(p) fast paths.
    std::uint64_t p() const { return spec_.p; }
    std::uint64_t mod_add(std::uint64_t a, std::uint64_t b) const;
    std::uint64_t mod_sub(std::uint64_t a, std::uint64_t b) const;
    std::uint64_t mod_mul(std::uint64_t a, std::uint64_t b) const;
    std::uint64_t mod_inv(std::uint64_t a) const;

private:
    FieldSpec spec_;
    void check_kind(const FieldElem& x) const;
};

// Maps a raw description to the canonical element: residue reduction for
// GF(p), fraction reduction for Q and Q(sqrt(d)). InputError on zero
// denominators or components unusable in the target field.
FieldElem normalize_elem(const RawElem& raw, const Field& F);

// Dense row-major matrix over one field. Entry validity (canonical form,
// matching alternative) is the producer's responsibility.
struct ConcreteMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<FieldElem> entries;

    ConcreteMatrix() = default;
    ConcreteMatrix(std::size_t r, std::size_t c, const Field& F)
        : rows(r), cols(c), entries(r * c, F.zero()) {}

    FieldElem& at(std::size_t r, std::size_t c) { return entries[r * cols + c]; }
    const FieldElem& at(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }
};

// Exact rank. GF(p) uses modular elimination; Q and Q(sqrt(d)) clear
// denominators per row and run fraction-free elimination over the ring,
// so no intermediate fraction blowup. First-nonzero pivoting throughout.
std::size_t matrix_rank(const ConcreteMatrix& M, const Field& F);

// Solution set of coeffs * x = rhs, possibly empty. `particular` and
// `basis` are meaningful only when `empty` is false; basis spans the
// homogeneous solutions, particular has every free coordinate zero.
struct AffineSolutionSpace {
    std::size_t ambient = 0;
    bool empty = true;
    std::vector<FieldElem> particular;
    std::vector<std::vector<FieldElem>> basis;
};

AffineSolutionSpace solve_affine(const ConcreteMatrix& coeffs,
                                 const std::vector<FieldElem>& rhs,
                                 const Field& F);

}  // namespace rankc
