#include "rankc/field.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace rankc {

namespace {

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
    std::uint64_t acc = 1 % mod;
    base %= mod;
    while (exp) {
        if (exp & 1) acc = acc * base % mod;
        base = base * base % mod;
        exp >>= 1;
    }
    return acc;
}

}  // namespace

bool is_prime_u32(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint32_t q : {2u, 3u, 5u, 7u}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    // Bases 2,3,5,7 are a deterministic witness set below 3.2e9.
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull}) {
        std::uint64_t x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = x * x % n;
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

bool is_square_free_u32(std::uint32_t n) {
    if (n == 0) return false;
    for (std::uint64_t q = 2; q * q <= n; ++q) {
        if (n % q == 0) {
            n = static_cast<std::uint32_t>(n / q);
            if (n % q == 0) return false;
        }
    }
    return true;
}

std::string FieldSpec::name() const {
    switch (kind) {
        case FieldKind::GFp: return "gf" + std::to_string(p);
        case FieldKind::Q: return "q";
        case FieldKind::QSqrt: return "qsqrt" + std::to_string(d);
    }
    throw InternalError("unknown field kind");
}

FieldSpec FieldSpec::parse(const std::string& name) {
    auto numeric_suffix = [](const std::string& s, std::size_t from, std::uint32_t& out) {
        if (from >= s.size()) return false;
        std::uint64_t v = 0;
        for (std::size_t i = from; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') return false;
            v = v * 10 + static_cast<std::uint64_t>(s[i] - '0');
            if (v > 0xffffffffull) return false;
        }
        out = static_cast<std::uint32_t>(v);
        return true;
    };
    std::uint32_t v = 0;
    FieldSpec spec;
    if (name == "q") {
        spec = FieldSpec::q();
    } else if (name.rfind("qsqrt", 0) == 0 && numeric_suffix(name, 5, v)) {
        spec = FieldSpec::qsqrt(v);
    } else if (name.rfind("gf", 0) == 0 && numeric_suffix(name, 2, v)) {
        spec = FieldSpec::gf(v);
    } else {
        throw InputError("unrecognized field '" + name + "' (expected gf<p>, q, or qsqrt<d>)");
    }
    Field{spec};  // validates the modulus or radicand
    return spec;
}

Field::Field(FieldSpec spec) : spec_(spec) {
    switch (spec_.kind) {
        case FieldKind::GFp:
            if (spec_.p >= (1u << 31) || !is_prime_u32(spec_.p))
                throw InputError("gf modulus must be a prime below 2^31, got " +
                                 std::to_string(spec_.p));
            break;
        case FieldKind::Q:
            break;
        case FieldKind::QSqrt:
            if (spec_.d < 2 || !is_square_free_u32(spec_.d))
                throw InputError("qsqrt radicand must be square-free and >= 2, got " +
                                 std::to_string(spec_.d));
            break;
    }
}

void Field::check_kind(const FieldElem& x) const {
    static constexpr std::size_t expected[] = {0, 1, 2};
    if (x.index() != expected[static_cast<int>(spec_.kind)])
        throw InternalError("field element does not belong to " + spec_.name());
}

FieldElem Field::zero() const { return from_int(0); }
FieldElem Field::one() const { return from_int(1); }

FieldElem Field::from_int(long v) const { return from_mpz(mpz_class(v)); }

FieldElem Field::from_mpz(const mpz_class& v) const {
    switch (spec_.kind) {
        case FieldKind::GFp: {
            mpz_class r;
            mpz_mod(r.get_mpz_t(), v.get_mpz_t(), mpz_class(spec_.p).get_mpz_t());
            return FieldElem(std::in_place_index<0>, r.get_ui());
        }
        case FieldKind::Q:
            return FieldElem(std::in_place_index<1>, mpq_class(v));
        case FieldKind::QSqrt:
            return FieldElem(std::in_place_index<2>, QuadVal{mpq_class(v), mpq_class(0)});
    }
    throw InternalError("unknown field kind");
}

bool Field::is_zero(const FieldElem& x) const {
    check_kind(x);
    switch (spec_.kind) {
        case FieldKind::GFp: return std::get<0>(x) == 0;
        case FieldKind::Q: return sgn(std::get<1>(x)) == 0;
        case FieldKind::QSqrt: {
            const auto& q = std::get<2>(x);
            return sgn(q.a) == 0 && sgn(q.b) == 0;
        }
    }
    throw InternalError("unknown field kind");
}

bool Field::eq(const FieldElem& x, const FieldElem& y) const {
    check_kind(x);
    check_kind(y);
    return x == y;
}

std::uint64_t Field::mod_add(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t s = a + b;
    return s >= spec_.p ? s - spec_.p : s;
}

std::uint64_t Field::mod_sub(std::uint64_t a, std::uint64_t b) const {
    return a >= b ? a - b : a + spec_.p - b;
}

std::uint64_t Field::mod_mul(std::uint64_t a, std::uint64_t b) const {
    return a * b % spec_.p;
}

std::uint64_t Field::mod_inv(std::uint64_t a) const {
    if (a == 0) throw InputError("division by zero in " + spec_.name());
    return pow_mod(a, spec_.p - 2, spec_.p);
}

FieldElem Field::add(const FieldElem& x, const FieldElem& y) const {
    check_kind(x);
    check_kind(y);
    switch (spec_.kind) {
        case FieldKind::GFp:
            return FieldElem(std::in_place_index<0>, mod_add(std::get<0>(x), std::get<0>(y)));
        case FieldKind::Q:
            return FieldElem(std::in_place_index<1>, mpq_class(std::get<1>(x) + std::get<1>(y)));
        case FieldKind::QSqrt: {
            const auto& u = std::get<2>(x);
            const auto& v = std::get<2>(y);
            return FieldElem(std::in_place_index<2>,
                             QuadVal{mpq_class(u.a + v.a), mpq_class(u.b + v.b)});
        }
    }
    throw InternalError("unknown field kind");
}

FieldElem Field::sub(const FieldElem& x, const FieldElem& y) const { return add(x, neg(y)); }

FieldElem Field::neg(const FieldElem& x) const {
    check_kind(x);
    switch (spec_.kind) {
        case FieldKind::GFp: {
            std::uint64_t v = std::get<0>(x);
            return FieldElem(std::in_place_index<0>, v == 0 ? 0 : spec_.p - v);
        }
        case FieldKind::Q:
            return FieldElem(std::in_place_index<1>, mpq_class(-std::get<1>(x)));
        case FieldKind::QSqrt: {
            const auto& q = std::get<2>(x);
            return FieldElem(std::in_place_index<2>, QuadVal{mpq_class(-q.a), mpq_class(-q.b)});
        }
    }
    throw InternalError("unknown field kind");
}

FieldElem Field::mul(const FieldElem& x, const FieldElem& y) const {
    check_kind(x);
    check_kind(y);
    switch (spec_.kind) {
        case FieldKind::GFp:
            return FieldElem(std::in_place_index<0>, mod_mul(std::get<0>(x), std::get<0>(y)));
        case FieldKind::Q:
            return FieldElem(std::in_place_index<1>, mpq_class(std::get<1>(x) * std::get<1>(y)));
        case FieldKind::QSqrt: {
            const auto& u = std::get<2>(x);
            const auto& v = std::get<2>(y);
            mpq_class dq(static_cast<unsigned long>(spec_.d));
            return FieldElem(std::in_place_index<2>,
                             QuadVal{mpq_class(u.a * v.a + dq * u.b * v.b),
                                     mpq_class(u.a * v.b + u.b * v.a)});
        }
    }
    throw InternalError("unknown field kind");
}

FieldElem Field::inv(const FieldElem& x) const {
    check_kind(x);
    if (is_zero(x)) throw InputError("division by zero in " + spec_.name());
    switch (spec_.kind) {
        case FieldKind::GFp:
            return FieldElem(std::in_place_index<0>, mod_inv(std::get<0>(x)));
        case FieldKind::Q:
            return FieldElem(std::in_place_index<1>, mpq_class(1 / std::get<1>(x)));
        case FieldKind::QSqrt: {
            // 1/(a+b*sqrt(d)) = (a-b*sqrt(d)) / (a^2 - d*b^2); the norm is
            // nonzero because d is not a perfect square.
            const auto& q = std::get<2>(x);
            mpq_class dq(static_cast<unsigned long>(spec_.d));
            mpq_class norm(q.a * q.a - dq * q.b * q.b);
            if (sgn(norm) == 0) throw InternalError("zero norm for nonzero quadratic element");
            return FieldElem(std::in_place_index<2>,
                             QuadVal{mpq_class(q.a / norm), mpq_class(-q.b / norm)});
        }
    }
    throw InternalError("unknown field kind");
}

FieldElem Field::div(const FieldElem& x, const FieldElem& y) const { return mul(x, inv(y)); }

std::string Field::to_string(const FieldElem& x) const {
    check_kind(x);
    switch (spec_.kind) {
        case FieldKind::GFp:
            return std::to_string(std::get<0>(x));
        case FieldKind::Q:
            return std::get<1>(x).get_str();
        case FieldKind::QSqrt: {
            const auto& q = std::get<2>(x);
            if (sgn(q.b) == 0) return q.a.get_str();
            std::string rad = "sqrt(" + std::to_string(spec_.d) + ")";
            mpq_class mag = abs(q.b);
            std::string part = (mag == 1) ? rad : mag.get_str() + "*" + rad;
            std::string sign = sgn(q.b) < 0 ? "-" : (sgn(q.a) == 0 ? "" : "+");
            return (sgn(q.a) == 0 ? "" : q.a.get_str()) + sign + part;
        }
    }
    throw InternalError("unknown field kind");
}

FieldElem normalize_elem(const RawElem& raw, const Field& F) {
    if (sgn(raw.d1) == 0 || sgn(raw.d2) == 0) throw InputError("zero denominator");
    mpq_class first(raw.n1, raw.d1);
    first.canonicalize();
    mpq_class second(raw.n2, raw.d2);
    second.canonicalize();
    switch (F.kind()) {
        case FieldKind::GFp:
            if (second != 0) throw InputError("radical part outside qsqrt field");
            if (first.get_den() != 1)
                throw InputError("gf element must be an integer, got " + first.get_str());
            return F.from_mpz(first.get_num());
        case FieldKind::Q:
            if (second != 0) throw InputError("radical part outside qsqrt field");
            return FieldElem(std::in_place_index<1>, first);
        case FieldKind::QSqrt:
            return FieldElem(std::in_place_index<2>, QuadVal{first, second});
    }
    throw InternalError("unknown field kind");
}

namespace {

// Fraction-free elimination over an integral domain. Ring supplies value
// semantics plus exact division; entries stay minors of the input, so the
// divisions are exact by construction (checked anyway).
template <typename Ring>
std::size_t bareiss_rank(std::vector<typename Ring::T>& m, std::size_t rows, std::size_t cols,
                         const Ring& ring) {
    auto at = [&](std::size_t r, std::size_t c) -> typename Ring::T& { return m[r * cols + c]; };
    std::size_t rank = 0;
    typename Ring::T prev = ring.one();
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t piv = rank;
        while (piv < rows && ring.is_zero(at(piv, col))) ++piv;
        if (piv == rows) continue;
        if (piv != rank)
            for (std::size_t j = 0; j < cols; ++j) std::swap(at(rank, j), at(piv, j));
        for (std::size_t i = rank + 1; i < rows; ++i) {
            for (std::size_t j = col + 1; j < cols; ++j)
                at(i, j) = ring.divexact(
                    ring.sub(ring.mul(at(rank, col), at(i, j)), ring.mul(at(i, col), at(rank, j))),
                    prev);
            at(i, col) = ring.zero();
        }
        prev = at(rank, col);
        ++rank;
    }
    return rank;
}

struct ZRing {
    using T = mpz_class;
    T zero() const { return mpz_class(0); }
    T one() const { return mpz_class(1); }
    bool is_zero(const T& x) const { return sgn(x) == 0; }
    T mul(const T& x, const T& y) const { return x * y; }
    T sub(const T& x, const T& y) const { return x - y; }
    T divexact(const T& x, const T& y) const {
        if (!mpz_divisible_p(x.get_mpz_t(), y.get_mpz_t()))
            throw InternalError("non-exact division in fraction-free elimination");
        mpz_class q;
        mpz_divexact(q.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
        return q;
    }
};

// Z[sqrt(d)] with integer components.
struct ZQuadRing {
    struct T {
        mpz_class a, b;
    };
    mpz_class d;
    T zero() const { return {mpz_class(0), mpz_class(0)}; }
    T one() const { return {mpz_class(1), mpz_class(0)}; }
    bool is_zero(const T& x) const { return sgn(x.a) == 0 && sgn(x.b) == 0; }
    T mul(const T& x, const T& y) const {
        return {mpz_class(x.a * y.a + d * x.b * y.b), mpz_class(x.a * y.b + x.b * y.a)};
    }
    T sub(const T& x, const T& y) const { return {mpz_class(x.a - y.a), mpz_class(x.b - y.b)}; }
    T divexact(const T& x, const T& y) const {
        // x/y = x * conj(y) / norm(y); norm(y) = a^2 - d b^2 is nonzero for
        // nonzero y since d is not a perfect square.
        mpz_class norm(y.a * y.a - d * y.b * y.b);
        if (sgn(norm) == 0) throw InternalError("zero norm in quadratic elimination");
        T num{mpz_class(x.a * y.a - d * x.b * y.b), mpz_class(x.b * y.a - x.a * y.b)};
        ZRing z;
        return {z.divexact(num.a, norm), z.divexact(num.b, norm)};
    }
};

std::size_t rank_gfp(const ConcreteMatrix& M, const Field& F) {
    std::vector<std::uint64_t> m(M.entries.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::get<0>(M.entries[i]);
    std::size_t rows = M.rows, cols = M.cols, rank = 0;
    auto at = [&](std::size_t r, std::size_t c) -> std::uint64_t& { return m[r * cols + c]; };
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t piv = rank;
        while (piv < rows && at(piv, col) == 0) ++piv;
        if (piv == rows) continue;
        if (piv != rank)
            for (std::size_t j = col; j < cols; ++j) std::swap(at(rank, j), at(piv, j));
        std::uint64_t inv = F.mod_inv(at(rank, col));
        for (std::size_t i = rank + 1; i < rows; ++i) {
            if (at(i, col) == 0) continue;
            std::uint64_t f = F.mod_mul(at(i, col), inv);
            for (std::size_t j = col; j < cols; ++j)
                at(i, j) = F.mod_sub(at(i, j), F.mod_mul(f, at(rank, j)));
        }
        ++rank;
    }
    return rank;
}

}  // namespace

std::size_t matrix_rank(const ConcreteMatrix& M, const Field& F) {
    if (M.entries.size() != M.rows * M.cols) throw InternalError("matrix shape mismatch");
    if (M.rows == 0 || M.cols == 0) return 0;
    switch (F.kind()) {
        case FieldKind::GFp:
            return rank_gfp(M, F);
        case FieldKind::Q: {
            // Scaling a row by the lcm of its denominators preserves rank.
            std::vector<mpz_class> m(M.entries.size());
            for (std::size_t r = 0; r < M.rows; ++r) {
                mpz_class l(1);
                for (std::size_t c = 0; c < M.cols; ++c)
                    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(),
                            std::get<1>(M.at(r, c)).get_den_mpz_t());
                for (std::size_t c = 0; c < M.cols; ++c) {
                    mpq_class scaled(std::get<1>(M.at(r, c)) * l);
                    m[r * M.cols + c] = scaled.get_num();
                }
            }
            return bareiss_rank(m, M.rows, M.cols, ZRing{});
        }
        case FieldKind::QSqrt: {
            std::vector<ZQuadRing::T> m(M.entries.size());
            for (std::size_t r = 0; r < M.rows; ++r) {
                mpz_class l(1);
                for (std::size_t c = 0; c < M.cols; ++c) {
                    const auto& q = std::get<2>(M.at(r, c));
                    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.a.get_den_mpz_t());
                    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.b.get_den_mpz_t());
                }
                for (std::size_t c = 0; c < M.cols; ++c) {
                    const auto& q = std::get<2>(M.at(r, c));
                    mpq_class sa(q.a * l), sb(q.b * l);
                    m[r * M.cols + c] = {sa.get_num(), sb.get_num()};
                }
            }
            return bareiss_rank(m, M.rows, M.cols,
                                ZQuadRing{mpz_class(static_cast<unsigned long>(F.spec().d))});
        }
    }
    throw InternalError("unknown field kind");
}

AffineSolutionSpace solve_affine(const ConcreteMatrix& coeffs, const std::vector<FieldElem>& rhs,
                                 const Field& F) {
    if (rhs.size() != coeffs.rows) throw InputError("rhs length does not match row count");
    std::size_t rows = coeffs.rows, cols = coeffs.cols;
    ConcreteMatrix a = coeffs;
    std::vector<FieldElem> b = rhs;

    std::vector<std::size_t> pivot_col;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t piv = rank;
        while (piv < rows && F.is_zero(a.at(piv, col))) ++piv;
        if (piv == rows) continue;
        if (piv != rank) {
            for (std::size_t j = 0; j < cols; ++j) std::swap(a.at(rank, j), a.at(piv, j));
            std::swap(b[rank], b[piv]);
        }
        FieldElem inv = F.inv(a.at(rank, col));
        for (std::size_t j = col; j < cols; ++j) a.at(rank, j) = F.mul(a.at(rank, j), inv);
        b[rank] = F.mul(b[rank], inv);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == rank || F.is_zero(a.at(i, col))) continue;
            FieldElem f = a.at(i, col);
            for (std::size_t j = col; j < cols; ++j)
                a.at(i, j) = F.sub(a.at(i, j), F.mul(f, a.at(rank, j)));
            b[i] = F.sub(b[i], F.mul(f, b[rank]));
        }
        pivot_col.push_back(col);
        ++rank;
    }

    AffineSolutionSpace out;
    out.ambient = cols;
    for (std::size_t i = rank; i < rows; ++i)
        if (!F.is_zero(b[i])) return out;  // 0 = nonzero: inconsistent
    out.empty = false;

    std::vector<bool> is_pivot(cols, false);
    for (std::size_t c : pivot_col) is_pivot[c] = true;

    out.particular.assign(cols, F.zero());
    for (std::size_t r = 0; r < rank; ++r) out.particular[pivot_col[r]] = b[r];

    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<FieldElem> v(cols, F.zero());
        v[f] = F.one();
        for (std::size_t r = 0; r < rank; ++r) v[pivot_col[r]] = F.neg(a.at(r, f));
        out.basis.push_back(std::move(v));
    }
    return out;
}

}  // namespace rankc
