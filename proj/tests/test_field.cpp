#include <doctest.h>

#include <random>

#include "rankc/field.hpp"
#include "rankc/serialize.hpp"
#include "testutil.hpp"

using namespace rankc;

TEST_SUITE("field") {

TEST_CASE("primality and square-freeness") {
    for (std::uint32_t p : {2u, 3u, 5u, 7u, 31u, 97u, 2147483629u, 2147483647u})
        CHECK(is_prime_u32(p));
    for (std::uint32_t n : {0u, 1u, 4u, 9u, 91u, 561u, 2047u, 1373653u})
        CHECK_FALSE(is_prime_u32(n));
    for (std::uint32_t d : {2u, 3u, 5u, 6u, 7u, 10u, 15u, 2021u})
        CHECK(is_square_free_u32(d));
    for (std::uint32_t d : {4u, 8u, 9u, 12u, 18u, 25u, 50u})
        CHECK_FALSE(is_square_free_u32(d));
}

TEST_CASE("field spec parsing round-trips") {
    for (const char* name : {"gf2", "gf3", "gf5", "gf7", "gf2147483647", "q", "qsqrt2", "qsqrt15"}) {
        FieldSpec s = FieldSpec::parse(name);
        CHECK(s.name() == name);
        CHECK(FieldSpec::parse(s.name()) == s);
    }
    CHECK(FieldSpec::parse("gf7") == FieldSpec::gf(7));
    CHECK(FieldSpec::parse("q") == FieldSpec::q());
    CHECK(FieldSpec::parse("qsqrt2") == FieldSpec::qsqrt(2));
    for (const char* bad : {"", "gf", "gf0", "gf1", "gf4", "gf9", "gf4294967291", "gf2147483648",
                            "qsqrt", "qsqrt0", "qsqrt1", "qsqrt4", "qsqrt12", "QSQRT2", "gf-3",
                            "gf3x", "rationals"})
        CHECK_THROWS_AS(FieldSpec::parse(bad), InputError);
}

TEST_CASE("field construction validates the spec") {
    CHECK_THROWS_AS(Field(FieldSpec::gf(6)), InputError);
    CHECK_THROWS_AS(Field(FieldSpec::qsqrt(9)), InputError);
    CHECK_NOTHROW(Field(FieldSpec::gf(2)));
    CHECK_NOTHROW(Field(FieldSpec::qsqrt(5)));
}

TEST_CASE("prime field arithmetic") {
    for (std::uint32_t p : {2u, 3u, 5u, 7u, 101u}) {
        Field F{FieldSpec::gf(p)};
        for (std::uint64_t a = 0; a < p; ++a) {
            FieldElem x = F.from_int(static_cast<long>(a));
            CHECK(F.eq(F.add(x, F.zero()), x));
            CHECK(F.eq(F.mul(x, F.one()), x));
            CHECK(F.is_zero(F.add(x, F.neg(x))));
            if (a != 0) {
                CHECK(F.eq(F.mul(x, F.inv(x)), F.one()));
                CHECK(F.eq(F.div(F.one(), x), F.inv(x)));
            }
        }
        CHECK_THROWS_AS(F.inv(F.zero()), InputError);
    }
    Field big{FieldSpec::gf(2147483629)};
    FieldElem a = big.from_int(1234567891);
    FieldElem b = big.from_int(-2);
    CHECK(big.eq(b, big.from_int(2147483627)));
    CHECK(big.eq(big.mul(a, big.inv(a)), big.one()));
    CHECK(big.eq(big.mul(big.from_int(65536), big.from_int(65536)),
                 big.from_mpz(mpz_class(65536) * 65536 % 2147483629)));
}

TEST_CASE("rational arithmetic stays reduced") {
    Field F{FieldSpec::q()};
    FieldElem third = F.div(F.one(), F.from_int(3));
    FieldElem sixth = F.div(F.one(), F.from_int(6));
    FieldElem half = F.add(third, sixth);
    CHECK(F.to_string(half) == "1/2");
    CHECK(F.eq(F.mul(half, F.from_int(2)), F.one()));
    CHECK(F.to_string(F.neg(half)) == "-1/2");
    CHECK(F.to_string(F.from_int(-7)) == "-7");
    CHECK(F.is_zero(F.sub(half, half)));
    CHECK_THROWS_AS(F.div(F.one(), F.zero()), InputError);
}

TEST_CASE("quadratic extension arithmetic") {
    Field F{FieldSpec::qsqrt(2)};
    FieldElem rt = normalize_elem(RawElem{0, 1, 1, 1}, F);  // sqrt(2)
    CHECK(F.eq(F.mul(rt, rt), F.from_int(2)));
    FieldElem x = F.add(F.one(), rt);                        // 1 + sqrt(2)
    FieldElem conj = F.sub(rt, F.one());                     // -1 + sqrt(2)
    CHECK(F.eq(F.mul(x, conj), F.one()));
    CHECK(F.eq(F.inv(x), conj));
    CHECK(F.eq(F.div(F.one(), rt), F.mul(rt, F.inv(F.from_int(2)))));
    CHECK(F.to_string(rt) == "sqrt(2)");
    CHECK(F.to_string(x) == "1+sqrt(2)");
    CHECK_THROWS_AS(F.inv(F.zero()), InputError);

    // (a + b*sqrt(2)) has zero norm only at zero, so every nonzero element
    // inverts even when both components are nonzero.
    FieldElem y = normalize_elem(RawElem{3, 2, -5, 7}, F);
    CHECK(F.eq(F.mul(y, F.inv(y)), F.one()));
}

TEST_CASE("raw element normalization") {
    Field gf7{FieldSpec::gf(7)};
    CHECK(gf7.eq(normalize_elem(RawElem{-1}, gf7), gf7.from_int(6)));
    CHECK(gf7.eq(normalize_elem(RawElem{23}, gf7), gf7.from_int(2)));
    CHECK_THROWS_AS(normalize_elem(RawElem{mpz_class(1), mpz_class(2)}, gf7), InputError);
    CHECK_THROWS_AS(normalize_elem(RawElem{0, 1, 1, 1}, gf7), InputError);

    Field q{FieldSpec::q()};
    FieldElem e = normalize_elem(RawElem{mpz_class(4), mpz_class(-6)}, q);
    CHECK(q.to_string(e) == "-2/3");
    CHECK_THROWS_AS(normalize_elem(RawElem{mpz_class(1), mpz_class(0)}, q), InputError);
    CHECK_THROWS_AS(normalize_elem(RawElem{0, 1, 1, 1}, q), InputError);

    Field ext{FieldSpec::qsqrt(3)};
    FieldElem f = normalize_elem(RawElem{2, 4, -3, -9}, ext);
    CHECK(ext.to_string(f) == "1/2+1/3*sqrt(3)");
}

TEST_CASE("matrix rank matches the minor oracle") {
    std::mt19937_64 rng(20240811);
    Field F{FieldSpec::gf(5)};
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
        ConcreteMatrix M = testutil::rand_matrix(r, c, F, rng);
        CHECK(matrix_rank(M, F) == testutil::rank_by_minors(M, F));
    }

    Field q{FieldSpec::q()};
    for (int trial = 0; trial < 20; ++trial) {
        ConcreteMatrix M(3, 3, q);
        for (auto& e : M.entries) {
            long num = static_cast<long>(rng() % 9) - 4;
            long den = 1 + static_cast<long>(rng() % 4);
            e = q.div(q.from_int(num), q.from_int(den));
        }
        CHECK(matrix_rank(M, q) == testutil::rank_by_minors(M, q));
    }
}

TEST_CASE("matrix rank edge cases") {
    Field F{FieldSpec::gf(7)};
    ConcreteMatrix Z(3, 5, F);
    CHECK(matrix_rank(Z, F) == 0);

    ConcreteMatrix I(4, 4, F);
    for (std::size_t i = 0; i < 4; ++i) I.at(i, i) = F.one();
    CHECK(matrix_rank(I, F) == 4);

    // Outer product, then a duplicated row: rank stays 1.
    ConcreteMatrix M(3, 3, F);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            M.at(i, j) = F.mul(F.from_int(static_cast<long>(i + 1)),
                               F.from_int(static_cast<long>(j + 2)));
    CHECK(matrix_rank(M, F) == 1);

    // Rank over GF(2) can drop where the rational rank does not.
    Field gf2{FieldSpec::gf(2)};
    ConcreteMatrix P(2, 2, gf2);
    P.at(0, 0) = P.at(0, 1) = P.at(1, 0) = P.at(1, 1) = gf2.one();
    CHECK(matrix_rank(P, gf2) == 1);
}

TEST_CASE("affine solver on a unique system") {
    Field F{FieldSpec::gf(7)};
    // x + 2y = 5, 3x + y = 4  =>  x = 2, y = 5 over GF(7).
    ConcreteMatrix A(2, 2, F);
    A.at(0, 0) = F.from_int(1);
    A.at(0, 1) = F.from_int(2);
    A.at(1, 0) = F.from_int(3);
    A.at(1, 1) = F.from_int(1);
    auto sol = solve_affine(A, {F.from_int(5), F.from_int(4)}, F);
    REQUIRE_FALSE(sol.empty);
    CHECK(sol.ambient == 2);
    CHECK(sol.basis.empty());
    CHECK(F.eq(sol.particular[0], F.from_int(2)));
    CHECK(F.eq(sol.particular[1], F.from_int(5)));
}

TEST_CASE("affine solver reports inconsistency") {
    Field F{FieldSpec::q()};
    ConcreteMatrix A(2, 1, F);
    A.at(0, 0) = F.one();
    A.at(1, 0) = F.one();
    auto sol = solve_affine(A, {F.one(), F.from_int(2)}, F);
    CHECK(sol.empty);
}

TEST_CASE("affine solver basis spans the homogeneous solutions") {
    std::mt19937_64 rng(77);
    Field F{FieldSpec::gf(3)};
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t rows = 1 + rng() % 3, cols = 1 + rng() % 4;
        ConcreteMatrix A = testutil::rand_matrix(rows, cols, F, rng);
        // Right side in the column span by construction.
        std::vector<FieldElem> x0 = testutil::rand_vector(cols, F, rng);
        std::vector<FieldElem> rhs(rows, F.zero());
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j)
                rhs[i] = F.add(rhs[i], F.mul(A.at(i, j), x0[j]));

        auto sol = solve_affine(A, rhs, F);
        REQUIRE_FALSE(sol.empty);
        CHECK(sol.basis.size() == cols - matrix_rank(A, F));

        auto residual = [&](const std::vector<FieldElem>& x, bool homogeneous) {
            for (std::size_t i = 0; i < rows; ++i) {
                FieldElem acc = F.zero();
                for (std::size_t j = 0; j < cols; ++j)
                    acc = F.add(acc, F.mul(A.at(i, j), x[j]));
                if (!homogeneous) acc = F.sub(acc, rhs[i]);
                if (!F.is_zero(acc)) return false;
            }
            return true;
        };
        CHECK(residual(sol.particular, false));
        for (const auto& b : sol.basis) CHECK(residual(b, true));

        // Basis vectors are linearly independent.
        if (!sol.basis.empty()) {
            ConcreteMatrix B(sol.basis.size(), cols, F);
            for (std::size_t i = 0; i < sol.basis.size(); ++i)
                for (std::size_t j = 0; j < cols; ++j) B.at(i, j) = sol.basis[i][j];
            CHECK(matrix_rank(B, F) == sol.basis.size());
        }
    }
}

TEST_CASE("affine solver over the quadratic extension") {
    Field F{FieldSpec::qsqrt(2)};
    FieldElem rt = normalize_elem(RawElem{0, 1, 1, 1}, F);
    // x + sqrt(2) y = 3  has a one-dimensional solution set.
    ConcreteMatrix A(1, 2, F);
    A.at(0, 0) = F.one();
    A.at(0, 1) = rt;
    auto sol = solve_affine(A, {F.from_int(3)}, F);
    REQUIRE_FALSE(sol.empty);
    CHECK(sol.basis.size() == 1);
    FieldElem recon = F.add(sol.particular[0], F.mul(rt, sol.particular[1]));
    CHECK(F.eq(recon, F.from_int(3)));
    FieldElem hom = F.add(sol.basis[0][0], F.mul(rt, sol.basis[0][1]));
    CHECK(F.is_zero(hom));
}

TEST_CASE("laplace determinant sanity") {
    Field F{FieldSpec::gf(7)};
    ConcreteMatrix M(3, 3, F);
    long vals[9] = {2, 0, 1, 3, 1, 4, 0, 5, 6};
    for (std::size_t i = 0; i < 9; ++i) M.entries[i] = F.from_int(vals[i]);
    // det = 2*(6-20) - 0 + 1*15 = -13 = 1 mod 7.
    CHECK(F.eq(testutil::det_laplace(M, F), F.one()));
}

TEST_CASE("field json round-trips and rejections") {
    for (const char* name : {"gf7", "q", "qsqrt2"}) {
        FieldSpec s = FieldSpec::parse(name);
        CHECK(field_from_json(field_to_json(s)) == s);
    }
    CHECK_THROWS_AS(field_from_json(parse_json(R"({"kind":"gfp","p":6})")), InputError);
    CHECK_THROWS_AS(field_from_json(parse_json(R"({"kind":"real"})")), InputError);
    CHECK_THROWS_AS(field_from_json(parse_json(R"({"p":7})")), InputError);
    CHECK_THROWS_AS(field_from_json(parse_json("[]")), InputError);
}

TEST_CASE("element json is canonical") {
    Field gf7{FieldSpec::gf(7)};
    CHECK(elem_to_json(gf7.from_int(3), gf7) == nlohmann::json(3));
    CHECK(gf7.eq(elem_from_json(nlohmann::json(6), gf7), gf7.from_int(-1)));
    CHECK_THROWS_AS(elem_from_json(nlohmann::json(7), gf7), InputError);
    CHECK_THROWS_AS(elem_from_json(nlohmann::json(-1), gf7), InputError);
    CHECK_THROWS_AS(elem_from_json(nlohmann::json("3"), gf7), InputError);

    Field q{FieldSpec::q()};
    FieldElem half = q.div(q.one(), q.from_int(2));
    CHECK(elem_to_json(half, q) == nlohmann::json("1/2"));
    CHECK(q.eq(elem_from_json(nlohmann::json("1/2"), q), half));
    CHECK_THROWS_AS(elem_from_json(nlohmann::json("2/4"), q), InputError);
    CHECK_THROWS_AS(elem_from_json(nlohmann::json("1/-2"), q), InputError);
    CHECK_THROWS_AS(elem_from_json(nlohmann::json("1/0"), q), InputError);
    CHECK_THROWS_AS(elem_from_json(nlohmann::json("0x2"), q), InputError);

    Field ext{FieldSpec::qsqrt(2)};
    FieldElem rt = normalize_elem(RawElem{0, 1, 1, 1}, ext);
    nlohmann::json j = elem_to_json(rt, ext);
    CHECK(j.is_array());
    CHECK(ext.eq(elem_from_json(j, ext), rt));
    CHECK_THROWS_AS(elem_from_json(parse_json(R"(["1"])"), ext), InputError);
    CHECK_THROWS_AS(elem_from_json(parse_json(R"(["1","2/4"])"), ext), InputError);
}

TEST_CASE("matrix json round-trips") {
    std::mt19937_64 rng(5);
    Field F{FieldSpec::gf(5)};
    ConcreteMatrix M = testutil::rand_matrix(3, 4, F, rng);
    nlohmann::json j = matrix_to_json(M, F);
    auto [back, spec] = matrix_from_json(j);
    CHECK(spec == F.spec());
    CHECK(back.rows == 3);
    CHECK(back.cols == 4);
    for (std::size_t i = 0; i < M.entries.size(); ++i)
        CHECK(F.eq(back.entries[i], M.entries[i]));
    CHECK(matrix_to_json(back, F) == j);

    nlohmann::json bad = j;
    bad["entries"].erase(0);
    CHECK_THROWS_AS(matrix_from_json(bad), InputError);
    CHECK_THROWS_AS(parse_json("{not json"), InputError);
}

}  // TEST_SUITE("field")
