#include <set>

#include "automorph/classes.hpp"
#include "automorph/isosum.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace automorph;

TEST_CASE("equivalence")
{
    QuadraticForm s3 = diagonal_form({1, 1, 1});
    auto U = is_equivalent(s3, s3);
    REQUIRE(U.has_value());
    CHECK(congruent(s3.gram, *U) == s3.gram);
    QuadraticForm a = diagonal_form({1, 1, 2}), b = diagonal_form({1, 2, 1});
    auto V = is_equivalent(a, b);
    REQUIRE(V.has_value());
    CHECK(congruent(a.gram, *V) == b.gram);
    CHECK(std::abs(det(*V)) == 1);
    CHECK_FALSE(is_equivalent(diagonal_form({1, 1, 16}), parse_upper_triangle("2,0,-2;2,2;5")).has_value());
    CHECK_THROWS_WITH(is_equivalent(diagonal_form({1, -1, 1}), s3), "enumeration requires positive definite");

    for (const char* text : {"3,1,1;4,-2;9", "1,1,0;5,3;7", "2,1,1,1;2,1,1;3,1;4"}) {
        QuadraticForm q = parse_upper_triangle(text);
        ReducedForm r = reduce_form(q);
        CHECK(congruent(q.gram, r.U) == r.form.gram);
        CHECK(std::abs(det(r.U)) == 1);
        CHECK(is_equivalent(q, r.form).has_value());
    }
}

TEST_CASE("similarity systems")
{
    auto s3 = similarity_system(diagonal_form({1, 1, 1}), {3});
    CHECK(s3.h() == 1);
    CHECK(s3.unit_orders[0] == 48);
    auto s4 = similarity_system(diagonal_form({1, 1, 1, 1}), {3});
    CHECK(s4.h() == 1);
    auto s16 = similarity_system(diagonal_form({1, 1, 16}));
    CHECK(s16.h() == 2);
    for (std::size_t i = 0; i < s16.h(); ++i) {
        CHECK(s16.forms[i]->det_q == 128);
        for (std::size_t j = i + 1; j < s16.h(); ++j) CHECK_FALSE(is_equivalent(*s16.forms[i], *s16.forms[j]).has_value());
    }
    CHECK(locate_class(s16, diagonal_form({1, 16, 1}))->index == 0);
    CHECK_THROWS_WITH(similarity_system(diagonal_form({1, 1, 3}), {3}), "singular prime");
}

TEST_CASE("anzahl matrices")
{
    auto s3 = similarity_system(diagonal_form({1, 1, 1}), {3});
    auto A = anzahl_matrix(s3, 3, 2);
    CHECK(A.entries(0, 0) == 4);
    auto s4 = similarity_system(diagonal_form({1, 1, 1, 1}), {3});
    CHECK(anzahl_matrix(s4, 3, 1).entries(0, 0) == 8);
    CHECK_THROWS_AS(anzahl_matrix(s4, 3, 2), std::invalid_argument);

    auto s16 = similarity_system(diagonal_form({1, 1, 16}));
    for (i64 p : {3, 5}) {
        auto T = anzahl_matrix(s16, p, 2);
        // (1,..,1) t* = lambda (1,..,1) with lambda = c(1+p) + beta = p + 1 for ternary forms
        for (std::size_t j = 0; j < s16.h(); ++j) {
            Rational col = 0;
            for (std::size_t i = 0; i < s16.h(); ++i) {
                CHECK(T.entries(i, j) >= 0);
                col += T.entries(i, j);
            }
            CHECK(col == p + 1);
        }
    }
    // commute for distinct primes
    auto T3 = anzahl_matrix(s16, 3, 2).entries, T5 = anzahl_matrix(s16, 5, 2).entries;
    CHECK(T3 * T5 == T5 * T3);
}

TEST_CASE("isotropic sums split over the similarity system")
{
    // the coset count equals the sum over classes of right cosets modulo E(q_i)
    for (const char* text : {"1,0,0;1,0;16", "1,0,0;2,0;7", "1,0,0;1,0;1"}) {
        QuadraticForm q = parse_upper_triangle(text);
        auto sys = similarity_system(q);
        for (i64 p : {3, 5}) {
            if (divides(BigInt(static_cast<long>(p)), q.det_q)) continue;
            std::vector<std::vector<SmallMatrix>> prim(sys.h());
            for (std::size_t i = 0; i < sys.h(); ++i)
                prim[i] = primitive_filter(automorph_matrices(q, *sys.forms[i], p * p)).primitive;
            for (const IntVec& K : {IntVec{0, 0, 0}, IntVec{p, 0, 0}, IntVec{1, 0, 0}, IntVec{p, p * 2, 0}}) {
                if (!divides(BigInt(static_cast<long>(p * p)), evaluate(q, to_big(K)))) continue;
                BigInt lhs = 0;
                for (std::size_t i = 0; i < sys.h(); ++i) {
                    auto cl = coset_decompose(prim[i], unit_group(*sys.forms[i]), CosetSide::Right);
                    for (const auto& M : cl.representatives)
                        if (divides_vector(M, K)) ++lhs;
                }
                CHECK(lhs == brute_isotropic_sum_p2(q, 1, K, p));
                CHECK(Rational(lhs) == summed_isotropic_p2(q, K, p));
            }
        }
    }
}
