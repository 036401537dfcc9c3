#include <random>

#include "automorph/qform.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace automorph;

TEST_CASE("make_form derived data")
{
    QuadraticForm s3 = diagonal_form({1, 1, 1});
    CHECK(s3.Q == IntMatrix::scalar(3, 2));
    CHECK(s3.det_q == 8);
    CHECK(s3.Delta == 4);
    CHECK(s3.B == std::vector<BigInt>{0, 0, 0});
    CHECK(s3.level == 4);

    QuadraticForm f = parse_upper_triangle("1,1,0;1,0;1");
    CHECK(f.Q == IntMatrix::from_rows({{2, 1, 0}, {1, 2, 0}, {0, 0, 2}}));
    CHECK(f.B == std::vector<BigInt>{0, 0, -1});
    CHECK(f.det_q == 6);
    CHECK(f.Delta == 3);

    QuadraticForm ind = diagonal_form({1, -1, 1});
    CHECK(ind.det_q == -8);
    CHECK_FALSE(is_positive_definite(ind));
    CHECK_THROWS_WITH(parse_upper_triangle("1,2;1"), "singular form");
    CHECK(parse_upper_triangle("1,0,0;1,0;1") == s3);
}

TEST_CASE("level is minimal with l Q^-1 even")
{
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> c(-4, 4);
    for (int it = 0; it < 100; ++it) {
        IntMatrix q0(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) q0(i, j) = c(rng);
        IntMatrix Q = q0 + q0.transpose();
        if (det(Q) == 0) continue;
        QuadraticForm q = make_form(q0);
        RatMatrix inv = inverse(Q);
        auto even = [&](const BigInt& l) {
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j) {
                    Rational x = inv(i, j) * Rational(l);
                    if (x.get_den() != 1) return false;
                    if (i == j && !divides(BigInt(2), x.get_num())) return false;
                }
            return true;
        };
        CHECK(even(q.level));
        for (BigInt l = 1; l < q.level; ++l) CHECK_FALSE(even(l));
        CHECK(q.det_q == 2 * (4 * det(q0) - congruent(q0, IntMatrix::column(q.B))(0, 0)));
    }
}

TEST_CASE("evaluate")
{
    QuadraticForm s3 = diagonal_form({1, 1, 1});
    CHECK(evaluate(s3, IntVec{1, 0, 0}) == 1);
    CHECK(evaluate(s3, IntVec{1, 2, 2}) == 9);
    CHECK(evaluate(parse_upper_triangle("1,1,0;1,0;1"), IntVec{1, 1, 0}) == 3);
}

TEST_CASE("characters")
{
    QuadraticForm s3 = diagonal_form({1, 1, 1});
    CHECK(character(s3, 3) == 1);
    CHECK(character(s3, 5) == -1);
    CHECK(epsilon(1, 3) == -1);
    CHECK(epsilon(7, 7) == 0);
    CHECK(epsilon(1, 7) == 1);
    CHECK_THROWS_WITH(character(s3, 2), "even prime unsupported");
    for (i64 p : {3, 5, 7, 11, 13, 101, 10007}) {
        for (long a = -50; a <= 50; ++a) CHECK(legendre(a, p) == oracle::euler_legendre(a, p));
    }
    // Jacobi agrees with the product of Legendre symbols
    for (long a = -30; a <= 30; ++a) CHECK(jacobi(a, 45) == legendre(a, 3) * legendre(a, 3) * legendre(a, 5));
}

TEST_CASE("local constants")
{
    QuadraticForm s3 = diagonal_form({1, 1, 1});
    for (i64 p : {3, 5, 7, 11}) {
        auto lc = local_constants(s3, p);
        CHECK(lc.c_p == 1);
        CHECK(*lc.beta_p == 0);
        CHECK(lc.chi * lc.chi == 1);
    }
    QuadraticForm s4 = diagonal_form({1, 1, 1, 1});
    auto lc4 = local_constants(s4, 3);
    CHECK(lc4.chi == 1);
    CHECK(lc4.c_p == 2);
    CHECK_FALSE(lc4.beta_p.has_value());
    QuadraticForm s5 = diagonal_form({1, 1, 1, 1, 1});
    auto lc5 = local_constants(s5, 3);
    CHECK(lc5.c_p == 5);
    CHECK(*lc5.beta_p == 20);
    CHECK_THROWS_WITH(local_constants(diagonal_form({1, 1, 3}), 3), "singular prime");
}

TEST_CASE("alpha and kappa")
{
    for (i64 p : {3, 5, 7, 11}) {
        auto ak = alpha_kappa(3, 1, p);
        CHECK(ak.alpha == 1);
        CHECK(ak.kappa == 0);
    }
    auto a51 = alpha_kappa(5, 1, 3);
    CHECK(a51.alpha == 1);
    CHECK(a51.kappa == 12);
    auto a52 = alpha_kappa(5, 2, 3);
    CHECK(a52.alpha == 4);  // p + 1
    CHECK(a52.kappa == 2);
    CHECK_THROWS_AS(alpha_kappa(5, 3, 3), std::out_of_range);
    // sum_d alpha = c_p and sum_d alpha*kappa = beta_p
    for (int m : {3, 5, 7, 9})
        for (i64 p : {3, 5, 7}) {
            Rational sa = 0, sak = 0;
            for (int d = 1; d <= (m - 1) / 2; ++d) {
                auto ak = alpha_kappa(m, d, p);
                CHECK(ak.alpha.get_den() == 1);
                sa += ak.alpha;
                sak += ak.alpha * ak.kappa;
            }
            CHECK(sa == c_constant(m, p, 1));
            CHECK(sak == *beta_constant(m, p));
        }
}

TEST_CASE("kronecker indicator and gaussian binomials")
{
    CHECK(kronecker_indicator(RatMatrix::identity(3)) == 1);
    CHECK(kronecker_indicator(RatMatrix::scalar(3, Rational(1, 3))) == 0);
    CHECK(kronecker_indicator(RatMatrix::column({Rational(9, 3), Rational(3, 3)})) == 1);
    CHECK(gaussian_binomial(4, 2, 3) == 130);
    CHECK(gaussian_binomial(2, 1, 5) == 6);
}
