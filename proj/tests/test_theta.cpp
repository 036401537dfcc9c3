#include <cmath>
#include <string>

#include "automorph/theta.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace automorph;

TEST_CASE("theta coefficients")
{
    auto s3 = diagonal_form({1, 1, 1});
    auto r = theta_coeffs(s3, 40);
    CHECK(r[0] == 1);
    CHECK(r[1] == 6);
    CHECK(r[2] == 12);
    CHECK(r[3] == 8);
    CHECK(r[9] == 30);
    CHECK(r == oracle::sum_of_squares_counts(3, 40));
    CHECK(theta_coeffs(diagonal_form({1, 1, 1, 1}), 5)[1] == 8);
    auto q = parse_upper_triangle("3,1,1;4,-2;9");
    CHECK(theta_coeffs(q, 30) == oracle::box_theta(q.gram, 6, 30));
    CHECK_THROWS(theta_coeffs(diagonal_form({1, -1, 1}), 4));
}

TEST_CASE("hecke coefficient maps")
{
    auto s3 = diagonal_form({1, 1, 1});
    auto h3 = hecke_Tp2(s3, 3, 10);
    CHECK(h3[0] == 4);
    CHECK(h3[1] == 24);
    auto h5 = hecke_Tp2(s3, 5, 4);
    CHECK(h5[0] == 6);
    CHECK(h5[1] == 36);
    CHECK_THROWS(hecke_Tp2(s3, 2, 4));
    CHECK_THROWS(hecke_Tp2(diagonal_form({1, 1, 1, 1}), 3, 4));
    CHECK_THROWS(hecke_Tp(s3, 3, 4));

    // weight 2 Eisenstein series: 8 sigma(n) for odd n
    auto t3 = hecke_Tp(diagonal_form({1, 1, 1, 1}), 3, 30);
    CHECK(t3[1] == 32);
    auto r4 = oracle::sum_of_squares_counts(4, 200);
    for (i64 n = 1; n <= 30; ++n) CHECK(t3[n] == r4[3 * n] + (n % 3 == 0 ? 3 * r4[n / 3] : 0));
}

TEST_CASE("eichler commutation")
{
    auto s3 = similarity_system(diagonal_form({1, 1, 1}), {3});
    auto s4 = similarity_system(diagonal_form({1, 1, 1, 1}), {3});
    auto s16 = similarity_system(diagonal_form({1, 1, 16}));
    for (i64 p : {3, 5}) {
        CHECK(verify_eichler(s3, p, 40).ok);
        CHECK(verify_eichler(s4, p, 40).ok);
        auto rep = verify_eichler(s16, p, 30);
        CHECK(rep.ok);
        CHECK_FALSE(rep.first_failure.has_value());
    }
    CHECK_THROWS(verify_eichler(s16, 2, 10));
}

TEST_CASE("generic theta")
{
    auto s3 = similarity_system(diagonal_form({1, 1, 1}), {3});
    auto g = generic_theta(s3, 10);
    CHECK(g[0] == ratio(1, 48));
    CHECK(g[9] == ratio(30, 48));
    auto s16 = similarity_system(diagonal_form({1, 1, 16}));
    auto s4 = similarity_system(diagonal_form({1, 1, 1, 1}), {3});
    for (i64 p : {3, 5, 7}) {
        Rational lam;
        CHECK(verify_generic_eigen(s3, p, 20, &lam));
        CHECK(lam == p + 1);
        CHECK(verify_generic_eigen(s16, p, 20, &lam));
        CHECK(lam == p + 1);
        CHECK(verify_generic_eigen(s4, p, 20, &lam));
        CHECK(lam == p + 1);
    }
}

TEST_CASE("euler products")
{
    auto s3 = similarity_system(diagonal_form({1, 1, 1}), {3});
    auto r3 = oracle::sum_of_squares_counts(3, 27 * 27 * 6);
    for (i64 a : {1, 2, 3, 5, 6}) {
        auto t = euler_expand(s3, a, 5, 27);
        CHECK(t.coeffs.at(1)[0] == ratio(r3[a], 48));
        for (i64 n : {1, 3, 5, 9, 15, 25, 27}) CHECK(t.coeffs.at(n)[0] == ratio(r3[n * n * a], 48));
        CHECK_FALSE(t.coeffs.count(7));
    }
    CHECK(euler_expand(s3, 1, 5, 3).coeffs.at(3)[0] == ratio(30, 48));
    CHECK_THROWS(euler_expand(s3, 4, 5, 9));

    auto s16 = similarity_system(diagonal_form({1, 1, 16}));
    auto tab = theta_table(s16, 15 * 15 * 3);
    for (i64 a : {1, 3}) {
        auto t = euler_expand(s16, a, 5, 15);
        for (const auto& [n, v] : t.coeffs) CHECK(v == tab.normalized(n * n * a));
    }

    auto s4 = similarity_system(diagonal_form({1, 1, 1, 1}), {3});
    auto r4 = oracle::sum_of_squares_counts(4, 27);
    auto t4 = euler_expand(s4, 1, 27, 27);
    CHECK(t4.coeffs.at(3)[0] == ratio(32, 384));
    for (i64 n = 1; n <= 27; n += 2) CHECK(t4.coeffs.at(n)[0] == ratio(r4[n], 384));
}

TEST_CASE("epstein partial sums")
{
    auto s3 = diagonal_form({1, 1, 1});
    CHECK(*epstein_partial(s3, 2, 1).exact == 6);
    CHECK(*epstein_partial(s3, 2, 3).exact == Rational(6) + Rational(3) + ratio(8, 9));
    Rational prev = 0;
    for (i64 N = 1; N <= 12; ++N) {
        Rational v = *epstein_partial(s3, 3, N).exact;
        CHECK(v >= prev);
        prev = v;
    }
    auto half = epstein_partial(s3, ratio(5, 2), 20);
    CHECK_FALSE(half.exact.has_value());
    auto r = oracle::sum_of_squares_counts(3, 20);
    double want = 0;
    for (int n = 1; n <= 20; ++n) want += r[n] / std::pow(n, 2.5);
    CHECK(std::stod(half.decimal) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("three and four squares")
{
    auto rep = shimura_sum_check(21, {1, 2, 3, 5, 6});
    CHECK(rep.kappa == 48);
    CHECK(rep.ok);
    CHECK(rep.rows.size() == 5 * 11);
    // classical form r3(m^2 a) = r3(a) sum mu(d)(-a/d) sigma(m/d)
    auto r3 = oracle::sum_of_squares_counts(3, 21 * 21 * 6);
    for (const auto& row : rep.rows) {
        BigInt s = 0;
        for (i64 d = 1; d <= row.m; ++d)
            if (row.m % d == 0) s += moebius(d) * jacobi(BigInt(static_cast<long>(-row.a)), BigInt(static_cast<long>(d))) * sigma1(row.m / d);
        CHECK(BigInt(static_cast<long>(r3[row.m * row.m * row.a])) == s * r3[row.a]);
        CHECK(row.lhs == ratio(r3[row.m * row.m * row.a], 48));
    }
    CHECK(moebius(1) == 1);
    CHECK(moebius(15) == 1);
    CHECK(moebius(9) == 0);
    CHECK(sigma1(12) == 28);
}
