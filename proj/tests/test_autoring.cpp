#include "automorph/autoring.hpp"
#include "automorph/theta.hpp"
#include "doctest.h"

using namespace automorph;

namespace {

const SimilaritySystem& s3()
{
    static SimilaritySystem s = similarity_system(diagonal_form({1, 1, 1}));
    return s;
}
const SimilaritySystem& s4()
{
    static SimilaritySystem s = similarity_system(diagonal_form({1, 1, 1, 1}));
    return s;
}
const SimilaritySystem& s16()
{
    static SimilaritySystem s = similarity_system(diagonal_form({1, 1, 16}));
    return s;
}

SmallMatrix to_int(const RatMatrix& M)
{
    SmallMatrix R(M.rows(), M.cols());
    for (std::size_t i = 0; i < M.rows(); ++i)
        for (std::size_t j = 0; j < M.cols(); ++j) {
            REQUIRE(M(i, j).get_den() == 1);
            R(i, j) = M(i, j).get_num().get_si();
        }
    return R;
}

}  // namespace

TEST_CASE("ring multiplication")
{
    const auto& sys = s3();
    const auto one = identity_element(sys);
    const auto T = T_star(sys, 3, 2);
    CHECK(multiply(sys, one, T) == T);
    CHECK(multiply(sys, T, one) == T);
    CHECK(pi(identity_element(sys))(0, 0) == 1);
    CHECK(multiply(sys, scalar_element(sys, 3), scalar_element(sys, 3)) == scalar_element(sys, 9));
    CHECK(T.at(0, 0).terms.size() == 4);
    for (const auto& [A, c] : T.at(0, 0).terms) CHECK(c == 1);

    CosetSum bad{0, 1, {}};
    CHECK_THROWS_WITH(multiply(s16(), bad, bad), "class index mismatch");
    CHECK_THROWS_WITH(T_star(sys, 2, 2), "singular prime");
}

TEST_CASE("pi is the Anzahl matrix and multiplicative")
{
    for (const auto* sys : {&s3(), &s16()})
        for (i64 p : {3, 5}) {
            const auto T = T_star(*sys, p, 2);
            CHECK(pi(T) == to_int(anzahl_matrix(*sys, p, 2).entries));
        }
    const auto& sys = s16();
    const auto T3 = T_star(sys, 3, 2), T5 = T_star(sys, 5, 2);
    const auto T35 = multiply(sys, T3, T5), T53 = multiply(sys, T5, T3);
    CHECK(pi(T35) == pi(T3) * pi(T5));
    CHECK(T35 == T53);
    const auto& q3 = s3();
    CHECK(multiply(q3, T_star(q3, 3, 2), T_star(q3, 5, 2)) == multiply(q3, T_star(q3, 5, 2), T_star(q3, 3, 2)));

    const auto T4 = T_star(s4(), 3, 1);
    CHECK(T4.h == 1);
    CHECK(T4.at(0, 0).terms.size() == 8);
    CHECK(pi(T4) == to_int(anzahl_matrix(s4(), 3, 1).entries));
}

TEST_CASE("representation vectors and the action")
{
    const auto& sys = s16();
    const auto table = theta_table(sys, 40);
    for (i64 n = 1; n <= 40; ++n) CHECK(pi(rep_vector(sys, n)) == table.normalized(n));
    const auto v = rep_vector(sys, 6);
    CHECK(act(sys, identity_element(sys), v) == v);
    const auto T3 = T_star(sys, 3, 2), T5 = T_star(sys, 5, 2);
    CHECK(act(sys, multiply(sys, T3, T5), v) == act(sys, T3, act(sys, T5, v)));
    // [p^2] R(a) has the same weights on the scaled orbits
    const auto w = act(sys, scalar_element(sys, 3), v);
    CHECK(pi(w) == pi(v));
    CHECK(act(sys, add(T3, identity_element(sys)), v) == add(act(sys, T3, v), v));

}

TEST_CASE("commutation relations")
{
    auto r = verify_commutation(s3(), 3, 12);
    CHECK(r.ok);
    CHECK(r.rows.size() == 12);
    CHECK(verify_commutation(s3(), 5, 6).ok);
    CHECK(verify_commutation(s16(), 3, 10).ok);
    CHECK(verify_commutation(s4(), 3, 12).ok);
    CHECK(verify_commutation(s4(), 5, 6).ok);
    // a = 7 is not a sum of three squares: only the R(p^2 a) terms survive
    for (const auto& row : r.rows)
        if (row.a == 7) CHECK(row.lhs_orbits == row.rhs_orbits);
    CHECK_THROWS(verify_commutation(s3(), 2, 3));
}

TEST_CASE("three squares at p = 3, a = 1")
{
    const auto& sys = s3();
    const auto R1 = rep_vector(sys, 1);
    CHECK(R1.parts[0].size() == 1);
    CHECK(R1.parts[0].begin()->second == Rational(1, 8));
    // chi = 1 and (2/3) = -1
    const auto lhs = add(rep_vector(sys, 9), scale(act(sys, scalar_element(sys, 3), R1), Rational(-1)));
    CHECK(lhs == act(sys, T_star(sys, 3, 2), R1));
    CHECK(pi(lhs)[0] == ratio(30 - 6, 48));
}

TEST_CASE("five squares: the beta term carries [p]")
{
    const auto sys = similarity_system(diagonal_form({1, 1, 1, 1, 1}), {3});
    REQUIRE(sys.h() == 1);
    CHECK(*local_constants(*sys.forms[0], 3).beta_p != 0);
    const auto r = verify_commutation(sys, 3, 2);
    CHECK(r.ok);
}
