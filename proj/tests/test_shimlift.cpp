#include <random>
#include <set>

#include "automorph/shimlift.hpp"
#include "automorph/theta.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace automorph;

namespace {

struct Systems {
    SimilaritySystem tern, quat;
};

const Systems& squares3()
{
    static Systems s = [] {
        Systems x;
        x.tern = similarity_system(diagonal_form({1, 1, 1}));
        x.quat = norm_system(x.tern);
        return x;
    }();
    return s;
}

const Systems& squares16()
{
    static Systems s = [] {
        Systems x;
        x.tern = similarity_system(diagonal_form({1, 1, 16}));
        x.quat = norm_system(x.tern);
        return x;
    }();
    return s;
}

IntMatrix p_scaled_inverse(const IntMatrix& M, i64 p)
{
    return to_integral(scale(inverse(M), Rational(static_cast<long>(p))));
}

}  // namespace

TEST_CASE("norm systems")
{
    const auto& s3 = squares3();
    CHECK(s3.tern.h() == 1);
    CHECK(s3.quat.h() == 1);
    CHECK(s3.quat.forms[0]->gram == SmallMatrix::scalar(4, 2));
    const auto& s16 = squares16();
    CHECK(s16.tern.h() == 2);
    CHECK(s16.quat.h() >= 2);
    for (std::size_t i = 0; i < s16.tern.h(); ++i) CHECK(s16.quat.forms[i]->gram == norm_form(*s16.tern.forms[i]).gram);
}

TEST_CASE("ideal extension")
{
    for (const auto* sys : {&squares3(), &squares16()}) {
        const auto& q = *sys->tern.forms[0];
        for (i64 p : {3, 5}) {
            const BigInt P(static_cast<long>(p));
            auto classes = ternary_right_classes(sys->tern, p);
            CHECK(classes.size() == static_cast<std::size_t>(p + 1));
            for (const auto& c : classes) {
                IntMatrix A = to_big(c.A);
                for (auto side : {IdealSide::Left, IdealSide::Right}) {
                    auto f = ideal_extension(q, A, p, side);
                    CHECK(f.index == P * P);
                    CHECK(f.form_f.det_q == q.Delta * q.Delta);
                    CHECK(elementary_divisors(f.generator).divisors == std::vector<BigInt>{1, 1, P, P});
                    RatMatrix X = inverse(f.generator) * to_rational(f.psi);
                    CHECK(is_integral(X));
                    CHECK(abs(det(X)) == Rational(P * P));
                    CHECK(hnf(f.generator) == f.generator);
                    // norms of ideal elements are divisible by p
                    auto alg = clifford_algebra(q);
                    std::mt19937_64 rng(p);
                    std::uniform_int_distribution<int> d(-5, 5);
                    for (int k = 0; k < 10; ++k) {
                        std::vector<BigInt> v(4, BigInt(0));
                        for (int j = 0; j < 4; ++j) {
                            int w = d(rng);
                            for (int i = 0; i < 4; ++i) v[i] += w * f.generator(i, j);
                        }
                        CHECK(divides(P, norm_trace(CliffordEven::from_coords(alg, v)).norm));
                    }
                }
                CHECK(divides_left(ideal_extension(q, A, p).generator, q, A, p));
            }
        }
    }
    const auto& q = diagonal_form({1, 1, 1});
    CHECK_THROWS_WITH(ideal_extension(q, scale(IntMatrix::identity(3), BigInt(3)), 3), "requires primitive automorph");
    CHECK_THROWS_WITH(divides_left(scale(IntMatrix::identity(4), BigInt(3)), q, scale(IntMatrix::identity(3), BigInt(3)), 3), "|det M| must be p^2");
}

TEST_CASE("left divisibility and the unique ternary class")
{
    for (const auto* sys : {&squares3(), &squares16()}) {
        const auto& q = *sys->tern.forms[0];
        for (i64 p : {3, 5}) {
            auto tcls = ternary_right_classes(sys->tern, p);
            auto qcls = quaternary_right_classes(sys->quat, p);
            CHECK(qcls.size() == 2 * tcls.size());
            std::map<std::string, int> hits;
            for (const auto& m : qcls) {
                IntMatrix M = to_big(m.M);
                auto a = find_unique_A(M, sys->tern, p);
                auto b = find_unique_A_constructive(M, sys->tern, p);
                CHECK(a == b);
                ++hits[a.key()];
                for (const auto& c : tcls) CHECK(divides_left(M, q, to_big(c.A), p) == divides_left_mod_p(M, q, to_big(c.A), p));
            }
            CHECK(hits.size() == tcls.size());
            for (const auto& [k, v] : hits) CHECK(v == 2);
            for (const auto& c : tcls) {
                IntMatrix A = to_big(c.A);
                int n = 0;
                for (const auto& m : qcls) n += divides_left(to_big(m.M), q, A, p);
                CHECK(n == 2);
                CHECK(find_unique_A(ideal_extension(q, A, p).generator, sys->tern, p) == c);
            }
        }
    }
}

TEST_CASE("upsilon")
{
    for (const auto* sys : {&squares3(), &squares16()}) {
        const auto& q = *sys->tern.forms[0];
        const auto N = even_norm_form(q).N;
        for (i64 p : {3, 5}) {
            std::set<std::string> images;
            std::size_t count = 0;
            for (std::size_t i = 0; i < sys->tern.h(); ++i) {
                const auto& qi = *sys->tern.forms[i];
                auto ms = primitive_filter(automorph_matrices(qi, q, p * p)).primitive;
                for (const auto& A : coset_decompose(ms, unit_group(qi), CosetSide::Left).representatives) {
                    IntMatrix Y = upsilon(qi, to_big(A), p);
                    IntMatrix psi = *psi_lift(qi, to_big(A), p).psi;
                    CHECK(is_integral(to_rational(psi) * inverse(Y)));
                    // Upsilon_A lies in R(f, p n) with f equivalent to some n_j
                    IntMatrix Yi = p_scaled_inverse(Y, p);
                    IntMatrix G = congruent(N, Yi);
                    CHECK(is_zero_mod(G, BigInt(static_cast<long>(p))));
                    auto f = form_from_gram(to_integral(scale(to_rational(G), Rational(1, static_cast<long>(p)))));
                    auto match = locate_class(sys->quat, f);
                    REQUIRE(match.has_value());
                    IntMatrix UY = to_big(match->U) * Y;
                    CHECK(congruent(to_big(sys->quat.forms[match->index]->gram), UY) == scale(N, BigInt(static_cast<long>(p))));
                    auto key = std::to_string(match->index) + ":" + to_string(canonical_left(unit_group(*sys->quat.forms[match->index]), to_small(UY)));
                    images.insert(key);
                    ++count;
                }
            }
            CHECK(count == static_cast<std::size_t>(p + 1));
            CHECK(images.size() == count);
        }
    }
}

TEST_CASE("counting theorem")
{
    const auto& s3 = squares3();
    for (i64 p : {3, 5, 7}) {
        auto r = verify_class_count(s3.tern, s3.quat, p);
        CHECK(r.ok);
        CHECK(r.lhs == p + 1);
        CHECK(r.rhs_count == 2 * (p + 1));
        CHECK(r.chi == 1);
    }
    const auto& s16 = squares16();
    for (i64 p : {3, 5}) CHECK(verify_class_count(s16.tern, s16.quat, p).ok);
}

TEST_CASE("two-fold covering")
{
    for (const auto* sys : {&squares3(), &squares16()})
        for (i64 p : {3, 5}) {
            auto rep = verify_covering(sys->tern, sys->quat, p);
            CHECK(rep.ok());
            CHECK(rep.ternary_classes == static_cast<std::size_t>(p + 1));
            CHECK(rep.quaternary_classes == static_cast<std::size_t>(2 * (p + 1)));
            CHECK(rep.fibers.size() == rep.ternary_classes);
            for (const auto& [k, v] : rep.fibers) CHECK(v.size() == 2);
        }
    CHECK(verify_covering(squares3().tern, 3).ok());
}

TEST_CASE("intertwiner")
{
    const auto& s3 = squares3();
    auto r4 = theta_coeffs(*s3.quat.forms[0], 1);
    RatMatrix X(1, 1);
    X(0, 0) = 1 / ratio(static_cast<long>(r4[1]), static_cast<long>(s3.quat.unit_orders[0]));
    CHECK(X(0, 0) == 48);
    CHECK(intertwiner_check(X, s3.tern, s3.quat, {3, 5}));

    const auto& s16 = squares16();
    const std::size_t h = s16.tern.h(), H = s16.quat.h();
    RatMatrix C(h, H);
    for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < H; ++j) C(i, j) = ratio(1, static_cast<long>(s16.tern.unit_orders[i]));
    CHECK(intertwiner_check(C, s16.tern, s16.quat, {3, 5}));

    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> d(-9, 9);
    RatMatrix R(h, H);
    for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < H; ++j) R(i, j) = d(rng);
    R(0, 0) = 100;
    CHECK_FALSE(intertwiner_check(R, s16.tern, s16.quat, {3}));
    CHECK_THROWS_WITH(intertwiner_check(RatMatrix(2, 2), s3.tern, s3.quat, {3}), "dimension mismatch");
}
