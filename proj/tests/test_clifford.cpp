#include <random>
#include <set>

#include "automorph/clifford.hpp"
#include "automorph/classes.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace automorph;

namespace {

QuadraticForm random_ternary(std::mt19937_64& rng)
{
    for (;;) {
        IntMatrix q0 = oracle::random_matrix(rng, 3, 3, -3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < i; ++j) q0(i, j) = 0;
        if (det(q0.transpose() + q0) != 0) return make_form(q0);
    }
}

IntMatrix random_nonsingular(std::mt19937_64& rng, int lo, int hi)
{
    for (;;) {
        IntMatrix A = oracle::random_matrix(rng, 3, 3, lo, hi);
        if (det(A) != 0) return A;
    }
}

CliffordElement random_element(std::mt19937_64& rng, AlgebraPtr a)
{
    std::uniform_int_distribution<int> d(-4, 4);
    auto x = CliffordElement::zero(a);
    for (auto& c : x.c) c = d(rng);
    return x;
}

CliffordEven random_even(std::mt19937_64& rng, AlgebraPtr a)
{
    std::uniform_int_distribution<int> d(-4, 4);
    return CliffordEven::from_coords(a, {d(rng), d(rng), d(rng), d(rng)});
}

// Phi computed by pushing the natural basis through the algebra map
IntMatrix phi_via_algebra(const QuadraticForm& q, const IntMatrix& A)
{
    auto q2 = image_form(q, A);
    auto alg2 = clifford_algebra(q2);
    IntMatrix phi(4, 4);
    for (int j = 0; j < 4; ++j) {
        std::vector<BigInt> e(4, BigInt(0));
        e[j] = 1;
        auto img = CliffordEven::from_full(lift_element(q, A, CliffordEven::from_coords(alg2, e).full()));
        for (int i = 0; i < 4; ++i) phi(i, j) = img.x[i];
    }
    return phi;
}

IntMatrix imat(std::initializer_list<std::initializer_list<long>> rows)
{
    std::vector<std::vector<BigInt>> r;
    for (auto row : rows) {
        r.emplace_back();
        for (long v : row) r.back().push_back(v);
    }
    return IntMatrix::from_rows(r);
}

}  // namespace

TEST_CASE("clifford multiplication")
{
    auto q = parse_upper_triangle("2,3,-1;5,4;7");
    auto a = clifford_algebra(q);
    auto e1 = CliffordElement::basis(a, 1), e2 = CliffordElement::basis(a, 2);
    CHECK(clifford_multiply(e1, e1) == BigInt(2) * CliffordElement::basis(a, 0));
    CHECK(clifford_multiply(e2, e1) == BigInt(3) * CliffordElement::basis(a, 0) - CliffordElement::basis(a, 4));

    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> d(-5, 5);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<BigInt> x{d(rng), d(rng), d(rng)}, y{d(rng), d(rng), d(rng)};
        auto xy = clifford_multiply(CliffordElement::vector(a, x), CliffordElement::vector(a, y));
        BigInt want = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) want += y[i] * q.q0(i, j) * x[j];
        CHECK(xy.c[0] == want);
        CHECK(xy.c[6] == x[1] * y[2] - x[2] * y[1]);
        CHECK(xy.c[5] == -(x[2] * y[0] - x[0] * y[2]));
        CHECK(xy.c[4] == x[0] * y[1] - x[1] * y[0]);
        // x^2 = q(x)
        auto xx = clifford_multiply(CliffordElement::vector(a, x), CliffordElement::vector(a, x));
        CHECK(xx == evaluate(q, x) * CliffordElement::basis(a, 0));
    }

    for (int f = 0; f < 20; ++f) {
        auto qr = random_ternary(rng);
        auto ar = clifford_algebra(qr);
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) {
                auto bi = CliffordElement::basis(ar, i), bj = CliffordElement::basis(ar, j);
                CHECK(bar(clifford_multiply(bi, bj)) == clifford_multiply(bar(bj), bar(bi)));
                for (int k = 0; k < 8; ++k) {
                    auto bk = CliffordElement::basis(ar, k);
                    CHECK(clifford_multiply(clifford_multiply(bi, bj), bk) == clifford_multiply(bi, clifford_multiply(bj, bk)));
                }
            }
        auto x = random_element(rng, ar);
        CHECK(bar(bar(x)) == x);
    }
    CHECK_THROWS_WITH(clifford_multiply(e1, CliffordElement::basis(clifford_algebra(diagonal_form({1, 1, 1})), 1)), "parent form mismatch");
}

TEST_CASE("involution, norm and trace")
{
    auto s3 = clifford_algebra(diagonal_form({1, 1, 1}));
    auto e0 = CliffordEven::from_coords(s3, {1, 0, 0, 0});
    CHECK(bar(e0) == e0);
    auto e23 = CliffordEven::from_coords(s3, {0, 1, 0, 0});
    CHECK(bar(e23) == CliffordEven::from_coords(s3, {0, -1, 0, 0}));
    CHECK(norm_trace(e0).norm == 1);
    CHECK(norm_trace(e0).trace == 2);
    CHECK(norm_trace(e23).norm == 1);
    CHECK(norm_trace(e23).trace == 0);

    auto q = parse_upper_triangle("1,5,0;1,0;1");
    auto a = clifford_algebra(q);
    CHECK(bar(CliffordEven::from_coords(a, {0, 0, 0, 1})) == CliffordEven::from_coords(a, {5, 0, 0, -1}));

    std::mt19937_64 rng(5);
    for (int f = 0; f < 20; ++f) {
        auto qr = random_ternary(rng);
        auto ar = clifford_algebra(qr);
        for (int i = 0; i < 5; ++i) {
            auto x = random_even(rng, ar), y = random_even(rng, ar);
            CHECK(bar(x).full() == bar(x.full()));
            auto nx = norm_trace(x), ny = norm_trace(y);
            CHECK(norm_trace(even_multiply(x, y)).norm == nx.norm * ny.norm);
            auto x2 = even_multiply(x, x);
            for (int k = 0; k < 4; ++k) {
                BigInt v = x2.x[k] - nx.trace * x.x[k] + (k == 0 ? nx.norm : BigInt(0));
                CHECK(v == 0);
            }
        }
    }
}

TEST_CASE("even norm form")
{
    auto s3 = diagonal_form({1, 1, 1});
    CHECK(even_norm_form(s3).N == IntMatrix::scalar(4, BigInt(2)));
    auto q = parse_upper_triangle("1,1,0;1,0;1");
    auto f = even_norm_form(q);
    CHECK(f.N(1, 0) == 0);
    CHECK(f.N(2, 0) == 0);
    CHECK(f.N(3, 0) == 1);
    CHECK(f.Delta == 3);

    std::mt19937_64 rng(7);
    for (int k = 0; k < 20; ++k) {
        auto qr = random_ternary(rng);
        auto nf = even_norm_form(qr);
        CHECK(det(nf.N) == qr.Delta * qr.Delta);
        CHECK(to_rational(nf.N) * nf.N_inv == RatMatrix::identity(4));
        // N_ij = s(b_i bar(b_j)) over the natural basis
        auto a = clifford_algebra(qr);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                std::vector<BigInt> u(4, BigInt(0)), v(4, BigInt(0));
                u[i] = 1;
                v[j] = 1;
                auto prod = even_multiply(CliffordEven::from_coords(a, u), bar(CliffordEven::from_coords(a, v)));
                CHECK(norm_trace(prod).trace == nf.N(i, j));
            }
    }
}

TEST_CASE("special element and Et")
{
    auto s3 = diagonal_form({1, 1, 1});
    auto t = special_t(s3);
    CHECK(t.c[7] == 2);
    for (int i = 0; i < 7; ++i) CHECK(t.c[i] == 0);
    auto q = parse_upper_triangle("1,1,0;1,0;1");
    auto t2 = special_t(q);
    CHECK(t2.c[7] == 2);
    CHECK(t2.c[1] == 0);
    CHECK(t2.c[2] == 0);
    CHECK(t2.c[3] == -1);
    CHECK(clifford_multiply(t2, t2).c[0] == -3);

    IntMatrix T = et_embedding(s3);
    CHECK(congruent(even_norm_form(s3).N, T) == scale(s3.Q, BigInt(4)));

    std::mt19937_64 rng(13);
    for (int k = 0; k < 20; ++k) {
        auto qr = random_ternary(rng);
        auto tr = special_t(qr);
        auto nf = even_norm_form(qr);
        IntMatrix Tr = et_embedding(qr);
        CHECK(congruent(nf.N, Tr) == scale(qr.Q, qr.Delta));
        // (-e123, e1, e2, e3) t over the natural basis is Delta N^{-1}
        auto a = clifford_algebra(qr);
        RatMatrix M(4, 4);
        for (int j = 0; j < 4; ++j) {
            auto b = j == 0 ? BigInt(-1) * CliffordElement::basis(a, 7) : CliffordElement::basis(a, j);
            auto img = CliffordEven::from_full(clifford_multiply(b, tr));
            for (int i = 0; i < 4; ++i) M(i, j) = Rational(img.x[i]);
        }
        RatMatrix want = nf.N_inv;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                want(i, j) *= Rational(qr.Delta);
                want(i, j).canonicalize();
            }
        CHECK(M == want);
        IntMatrix col = odd_t_column(qr);
        for (int i = 0; i < 4; ++i) CHECK(Rational(col(i, 0)) == M(i, 0));
    }
}

TEST_CASE("phi lift")
{
    auto s3 = diagonal_form({1, 1, 1});
    CHECK(phi_lift(s3, IntMatrix::identity(3)).phi == IntMatrix::identity(4));
    CHECK(phi_lift(s3, imat({{1, 0, 0}, {0, 1, 0}, {0, 0, -1}})).phi == imat({{1, 0, 0, 0}, {0, -1, 0, 0}, {0, 0, -1, 0}, {0, 0, 0, 1}}));

    std::mt19937_64 rng(17);
    int neg = 0;
    for (int k = 0; k < 50; ++k) {
        auto q = random_ternary(rng);
        IntMatrix A = random_nonsingular(rng, -3, 3);
        auto q2 = image_form(q, A);
        auto L = phi_lift(q, A);
        CHECK(L.phi == phi_via_algebra(q, A));
        CHECK(congruent(even_norm_form(q).N, L.phi) == even_norm_form(q2).N);
        // image of t'' is det A t
        CHECK(lift_element(q, A, special_t(q2)) == det(A) * special_t(q));
        if (det(A) < 0) ++neg;
        IntMatrix D = random_nonsingular(rng, -2, 2);
        CHECK(phi_lift(q, A * D).phi == L.phi * phi_lift(q2, D).phi);
    }
    CHECK(neg > 0);
}

TEST_CASE("reconstruct isometry")
{
    auto s3 = diagonal_form({1, 1, 1});
    auto id = reconstruct_isometry(IntMatrix::identity(4), s3, s3);
    REQUIRE(id.has_value());
    CHECK((*id == IntMatrix::identity(3) || *id == scale(IntMatrix::identity(3), BigInt(-1))));

    std::mt19937_64 rng(19);
    for (int k = 0; k < 30; ++k) {
        auto q = random_ternary(rng);
        IntMatrix A = random_nonsingular(rng, -3, 3);
        auto q2 = image_form(q, A);
        auto phi = phi_lift(q, A).phi;
        auto back = reconstruct_isometry(phi, q, q2);
        REQUIRE(back.has_value());
        CHECK((*back == A || *back == scale(A, BigInt(-1))));
        CHECK(phi_lift(q, *back).phi == phi);
    }

    // e23'' -> 3 e23 is a homomorphism C0(3q) -> C0(q) and an isometry of norms, but no lift
    auto s3x3 = diagonal_form({3, 3, 3});
    IntMatrix d = imat({{1, 0, 0, 0}, {0, 3, 0, 0}, {0, 0, 3, 0}, {0, 0, 0, 3}});
    CHECK(congruent(even_norm_form(s3).N, d) == even_norm_form(s3x3).N);
    CHECK(is_even_homomorphism(d, s3, s3x3));
    CHECK_FALSE(reconstruct_isometry(d, s3, s3x3).has_value());
    CHECK_THROWS_WITH(reconstruct_isometry(imat({{1, 0, 0, 0}, {0, 2, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}), s3, s3), "not an algebra homomorphism");
}

TEST_CASE("psi lift")
{
    auto s3 = diagonal_form({1, 1, 1});
    auto L = psi_lift(s3, scale(IntMatrix::identity(3), BigInt(3)), 3);
    CHECK(*L.psi == scale(IntMatrix::identity(4), BigInt(3)));
    CHECK(L.z.is_zero());
    CHECK_THROWS_WITH(psi_lift(diagonal_form({1, 1, 3}), scale(IntMatrix::identity(3), BigInt(3)), 3), "singular prime");

    for (const char* text : {"1,0,0;1,0;1", "1,0,0;1,0;16", "2,0,-2;2,2;5"}) {
        auto q = parse_upper_triangle(text);
        auto sys = similarity_system(q);
        for (i64 p : {3, 5}) {
            std::size_t total = 0;
            for (const auto& q1 : sys.forms) {
                auto ms = primitive_filter(automorph_matrices(q, *q1, p * p)).primitive;
                total += ms.size();
                auto N = even_norm_form(q).N, N1 = even_norm_form(*q1).N;
                const BigInt P(static_cast<long>(p));
                for (const auto& M : ms) {
                    IntMatrix A = to_big(M);
                    auto Lp = psi_lift(q, A, p);
                    const IntMatrix& psi = *Lp.psi;
                    CHECK(det(psi) == P * P * P * P);
                    CHECK(rank_mod_p(psi, p) == 1);
                    CHECK(congruent(N, psi) == scale(N1, BigInt(P * P)));
                    CHECK(is_zero_mod(Lp.z, P));
                    IntMatrix Ainv = to_integral(scale(inverse(A), Rational(P * P)));
                    auto Linv = psi_lift(*q1, Ainv, p);
                    CHECK(to_rational(*Linv.psi) == scale(inverse(psi), Rational(P * P)));
                }
            }
            CHECK(total > 0);
        }
    }

    // A in E(q) D iff Phi_A in E(n) Phi_D
    auto ms = primitive_filter(automorph_matrices(s3, s3, 9)).primitive;
    auto n = norm_form(s3);
    const auto& En = unit_group(n);
    const auto& Eq = unit_group(s3);
    std::set<SmallMatrix> Eqs(Eq.elements.begin(), Eq.elements.end()), Ens(En.elements.begin(), En.elements.end());
    int same = 0;
    for (std::size_t i = 0; i < ms.size(); i += 7)
        for (std::size_t j = 0; j < ms.size(); j += 5) {
            IntMatrix A = to_big(ms[i]), D = to_big(ms[j]);
            RatMatrix X = to_rational(A) * inverse(D);
            bool left = is_integral(X) && Eqs.count(to_small(to_integral(X)));
            RatMatrix Y = to_rational(phi_lift(s3, A).phi) * inverse(phi_lift(s3, D).phi);
            bool lifted = is_integral(Y) && Ens.count(to_small(to_integral(Y)));
            CHECK(left == lifted);
            same += left;
        }
    CHECK(same > 0);
}

TEST_CASE("norm equivalence transfers to ternary equivalence")
{
    std::mt19937_64 rng(23);
    int done = 0;
    for (int k = 0; k < 40 && done < 12; ++k) {
        auto q = random_ternary(rng);
        IntMatrix V = random_nonsingular(rng, -2, 2);
        if (abs(det(V)) != 1) continue;
        auto q2 = image_form(q, V);
        IntMatrix U = phi_lift(q, V).phi;
        auto W = ternary_equivalence_from_norm(q, q2, U);
        REQUIRE(W.has_value());
        CHECK(congruent(q.Q, *W) == q2.Q);
        CHECK(abs(det(*W)) == 1);
        ++done;
    }
    CHECK(done > 0);

    // units of the norm form which are not lifts still transfer
    auto s3 = diagonal_form({1, 1, 1});
    auto n = norm_form(s3);
    const auto& En = unit_group(n);
    int tried = 0;
    for (std::size_t i = 0; i < En.elements.size(); i += 11) {
        auto W = ternary_equivalence_from_norm(s3, s3, to_big(En.elements[i]));
        REQUIRE(W.has_value());
        CHECK(congruent(s3.Q, *W) == s3.Q);
        ++tried;
    }
    CHECK(tried > 10);
}
