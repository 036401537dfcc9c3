#include "automorph/shimlift.hpp"

#include <set>
#include <sstream>
#include <stdexcept>

#include "automorph/isosum.hpp"
#include "automorph/parallel.hpp"

namespace automorph {

namespace {

void require_regular(const QuadraticForm& q, i64 p)
{
    if (p == 2) throw std::domain_error("even prime unsupported");
    if (!is_prime(p)) throw std::invalid_argument("p must be prime");
    if (divides(BigInt(static_cast<long>(p)), q.det_q)) throw std::domain_error("singular prime");
}

std::string matrix_key(const SmallMatrix& M)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < M.rows(); ++i) {
        if (i) os << ';';
        for (std::size_t j = 0; j < M.cols(); ++j) os << (j ? "," : "") << M(i, j);
    }
    return os.str();
}

bool integral_quotient(const IntMatrix& left_inv_of, const IntMatrix& X)
{
    return is_integral(inverse(left_inv_of) * to_rational(X));
}

const QuadraticForm& seed_of(const SimilaritySystem& sys) { return *sys.forms[sys.seed_index]; }

IntMatrix p2_inverse(const IntMatrix& A, i64 p)
{
    RatMatrix inv = inverse(A);
    Rational s(static_cast<long>(p * p));
    for (std::size_t i = 0; i < inv.rows(); ++i)
        for (std::size_t j = 0; j < inv.cols(); ++j) {
            inv(i, j) *= s;
            inv(i, j).canonicalize();
        }
    if (!is_integral(inv)) throw std::invalid_argument("p^2 A^{-1} is not integral");
    return to_integral(inv);
}

void check_norm_system(const SimilaritySystem& tern, const SimilaritySystem& quat)
{
    if (quat.h() < tern.h()) throw std::invalid_argument("quaternary system must start with the norm forms");
    for (std::size_t i = 0; i < tern.h(); ++i)
        if (!(quat.forms[i]->gram == norm_form(*tern.forms[i]).gram))
            throw std::invalid_argument("quaternary system must start with the norm forms");
    if (tern.seed_index != 0 || quat.seed_index != 0) throw std::invalid_argument("seed must come first");
}

}  // namespace

std::string TernaryClass::key() const { return std::to_string(target) + ":" + matrix_key(A); }
std::string QuaternaryClass::key() const { return std::to_string(target) + ":" + matrix_key(M); }

QuadraticForm automorph_target(const QuadraticForm& q, const IntMatrix& A, i64 mult)
{
    IntMatrix G = congruent(q.Q, A);
    const BigInt m(static_cast<long>(mult));
    for (std::size_t i = 0; i < G.rows(); ++i)
        for (std::size_t j = 0; j < G.cols(); ++j) {
            if (!divides(m, G(i, j))) throw std::invalid_argument("multiplier does not divide Q[A]");
            G(i, j) /= m;
        }
    return form_from_gram(G);
}

IdealFactor ideal_extension(const QuadraticForm& q, const IntMatrix& A, i64 p, IdealSide side)
{
    require_regular(q, p);
    if (content(A) != 1) throw std::invalid_argument("requires primitive automorph");
    IdealFactor f;
    f.source = A;
    f.side = side;
    f.psi = *psi_lift(q, A, p).psi;
    auto alg = clifford_algebra(q);
    IntMatrix gens(4, 16);
    for (int i = 0; i < 4; ++i) {
        std::vector<BigInt> e(4, BigInt(0));
        e[i] = 1;
        auto b = CliffordEven::from_coords(alg, e);
        for (int j = 0; j < 4; ++j) {
            std::vector<BigInt> col(4);
            for (int k = 0; k < 4; ++k) col[k] = f.psi(k, j);
            auto y = CliffordEven::from_coords(alg, col);
            auto prod = side == IdealSide::Left ? even_multiply(b, y) : even_multiply(y, b);
            for (int k = 0; k < 4; ++k) gens(k, 4 * i + j) = prod.x[k];
        }
    }
    f.generator = hnf(gens);
    f.index = abs(det(f.generator));
    const BigInt P(static_cast<long>(p));
    if (f.index != P * P) throw std::runtime_error("singular or inconsistent input");
    IntMatrix F = congruent(even_norm_form(q).N, f.generator);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            if (!divides(P, F(i, j))) throw std::runtime_error("singular or inconsistent input");
            F(i, j) /= P;
        }
    f.form_f = form_from_gram(F);
    return f;
}

bool divides_left(const IntMatrix& M, const QuadraticForm& q, const IntMatrix& A, i64 p)
{
    const BigInt P(static_cast<long>(p));
    if (abs(det(M)) != P * P) throw std::invalid_argument("|det M| must be p^2");
    return integral_quotient(M, *psi_lift(q, A, p).psi);
}

bool divides_left_mod_p(const IntMatrix& M, const QuadraticForm& q, const IntMatrix& A, i64 p)
{
    const BigInt P(static_cast<long>(p));
    if (abs(det(M)) != P * P) throw std::invalid_argument("|det M| must be p^2");
    auto q2 = automorph_target(q, A, p * p);
    IntMatrix psi_inv = *psi_lift(q2, p2_inverse(A, p), p).psi;
    return is_zero_mod(IntMatrix(psi_inv * M), P);
}

std::vector<TernaryClass> ternary_right_classes(const SimilaritySystem& tern, i64 p)
{
    const auto& q = seed_of(tern);
    require_regular(q, p);
    std::vector<std::vector<TernaryClass>> parts(tern.h());
    for (std::size_t i = 0; i < tern.h(); ++i) {
        auto ms = primitive_filter(automorph_matrices(q, *tern.forms[i], p * p)).primitive;
        for (const auto& A : coset_decompose(ms, unit_group(*tern.forms[i]), CosetSide::Right).representatives)
            parts[i].push_back({i, A});
    }
    std::vector<TernaryClass> out;
    for (auto& v : parts) out.insert(out.end(), v.begin(), v.end());
    return out;
}

std::vector<QuaternaryClass> quaternary_right_classes(const SimilaritySystem& quat, i64 p)
{
    const auto& n = seed_of(quat);
    require_regular(n, p);
    std::vector<QuaternaryClass> out;
    for (std::size_t j = 0; j < quat.h(); ++j) {
        auto ms = automorph_matrices(n, *quat.forms[j], p);
        for (const auto& M : coset_decompose(ms, unit_group(*quat.forms[j]), CosetSide::Right).representatives)
            out.push_back({j, M});
    }
    return out;
}

SimilaritySystem norm_system(const SimilaritySystem& tern, const std::vector<i64>& primes)
{
    std::vector<QuadraticForm> seeds;
    for (const auto& f : tern.forms) seeds.push_back(norm_form(*f));
    auto quat = similarity_system_seeded(seeds, primes.empty() ? tern.primes_used : primes);
    check_norm_system(tern, quat);
    return quat;
}

TernaryClass find_unique_A(const IntMatrix& M, const SimilaritySystem& tern, i64 p)
{
    const auto& q = seed_of(tern);
    auto classes = ternary_right_classes(tern, p);
    std::vector<char> hit(classes.size(), 0);
    parallel_for(classes.size(), [&](std::size_t k) { hit[k] = divides_left(M, q, to_big(classes[k].A), p); });
    std::optional<std::size_t> found;
    for (std::size_t k = 0; k < classes.size(); ++k)
        if (hit[k]) {
            if (found) throw std::logic_error("more than one ternary class divides M");
            found = k;
        }
    if (!found) throw std::runtime_error("no ternary class divides M");
    return classes[*found];
}

TernaryClass find_unique_A_constructive(const IntMatrix& M, const SimilaritySystem& tern, i64 p)
{
    const auto& q = seed_of(tern);
    require_regular(q, p);
    const BigInt P(static_cast<long>(p));
    if (abs(det(M)) != P * P) throw std::invalid_argument("|det M| must be p^2");
    if (!is_zero_mod(congruent(even_norm_form(q).N, M), P)) throw std::invalid_argument("N[M] must vanish mod p");

    // M Lambda = U D_p Lambda: the first two columns of U span M Z^4 mod p
    std::vector<IntVec> rows;
    for (int j = 0; j < 4; ++j) {
        IntVec c(4);
        for (int i = 0; i < 4; ++i) c[i] = to_i64(mod_floor(M(i, j), P));
        rows.push_back(c);
    }
    rref_mod_p(rows, p);
    if (rows.size() != 2) throw std::invalid_argument("M is not in Lambda D_p Lambda");
    IntMatrix U12(4, 2);
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 4; ++i) U12(i, j) = static_cast<long>(rows[j][i]);
    IntMatrix U = complete_to_unimodular(U12);
    IntMatrix W = to_integral(inverse(U)).transpose();

    std::vector<BigInt> X(4);
    if (divides(P, W(0, 2))) {
        for (int i = 0; i < 4; ++i) X[i] = W(i, 2);
    } else {
        for (int i = 0; i < 4; ++i) X[i] = W(0, 3) * W(i, 2) - W(0, 2) * W(i, 3);
    }
    std::vector<BigInt> V1(3);
    for (int i = 0; i < 3; ++i) V1[i] = mod_floor(X[i + 1], P);
    auto qv = [&](const std::vector<BigInt>& v) { return BigInt(congruent(q.Q, IntMatrix::column(v))(0, 0)); };
    if (!divides(P, qv(V1))) throw std::logic_error("Q[X] does not vanish mod p");

    // lift V1 so that Q[V1] = 0 mod p^2
    IntMatrix QV = q.Q * IntMatrix::column(V1);
    int k = 0;
    while (divides(P, QV(k, 0))) ++k;
    {
        BigInt c = qv(V1) / P;
        BigInt den = mod_floor(BigInt(2 * QV(k, 0)), P), inv;
        mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), P.get_mpz_t());
        BigInt y = mod_floor(BigInt(-c * inv), P);
        V1[k] += P * y;
    }
    if (!divides(BigInt(P * P), qv(V1))) throw std::logic_error("Hensel lift failed");

    // V2 with tV1 Q V2 = 0 mod p, independent of V1 mod p
    std::vector<BigInt> V2;
    for (i64 a = 0; a < p && V2.empty(); ++a)
        for (i64 b = 0; b < p && V2.empty(); ++b)
            for (i64 c = 0; c < p && V2.empty(); ++c) {
                std::vector<BigInt> y{BigInt(static_cast<long>(a)), BigInt(static_cast<long>(b)), BigInt(static_cast<long>(c))};
                BigInt s = 0;
                for (int i = 0; i < 3; ++i) s += QV(i, 0) * y[i];
                if (!divides(P, s)) continue;
                IntMatrix pair(3, 2);
                for (int i = 0; i < 3; ++i) {
                    pair(i, 0) = V1[i];
                    pair(i, 1) = y[i];
                }
                if (rank_mod_p(pair, p) == 2) V2 = y;
            }
    if (V2.empty()) throw std::logic_error("no second column");

    IntMatrix gens(3, 5);
    for (int i = 0; i < 3; ++i) {
        gens(i, 0) = V1[i];
        gens(i, 1) = P * V2[i];
        gens(i, 2 + i) = P * P;
    }
    IntMatrix A = hnf(gens);
    auto q1 = automorph_target(q, A, p * p);
    auto match = locate_class(tern, q1);
    if (!match) throw std::runtime_error("target form not in the ternary system");
    IntMatrix A2 = A * to_integral(inverse(to_big(match->U)));
    if (!divides_left(M, q, A2, p)) throw std::logic_error("constructed A does not satisfy M | Psi_A");
    return {match->index, canonical_right(to_small(A2), unit_group(*tern.forms[match->index]))};
}

IntMatrix upsilon(const QuadraticForm& qi, const IntMatrix& A, i64 p)
{
    require_regular(qi, p);
    if (content(A) != 1) throw std::invalid_argument("requires primitive automorph");
    auto q = automorph_target(qi, A, p * p);
    auto I = ideal_extension(q, p2_inverse(A, p), p).generator;
    RatMatrix Y = inverse(I);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            Y(i, j) *= Rational(static_cast<long>(p));
            Y(i, j).canonicalize();
        }
    if (!is_integral(Y)) throw std::logic_error("Upsilon_A is not integral");
    return to_integral(Y);
}

ClassCountReport verify_class_count(const SimilaritySystem& tern, const SimilaritySystem& quat, i64 p)
{
    ClassCountReport r;
    r.p = p;
    r.lhs_count = static_cast<long>(ternary_right_classes(tern, p).size());
    r.rhs_count = static_cast<long>(quaternary_right_classes(quat, p).size());
    r.chi = character(seed_of(quat), p);
    if (r.chi == -1) throw std::domain_error("1 + chi vanishes");
    r.lhs = Rational(r.lhs_count);
    r.rhs = Rational(r.rhs_count, BigInt(1 + r.chi));
    r.rhs.canonicalize();
    r.ok = r.lhs == r.rhs;
    return r;
}

CoveringReport verify_covering(const SimilaritySystem& tern, const SimilaritySystem& quat, i64 p)
{
    check_norm_system(tern, quat);
    const auto& q = seed_of(tern);
    const auto& n = seed_of(quat);
    require_regular(q, p);
    CoveringReport rep;
    rep.p = p;

    std::vector<TernaryClass> tcls;
    for (std::size_t i = 0; i < tern.h(); ++i) {
        auto ms = primitive_filter(automorph_matrices(*tern.forms[i], q, p * p)).primitive;
        for (const auto& A : coset_decompose(ms, unit_group(*tern.forms[i]), CosetSide::Left).representatives)
            tcls.push_back({i, A});
    }
    std::vector<QuaternaryClass> qcls;
    std::vector<RatMatrix> qinv;
    for (std::size_t j = 0; j < quat.h(); ++j) {
        auto ms = automorph_matrices(*quat.forms[j], n, p);
        for (const auto& M : coset_decompose(ms, unit_group(*quat.forms[j]), CosetSide::Left).representatives) {
            qcls.push_back({j, M});
            qinv.push_back(inverse(to_big(M)));
        }
    }
    rep.ternary_classes = tcls.size();
    rep.quaternary_classes = qcls.size();

    std::vector<std::vector<std::size_t>> fiber(tcls.size());
    std::vector<char> rank1(tcls.size(), 0);
    parallel_for(tcls.size(), [&](std::size_t a) {
        IntMatrix psi = *psi_lift(*tern.forms[tcls[a].target], to_big(tcls[a].A), p).psi;
        rank1[a] = rank_mod_p(psi, p) == 1;
        RatMatrix R = to_rational(psi);
        for (std::size_t m = 0; m < qcls.size(); ++m)
            if (is_integral(R * qinv[m])) fiber[a].push_back(m);
    });

    const std::size_t want = static_cast<std::size_t>(1 + character(n, p));
    rep.fiber_sizes_ok = true;
    rep.rank_ok = true;
    rep.disjoint = true;
    std::vector<int> cover(qcls.size(), 0);
    for (std::size_t a = 0; a < tcls.size(); ++a) {
        if (fiber[a].size() != want) rep.fiber_sizes_ok = false;
        if (!rank1[a]) rep.rank_ok = false;
        auto& keys = rep.fibers[tcls[a].key()];
        for (std::size_t m : fiber[a]) {
            keys.push_back(qcls[m].key());
            if (cover[m]++) rep.disjoint = false;
        }
        std::sort(keys.begin(), keys.end());
    }
    rep.exhaustive = std::all_of(cover.begin(), cover.end(), [](int c) { return c > 0; });
    return rep;
}

CoveringReport verify_covering(const SimilaritySystem& tern, i64 p) { return verify_covering(tern, norm_system(tern), p); }

bool intertwiner_check(const RatMatrix& X, const SimilaritySystem& tern, const SimilaritySystem& quat, const std::vector<i64>& primes)
{
    if (X.rows() != tern.h() || X.cols() != quat.h()) throw std::invalid_argument("dimension mismatch");
    for (i64 p : primes) {
        RatMatrix T = anzahl_matrix(tern, p, 2).entries;
        RatMatrix Tn = anzahl_matrix(quat, p, 1).entries;
        int chi = character(seed_of(quat), p);
        if (chi == -1) throw std::domain_error("1 + chi vanishes");
        RatMatrix lhs = T * X;
        RatMatrix rhs = X * Tn;
        for (std::size_t i = 0; i < rhs.rows(); ++i)
            for (std::size_t j = 0; j < rhs.cols(); ++j) {
                rhs(i, j) /= Rational(1 + chi);
                rhs(i, j).canonicalize();
                lhs(i, j).canonicalize();
            }
        if (!(lhs == rhs)) return false;
    }
    return true;
}

}  // namespace automorph
