#include "automorph/theta.hpp"

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <cmath>
#include <stdexcept>

#include "automorph/parallel.hpp"

namespace automorph {

namespace {

void require_odd_m(const QuadraticForm& q)
{
    if (q.m % 2 == 0) throw std::invalid_argument("T(p^2) needs odd m");
}

void require_even_m(const QuadraticForm& q)
{
    if (q.m % 2 != 0) throw std::invalid_argument("T(p) needs even m");
}

void require_regular(const QuadraticForm& q, i64 p)
{
    if (p == 2) throw std::domain_error("even prime unsupported");
    if (!is_prime(p)) throw std::invalid_argument("p must be prime");
    if (divides(BigInt(static_cast<long>(p)), q.det_q)) throw std::domain_error("singular prime");
}

RatVec mat_apply(const RatMatrix& A, const RatVec& v)
{
    RatVec out(A.rows(), Rational(0));
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j) out[i] += A(i, j) * v[j];
    for (auto& x : out) x.canonicalize();
    return out;
}

/* c^{-1}(t*(p^iota) - beta 1), the matrix by which T(p^iota) acts on normalized coefficients */
RatMatrix hecke_matrix(const SimilaritySystem& sys, i64 p)
{
    const auto& q = *sys.forms[0];
    auto lc = local_constants(q, p);
    auto A = anzahl_matrix(sys, p, iota_for(q.m)).entries;
    if (lc.beta_p)
        for (std::size_t i = 0; i < A.rows(); ++i) A(i, i) -= *lc.beta_p;
    Rational cinv = 1 / lc.c_p;
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j) {
            A(i, j) *= cinv;
            A(i, j).canonicalize();
        }
    return A;
}

}  // namespace

std::vector<i64> theta_coeffs(const QuadraticForm& q, i64 n_max)
{
    require_positive_definite(q);
    return representation_counts(q, n_max);
}

i64 ThetaTable::r(std::size_t j, i64 n) const
{
    if (n < 0) return 0;
    if (n > n_max) throw std::out_of_range("theta table too short");
    return counts[j][static_cast<std::size_t>(n)];
}

RatVec ThetaTable::normalized(i64 n) const
{
    RatVec v(counts.size());
    for (std::size_t j = 0; j < counts.size(); ++j)
        v[j] = ratio(static_cast<long>(r(j, n)), static_cast<long>(system->unit_orders[j]));
    return v;
}

Rational ThetaTable::generic(i64 n) const
{
    Rational s = 0;
    for (const auto& x : normalized(n)) s += x;
    s.canonicalize();
    return s;
}

ThetaTable theta_table(const SimilaritySystem& sys, i64 n_max)
{
    ThetaTable t;
    t.system = &sys;
    t.n_max = n_max;
    for (const auto& f : sys.forms) t.counts.push_back(theta_coeffs(*f, n_max));
    return t;
}

std::vector<BigInt> hecke_Tp2(const QuadraticForm& q, i64 p, i64 n_max)
{
    require_odd_m(q);
    require_regular(q, p);
    const int k = q.m / 2;
    const i64 p2 = p * p;
    auto r = theta_coeffs(q, checked_mul(p2, n_max));
    const int chi = character(q, p);
    const BigInt pk = ipow(BigInt(static_cast<long>(p)), static_cast<unsigned>(k - 1));
    const BigInt pm = ipow(BigInt(static_cast<long>(p)), static_cast<unsigned>(q.m - 2));
    std::vector<BigInt> out(static_cast<std::size_t>(n_max + 1));
    parallel_for(out.size(), [&](std::size_t n) {
        const i64 ni = static_cast<i64>(n);
        BigInt v = r[static_cast<std::size_t>(p2 * ni)];
        v += chi * epsilon(BigInt(static_cast<long>(ni)), p) * pk * r[n];
        if (ni % p2 == 0) v += pm * r[static_cast<std::size_t>(ni / p2)];
        out[n] = v;
    });
    return out;
}

std::vector<BigInt> hecke_Tp(const QuadraticForm& q, i64 p, i64 n_max)
{
    require_even_m(q);
    require_regular(q, p);
    const int k = q.m / 2;
    auto r = theta_coeffs(q, checked_mul(p, n_max));
    const int chi = character(q, p);
    const BigInt pk = ipow(BigInt(static_cast<long>(p)), static_cast<unsigned>(k - 1));
    std::vector<BigInt> out(static_cast<std::size_t>(n_max + 1));
    parallel_for(out.size(), [&](std::size_t n) {
        const i64 ni = static_cast<i64>(n);
        BigInt v = r[static_cast<std::size_t>(p * ni)];
        if (ni % p == 0) v += chi * pk * r[static_cast<std::size_t>(ni / p)];
        out[n] = v;
    });
    return out;
}

EichlerReport verify_eichler(const SimilaritySystem& sys, i64 p, i64 n_max)
{
    EichlerReport rep;
    rep.p = p;
    rep.n_max = n_max;
    const auto& q0 = *sys.forms[0];
    const bool odd = q0.m % 2 == 1;
    RatMatrix A = hecke_matrix(sys, p);
    const std::size_t h = sys.h();
    std::vector<std::vector<BigInt>> H(h);
    for (std::size_t j = 0; j < h; ++j)
        H[j] = odd ? hecke_Tp2(*sys.forms[j], p, n_max) : hecke_Tp(*sys.forms[j], p, n_max);
    auto table = theta_table(sys, n_max);
    std::vector<char> bad(static_cast<std::size_t>(n_max + 1), 0);
    parallel_for(bad.size(), [&](std::size_t n) {
        auto rhs = mat_apply(A, table.normalized(static_cast<i64>(n)));
        for (std::size_t i = 0; i < h; ++i) {
            Rational lhs(H[i][n], BigInt(static_cast<long>(sys.unit_orders[i])));
            lhs.canonicalize();
            if (lhs != rhs[i]) bad[n] = 1;
        }
    });
    for (std::size_t n = 0; n < bad.size(); ++n)
        if (bad[n]) {
            rep.ok = false;
            rep.first_failure = static_cast<i64>(n);
            break;
        }
    return rep;
}

std::vector<Rational> generic_theta(const SimilaritySystem& sys, i64 n_max)
{
    auto table = theta_table(sys, n_max);
    std::vector<Rational> g(static_cast<std::size_t>(n_max + 1));
    for (i64 n = 0; n <= n_max; ++n) g[static_cast<std::size_t>(n)] = table.generic(n);
    return g;
}

Rational generic_eigenvalue(const SimilaritySystem& sys, i64 p)
{
    RatMatrix A = hecke_matrix(sys, p);
    Rational s = 0;
    for (std::size_t i = 0; i < A.rows(); ++i) s += A(i, 0);
    for (std::size_t j = 1; j < A.cols(); ++j) {
        Rational t = 0;
        for (std::size_t i = 0; i < A.rows(); ++i) t += A(i, j);
        if (t != s) throw std::runtime_error("Anzahl column sums differ");
    }
    s.canonicalize();
    return s;
}

bool verify_generic_eigen(const SimilaritySystem& sys, i64 p, i64 n_max, Rational* eigen_out)
{
    Rational lam = generic_eigenvalue(sys, p);
    if (eigen_out) *eigen_out = lam;
    const bool odd = sys.forms[0]->m % 2 == 1;
    auto g = generic_theta(sys, n_max);
    std::vector<Rational> img(g.size(), Rational(0));
    for (std::size_t j = 0; j < sys.h(); ++j) {
        auto H = odd ? hecke_Tp2(*sys.forms[j], p, n_max) : hecke_Tp(*sys.forms[j], p, n_max);
        for (std::size_t n = 0; n < g.size(); ++n) img[n] += Rational(H[n], BigInt(static_cast<long>(sys.unit_orders[j])));
    }
    for (std::size_t n = 0; n < g.size(); ++n) {
        img[n].canonicalize();
        Rational want = lam * g[n];
        want.canonicalize();
        if (img[n] != want) return false;
    }
    return true;
}

DirichletTable euler_expand(const SimilaritySystem& sys, i64 a, i64 p_limit, i64 n_max)
{
    const auto& q = *sys.forms[0];
    const bool odd = q.m % 2 == 1;
    const int k = q.m / 2;
    if (a < 1) throw std::invalid_argument("a must be positive");
    for (i64 p : prime_factors(BigInt(static_cast<long>(a))))
        if (a % (p * p) == 0) throw std::invalid_argument("a must be squarefree");

    std::vector<i64> primes;
    for (i64 p = 3; p <= std::min(p_limit, n_max); p += 2)
        if (is_prime(p)) {
            if (divides(BigInt(static_cast<long>(p)), q.det_q)) throw std::domain_error("singular prime");
            if (!odd && a % p == 0) throw std::invalid_argument("even m needs p coprime to a");
            primes.push_back(p);
        }

    // per-prime factor coefficients F_delta for delta = 0..log_p n_max
    std::vector<std::vector<RatMatrix>> factors(primes.size());
    parallel_for(primes.size(), [&](std::size_t idx) {
        const i64 p = primes[idx];
        const std::size_t h = sys.h();
        RatMatrix A = hecke_matrix(sys, p);
        const int chi = character(q, p);
        Rational lin = 0, quad;
        if (odd) {
            lin = Rational(chi * epsilon(BigInt(static_cast<long>(a)), p)) * ipow(BigInt(static_cast<long>(p)), k - 1);
            quad = Rational(ipow(BigInt(static_cast<long>(p)), q.m - 2));
        } else {
            quad = Rational(chi * ipow(BigInt(static_cast<long>(p)), k - 1));
        }
        int deg = 0;
        for (i64 pp = p; pp <= n_max; pp *= p) ++deg;
        auto& F = factors[idx];
        F.push_back(RatMatrix::identity(h));
        if (deg >= 1) {
            RatMatrix F1 = A;
            for (std::size_t i = 0; i < h; ++i) F1(i, i) -= lin;
            F.push_back(F1);
        }
        for (int d = 2; d <= deg; ++d) {
            RatMatrix next = A * F[d - 1] - scale(F[d - 2], quad);
            for (std::size_t i = 0; i < h; ++i)
                for (std::size_t j = 0; j < h; ++j) next(i, j).canonicalize();
            F.push_back(next);
        }
    });

    DirichletTable out;
    out.a = a;
    auto table = theta_table(sys, a);
    const RatVec base = table.normalized(a);
    for (i64 n = 1; n <= n_max; ++n) {
        i64 rest = n;
        RatVec v = base;
        bool ok = true;
        for (std::size_t idx = 0; idx < primes.size() && rest > 1; ++idx) {
            int d = 0;
            while (rest % primes[idx] == 0) {
                rest /= primes[idx];
                ++d;
            }
            if (d > 0) v = mat_apply(factors[idx][static_cast<std::size_t>(d)], v);
        }
        if (rest != 1) ok = false;
        if (ok) out.coeffs.emplace(n, std::move(v));
    }
    return out;
}

EpsteinValue epstein_partial(const QuadraticForm& q, const Rational& s, i64 N)
{
    using Dec = boost::multiprecision::cpp_dec_float_50;
    auto r = theta_coeffs(q, N);
    EpsteinValue out;
    Rational ss = s;
    ss.canonicalize();
    if (ss.get_den() == 1 && ss.get_num() >= 0 && ss.get_num() <= 1000) {
        const unsigned e = static_cast<unsigned>(ss.get_num().get_ui());
        Rational sum = 0;
        for (i64 n = 1; n <= N; ++n)
            if (r[static_cast<std::size_t>(n)] != 0)
                sum += Rational(BigInt(static_cast<long>(r[static_cast<std::size_t>(n)])), ipow(BigInt(static_cast<long>(n)), e));
        sum.canonicalize();
        out.exact = sum;
        Dec d = Dec(sum.get_num().get_str()) / Dec(sum.get_den().get_str());
        out.decimal = d.str(40);
        return out;
    }
    Dec exponent = Dec(ss.get_num().get_str()) / Dec(ss.get_den().get_str());
    Dec sum = 0;
    for (i64 n = 1; n <= N; ++n) {
        i64 c = r[static_cast<std::size_t>(n)];
        if (c != 0) sum += Dec(c) / boost::multiprecision::pow(Dec(n), exponent);
    }
    out.decimal = sum.str(40);
    return out;
}

int moebius(i64 n)
{
    if (n < 1) throw std::invalid_argument("moebius needs n >= 1");
    int mu = 1;
    for (i64 p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) return 0;
            mu = -mu;
        }
    if (n > 1) mu = -mu;
    return mu;
}

BigInt sigma1(i64 n)
{
    BigInt s = 0;
    for (i64 d = 1; d * d <= n; ++d)
        if (n % d == 0) {
            s += static_cast<long>(d);
            if (d * d != n) s += static_cast<long>(n / d);
        }
    return s;
}

ShimuraSumReport shimura_sum_check(i64 m_max, const std::vector<i64>& a_list)
{
    auto f3 = diagonal_form({1, 1, 1});
    auto f4 = diagonal_form({1, 1, 1, 1});
    const long e3 = static_cast<long>(unit_group(f3).order());
    const long e4 = static_cast<long>(unit_group(f4).order());
    i64 amax = 1;
    for (i64 a : a_list) amax = std::max(amax, a);
    auto r3 = theta_coeffs(f3, checked_mul(m_max * m_max, amax));
    auto r4 = theta_coeffs(f4, m_max);
    auto n3 = [&](i64 n) { return ratio(static_cast<long>(r3[static_cast<std::size_t>(n)]), e3); };
    auto n4 = [&](i64 n) { return ratio(static_cast<long>(r4[static_cast<std::size_t>(n)]), e4); };

    ShimuraSumReport rep;
    rep.kappa = 1 / n4(1);
    rep.kappa.canonicalize();
    for (i64 a : a_list)
        for (i64 m = 1; m <= m_max; m += 2) {
            ShimuraSumRow row;
            row.m = m;
            row.a = a;
            row.lhs = n3(m * m * a);
            Rational s = 0;
            for (i64 d = 1; d <= m; d += 2)
                if (m % d == 0) {
                    int mu = moebius(d);
                    if (mu == 0) continue;
                    s += mu * jacobi(BigInt(static_cast<long>(-a)), BigInt(static_cast<long>(d))) * n4(m / d);
                }
            row.rhs = s * n3(a) * rep.kappa;
            row.rhs.canonicalize();
            row.agree = row.lhs == row.rhs;
            if (!row.agree) rep.ok = false;
            rep.rows.push_back(row);
        }
    return rep;
}

}  // namespace automorph
