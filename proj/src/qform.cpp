#include "automorph/qform.hpp"

#include <sstream>

namespace automorph {

static void require_odd_prime(i64 p)
{
    if (p == 2) throw std::domain_error("even prime unsupported");
    if (!is_prime(p)) throw std::invalid_argument("p must be an odd prime");
}

std::string QuadraticForm::key() const
{
    std::ostringstream os;
    for (int i = 0; i < m; ++i) {
        if (i) os << ';';
        for (int j = i; j < m; ++j) {
            if (j > i) os << ',';
            os << q0(i, j);
        }
    }
    return os.str();
}

static BigInt compute_level(const IntMatrix& Q, const BigInt& det_q)
{
    IntMatrix adj = adjoint(Q);
    BigInt bound = abs(det_q) * 2;
    // candidates are the divisors of 2|det q|, tried in increasing order
    std::vector<BigInt> divs;
    for (BigInt d = 1; d * d <= bound; ++d)
        if (divides(d, bound)) {
            divs.push_back(d);
            if (d * d != bound) divs.push_back(BigInt(bound / d));
        }
    std::sort(divs.begin(), divs.end());
    for (const BigInt& l : divs) {
        bool ok = true;
        for (std::size_t i = 0; i < Q.rows() && ok; ++i)
            for (std::size_t j = 0; j < Q.cols() && ok; ++j) {
                BigInt num = l * adj(i, j);
                if (!divides(det_q, num)) ok = false;
                else if (i == j && !divides(BigInt(2), BigInt(num / det_q))) ok = false;
            }
        if (ok) return l;
    }
    throw std::logic_error("level not found among divisors of 2 det");
}

QuadraticForm make_form(const IntMatrix& q0_in)
{
    if (!q0_in.is_square() || q0_in.rows() < 1) throw std::invalid_argument("Q0 must be square");
    QuadraticForm q;
    q.m = static_cast<int>(q0_in.rows());
    q.q0 = q0_in;
    for (int i = 0; i < q.m; ++i)
        for (int j = 0; j < i; ++j)
            if (q0_in(i, j) != 0) throw std::invalid_argument("Q0 must be upper triangular");
    q.Q = q.q0 + q.q0.transpose();
    q.det_q = det(q.Q);
    if (q.det_q == 0) throw std::domain_error("singular form");
    q.level = compute_level(q.Q, q.det_q);
    try {
        q.gram = to_small(q.Q);
    } catch (const std::overflow_error&) {
        q.gram = SmallMatrix();
    }
    if (q.m == 3) {
        q.B = {BigInt(-q.q0(1, 2)), q.q0(0, 2), BigInt(-q.q0(0, 1))};
        q.Delta = q.det_q / 2;
        IntMatrix Bc = IntMatrix::column(q.B);
        BigInt q0B = congruent(q.q0, Bc)(0, 0);
        if (q.det_q != 2 * (4 * det(q.q0) - q0B)) throw std::logic_error("ternary determinant identity failed");
    }
    return q;
}

QuadraticForm form_from_gram(const IntMatrix& Q)
{
    if (!Q.is_square()) throw std::invalid_argument("Gram matrix must be square");
    IntMatrix q0(Q.rows(), Q.cols());
    for (std::size_t i = 0; i < Q.rows(); ++i) {
        if (!divides(BigInt(2), Q(i, i))) throw std::invalid_argument("Gram matrix must be even");
        q0(i, i) = Q(i, i) / 2;
        for (std::size_t j = i + 1; j < Q.cols(); ++j) {
            if (Q(i, j) != Q(j, i)) throw std::invalid_argument("Gram matrix must be symmetric");
            q0(i, j) = Q(i, j);
        }
    }
    return make_form(q0);
}
QuadraticForm form_from_gram(const SmallMatrix& Q) { return form_from_gram(to_big(Q)); }

QuadraticForm diagonal_form(const std::vector<long>& coeffs)
{
    IntMatrix q0(coeffs.size(), coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) q0(i, i) = coeffs[i];
    return make_form(q0);
}

QuadraticForm parse_upper_triangle(const std::string& text)
{
    std::vector<std::vector<BigInt>> rows;
    std::stringstream ss(text);
    std::string row;
    while (std::getline(ss, row, ';')) {
        std::vector<BigInt> r;
        std::stringstream rs(row);
        std::string cell;
        while (std::getline(rs, cell, ',')) {
            auto b = cell.find_first_not_of(" \t");
            auto e = cell.find_last_not_of(" \t");
            if (b == std::string::npos) throw std::invalid_argument("empty coefficient in form text");
            r.emplace_back(cell.substr(b, e - b + 1));
        }
        rows.push_back(r);
    }
    const std::size_t m = rows.size();
    if (m == 0) throw std::invalid_argument("empty form text");
    IntMatrix q0(m, m);
    bool full = std::all_of(rows.begin(), rows.end(), [m](const auto& r) { return r.size() == m; });
    for (std::size_t i = 0; i < m; ++i) {
        if (full) {
            for (std::size_t j = 0; j < m; ++j) q0(i, j) = rows[i][j];
        } else {
            if (rows[i].size() != m - i) throw std::invalid_argument("upper triangle rows must shrink by one");
            for (std::size_t j = i; j < m; ++j) q0(i, j) = rows[i][j - i];
        }
    }
    return make_form(q0);
}

BigInt evaluate(const QuadraticForm& q, const std::vector<BigInt>& X)
{
    if (static_cast<int>(X.size()) != q.m) throw std::invalid_argument("vector length mismatch");
    return bilinear(q.Q, X, X) / 2;
}
i64 evaluate(const QuadraticForm& q, const IntVec& X)
{
    if (static_cast<int>(X.size()) != q.m) throw std::invalid_argument("vector length mismatch");
    if (q.gram.rows() == 0) return to_i64(evaluate(q, to_big(X)));
    return bilinear(q.gram, X, X) / 2;
}

bool is_positive_definite(const QuadraticForm& q)
{
    for (int k = 1; k <= q.m; ++k)
        if (det(q.Q.block(0, 0, k, k)) <= 0) return false;
    return true;
}

/* {{{ primes and symbols */
bool is_prime(i64 n)
{
    if (n < 2) return false;
    for (i64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<i64> prime_factors(BigInt n)
{
    n = abs(n);
    std::vector<i64> f;
    for (i64 d = 2; BigInt(d) * d <= n; ++d) {
        if (divides(BigInt(d), n)) {
            f.push_back(d);
            while (divides(BigInt(d), n)) n /= d;
        }
    }
    if (n > 1) f.push_back(to_i64(n));
    return f;
}

int legendre(const BigInt& a, i64 p)
{
    BigInt P(static_cast<long>(p));
    BigInt r = mod_floor(a, P);
    return mpz_legendre(r.get_mpz_t(), P.get_mpz_t());
}

int jacobi(const BigInt& a, const BigInt& n)
{
    if (n <= 0 || !mpz_odd_p(n.get_mpz_t())) throw std::invalid_argument("Jacobi symbol needs odd positive modulus");
    BigInt r = mod_floor(a, n);
    return mpz_jacobi(r.get_mpz_t(), n.get_mpz_t());
}

int character(const QuadraticForm& q, i64 p)
{
    require_odd_prime(p);
    int k = q.m / 2;
    BigInt a = (k % 2) ? BigInt(-q.det_q) : q.det_q;
    return legendre(a, p);
}

int epsilon(const BigInt& a, i64 p)
{
    require_odd_prime(p);
    return legendre(BigInt(2 * a), p);
}
/* }}} */

BigInt ipow(const BigInt& b, unsigned e)
{
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}
i64 ipow(i64 b, unsigned e)
{
    i64 r = 1;
    while (e--) r = checked_mul(r, b);
    return r;
}

static Rational rpow(i64 p, int e)
{
    Rational r = 1;
    Rational b = e >= 0 ? Rational(p) : Rational(1, p);
    for (int i = 0; i < std::abs(e); ++i) r *= b;
    return r;
}

/* prod_{s=1}^{d-1} (p^{2(k-s)} - 1)/(1 - p^{-s}) */
static Rational alpha_product(int k, int d, i64 p)
{
    Rational prod = 1;
    for (int s = 1; s <= d - 1; ++s) prod *= (rpow(p, 2 * (k - s)) - 1) / (1 - rpow(p, -s));
    return prod;
}

AlphaKappa alpha_kappa(int m, int d, i64 p)
{
    if (m < 3 || m % 2 == 0) throw std::invalid_argument("alpha/kappa need odd m >= 3");
    int k = (m - 1) / 2;
    if (d < 1 || d > k) throw std::out_of_range("d out of range");
    require_odd_prime(p);
    AlphaKappa r;
    r.alpha = rpow(p, 1 - d) * alpha_product(k, d, p);
    r.kappa = (rpow(p, m - 2) - rpow(p, d - 1)) / (rpow(p, d) - 1) - 1;
    return r;
}

Rational c_constant(int m, i64 p, int chi)
{
    if (m == 2) return 1;
    if (m % 2 == 0) {
        int k = m / 2;
        Rational c = 1;
        for (int i = 0; i <= k - 2; ++i) c *= 1 + chi * rpow(p, i);
        return c;
    }
    int k = (m - 1) / 2;
    Rational c = 0;
    for (int a = 1; a <= k; ++a) c += alpha_product(k, a, p) * rpow(p, 1 - a);
    return c;
}

std::optional<Rational> beta_constant(int m, i64 p)
{
    if (m % 2 == 0) return std::nullopt;
    int k = (m - 1) / 2;
    Rational b = 0;
    for (int a = 1; a <= k; ++a)
        b += alpha_product(k, a, p) * (rpow(p, m - 2) - rpow(p, a - 1) * (p + 1) + 1) / (rpow(p, a - 1) * (rpow(p, a) - 1));
    return b;
}

LocalConstants local_constants(const QuadraticForm& q, i64 p)
{
    require_odd_prime(p);
    if (divides(BigInt(static_cast<long>(p)), q.det_q)) throw std::domain_error("singular prime");
    LocalConstants lc;
    lc.p = p;
    lc.chi = character(q, p);
    lc.c_p = c_constant(q.m, p, lc.chi);
    lc.beta_p = beta_constant(q.m, p);
    return lc;
}

int kronecker_indicator(const RatMatrix& X) { return is_integral(X) ? 1 : 0; }

BigInt gaussian_binomial(int n, int k, i64 p)
{
    if (k < 0 || k > n) return 0;
    BigInt num = 1, den = 1, P(static_cast<long>(p));
    for (int i = 0; i < k; ++i) {
        num *= ipow(P, n - i) - 1;
        den *= ipow(P, i + 1) - 1;
    }
    return num / den;
}

}  // namespace automorph
