#pragma once

#include <optional>
#include <string>
#include <vector>

#include "automorph/intmat.hpp"

namespace automorph {

/* Integral form q given by its upper-triangular coefficient matrix Q0;
 * Q = tQ0 + Q0 and 2q(X) = tX Q X. */
struct QuadraticForm {
    int m = 0;
    IntMatrix q0;
    IntMatrix Q;
    SmallMatrix gram;  // Q as 64-bit, for the enumeration kernels
    BigInt det_q;
    BigInt level;
    // ternary only
    std::vector<BigInt> B;
    BigInt Delta;

    bool is_ternary() const { return m == 3; }
    std::string key() const;
    bool operator==(const QuadraticForm& o) const { return q0 == o.q0; }
};

QuadraticForm make_form(const IntMatrix& q0);
/* form with the given even symmetric Gram matrix */
QuadraticForm form_from_gram(const IntMatrix& Q);
QuadraticForm form_from_gram(const SmallMatrix& Q);
QuadraticForm diagonal_form(const std::vector<long>& coeffs);
/* q0 from rows of its upper triangle, "1,0,0;1,0;1" style */
QuadraticForm parse_upper_triangle(const std::string& text);

BigInt evaluate(const QuadraticForm& q, const std::vector<BigInt>& X);
i64 evaluate(const QuadraticForm& q, const IntVec& X);
bool is_positive_definite(const QuadraticForm& q);

int legendre(const BigInt& a, i64 p);
int jacobi(const BigInt& a, const BigInt& n);
bool is_prime(i64 n);
std::vector<i64> prime_factors(BigInt n);

int character(const QuadraticForm& q, i64 p);
int epsilon(const BigInt& a, i64 p);

struct LocalConstants {
    i64 p = 0;
    Rational c_p;
    std::optional<Rational> beta_p;  // odd m only
    int chi = 0;
};
LocalConstants local_constants(const QuadraticForm& q, i64 p);
Rational c_constant(int m, i64 p, int chi);
std::optional<Rational> beta_constant(int m, i64 p);

struct AlphaKappa {
    Rational alpha;
    Rational kappa;
};
AlphaKappa alpha_kappa(int m, int d, i64 p);

int kronecker_indicator(const RatMatrix& X);

/* Gaussian binomial [n, k]_p */
BigInt gaussian_binomial(int n, int k, i64 p);
BigInt ipow(const BigInt& b, unsigned e);
i64 ipow(i64 b, unsigned e);

}  // namespace automorph
