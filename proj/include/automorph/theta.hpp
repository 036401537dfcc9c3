#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "automorph/classes.hpp"

namespace automorph {

using RatVec = std::vector<Rational>;

std::vector<i64> theta_coeffs(const QuadraticForm& q, i64 n_max);

/* r(q_j, n) for every class, 0 <= n <= n_max */
struct ThetaTable {
    const SimilaritySystem* system = nullptr;
    i64 n_max = 0;
    std::vector<std::vector<i64>> counts;

    i64 r(std::size_t j, i64 n) const;
    /* (r(q_j, n) / e(q_j))_j; zero vector when n is not an integer >= 0 */
    RatVec normalized(i64 n) const;
    Rational generic(i64 n) const;
};
ThetaTable theta_table(const SimilaritySystem& sys, i64 n_max);

/* n-th coefficient of Theta(q) | T(p^2) (odd m) for n = 0..n_max */
std::vector<BigInt> hecke_Tp2(const QuadraticForm& q, i64 p, i64 n_max);
/* n-th coefficient of Theta(q) | T(p) (even m) */
std::vector<BigInt> hecke_Tp(const QuadraticForm& q, i64 p, i64 n_max);

struct EichlerReport {
    i64 p = 0;
    i64 n_max = 0;
    bool ok = true;
    std::optional<i64> first_failure;
};
/* T(p^iota) on (Theta(q_i)/e(q_i))_i equals c_p^{-1}(t*(p^iota) - beta_p 1) on the same vector */
EichlerReport verify_eichler(const SimilaritySystem& sys, i64 p, i64 n_max);

std::vector<Rational> generic_theta(const SimilaritySystem& sys, i64 n_max);
/* eigenvalue of the generic theta series under T(p^iota), from the Anzahl column sums */
Rational generic_eigenvalue(const SimilaritySystem& sys, i64 p);
/* checks T(p^iota) Theta_generic = eigenvalue * Theta_generic coefficientwise */
bool verify_generic_eigen(const SimilaritySystem& sys, i64 p, i64 n_max, Rational* eigen_out = nullptr);

/* predicted coefficient vectors from the Euler products; key n */
struct DirichletTable {
    i64 a = 0;
    std::map<i64, RatVec> coeffs;  // odd m: r(n^2 a); even m: r(n a)
};
DirichletTable euler_expand(const SimilaritySystem& sys, i64 a, i64 p_limit, i64 n_max);

struct EpsteinValue {
    std::optional<Rational> exact;
    std::string decimal;  // 40 significant digits
};
EpsteinValue epstein_partial(const QuadraticForm& q, const Rational& s, i64 N);

struct ShimuraSumRow {
    i64 m = 0, a = 0;
    Rational lhs, rhs;
    bool agree = false;
};
struct ShimuraSumReport {
    Rational kappa;
    std::vector<ShimuraSumRow> rows;
    bool ok = true;
};
ShimuraSumReport shimura_sum_check(i64 m_max, const std::vector<i64>& a_list);

int moebius(i64 n);
BigInt sigma1(i64 n);

}  // namespace automorph
