#pragma once

#include <functional>
#include <utility>
#include <string>
#include <vector>

#include "automorph/intmat.hpp"
#include "automorph/qform.hpp"

namespace automorph {

/* L / p^2 Z^m is (Z/p^2)^d + (Z/p)^b for a lattice L = M Z^m of the given profile */
struct SubgroupType {
    int m = 0, d = 0, b = 0;
    i64 p = 0;
};
SubgroupType profile_type(int m, const std::vector<i64>& profile, i64 p);
/* D_p(d) = diag(1^d, p^{m-2d}, (p^2)^d) */
std::vector<i64> odd_profile(int m, int d, i64 p);
BigInt coset_count(const SubgroupType& t);

/* every d-dimensional subspace of F_p^m, as RREF rows with pivots */
void for_each_subspace(int m, int k, i64 p, const std::function<void(const std::vector<IntVec>&, const std::vector<int>&)>& f);
/* reduced row echelon form over F_p; returns pivots, rows are the nonzero rows */
std::vector<int> rref_mod_p(std::vector<IntVec>& rows, i64 p);

/* one column-Hermite representative per right coset M Lambda in Lambda D Lambda */
std::vector<SmallMatrix> coset_representatives(int m, const std::vector<i64>& profile, i64 p);
void for_each_coset(const SubgroupType& t, const std::function<void(const SmallMatrix&)>& f);

struct IsotropicSumReport {
    std::string q_key;
    i64 p = 0;
    int d = 0;
    IntVec K;
    BigInt brute, formula;
    bool agree = false;
};

BigInt brute_isotropic_sum_p2(const QuadraticForm& q, int d, const IntVec& K, i64 p);
/* the same count by filtering the full coset list; only feasible for small p and m */
BigInt brute_isotropic_sum_p2_unpruned(const QuadraticForm& q, int d, const IntVec& K, i64 p);
Rational formula_isotropic_sum_p2(const QuadraticForm& q, int d, const IntVec& K, i64 p);
Rational summed_isotropic_p2(const QuadraticForm& q, const IntVec& K, i64 p);
IsotropicSumReport compare_isotropic_sum(const QuadraticForm& q, int d, const IntVec& K, i64 p);

/* 2-dimensional totally isotropic subspaces of (F_p^4, n) containing the columns of A */
BigInt brute_isotropic_sum_p(const QuadraticForm& n, const SmallMatrix& A, i64 p);
BigInt formula_isotropic_sum_p(const QuadraticForm& n, const SmallMatrix& A, i64 p);

/* Hermite representatives of the cosets M in Lambda D_p(d) Lambda with Q[M] = 0 mod p^2 */
std::vector<SmallMatrix> isotropic_cosets_p2(const QuadraticForm& q, int d, i64 p);
/* even m: cosets in Lambda diag(1^k, p^k) Lambda with Q[M] = 0 mod p */
std::vector<SmallMatrix> isotropic_cosets_p(const QuadraticForm& q, i64 p);

/* one K per stratum with q(K) = 0 mod p^2: K != 0 mod p; K = p K' with (2q(K')/p) = 1, -1, 0; p^2 | K */
std::vector<std::pair<std::string, IntVec>> stratum_samples(const QuadraticForm& q, i64 p);

/* is K in the lattice spanned by the columns of M */
bool divides_vector(const SmallMatrix& M, const IntVec& K);

}  // namespace automorph
