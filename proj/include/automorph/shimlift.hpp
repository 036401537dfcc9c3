#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "automorph/classes.hpp"
#include "automorph/clifford.hpp"

namespace automorph {

enum class IdealSide { Left, Right };

struct IdealFactor {
    IntMatrix source;     // A
    IntMatrix psi;        // Psi_A
    IntMatrix generator;  // column HNF of the ideal over the natural basis
    BigInt index;         // |det generator|
    QuadraticForm form_f; // p^{-1} N[generator]
    IdealSide side = IdealSide::Left;
};
/* A in R*(q, p^2 q'), q the source */
IdealFactor ideal_extension(const QuadraticForm& q, const IntMatrix& A, i64 p, IdealSide side = IdealSide::Left);

/* M^{-1} Psi_A integral; |det M| must be p^2 */
bool divides_left(const IntMatrix& M, const QuadraticForm& q, const IntMatrix& A, i64 p);
/* same test through Psi_{p^2 A^{-1}} M = 0 mod p */
bool divides_left_mod_p(const IntMatrix& M, const QuadraticForm& q, const IntMatrix& A, i64 p);

/* target q'' of A in R(q, mult q'') */
QuadraticForm automorph_target(const QuadraticForm& q, const IntMatrix& A, i64 mult);

/* A in R*(q, p^2 q_target) up to E(q_target) on the right */
struct TernaryClass {
    std::size_t target = 0;
    SmallMatrix A;
    std::string key() const;
    bool operator==(const TernaryClass& o) const { return target == o.target && A == o.A; }
};
/* M in R(n, p n_target) up to E(n_target) on the right */
struct QuaternaryClass {
    std::size_t target = 0;
    SmallMatrix M;
    std::string key() const;
};

std::vector<TernaryClass> ternary_right_classes(const SimilaritySystem& tern, i64 p);
std::vector<QuaternaryClass> quaternary_right_classes(const SimilaritySystem& quat, i64 p);

/* quaternary system seeded with the norm forms of the ternary classes, in order */
SimilaritySystem norm_system(const SimilaritySystem& tern, const std::vector<i64>& primes = {});

/* the unique ternary class A with M | Psi_A, by scanning every class */
TernaryClass find_unique_A(const IntMatrix& M, const SimilaritySystem& tern, i64 p);
/* the same class built from M through the V1, V2 construction */
TernaryClass find_unique_A_constructive(const IntMatrix& M, const SimilaritySystem& tern, i64 p);

/* Upsilon_A = p (I_{p^2 A^{-1}})^{-1} for A in R*(q_i, p^2 q), q_i the source */
IntMatrix upsilon(const QuadraticForm& qi, const IntMatrix& A, i64 p);

struct ClassCountReport {
    i64 p = 0;
    BigInt lhs_count;   // sum_i |R*(q, p^2 q_i) / E(q_i)|
    BigInt rhs_count;   // sum_j |R(n, p n_j) / E(n_j)|
    int chi = 0;
    Rational lhs, rhs;  // rhs = (1 + chi)^{-1} rhs_count
    bool ok = false;
};
ClassCountReport verify_class_count(const SimilaritySystem& tern, const SimilaritySystem& quat, i64 p);

struct CoveringReport {
    i64 p = 0;
    std::size_t ternary_classes = 0;
    std::size_t quaternary_classes = 0;
    std::map<std::string, std::vector<std::string>> fibers;
    bool fiber_sizes_ok = false;
    bool disjoint = false;
    bool exhaustive = false;
    bool rank_ok = false;
    bool ok() const { return fiber_sizes_ok && disjoint && exhaustive && rank_ok; }
};
/* left classes E(q_i) A, A in R*(q_i, p^2 q), against left classes E(n_j) M, M in R(n_j, p n) */
CoveringReport verify_covering(const SimilaritySystem& tern, const SimilaritySystem& quat, i64 p);
CoveringReport verify_covering(const SimilaritySystem& tern, i64 p);

/* t*_q(p^2) X = (1 + chi_n)^{-1} X t_n(p) for every p */
bool intertwiner_check(const RatMatrix& X, const SimilaritySystem& tern, const SimilaritySystem& quat, const std::vector<i64>& primes);

}  // namespace automorph
