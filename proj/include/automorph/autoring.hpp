#pragma once

#include <map>
#include <vector>

#include "automorph/classes.hpp"

namespace automorph {

/* element of A_ij: integer combination of left cosets E(q_i)A, A in R(q_i, a q_j) */
struct CosetSum {
    std::size_t source = 0, target = 0;
    std::map<SmallMatrix, i64> terms;  // keys canonical_left(E(q_i), A)

    bool operator==(const CosetSum& o) const { return source == o.source && target == o.target && terms == o.terms; }
};

/* h x h matrix over the class ring */
struct RingElement {
    std::size_t h = 0;
    std::vector<CosetSum> entries;  // row-major

    CosetSum& at(std::size_t i, std::size_t j) { return entries[i * h + j]; }
    const CosetSum& at(std::size_t i, std::size_t j) const { return entries[i * h + j]; }
    bool operator==(const RingElement& o) const { return h == o.h && entries == o.entries; }
};

/* element of D: per class j, orbit representative (lexicographic minimum) -> weight */
struct RepVector {
    std::vector<std::map<IntVec, Rational>> parts;

    bool operator==(const RepVector& o) const { return parts == o.parts; }
};

CosetSum coset_sum(const SimilaritySystem& sys, std::size_t i, std::size_t j, const std::vector<SmallMatrix>& ms);
CosetSum add(const CosetSum& x, const CosetSum& y);
CosetSum multiply(const SimilaritySystem& sys, const CosetSum& x, const CosetSum& y);

RingElement zero_element(const SimilaritySystem& sys);
RingElement identity_element(const SimilaritySystem& sys);
/* [n] = diag(<n 1_m>) */
RingElement scalar_element(const SimilaritySystem& sys, i64 n);
RingElement add(const RingElement& x, const RingElement& y);
RingElement multiply(const SimilaritySystem& sys, const RingElement& x, const RingElement& y);
/* entry (i,j): sum over E(q_i)\R*(q_i, p^iota q_j) */
RingElement T_star(const SimilaritySystem& sys, i64 p, int iota);

/* R(a): orbits of R(q_j, a) weighted by the inverse stabilizer order */
RepVector rep_vector(const SimilaritySystem& sys, i64 a);
RepVector zero_rep(const SimilaritySystem& sys);
RepVector add(const RepVector& x, const RepVector& y);
RepVector scale(const RepVector& x, const Rational& s);
RepVector act(const SimilaritySystem& sys, const RingElement& x, const RepVector& v);

i64 pi(const CosetSum& x);
SmallMatrix pi(const RingElement& x);
std::vector<Rational> pi(const RepVector& v);

struct CommutationRow {
    i64 a = 0;
    bool orbit_ok = false;        // equality in D
    bool coefficient_ok = false;  // pi of both sides against theta coefficients and the Anzahl matrix
    std::size_t lhs_orbits = 0, rhs_orbits = 0;
};
struct CommutationReport {
    i64 p = 0;
    int m = 0;
    std::vector<CommutationRow> rows;
    bool ok = true;
};
CommutationReport verify_commutation(const SimilaritySystem& sys, i64 p, i64 a_max);

}  // namespace automorph
