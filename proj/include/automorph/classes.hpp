#pragma once

#include <optional>
#include <vector>

#include "automorph/reps.hpp"

namespace automorph {

struct SimilaritySystem {
    std::vector<FormPtr> forms;
    std::vector<i64> unit_orders;
    FormPtr seed;
    std::size_t seed_index = 0;
    std::vector<i64> primes_used;
    bool closure_complete_assumed = true;  // h is a lower bound for the similarity class size

    std::size_t h() const { return forms.size(); }
};

struct ReducedForm {
    QuadraticForm form;
    SmallMatrix U;  // form = q[U], U unimodular
};
/* pairwise size reduction followed by sorting the basis by norm */
ReducedForm reduce_form(const QuadraticForm& q);

std::optional<SmallMatrix> is_equivalent(const QuadraticForm& q, const QuadraticForm& q2);

std::vector<i64> default_primes(const QuadraticForm& q, int count = 3);
SimilaritySystem similarity_system(const QuadraticForm& q, const std::vector<i64>& primes = {});
/* the seeds come first (deduplicated), then the closure continues */
SimilaritySystem similarity_system_seeded(const std::vector<QuadraticForm>& seeds, const std::vector<i64>& primes);

struct ClassMatch {
    std::size_t index;
    SmallMatrix U;  // forms[index][U] = q
};
std::optional<ClassMatch> locate_class(const SimilaritySystem& sys, const QuadraticForm& q);

/* neighbours p^{-iota} q[M] over the isotropic cosets, reduced */
std::vector<QuadraticForm> neighbours(const QuadraticForm& q, i64 p);

struct AnzahlMatrix {
    i64 p = 0;
    int iota = 0;
    RatMatrix entries;  // r*(q_i, p^iota q_j) / e(q_i)
};
int iota_for(int m);
AnzahlMatrix anzahl_matrix(const SimilaritySystem& sys, i64 p, int iota);

}  // namespace automorph
