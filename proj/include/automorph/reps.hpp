#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "automorph/intmat.hpp"
#include "automorph/qform.hpp"

namespace automorph {

using FormPtr = std::shared_ptr<const QuadraticForm>;

struct Automorph {
    SmallMatrix matrix;
    FormPtr source;
    FormPtr target;
    i64 multiplier = 1;
};

struct UnitGroup {
    FormPtr form;
    std::vector<SmallMatrix> elements;  // sorted
    std::size_t order() const { return elements.size(); }
};

enum class CosetSide { Left, Right };  // Left: E(source) M, Right: M E(target)

struct CosetList {
    std::vector<SmallMatrix> representatives;  // canonical (lexicographic minimum), sorted
    CosetSide side = CosetSide::Left;
    std::size_t size() const { return representatives.size(); }
};

/* All X with tXQX <= bound2, handed to visit(x, tXQX). Positive definite Q only.
 * The enumeration is exact: every level solves an integer quadratic inequality. */
class ShortVectors {
  public:
    explicit ShortVectors(const SmallMatrix& Q);
    template <class F>
    void run(i64 bound2, F&& visit) const;
    /* values of the last coordinate that can occur, for splitting work */
    std::pair<i64, i64> top_range(i64 bound2) const;
    template <class F>
    void run_with_top(i64 bound2, i64 top, F&& visit) const;
    int dim() const { return m_; }

  private:
    template <class F>
    void level(int k, i64 bound2, IntVec& x, F& visit) const;
    int m_;
    SmallMatrix Q_;
    std::vector<SmallMatrix> P_;  // P_[k] = det(Q[:k,:k]) * Schur complement on coordinates k..m-1
    std::vector<i64> D_;
};

std::vector<IntVec> representations(const QuadraticForm& q, i64 a);
/* r(q, n) for n = 0..n_max */
std::vector<i64> representation_counts(const QuadraticForm& q, i64 n_max);

std::vector<SmallMatrix> automorph_matrices(const QuadraticForm& q, const QuadraticForm& target, i64 a);
/* first automorph in search order, if any */
std::optional<SmallMatrix> find_automorph(const QuadraticForm& q, const QuadraticForm& target, i64 a);
std::vector<Automorph> automorphs(const FormPtr& q, const FormPtr& target, i64 a);
const UnitGroup& unit_group(const QuadraticForm& q);

struct PrimitiveSplit {
    std::vector<SmallMatrix> primitive, imprimitive;
};
PrimitiveSplit primitive_filter(const std::vector<SmallMatrix>& ms);
PrimitiveSplit primitive_filter(const std::vector<Automorph>& ms);

SmallMatrix canonical_left(const UnitGroup& E, const SmallMatrix& M);
SmallMatrix canonical_right(const SmallMatrix& M, const UnitGroup& E);
CosetList coset_decompose(const std::vector<SmallMatrix>& ms, const UnitGroup& E, CosetSide side);

i64 stabilizer_order(const QuadraticForm& q, const IntVec& L);
IntVec canonical_orbit_vector(const UnitGroup& E, const IntVec& L);

void require_positive_definite(const QuadraticForm& q);

/* ---- template bodies ---- */

template <class F>
void ShortVectors::run(i64 bound2, F&& visit) const
{
    if (bound2 < 0) return;
    IntVec x(m_, 0);
    level(m_ - 1, bound2, x, visit);
}

template <class F>
void ShortVectors::run_with_top(i64 bound2, i64 top, F&& visit) const
{
    IntVec x(m_, 0);
    x[m_ - 1] = top;
    if (m_ == 1) {
        i64 n = checked_mul(checked_mul(Q_(0, 0), top), top);
        if (n <= bound2) visit(static_cast<const IntVec&>(x), n);
        return;
    }
    level(m_ - 2, bound2, x, visit);
}

namespace detail {
i64 isqrt128(__int128 n);
/* integer x with t x^2 + 2 u x + v <= R, t > 0 */
bool quad_interval(i64 t, __int128 u, __int128 v, __int128 R, i64& lo, i64& hi);
}  // namespace detail

template <class F>
void ShortVectors::level(int k, i64 bound2, IntVec& x, F& visit) const
{
    const SmallMatrix& P = P_[k];
    const int n = m_ - k;
    __int128 u = 0, v = 0;
    for (int j = 1; j < n; ++j) {
        u += static_cast<__int128>(P(0, j)) * x[k + j];
        for (int i = 1; i < n; ++i) v += static_cast<__int128>(P(i, j)) * x[k + i] * x[k + j];
    }
    i64 lo, hi;
    if (!detail::quad_interval(P(0, 0), u, v, static_cast<__int128>(bound2) * D_[k], lo, hi)) return;
    if (k > 0) {
        for (i64 c = lo; c <= hi; ++c) {
            x[k] = c;
            level(k - 1, bound2, x, visit);
        }
        x[k] = 0;
        return;
    }
    // innermost: tXQX = Q00 c^2 + 2 c u + v with P_[0] = Q
    const i64 t = P(0, 0), uu = static_cast<i64>(u), vv = static_cast<i64>(v);
    for (i64 c = lo; c <= hi; ++c) {
        x[0] = c;
        visit(static_cast<const IntVec&>(x), t * c * c + 2 * c * uu + vv);
    }
    x[0] = 0;
}

}  // namespace automorph
