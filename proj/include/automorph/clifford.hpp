#pragma once

#include <array>
#include <memory>
#include <optional>

#include "automorph/qform.hpp"

namespace automorph {

/* C(E,q) for a ternary q with structure constants computed once.
 * Basis order (e0, e1, e2, e3, e12, e13, e23, e123). */
class CliffordAlgebra {
public:
    explicit CliffordAlgebra(const QuadraticForm& q);

    const QuadraticForm& form() const { return q_; }
    // product of basis elements i and j as coefficients over the basis
    const std::array<BigInt, 8>& product(int i, int j) const { return table_[i][j]; }

    static int index_of_mask(unsigned mask);
    static unsigned mask_of_index(int i);

private:
    QuadraticForm q_;
    std::array<std::array<std::array<BigInt, 8>, 8>, 8> table_;
};
using AlgebraPtr = std::shared_ptr<const CliffordAlgebra>;

/* shared per form key; concurrent reads are safe */
AlgebraPtr clifford_algebra(const QuadraticForm& q);

struct CliffordElement {
    AlgebraPtr parent;
    std::array<BigInt, 8> c{};

    static CliffordElement zero(AlgebraPtr a);
    static CliffordElement basis(AlgebraPtr a, int i);
    static CliffordElement vector(AlgebraPtr a, const std::vector<BigInt>& x);
    bool is_even() const;
    bool is_odd() const;
    bool operator==(const CliffordElement& o) const { return c == o.c; }
};

CliffordElement clifford_multiply(const CliffordElement& x, const CliffordElement& y);
CliffordElement operator+(const CliffordElement& x, const CliffordElement& y);
CliffordElement operator-(const CliffordElement& x, const CliffordElement& y);
CliffordElement operator*(const BigInt& s, const CliffordElement& x);
CliffordElement bar(const CliffordElement& x);

/* coordinates over the natural basis (e0, e23, -e13, e12) */
struct CliffordEven {
    AlgebraPtr parent;
    std::array<BigInt, 4> x{};

    CliffordElement full() const;
    static CliffordEven from_full(const CliffordElement& e);
    static CliffordEven from_coords(AlgebraPtr a, const std::vector<BigInt>& x);
    bool operator==(const CliffordEven& o) const { return x == o.x; }
};

CliffordEven even_multiply(const CliffordEven& x, const CliffordEven& y);
CliffordEven bar(const CliffordEven& x);

struct NormTrace {
    BigInt norm;
    BigInt trace;
};
NormTrace norm_trace(const CliffordEven& x);

struct EvenNormForm {
    IntMatrix N;
    RatMatrix N_inv;
    BigInt Delta;
};
EvenNormForm even_norm_form(const QuadraticForm& q);
QuadraticForm norm_form(const QuadraticForm& q);

/* t = 2 e123 + B1 e1 + B2 e2 + B3 e3; throws logic_error unless central, self-conjugate, t^2 = -Delta */
CliffordElement special_t(const QuadraticForm& q);

/* T = [t(Q0 B); Q], with N[T] = Delta Q */
IntMatrix et_embedding(const QuadraticForm& q);
/* (2 det Q0; Q0 B), coordinates of -e123 t */
IntMatrix odd_t_column(const QuadraticForm& q);

/* q'' with Q'' = Q[A] */
QuadraticForm image_form(const QuadraticForm& q, const IntMatrix& A);

struct LiftMatrix {
    IntMatrix phi;
    std::optional<IntMatrix> psi;
    IntMatrix z;  // Z_A as a 3x1 column
    IntMatrix A;
};
/* Phi_A for A in R(q, q''), q'' = q[A] */
LiftMatrix phi_lift(const QuadraticForm& q, const IntMatrix& A);
/* also Psi_A = Phi_A diag(p, 1/p, 1/p, 1/p) for Q[A] = p^2 Q' */
LiftMatrix psi_lift(const QuadraticForm& q, const IntMatrix& A, i64 p);

/* the homomorphism C(E'') -> C(E) induced by x'' -> (e1, e2, e3) A x'' */
CliffordElement lift_element(const QuadraticForm& q, const IntMatrix& A, const CliffordElement& x2);

bool is_even_homomorphism(const IntMatrix& phi, const QuadraticForm& q, const QuadraticForm& q2);
/* the isometry alpha with "+" sign, if phi is a lift; throws on a non-homomorphism */
std::optional<IntMatrix> reconstruct_isometry(const IntMatrix& phi, const QuadraticForm& q, const QuadraticForm& q2);

/* from U in R(n, n'') unimodular and q, q'' similar, a unimodular V with Q[V] = Q'' */
std::optional<IntMatrix> ternary_equivalence_from_norm(const QuadraticForm& q, const QuadraticForm& q2, const IntMatrix& U);

}  // namespace automorph
