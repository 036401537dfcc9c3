#include "automorph/clifford.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace automorph {

namespace {

constexpr unsigned kMasks[8] = {0, 1, 2, 4, 3, 5, 6, 7};
// natural basis (e0, e23, -e13, e12) inside the full basis
constexpr int kNatural[4] = {0, 6, 5, 4};
constexpr int kNaturalSign[4] = {1, 1, -1, 1};

using Terms = std::map<unsigned, BigInt>;

struct Rewriter {
    BigInt qd[3];
    BigInt b[3][3];

    explicit Rewriter(const QuadraticForm& q)
    {
        for (int i = 0; i < 3; ++i) {
            qd[i] = q.q0(i, i);
            for (int j = 0; j < 3; ++j) b[i][j] = q.Q(i, j);
        }
    }

    // (sorted monomial) * e_j
    Terms times_generator(unsigned mask, int j) const
    {
        Terms out;
        if (mask == 0) {
            out[1u << j] = 1;
            return out;
        }
        int last = 2;
        while (!(mask & (1u << last))) --last;
        const unsigned prefix = mask & ~(1u << last);
        if (last < j) {
            out[mask | (1u << j)] = 1;
        } else if (last == j) {
            out[prefix] = qd[j];
        } else {
            // prefix e_last e_j = b(j,last) prefix - (prefix e_j) e_last
            if (b[j][last] != 0) out[prefix] += b[j][last];
            for (const auto& [m2, c] : times_generator(prefix, j)) out[m2 | (1u << last)] -= c;
        }
        return out;
    }

    Terms times_monomial(const Terms& x, unsigned mask) const
    {
        Terms cur = x;
        for (int j = 0; j < 3; ++j)
            if (mask & (1u << j)) {
                Terms next;
                for (const auto& [m, c] : cur)
                    for (const auto& [m2, c2] : times_generator(m, j)) next[m2] += c * c2;
                cur.swap(next);
            }
        return cur;
    }
};

void require_ternary(const QuadraticForm& q)
{
    if (q.m != 3) throw std::invalid_argument("Clifford lift needs a ternary form");
}

void same_parent(const CliffordElement& x, const CliffordElement& y)
{
    if (x.parent != y.parent && !(x.parent && y.parent && x.parent->form() == y.parent->form()))
        throw std::invalid_argument("parent form mismatch");
}

std::vector<BigInt> column_of(const IntMatrix& M, std::size_t j)
{
    std::vector<BigInt> v(M.rows());
    for (std::size_t i = 0; i < M.rows(); ++i) v[i] = M(i, j);
    return v;
}

BigInt qzero(const QuadraticForm& q, const std::vector<BigInt>& y, const std::vector<BigInt>& x)
{
    BigInt s = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s += y[i] * q.q0(i, j) * x[j];
    return s;
}

}  // namespace

int CliffordAlgebra::index_of_mask(unsigned mask)
{
    for (int i = 0; i < 8; ++i)
        if (kMasks[i] == mask) return i;
    throw std::out_of_range("bad monomial");
}

unsigned CliffordAlgebra::mask_of_index(int i) { return kMasks[i]; }

CliffordAlgebra::CliffordAlgebra(const QuadraticForm& q) : q_(q)
{
    require_ternary(q);
    Rewriter rw(q);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            Terms t = rw.times_monomial(Terms{{kMasks[i], BigInt(1)}}, kMasks[j]);
            auto& out = table_[i][j];
            for (auto& c : out) c = 0;
            for (const auto& [m, c] : t) out[index_of_mask(m)] += c;
        }
}

AlgebraPtr clifford_algebra(const QuadraticForm& q)
{
    static std::mutex mu;
    static std::map<std::string, AlgebraPtr> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[q.key()];
    if (!slot) slot = std::make_shared<const CliffordAlgebra>(q);
    return slot;
}

CliffordElement CliffordElement::zero(AlgebraPtr a)
{
    CliffordElement e;
    e.parent = std::move(a);
    for (auto& c : e.c) c = 0;
    return e;
}

CliffordElement CliffordElement::basis(AlgebraPtr a, int i)
{
    auto e = zero(std::move(a));
    e.c[i] = 1;
    return e;
}

CliffordElement CliffordElement::vector(AlgebraPtr a, const std::vector<BigInt>& x)
{
    auto e = zero(std::move(a));
    for (int i = 0; i < 3; ++i) e.c[1 + i] = x[i];
    return e;
}

bool CliffordElement::is_even() const { return c[1] == 0 && c[2] == 0 && c[3] == 0 && c[7] == 0; }
bool CliffordElement::is_odd() const { return c[0] == 0 && c[4] == 0 && c[5] == 0 && c[6] == 0; }

CliffordElement clifford_multiply(const CliffordElement& x, const CliffordElement& y)
{
    same_parent(x, y);
    auto z = CliffordElement::zero(x.parent);
    for (int i = 0; i < 8; ++i) {
        if (x.c[i] == 0) continue;
        for (int j = 0; j < 8; ++j) {
            if (y.c[j] == 0) continue;
            BigInt s = x.c[i] * y.c[j];
            const auto& p = x.parent->product(i, j);
            for (int k = 0; k < 8; ++k)
                if (p[k] != 0) z.c[k] += s * p[k];
        }
    }
    return z;
}

CliffordElement operator+(const CliffordElement& x, const CliffordElement& y)
{
    same_parent(x, y);
    auto z = x;
    for (int i = 0; i < 8; ++i) z.c[i] += y.c[i];
    return z;
}

CliffordElement operator-(const CliffordElement& x, const CliffordElement& y)
{
    same_parent(x, y);
    auto z = x;
    for (int i = 0; i < 8; ++i) z.c[i] -= y.c[i];
    return z;
}

CliffordElement operator*(const BigInt& s, const CliffordElement& x)
{
    auto z = x;
    for (auto& c : z.c) c *= s;
    return z;
}

CliffordElement bar(const CliffordElement& x)
{
    // reverse the generators and negate each
    auto z = CliffordElement::zero(x.parent);
    for (int i = 0; i < 8; ++i) {
        if (x.c[i] == 0) continue;
        unsigned mask = kMasks[i];
        auto term = CliffordElement::basis(x.parent, 0);
        for (int j = 2; j >= 0; --j)
            if (mask & (1u << j)) term = clifford_multiply(term, BigInt(-1) * CliffordElement::basis(x.parent, 1 + j));
        z = z + x.c[i] * term;
    }
    return z;
}

CliffordElement CliffordEven::full() const
{
    auto e = CliffordElement::zero(parent);
    for (int i = 0; i < 4; ++i) e.c[kNatural[i]] = kNaturalSign[i] * x[i];
    return e;
}

CliffordEven CliffordEven::from_full(const CliffordElement& e)
{
    if (!e.is_even()) throw std::invalid_argument("element is not even");
    CliffordEven v;
    v.parent = e.parent;
    for (int i = 0; i < 4; ++i) v.x[i] = kNaturalSign[i] * e.c[kNatural[i]];
    return v;
}

CliffordEven CliffordEven::from_coords(AlgebraPtr a, const std::vector<BigInt>& x)
{
    CliffordEven v;
    v.parent = std::move(a);
    for (int i = 0; i < 4; ++i) v.x[i] = x.at(i);
    return v;
}

CliffordEven even_multiply(const CliffordEven& x, const CliffordEven& y)
{
    return CliffordEven::from_full(clifford_multiply(x.full(), y.full()));
}

CliffordEven bar(const CliffordEven& x)
{
    const auto& q = x.parent->form();
    const BigInt b12 = q.Q(0, 1), b13 = q.Q(0, 2), b23 = q.Q(1, 2);
    CliffordEven y;
    y.parent = x.parent;
    y.x[0] = x.x[0] + x.x[3] * b12 - x.x[2] * b13 + x.x[1] * b23;
    y.x[1] = -x.x[1];
    y.x[2] = -x.x[2];
    y.x[3] = -x.x[3];
    return y;
}

NormTrace norm_trace(const CliffordEven& x)
{
    auto xb = bar(x);
    auto n = even_multiply(x, xb);
    CliffordEven s = x;
    for (int i = 0; i < 4; ++i) s.x[i] += xb.x[i];
    for (int i = 1; i < 4; ++i)
        if (n.x[i] != 0 || s.x[i] != 0) throw std::logic_error("norm or trace not scalar");
    return {n.x[0], s.x[0]};
}

EvenNormForm even_norm_form(const QuadraticForm& q)
{
    require_ternary(q);
    EvenNormForm f;
    f.Delta = q.Delta;
    IntMatrix adj = adjoint(q.q0);
    IntMatrix lower = adj.transpose() + adj;
    f.N = IntMatrix(4, 4);
    f.N(0, 0) = 2;
    for (int i = 0; i < 3; ++i) {
        f.N(0, i + 1) = -q.B[i];
        f.N(i + 1, 0) = -q.B[i];
        for (int j = 0; j < 3; ++j) f.N(i + 1, j + 1) = lower(i, j);
    }
    IntMatrix q0B = q.q0 * IntMatrix::column(q.B);
    RatMatrix inv(4, 4);
    inv(0, 0) = Rational(2 * det(q.q0));
    for (int i = 0; i < 3; ++i) {
        inv(0, i + 1) = Rational(q0B(i, 0));
        inv(i + 1, 0) = Rational(q0B(i, 0));
        for (int j = 0; j < 3; ++j) inv(i + 1, j + 1) = Rational(q.Q(i, j));
    }
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            inv(i, j) /= Rational(q.Delta);
            inv(i, j).canonicalize();
        }
    f.N_inv = inv;
    return f;
}

QuadraticForm norm_form(const QuadraticForm& q) { return form_from_gram(even_norm_form(q).N); }

CliffordElement special_t(const QuadraticForm& q)
{
    require_ternary(q);
    auto alg = clifford_algebra(q);
    auto t = CliffordElement::zero(alg);
    t.c[7] = 2;
    for (int i = 0; i < 3; ++i) t.c[1 + i] = q.B[i];
    for (int i = 0; i < 8; ++i) {
        auto e = CliffordElement::basis(alg, i);
        if (!(clifford_multiply(t, e) == clifford_multiply(e, t))) throw std::logic_error("t is not central");
    }
    if (!(bar(t) == t)) throw std::logic_error("t is not self-conjugate");
    auto t2 = clifford_multiply(t, t);
    if (!(t2 == BigInt(-q.Delta) * CliffordElement::basis(alg, 0))) throw std::logic_error("t^2 != -Delta");
    return t;
}

IntMatrix et_embedding(const QuadraticForm& q)
{
    require_ternary(q);
    IntMatrix top = (q.q0 * IntMatrix::column(q.B)).transpose();
    IntMatrix T(4, 3);
    for (int j = 0; j < 3; ++j) {
        T(0, j) = top(0, j);
        for (int i = 0; i < 3; ++i) T(i + 1, j) = q.Q(i, j);
    }
    return T;
}

IntMatrix odd_t_column(const QuadraticForm& q)
{
    require_ternary(q);
    IntMatrix q0B = q.q0 * IntMatrix::column(q.B);
    IntMatrix c(4, 1);
    c(0, 0) = 2 * det(q.q0);
    for (int i = 0; i < 3; ++i) c(i + 1, 0) = q0B(i, 0);
    return c;
}

QuadraticForm image_form(const QuadraticForm& q, const IntMatrix& A) { return form_from_gram(congruent(q.Q, A)); }

LiftMatrix phi_lift(const QuadraticForm& q, const IntMatrix& A)
{
    require_ternary(q);
    if (A.rows() != 3 || A.cols() != 3) throw std::invalid_argument("automorph must be 3x3");
    auto a1 = column_of(A, 0), a2 = column_of(A, 1), a3 = column_of(A, 2);
    LiftMatrix L;
    L.A = A;
    L.z = IntMatrix(3, 1);
    L.z(0, 0) = qzero(q, a3, a2);
    L.z(1, 0) = -qzero(q, a3, a1);
    L.z(2, 0) = qzero(q, a2, a1);
    IntMatrix adjT = adjoint(A).transpose();
    L.phi = IntMatrix(4, 4);
    L.phi(0, 0) = 1;
    for (int i = 0; i < 3; ++i) {
        L.phi(0, i + 1) = L.z(i, 0);
        for (int j = 0; j < 3; ++j) L.phi(i + 1, j + 1) = adjT(i, j);
    }
    return L;
}

LiftMatrix psi_lift(const QuadraticForm& q, const IntMatrix& A, i64 p)
{
    require_ternary(q);
    const BigInt P(static_cast<long>(p));
    if (divides(P, q.det_q)) throw std::domain_error("singular prime");
    IntMatrix QA = congruent(q.Q, A);
    if (!is_zero_mod(QA, BigInt(P * P))) throw std::invalid_argument("A is not in R(q, p^2 q')");
    LiftMatrix L = phi_lift(q, A);
    IntMatrix psi(4, 4);
    psi(0, 0) = P;
    for (int i = 0; i < 4; ++i)
        for (int j = 1; j < 4; ++j) {
            if (!divides(P, L.phi(i, j))) throw std::logic_error("Psi_A is not integral");
            psi(i, j) = L.phi(i, j) / P;
        }
    L.psi = psi;
    return L;
}

CliffordElement lift_element(const QuadraticForm& q, const IntMatrix& A, const CliffordElement& x2)
{
    auto alg = clifford_algebra(q);
    CliffordElement images[3];
    for (int j = 0; j < 3; ++j) images[j] = CliffordElement::vector(alg, column_of(A, j));
    auto out = CliffordElement::zero(alg);
    for (int i = 0; i < 8; ++i) {
        if (x2.c[i] == 0) continue;
        auto term = CliffordElement::basis(alg, 0);
        unsigned mask = kMasks[i];
        for (int j = 0; j < 3; ++j)
            if (mask & (1u << j)) term = clifford_multiply(term, images[j]);
        out = out + x2.c[i] * term;
    }
    return out;
}

bool is_even_homomorphism(const IntMatrix& phi, const QuadraticForm& q, const QuadraticForm& q2)
{
    if (phi.rows() != 4 || phi.cols() != 4) return false;
    auto alg = clifford_algebra(q), alg2 = clifford_algebra(q2);
    auto image = [&](const CliffordEven& v) {
        std::vector<BigInt> y(4, BigInt(0));
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) y[i] += phi(i, j) * v.x[j];
        return CliffordEven::from_coords(alg, y);
    };
    auto unit = image(CliffordEven::from_coords(alg2, {1, 0, 0, 0}));
    if (!(unit == CliffordEven::from_coords(alg, {1, 0, 0, 0}))) return false;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            std::vector<BigInt> u(4, BigInt(0)), v(4, BigInt(0));
            u[i] = 1;
            v[j] = 1;
            auto x = CliffordEven::from_coords(alg2, u), y = CliffordEven::from_coords(alg2, v);
            if (!(image(even_multiply(x, y)) == even_multiply(image(x), image(y)))) return false;
        }
    return true;
}

std::optional<IntMatrix> reconstruct_isometry(const IntMatrix& phi, const QuadraticForm& q, const QuadraticForm& q2)
{
    if (!is_even_homomorphism(phi, q, q2)) throw std::invalid_argument("not an algebra homomorphism");
    const BigInt dd = q.Delta * q2.Delta;
    if (dd <= 0) return std::nullopt;
    BigInt s = sqrt(dd);
    if (s * s != dd) return std::nullopt;
    auto alg = clifford_algebra(q);
    auto t = special_t(q);
    IntMatrix T2 = et_embedding(q2);
    IntMatrix img = phi * T2;
    IntMatrix A(3, 3);
    for (int j = 0; j < 3; ++j) {
        auto y = CliffordEven::from_coords(alg, column_of(img, j));
        auto a = clifford_multiply(y.full(), t);
        if (!a.is_odd() || a.c[7] != 0) return std::nullopt;
        for (int i = 0; i < 3; ++i) {
            if (!divides(s, a.c[1 + i])) return std::nullopt;
            A(i, j) = a.c[1 + i] / s;
        }
    }
    if (!(congruent(q.Q, A) == q2.Q)) return std::nullopt;
    return A;
}

std::optional<IntMatrix> ternary_equivalence_from_norm(const QuadraticForm& q, const QuadraticForm& q2, const IntMatrix& U)
{
    auto N = even_norm_form(q).N, N2 = even_norm_form(q2).N;
    if (!(congruent(N, U) == N2)) throw std::invalid_argument("U is not in R(n, n'')");
    if (abs(det(U)) != 1) throw std::invalid_argument("U is not unimodular");
    if (q.Delta != q2.Delta) return std::nullopt;
    auto alg = clifford_algebra(q);
    auto u = CliffordEven::from_coords(alg, column_of(U, 0));
    auto ub = bar(u);
    // right multiplication by u-bar
    IntMatrix R(4, 4);
    for (int j = 0; j < 4; ++j) {
        std::vector<BigInt> e(4, BigInt(0));
        e[j] = 1;
        auto v = even_multiply(CliffordEven::from_coords(alg, e), ub);
        for (int i = 0; i < 4; ++i) R(i, j) = v.x[i];
    }
    IntMatrix Wfull = R * U;
    if (Wfull(0, 0) != 1 || Wfull(1, 0) != 0 || Wfull(2, 0) != 0 || Wfull(3, 0) != 0)
        throw std::logic_error("omega does not fix e0");
    IntMatrix W = Wfull.block(1, 1, 3, 3);
    auto inv = inverse(W);
    if (!is_integral(inv)) return std::nullopt;
    IntMatrix V = to_integral(inv).transpose();
    if (!(congruent(q.Q, V) == q2.Q)) return std::nullopt;
    return V;
}

}  // namespace automorph
