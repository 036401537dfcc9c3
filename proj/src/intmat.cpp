#include "automorph/intmat.hpp"

#include <sstream>

namespace automorph {

i64 to_i64(const BigInt& a)
{
    if (!a.fits_slong_p()) throw std::overflow_error("integer does not fit in 64 bits");
    return a.get_si();
}

IntMatrix to_big(const SmallMatrix& M)
{
    IntMatrix B(M.rows(), M.cols());
    for (std::size_t i = 0; i < M.rows(); ++i)
        for (std::size_t j = 0; j < M.cols(); ++j) B(i, j) = BigInt(static_cast<long>(M(i, j)));
    return B;
}
SmallMatrix to_small(const IntMatrix& M)
{
    SmallMatrix S(M.rows(), M.cols());
    for (std::size_t i = 0; i < M.rows(); ++i)
        for (std::size_t j = 0; j < M.cols(); ++j) S(i, j) = to_i64(M(i, j));
    return S;
}
RatMatrix to_rational(const IntMatrix& M)
{
    RatMatrix R(M.rows(), M.cols());
    for (std::size_t i = 0; i < M.rows(); ++i)
        for (std::size_t j = 0; j < M.cols(); ++j) R(i, j) = Rational(M(i, j));
    return R;
}
std::vector<BigInt> to_big(const IntVec& v)
{
    std::vector<BigInt> w;
    w.reserve(v.size());
    for (i64 x : v) w.emplace_back(static_cast<long>(x));
    return w;
}
IntVec to_small(const std::vector<BigInt>& v)
{
    IntVec w;
    w.reserve(v.size());
    for (const auto& x : v) w.push_back(to_i64(x));
    return w;
}

/* {{{ determinant and adjoint */
template <class T>
T det(const Mat<T>& M)
{
    if (!M.is_square()) throw std::invalid_argument("determinant of non-square matrix");
    const std::size_t n = M.rows();
    if (n == 0) return T(1);
    // Bareiss fraction-free elimination
    Mat<T> A = M;
    int sign = 1;
    T prev(1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (is_zero(A(k, k))) {
            std::size_t r = k + 1;
            while (r < n && is_zero(A(r, k))) ++r;
            if (r == n) return T(0);
            for (std::size_t j = 0; j < n; ++j) std::swap(A(k, j), A(r, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                T num = checked_sub(checked_mul(A(i, j), A(k, k)), checked_mul(A(i, k), A(k, j)));
                A(i, j) = num / prev;
            }
            A(i, k) = T(0);
        }
        prev = A(k, k);
    }
    T d = A(n - 1, n - 1);
    return sign < 0 ? checked_sub(T(0), d) : d;
}

template <class T>
Mat<T> adjoint(const Mat<T>& M)
{
    if (!M.is_square()) throw std::invalid_argument("adjoint of non-square matrix");
    const std::size_t n = M.rows();
    Mat<T> adj(n, n);
    if (n == 1) {
        adj(0, 0) = T(1);
        return adj;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Mat<T> minor(n - 1, n - 1);
            for (std::size_t r = 0, rr = 0; r < n; ++r) {
                if (r == i) continue;
                for (std::size_t c = 0, cc = 0; c < n; ++c) {
                    if (c == j) continue;
                    minor(rr, cc++) = M(r, c);
                }
                ++rr;
            }
            T d = det(minor);
            adj(j, i) = ((i + j) % 2) ? checked_sub(T(0), d) : d;
        }
    return adj;
}
/* }}} */

template <class T>
T content(const Mat<T>& M)
{
    T g(0);
    for (const T& x : M.data()) g = gcd_val(g, x);
    return g;
}

/* {{{ Hermite normal form of the column span */
template <class T>
Mat<T> hnf(const Mat<T>& G)
{
    const std::size_t m = G.rows();
    std::vector<std::vector<T>> cols;
    for (std::size_t j = 0; j < G.cols(); ++j) cols.push_back(G.col(j));
    Mat<T> H(m, m);
    auto combine = [&](std::vector<T>& u, std::vector<T>& v, std::size_t i) {
        ExtGcd<T> e = ext_gcd(u[i], v[i]);
        T a = u[i] / e.g, b = v[i] / e.g;
        for (std::size_t r = 0; r <= i; ++r) {
            T nu = checked_add(checked_mul(e.x, u[r]), checked_mul(e.y, v[r]));
            T nv = checked_sub(checked_mul(a, v[r]), checked_mul(b, u[r]));
            u[r] = nu;
            v[r] = nv;
        }
    };
    for (std::size_t ii = m; ii-- > 0;) {
        std::size_t piv = cols.size();
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (is_zero(cols[k][ii])) continue;
            if (piv == cols.size())
                piv = k;
            else
                combine(cols[piv], cols[k], ii);
        }
        if (piv == cols.size()) throw std::invalid_argument("rank deficient generator matrix");
        if (sign_of(cols[piv][ii]) < 0)
            for (auto& x : cols[piv]) x = checked_sub(T(0), x);
        H.set_col(ii, cols[piv]);
        cols.erase(cols.begin() + piv);
    }
    for (std::size_t j = 1; j < m; ++j)
        for (std::size_t i = j; i-- > 0;) {
            T q = floor_div(H(i, j), H(i, i));
            if (is_zero(q)) continue;
            for (std::size_t r = 0; r <= i; ++r) H(r, j) = checked_sub(H(r, j), checked_mul(q, H(r, i)));
        }
    return H;
}

template <class T>
bool lattice_contains(const Mat<T>& H, const std::vector<T>& v)
{
    std::vector<T> w = v;
    for (std::size_t i = H.rows(); i-- > 0;) {
        if (!divides(H(i, i), w[i])) return false;
        T y = w[i] / H(i, i);
        if (is_zero(y)) continue;
        for (std::size_t r = 0; r <= i; ++r) w[r] = checked_sub(w[r], checked_mul(y, H(r, i)));
    }
    return true;
}
/* }}} */

/* {{{ Smith diagonal */
template <class T>
std::vector<T> smith_diagonal(const Mat<T>& M)
{
    Mat<T> A = M;
    const std::size_t r = A.rows(), c = A.cols(), n = std::min(r, c);
    std::vector<T> d;
    for (std::size_t t = 0; t < n; ++t) {
        for (;;) {
            // pivot: minimal nonzero absolute value
            std::size_t pi = r, pj = c;
            T best(0);
            for (std::size_t i = t; i < r; ++i)
                for (std::size_t j = t; j < c; ++j)
                    if (!is_zero(A(i, j)) && (pi == r || abs_val(A(i, j)) < best)) {
                        best = abs_val(A(i, j));
                        pi = i;
                        pj = j;
                    }
            if (pi == r) {
                while (d.size() < n) d.push_back(T(0));
                return d;
            }
            for (std::size_t j = 0; j < c; ++j) std::swap(A(t, j), A(pi, j));
            for (std::size_t i = 0; i < r; ++i) std::swap(A(i, t), A(i, pj));
            bool clean = true;
            for (std::size_t i = t + 1; i < r; ++i) {
                T q = floor_div(A(i, t), A(t, t));
                if (!is_zero(q))
                    for (std::size_t j = t; j < c; ++j) A(i, j) = checked_sub(A(i, j), checked_mul(q, A(t, j)));
                if (!is_zero(A(i, t))) clean = false;
            }
            for (std::size_t j = t + 1; j < c; ++j) {
                T q = floor_div(A(t, j), A(t, t));
                if (!is_zero(q))
                    for (std::size_t i = t; i < r; ++i) A(i, j) = checked_sub(A(i, j), checked_mul(q, A(i, t)));
                if (!is_zero(A(t, j))) clean = false;
            }
            if (!clean) continue;
            std::size_t bad = r;
            for (std::size_t i = t + 1; i < r && bad == r; ++i)
                for (std::size_t j = t + 1; j < c; ++j)
                    if (!divides(A(t, t), A(i, j))) {
                        bad = i;
                        break;
                    }
            if (bad == r) break;
            for (std::size_t j = t; j < c; ++j) A(t, j) = checked_add(A(t, j), A(bad, j));
        }
        d.push_back(abs_val(A(t, t)));
    }
    return d;
}

ElementaryDivisorProfile elementary_divisors(const IntMatrix& M)
{
    if (!M.is_square()) throw std::invalid_argument("elementary divisors need a square matrix");
    if (is_zero(det(M))) throw std::domain_error("singular");
    return {smith_diagonal(M)};
}
ElementaryDivisorProfile elementary_divisors(const SmallMatrix& M) { return elementary_divisors(to_big(M)); }
/* }}} */

/* {{{ primitivity and completion */
template <class T>
struct RowReduction {
    Mat<T> U;  // unimodular, U*M = [H; 0]
    Mat<T> H;
};

template <class T>
static RowReduction<T> row_reduce(const Mat<T>& M)
{
    const std::size_t m = M.rows(), n = M.cols();
    Mat<T> A = M, U = Mat<T>::identity(m);
    auto rowop = [&](Mat<T>& X, std::size_t j, std::size_t i, const T& x, const T& y, const T& u, const T& v) {
        for (std::size_t c = 0; c < X.cols(); ++c) {
            T a = X(j, c), b = X(i, c);
            X(j, c) = checked_add(checked_mul(x, a), checked_mul(y, b));
            X(i, c) = checked_add(checked_mul(u, a), checked_mul(v, b));
        }
    };
    for (std::size_t j = 0; j < n && j < m; ++j)
        for (std::size_t i = j + 1; i < m; ++i) {
            if (is_zero(A(i, j))) continue;
            T a = A(j, j), b = A(i, j);
            ExtGcd<T> e = ext_gcd(a, b);
            T u = checked_sub(T(0), b / e.g), v = a / e.g;
            rowop(A, j, i, e.x, e.y, u, v);
            rowop(U, j, i, e.x, e.y, u, v);
        }
    return {U, A.block(0, 0, std::min(m, n), n)};
}

template <class T>
bool is_primitive(const Mat<T>& M)
{
    if (M.rows() < M.cols()) throw std::invalid_argument("primitivity needs rows >= cols");
    RowReduction<T> rr = row_reduce(M);
    return abs_val(det(rr.H)) == T(1);
}

template <class T>
Mat<T> complete_to_unimodular(const Mat<T>& M)
{
    const std::size_t m = M.rows(), n = M.cols();
    if (m < n) throw std::invalid_argument("completion needs rows >= cols");
    RowReduction<T> rr = row_reduce(M);
    if (abs_val(det(rr.H)) != T(1)) throw std::domain_error("not primitive");
    // U^{-1} diag(H, 1): det U = +-1 so U^{-1} = det(U) adj(U)
    Mat<T> Uinv = scale(adjoint(rr.U), det(rr.U));
    Mat<T> D = Mat<T>::identity(m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) D(i, j) = rr.H(i, j);
    Mat<T> C = Uinv * D;
    for (std::size_t j = 0; j < n; ++j)
        if (C.col(j) != M.col(j)) throw std::logic_error("completion lost the input columns");
    return C;
}
/* }}} */

template <class T>
bool is_integral_left_quotient(const Mat<T>& M, const Mat<T>& X)
{
    return left_quotient(M, X).has_value();
}

template <class T>
std::optional<Mat<T>> left_quotient(const Mat<T>& M, const Mat<T>& X)
{
    T d = det(M);
    if (is_zero(d)) throw std::domain_error("singular");
    Mat<T> Y = adjoint(M) * X;
    for (std::size_t i = 0; i < Y.rows(); ++i)
        for (std::size_t j = 0; j < Y.cols(); ++j) {
            if (!divides(d, Y(i, j))) return std::nullopt;
            Y(i, j) = Y(i, j) / d;
        }
    return Y;
}

template <class T>
std::optional<Mat<T>> right_quotient(const Mat<T>& X, const Mat<T>& M)
{
    T d = det(M);
    if (is_zero(d)) throw std::domain_error("singular");
    Mat<T> Y = X * adjoint(M);
    for (std::size_t i = 0; i < Y.rows(); ++i)
        for (std::size_t j = 0; j < Y.cols(); ++j) {
            if (!divides(d, Y(i, j))) return std::nullopt;
            Y(i, j) = Y(i, j) / d;
        }
    return Y;
}

template <class T>
bool is_zero_mod(const Mat<T>& M, const T& m)
{
    for (const T& x : M.data())
        if (!divides(m, x)) return false;
    return true;
}

template <class T>
Mat<T> reduce_mod(const Mat<T>& M, const T& m)
{
    Mat<T> R(M.rows(), M.cols());
    for (std::size_t i = 0; i < M.rows(); ++i)
        for (std::size_t j = 0; j < M.cols(); ++j) R(i, j) = mod_floor(M(i, j), m);
    return R;
}

int rank_mod_p(const SmallMatrix& M, i64 p)
{
    SmallMatrix A = reduce_mod(M, p);
    const std::size_t r = A.rows(), c = A.cols();
    int rank = 0;
    for (std::size_t j = 0; j < c && static_cast<std::size_t>(rank) < r; ++j) {
        std::size_t piv = rank;
        while (piv < r && A(piv, j) == 0) ++piv;
        if (piv == r) continue;
        for (std::size_t k = 0; k < c; ++k) std::swap(A(rank, k), A(piv, k));
        // inverse of pivot by Fermat
        i64 inv = 1, b = A(rank, j), e = p - 2;
        while (e) {
            if (e & 1) inv = inv * b % p;
            b = b * b % p;
            e >>= 1;
        }
        for (std::size_t k = 0; k < c; ++k) A(rank, k) = A(rank, k) * inv % p;
        for (std::size_t i = 0; i < r; ++i) {
            if (i == static_cast<std::size_t>(rank) || A(i, j) == 0) continue;
            i64 f = A(i, j);
            for (std::size_t k = 0; k < c; ++k) A(i, k) = mod_floor(A(i, k) - f * A(rank, k), p);
        }
        ++rank;
    }
    return rank;
}
int rank_mod_p(const IntMatrix& M, i64 p) { return rank_mod_p(to_small(reduce_mod(M, BigInt(static_cast<long>(p)))), p); }

/* {{{ rational helpers */
Rational det(const RatMatrix& M)
{
    if (!M.is_square()) throw std::invalid_argument("determinant of non-square matrix");
    RatMatrix A = M;
    const std::size_t n = A.rows();
    Rational d = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && A(piv, k) == 0) ++piv;
        if (piv == n) return 0;
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(A(k, j), A(piv, j));
            d = -d;
        }
        d *= A(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            Rational f = A(i, k) / A(k, k);
            if (f == 0) continue;
            for (std::size_t j = k; j < n; ++j) A(i, j) -= f * A(k, j);
        }
    }
    return d;
}

RatMatrix inverse(const RatMatrix& M)
{
    if (!M.is_square()) throw std::invalid_argument("inverse of non-square matrix");
    const std::size_t n = M.rows();
    RatMatrix A = M, I = RatMatrix::identity(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && A(piv, k) == 0) ++piv;
        if (piv == n) throw std::domain_error("singular");
        for (std::size_t j = 0; j < n; ++j) {
            std::swap(A(k, j), A(piv, j));
            std::swap(I(k, j), I(piv, j));
        }
        Rational inv = 1 / A(k, k);
        for (std::size_t j = 0; j < n; ++j) {
            A(k, j) *= inv;
            I(k, j) *= inv;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || A(i, k) == 0) continue;
            Rational f = A(i, k);
            for (std::size_t j = 0; j < n; ++j) {
                A(i, j) -= f * A(k, j);
                I(i, j) -= f * I(k, j);
            }
        }
    }
    return I;
}
RatMatrix inverse(const IntMatrix& M) { return inverse(to_rational(M)); }

bool is_integral(const RatMatrix& M)
{
    for (const auto& x : M.data())
        if (!divides(BigInt(x.get_den()), BigInt(x.get_num()))) return false;
    return true;
}
IntMatrix to_integral(const RatMatrix& M)
{
    if (!is_integral(M)) throw std::domain_error("matrix is not integral");
    IntMatrix R(M.rows(), M.cols());
    for (std::size_t i = 0; i < M.rows(); ++i)
        for (std::size_t j = 0; j < M.cols(); ++j) R(i, j) = M(i, j).get_num() / M(i, j).get_den();
    return R;
}
/* }}} */

template <class T>
static std::string render(const Mat<T>& M)
{
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < M.rows(); ++i) {
        if (i) os << ';';
        for (std::size_t j = 0; j < M.cols(); ++j) {
            if (j) os << ',';
            os << M(i, j);
        }
    }
    os << ']';
    return os.str();
}
std::string to_string(const IntMatrix& M) { return render(M); }
std::string to_string(const SmallMatrix& M) { return render(M); }
std::ostream& operator<<(std::ostream& os, const IntMatrix& M) { return os << render(M); }
std::ostream& operator<<(std::ostream& os, const SmallMatrix& M) { return os << render(M); }

#define INSTANTIATE(T)                                                               \
    template T det(const Mat<T>&);                                                   \
    template Mat<T> adjoint(const Mat<T>&);                                          \
    template T content(const Mat<T>&);                                               \
    template Mat<T> hnf(const Mat<T>&);                                              \
    template std::vector<T> smith_diagonal(const Mat<T>&);                           \
    template bool is_primitive(const Mat<T>&);                                       \
    template Mat<T> complete_to_unimodular(const Mat<T>&);                           \
    template bool is_integral_left_quotient(const Mat<T>&, const Mat<T>&);           \
    template std::optional<Mat<T>> left_quotient(const Mat<T>&, const Mat<T>&);      \
    template std::optional<Mat<T>> right_quotient(const Mat<T>&, const Mat<T>&);     \
    template bool lattice_contains(const Mat<T>&, const std::vector<T>&);            \
    template bool is_zero_mod(const Mat<T>&, const T&);                              \
    template Mat<T> reduce_mod(const Mat<T>&, const T&);

INSTANTIATE(i64)
INSTANTIATE(BigInt)

}  // namespace automorph
